#pragma once

#include <enlab/rational.hpp>

#include <optional>
#include <vector>

namespace enlab {

using Matrix = std::vector<std::vector<Rational>>;

/// Exact Phase-I simplex: returns some x >= 0 with A x = b, or nullopt if none
/// exists. Bland's rule (smallest index enters and leaves), so results are
/// deterministic and the method terminates.
std::optional<std::vector<Rational>> feasible_point(const Matrix& A, const std::vector<Rational>& b);

}  // namespace enlab
