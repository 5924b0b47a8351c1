#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace enlab {

/// Exact rational scalar used by the finite engine.
using Rational = mpq_class;

/// Parses "p/q", "p" or a decimal-free integer string into a canonical rational.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are written with an explicit "/1".
std::string format_rational(const Rational& value);

/// Canonical p/q (mpq_class's two-argument constructor does not reduce).
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline int sign(const Rational& value) { return sgn(value); }

/// Lexicographic order on rational vectors (used as jump-value keys).
struct RationalVectorLess {
  bool operator()(const std::vector<Rational>& lhs, const std::vector<Rational>& rhs) const {
    const auto n = std::min(lhs.size(), rhs.size());
    for (std::size_t i = 0; i < n; ++i) {
      const int c = cmp(lhs[i], rhs[i]);
      if (c != 0) return c < 0;
    }
    return lhs.size() < rhs.size();
  }
};

}  // namespace enlab
