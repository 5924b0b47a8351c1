#pragma once

#include <enlab/finite_prob.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enlab {

/// tau[w] in {0, ..., T} for every outcome.
using RandomTimeMap = std::vector<int>;

struct JumpPoint {
  std::size_t t = 0;      ///< increment time
  std::size_t block = 0;  ///< block of P_t on which Ztilde_t = 1 > Z_{t-1}
  bool operator==(const JumpPoint&) const = default;
};

struct RandomTimeAnalysis {
  RandomTimeMap tau;
  Process Z;        ///< P(tau > t | P_t)
  Process Ztilde;   ///< P(tau >= t | P_t)
  Process D_oF;     ///< dual optional projection of 1{t >= tau}
  Process m;        ///< Z + D_oF
  Process V_F;      ///< counting process of the jump set
  std::vector<JumpPoint> jump_set;
  bool honest = false;
  bool class_h = false;
  bool is_stopping_time = false;
  /// (w, t) with t >= tau(w) and Z_t(w) != Ztilde_t(w); only t == tau(w) can occur for honest tau.
  std::vector<std::pair<std::size_t, std::size_t>> closed_endpoint_gaps;

  /// true iff the increment at t is strictly after tau on outcome w (t - 1 >= tau(w)).
  bool after(std::size_t w, std::size_t t) const { return t >= 1 && static_cast<int>(t) - 1 >= tau[w]; }
  bool in_jump_set(std::size_t w, std::size_t t) const { return t >= 1 && V_F(w, t) != V_F(w, t - 1); }
};

/// Honesty is checked in the form: for every t, tau restricted to {tau <= t} is
/// constant on each block of P_t. Never throws.
RandomTimeAnalysis analyze(const FiniteFilteredSpace& space, const RandomTimeMap& tau);

/// Progressive enlargement: Q_t = P_t split by {tau = 0}, ..., {tau = t}, {tau > t}.
Filtration enlarge(const FiniteFilteredSpace& space, const RandomTimeMap& tau);

/// A generated model: tree space, scalar walk X, d-dimensional asset S, honest tau.
struct GeneratedModel {
  std::uint64_t seed = 0;
  FiniteFilteredSpace space;
  Process X;
  std::vector<Rational> visit_set;  ///< tau is the last visit of X to this set
  RandomTimeMap tau;
  VectorProcess S;
};

struct GeneratorConfig {
  std::size_t depth = 5;
  std::size_t branching = 3;
  std::size_t dimension = 1;
  std::size_t max_retries = 64;
};

/// Deterministic in (seed, config). Throws GenerationExhausted if no honest
/// class-H model is found within max_retries attempts.
GeneratedModel generate_honest_model(std::uint64_t seed, const GeneratorConfig& config);

/// Last time t <= T with x_t in `set` (0 if never).
RandomTimeMap last_visit(const Process& x, const std::vector<Rational>& set);

/// Indicator-difference basis of F-martingales: for every node (t, B) with
/// children C_0..C_{k-1} and every j < k-1, M_s = 0 for s < t and
/// M_s = 1_{C_j} - P(C_j | B) 1_B for s >= t.
std::vector<Process> martingale_basis(const Filtration& f);

}  // namespace enlab
