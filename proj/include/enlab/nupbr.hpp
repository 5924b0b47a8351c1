#pragma once

// NUPBR on finite trees reduces to one-step no-arbitrage at every node:
// 0 must lie in the relative interior of the conditional support of dX.

#include <enlab/enlargement.hpp>
#include <enlab/finite_prob.hpp>

#include <map>
#include <optional>
#include <vector>

namespace enlab {

struct NodeWeights {
  std::size_t t = 0;                  ///< increment time
  std::size_t block = 0;              ///< block of the partition at t-1
  std::vector<std::size_t> children;  ///< blocks at t
  std::vector<Rational> p;            ///< conditional probabilities
  std::vector<Rational> q;            ///< strictly positive weights, sum 1, sum q dX = 0
};

struct ArbitrageWitness {
  std::size_t t = 0;
  std::size_t block = 0;
  std::vector<Rational> h;  ///< h . dX >= 0 on every child, > 0 on one
};

struct NupbrVerdict {
  bool satisfied = false;
  std::vector<NodeWeights> nodes;           ///< deflator side, present iff satisfied
  Process deflator;                         ///< L_0 = 1, L_t = L_{t-1} q / p
  std::optional<ArbitrageWitness> arbitrage;  ///< present iff not satisfied
};

constexpr std::size_t kMaxNupbrDimension = 4;

/// Throws DimensionTooLarge for d > 4 and NotAdapted if X is not adapted to f.
/// Nodes are visited in (t, block) order; the first arbitrage node is reported.
NupbrVerdict nupbr_check(const Filtration& f, const VectorProcess& X);

/// Independent re-check of a verdict: deflator -> L > 0, L and L X martingales;
/// arbitrage -> one-step wealth >= 0 with positive expectation.
bool verify_verdict(const Filtration& f, const VectorProcess& X, const NupbrVerdict& verdict);

/// Node-wise (beta, f) form of the deflator with beta = 0, f = dQ/dP on jump
/// values and h(x) = x; the drift condition b + sum (x f(x) - x) F(x) = 0.
struct WitnessConditionsReport {
  bool assump1 = false;  ///< finiteness, trivially true on a finite tree
  bool assump2 = false;
  bool assump3 = false;
  std::size_t nodes_checked = 0;
  std::optional<std::pair<std::size_t, std::size_t>> infeasible_node;  ///< for unsatisfied verdicts
};
/// Throws InvalidWitness when a satisfied verdict's weights violate the drift condition.
WitnessConditionsReport witness_conditions_check(const Filtration& f, const VectorProcess& X,
                                                 const NupbrVerdict& verdict);

struct TransformBundle {
  Process V_F;
  VectorProcess Ta_S;              ///< S - [S, V_F]
  VectorProcess scaled;            ///< (1 - Z_-) . Ta_S
  VectorProcess indicator_scaled;  ///< 1{Z_- < 1} . Ta_S, also S0
  Process m1;
  VectorProcess S1;                ///< 1{Z_- < 1} . S - [S, m1]
  std::map<JumpKey, Rational> nu0;  ///< psi 1{Z_- < 1} nu
  std::map<JumpKey, Rational> nu1;  ///< 1{psi > 0, Z_- < 1} nu
  bool purge_ok = false;           ///< Ta_S - Ta_S^tau = S - S^tau and no jumps on the jump set
  bool m1_martingale = false;
};
TransformBundle transform(const EnlargementContext& ctx, const VectorProcess& S);

struct CrosscheckReport {
  bool a = false;  ///< S - S^tau under G
  bool b = false;  ///< (1 - Z_-) . Ta_S under F
  bool c = false;  ///< 1{Z_- < 1} . Ta_S under F
  bool agree = false;
  std::size_t jump_set_size = 0;
  bool witnesses_sound = false;  ///< all three verdicts re-verified
};
CrosscheckReport theorem2_crosscheck(const EnlargementContext& ctx, const VectorProcess& S);

struct CorollaryReport {
  bool disjoint = false;        ///< {dS != 0} does not meet the jump set
  bool jump_set_empty = false;
  bool nupbr_g = false;
  bool implication_holds = false;  ///< disjoint => nupbr_g
};
CorollaryReport corollary_check(const EnlargementContext& ctx, const VectorProcess& S);

struct LevyReport {
  bool equivalent_by_atoms = false;  ///< nu^G > 0 exactly where the after-tau nu > 0
  bool equivalent_by_fm = false;     ///< {Z_- + f_m = 1 > Z_-} is nu-null
  bool agree = false;
  bool nupbr_f = false;
  bool hypothesis_holds = false;
};
LevyReport levy_condition_check(const EnlargementContext& ctx, const VectorProcess& S);

/// Componentwise S - S^tau.
VectorProcess after_tau_part(const VectorProcess& S, const RandomTimeMap& tau);

}  // namespace enlab
