#pragma once

// G-versus-F transfer formulas after an honest time, and the explicit deflator.
// "After tau" always means increments at t with t - 1 >= tau.

#include <enlab/finite_prob.hpp>
#include <enlab/random_times.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enlab {

/// Everything the transfer formulas need: F, G, the analysis and the
/// list of after-tau G-atoms.
class EnlargementContext {
 public:
  /// Throws NotHonest / NotClassH unless tau is honest and of class H.
  EnlargementContext(const FiniteFilteredSpace& space, RandomTimeAnalysis analysis);

  struct AfterAtom {
    std::size_t t;        ///< increment time
    std::size_t g_block;  ///< block of Q_{t-1}
    std::size_t f_block;  ///< block of P_{t-1} containing it
  };

  const FiniteFilteredSpace& space() const noexcept { return space_; }
  const Filtration& F() const noexcept { return space_.filtration(); }
  const Filtration& G() const noexcept { return g_; }
  const RandomTimeAnalysis& analysis() const noexcept { return a_; }
  const std::vector<AfterAtom>& after_atoms() const noexcept { return atoms_; }

  /// 1 - Z_{t-1}(w).
  Rational one_minus_zm(std::size_t w, std::size_t t) const { return 1 - a_.Z(w, t - 1); }
  /// 1 - Ztilde_t(w).
  const Rational& one_minus_ztilde(std::size_t w, std::size_t t) const { return one_minus_zt_(w, t); }

  /// E[1 / (1 - Ztilde) | A] and P(Ztilde < 1 | B) / (1 - Z_-) per after-tau atom.
  const std::vector<std::pair<Rational, Rational>>& inverse_identity() const noexcept { return inverse_; }

 private:
  FiniteFilteredSpace space_;
  RandomTimeAnalysis a_;
  Filtration g_;
  std::vector<AfterAtom> atoms_;
  Process one_minus_zt_;
  std::vector<std::pair<Rational, Rational>> inverse_;
};

/// M^hat: increments 1{t-1 >= tau}[dM + d<M,m>/(1 - Z_-)]. Throws NotMartingale
/// if M is not an F-martingale. g_martingale holds the G-martingale test.
struct HatResult {
  Process m_hat;
  MartingaleCheck g_martingale;
};
HatResult hat_transform(const EnlargementContext& ctx, const Process& M);

/// G-compensator of the after-tau part of V, computed directly on G-atoms and via
/// (1 - Z_-)^{-1} E[(1 - Ztilde) dV | P_{t-1}]. The U block does the same for
/// dU = 1{after} dV / (1 - Ztilde) against (1 - Z_-)^{-1} E[1{Ztilde < 1} dV | P_{t-1}].
struct CompensatorPair {
  Process direct;
  Process formula;
  Process u_direct;
  Process u_formula;
  bool equal = false;
  bool u_equal = false;
};
CompensatorPair g_compensator_after(const EnlargementContext& ctx, const Process& V);

struct IdentityViolation {
  std::string identity;
  std::size_t t = 0;
  std::size_t g_block = 0;
  Rational lhs, rhs;
};

/// G-predictable projections after tau versus their F expressions, on every after-tau atom:
///   E[dM / (1 - Ztilde) | A]   = E[dM 1{Ztilde < 1} | B] / (1 - Z_-)
///   E[1 / (1 - Ztilde) | A]    = P(Ztilde < 1 | B) / (1 - Z_-)
///   E[dM | A]                  = E[(1 - Ztilde) dM | B] / (1 - Z_-)
struct ProjectionReport {
  std::size_t atoms_checked = 0;
  std::vector<IdentityViolation> violations;
  bool ok() const { return violations.empty(); }
};
ProjectionReport proj_identity_check(const EnlargementContext& ctx, const Process& M);

/// Jump values are vectors of increments of S.
using JumpValue = std::vector<Rational>;

struct JumpKey {
  std::size_t t;
  std::size_t f_block;  ///< block of P_{t-1}
  JumpValue x;
  bool operator<(const JumpKey& o) const {
    if (t != o.t) return t < o.t;
    if (f_block != o.f_block) return f_block < o.f_block;
    return RationalVectorLess{}(x, o.x);
  }
};

struct JumpEntry {
  Rational F;    ///< P(dS_t = x | B)
  Rational f_m;  ///< E[dm 1{dS = x} | B] / F
  Rational psi;  ///< P(Ztilde < 1, dS = x | B) / F
  Rational Zm;   ///< Z_{t-1} on B
};

struct JumpFunctionals {
  std::map<JumpKey, JumpEntry> support;  ///< x != 0 with F > 0
  std::vector<JumpKey> identity_violations;
  bool identity_ok() const { return identity_violations.empty(); }
};

/// f_m and psi on the jump support; checks {psi = 0} = {Z_- + f_m = 1} and that
/// both lie in {Ztilde = 1}, plus 0 <= 1 - Z_- - f_m <= psi.
JumpFunctionals jump_functionals(const FiniteFilteredSpace& space, const RandomTimeAnalysis& a,
                                 const VectorProcess& S);

struct NuGEntry {
  std::size_t t;
  std::size_t g_block;
  std::size_t f_block;
  JumpValue x;
  Rational direct;
  Rational formula;
};

/// Characteristics with truncation h(x) = x, c = 0 and A_t = t.
struct CharacteristicsReport {
  std::vector<NuGEntry> nu;
  /// b^F per (t, P_{t-1} block) and b^G per after-tau atom, direct and by formula
  std::map<std::pair<std::size_t, std::size_t>, JumpValue> b_F;
  std::map<std::pair<std::size_t, std::size_t>, JumpValue> b_G_direct, b_G_formula;
  std::size_t violations = 0;
  bool density_nonnegative = true;
  bool ok() const { return violations == 0 && density_nonnegative; }
};
CharacteristicsReport g_characteristics(const EnlargementContext& ctx, const VectorProcess& S);

struct DeflatorBundle {
  Process m_hat;
  Process W_G;
  Process W_G_comp;
  Process L_G;
  Process E_L_G;
  bool positivity_ok = false;
  bool pre_tau_zero_ok = false;
  bool w_nondecreasing = false;
  bool jump_identity_ok = false;
  bool l_is_g_martingale = false;
  std::size_t ztilde_one_after_tau = 0;  ///< guard firings; expected to stay 0
  bool ok() const {
    return positivity_ok && pre_tau_zero_ok && w_nondecreasing && jump_identity_ok && l_is_g_martingale &&
           ztilde_one_after_tau == 0;
  }
};
DeflatorBundle build_deflator(const EnlargementContext& ctx);

struct DeflatorVerifyReport {
  bool hypothesis_holds = false;  ///< sum dM 1_{jump set} is an F-martingale
  bool conclusion_holds = false;  ///< E(L^G)(M - M^tau) is a G-martingale
};
DeflatorVerifyReport deflator_verify(const EnlargementContext& ctx, const DeflatorBundle& bundle, const Process& M);

/// M - M^tau.
Process after_tau_part(const Process& M, const RandomTimeMap& tau);

}  // namespace enlab
