#pragma once

// Ruin probability for the compound Poisson model with premium rate mu, unit
// claims and unit intensity: Psi(u) = P(sup_{t>0} N_t - mu t >= u).

#include <cstddef>
#include <vector>

namespace enlab {

struct PsiValue {
  double value = 0;
  double tail_bound = 0;  ///< bound on the truncated part of the series
  std::size_t terms = 0;
};

/// Pollaczeck-Khinchine series (1 - rho) sum_k rho^k (1 - H^{*k}(u)) with H
/// uniform on [0, 1], rho = 1 / mu. Every retained term is evaluated exactly
/// (Irwin-Hall CDF in rational arithmetic); only the tail is dropped.
class RuinOracle {
 public:
  /// Throws InvalidDrift unless mu > 1.
  explicit RuinOracle(double mu, double series_tolerance = 1e-12, std::size_t max_terms = 400);

  PsiValue evaluate(double u) const;
  double operator()(double u) const { return evaluate(u).value; }
  double mu() const noexcept { return mu_; }

 private:
  double mu_;
  double tolerance_;
  std::size_t max_terms_;
};

/// Fast Psi for simulation: cubic Hermite table on a 1/128 grid built from the
/// closed form 1 - Psi(u) = (1 - rho) sum_{k <= u} e^{rho (u - k)} (rho (k - u))^k / k!
/// in 320-bit floating point, with the Cramer-Lundberg exponential tail beyond.
class RuinTable {
 public:
  /// Throws InvalidDrift unless mu > 1.
  explicit RuinTable(double mu);

  double operator()(double u) const;
  double mu() const noexcept { return mu_; }
  double rho() const noexcept { return 1.0 / mu_; }
  /// Adjustment coefficient R: e^R - 1 = mu R.
  double adjustment() const noexcept { return R_; }
  /// Smallest u (to 1e-9) with Psi(u) < eps.
  double u_star(double eps) const;
  double table_end() const noexcept { return h_ * static_cast<double>(values_.size() - 1); }

 private:
  double mu_;
  double R_;
  double h_ = 1.0 / 128;
  std::vector<double> values_;
  std::vector<double> slope_right_, slope_left_;
};

/// Irwin-Hall CDF P(U_1 + ... + U_k <= x), exact for the given double x.
double irwin_hall_cdf(std::size_t k, double x);

}  // namespace enlab
