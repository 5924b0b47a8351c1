#include <enlab/errors.hpp>
#include <enlab/rational.hpp>
#include <enlab/ruin.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

namespace enlab {

namespace {

void require_drift(double mu) {
  if (!(mu > 1) || !std::isfinite(mu))
    throw EnlabError(ErrorKind::InvalidDrift, "mu must be a finite number > 1, got " + std::to_string(mu));
}

// sum_{j <= x} (-1)^j C(k, j) (x - j)^k / k!, exactly
Rational irwin_hall_exact(std::size_t k, const Rational& x) {
  if (x <= 0) return 0;
  if (x >= static_cast<long>(k)) return 1;
  const mpz_class p = x.get_num(), q = x.get_den();
  const auto jmax = mpz_class(p / q).get_ui();
  mpz_class acc = 0, binom = 1, pw;
  for (unsigned long j = 0; j <= jmax; ++j) {
    mpz_class base = p - q * j;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), k);
    if (j % 2 == 0)
      acc += binom * pw;
    else
      acc -= binom * pw;
    binom = binom * (k - j) / (j + 1);
  }
  mpz_class den, fact;
  mpz_pow_ui(den.get_mpz_t(), q.get_mpz_t(), k);
  mpz_fac_ui(fact.get_mpz_t(), k);
  Rational r(acc, den * fact);
  r.canonicalize();
  return r;
}

constexpr mp_bitcnt_t kPrec = 320;

mpf_class mpf_exp(const mpf_class& x) {
  // exp(x) = exp(x / 2^s)^(2^s) with |x / 2^s| < 1/16
  int s = 0;
  mpf_class y(x, kPrec);
  while (abs(y) > 0.0625) {
    y /= 2;
    ++s;
  }
  mpf_class sum(1, kPrec), term(1, kPrec);
  for (unsigned n = 1; n < 80; ++n) {
    term *= y;
    term /= n;
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum *= sum;
  return sum;
}

// 1 - Psi(u) from the alternating closed form
double survival_closed_form(const mpf_class& rho, double u) {
  mpf_class uu(u, kPrec);
  const auto kmax = static_cast<unsigned long>(std::floor(u));
  mpf_class e = mpf_exp(rho * uu);
  const mpf_class q = mpf_exp(-rho);
  mpf_class sum(0, kPrec), fact(1, kPrec), qk(1, kPrec), pw(0, kPrec);
  for (unsigned long k = 0; k <= kmax; ++k) {
    if (k > 0) {
      fact *= k;
      qk *= q;
    }
    mpf_class base(rho * (mpf_class(k, kPrec) - uu), kPrec);
    mpf_pow_ui(pw.get_mpf_t(), base.get_mpf_t(), k);
    sum += qk * pw / fact;
  }
  mpf_class phi((1 - rho) * e * sum, kPrec);
  mpf_class psi(1 - phi, kPrec);
  return psi.get_d();
}

}  // namespace

double irwin_hall_cdf(std::size_t k, double x) { return irwin_hall_exact(k, Rational(x)).get_d(); }

RuinOracle::RuinOracle(double mu, double series_tolerance, std::size_t max_terms)
    : mu_(mu), tolerance_(series_tolerance), max_terms_(max_terms) {
  require_drift(mu);
}

PsiValue RuinOracle::evaluate(double u) const {
  if (!(u >= 0) || !std::isfinite(u)) throw EnlabError(ErrorKind::InvalidModel, "Psi needs u >= 0");
  const Rational x(u);
  const Rational rho = Rational(1) / Rational(mu_);
  const double rho_d = 1.0 / mu_;
  std::size_t K = static_cast<std::size_t>(std::ceil(std::log(tolerance_) / std::log(rho_d)));
  K = std::clamp<std::size_t>(K, 1, max_terms_);

  Rational sum = 0, rk = 1;
  for (std::size_t k = 1; k <= K; ++k) {
    rk *= rho;
    if (static_cast<double>(k) <= u) continue;  // k uniforms never exceed k
    sum += rk * (1 - irwin_hall_exact(k, x));
  }
  PsiValue out;
  out.value = Rational((1 - rho) * sum).get_d();
  out.tail_bound = std::pow(rho_d, static_cast<double>(K + 1));
  out.terms = K;
  return out;
}

RuinTable::RuinTable(double mu) : mu_(mu) {
  require_drift(mu);
  // adjustment coefficient by bisection on e^R - 1 - mu R
  double lo = 1e-12, hi = 1;
  while (std::expm1(hi) - mu * hi <= 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::expm1(mid) - mu * mid > 0 ? hi : lo) = mid;
  }
  R_ = 0.5 * (lo + hi);

  const mpf_class rho(mpf_class(1, kPrec) / mpf_class(mu, kPrec), kPrec);
  constexpr double kStop = 1e-16, kMaxU = 100;
  for (std::size_t i = 0;; ++i) {
    const double u = h_ * static_cast<double>(i);
    values_.push_back(survival_closed_form(rho, u));
    if (values_.back() < kStop || u >= kMaxU) break;
  }
  const double r = 1.0 / mu;
  const auto per_unit = static_cast<std::size_t>(std::lround(1 / h_));
  slope_right_.resize(values_.size());
  slope_left_.resize(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double lag = i >= per_unit ? values_[i - per_unit] : 1.0;
    slope_right_[i] = r * (values_[i] - lag);
    // Psi(u - 1) jumps from 1 to rho at u = 1
    slope_left_[i] = i == per_unit ? r * (values_[i] - 1.0) : slope_right_[i];
  }
}

double RuinTable::operator()(double u) const {
  if (u <= 0) return u < 0 ? 1.0 : values_.front();
  const double end = table_end();
  if (u >= end) return values_.back() * std::exp(-R_ * (u - end));
  const double s = u / h_;
  auto i = static_cast<std::size_t>(s);
  if (i + 1 >= values_.size()) i = values_.size() - 2;
  const double t = s - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * values_[i] + h10 * h_ * slope_right_[i] + h01 * values_[i + 1] + h11 * h_ * slope_left_[i + 1];
}

double RuinTable::u_star(double eps) const {
  double lo = 0, hi = 1;
  while ((*this)(hi) >= eps) hi *= 2;
  if ((*this)(lo) < eps) return 0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    ((*this)(mid) < eps ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace enlab
