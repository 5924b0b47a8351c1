#include <enlab/brownian.hpp>
#include <enlab/errors.hpp>
#include <enlab/poisson_lab.hpp>
#include <enlab/rng.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace enlab {

void BrownianConfig::validate() const {
  if (!(epsilon > 0 && epsilon < 1)) throw EnlabError(ErrorKind::InvalidModel, "epsilon must lie in (0, 1)");
  if (!(dt > 0 && dt <= 1e-3)) throw EnlabError(ErrorKind::InvalidModel, "dt must lie in (0, 1e-3]");
  const double e = epsilon / std::sqrt(dt);
  if (std::abs(e - std::round(e)) > 1e-6 || std::abs(1 / std::sqrt(dt) - std::round(1 / std::sqrt(dt))) > 1e-6)
    throw EnlabError(ErrorKind::InvalidModel, "epsilon and 1 must be whole multiples of sqrt(dt)");
  if (!(T_cap > 0)) throw EnlabError(ErrorKind::InvalidModel, "T_cap must be > 0");
}

long BrownianConfig::eps_steps() const { return std::lround(epsilon / std::sqrt(dt)); }
long BrownianConfig::one_steps() const { return std::lround(1 / std::sqrt(dt)); }

namespace {

// Random +-1 steps, least significant bit first.
class StepStream {
 public:
  explicit StepStream(CounterRng rng) : rng_(rng) {}

  int next() {
    refill();
    const int s = (word_ & 1) ? 1 : -1;
    word_ >>= 1;
    --left_;
    return s;
  }

  // net displacement of the next n in {8, 64} steps if they are available as a block
  bool block(int n, long& delta) {
    refill();
    if (n == 64 && left_ == 64) {
      delta = 2L * std::popcount(word_) - 64;
      left_ = 0;
      return true;
    }
    if (n == 8 && left_ >= 8) {
      delta = 2L * std::popcount(word_ & 0xffULL) - 8;
      word_ >>= 8;
      left_ -= 8;
      return true;
    }
    return false;
  }

 private:
  void refill() {
    if (left_ == 0) {
      word_ = rng_.next_u64();
      left_ = 64;
    }
  }
  CounterRng rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

// Walks from x until it reaches `up` or (if has_low) `low`; false if the step
// budget runs out first.
template <bool Fast>
bool walk_until(StepStream& s, long& x, long& k, long up, bool has_low, long low, long cap) {
  while (k <= cap) {
    if (x == up || (has_low && x == low)) return true;
    if constexpr (Fast) {
      const long dist = has_low ? std::min(up - x, x - low) : up - x;
      long delta;
      if (dist > 64 && s.block(64, delta)) {
        x += delta;
        k += 64;
        continue;
      }
      if (dist > 8 && s.block(8, delta)) {
        x += delta;
        k += 8;
        continue;
      }
    }
    x += s.next();
    ++k;
  }
  return false;
}

void finish(BrownianPath& p) {
  p.tau = p.V.back();
  if (p.censored) return;
  // every V_n is followed by U_n, and T_1 comes from the last U
  bool ordered = p.V.front() == 0 && p.U.size() == p.V.size();
  for (std::size_t n = 0; n < p.U.size(); ++n) {
    ordered = ordered && p.V[n] < p.U[n] && p.U[n] < p.T1;
    if (n + 1 < p.V.size()) ordered = ordered && p.U[n] < p.V[n + 1];
  }
  // at every ladder time after tau (and after T_1) the prefix already names tau
  std::vector<double> probes(p.U.begin(), p.U.end());
  probes.insert(probes.end(), p.V.begin(), p.V.end());
  probes.push_back(p.T1);
  probes.push_back(p.T1 + 1);
  bool agree = true;
  for (double t : probes) {
    if (t <= p.tau) continue;
    double last = 0;
    for (double v : p.V)
      if (v <= std::min(t, p.T1)) last = std::max(last, v);
    agree = agree && last == p.tau;
  }
  p.honest_ok = ordered && agree;
}

template <bool Fast>
BrownianPath run_path(const BrownianConfig& c, std::uint64_t index) {
  c.validate();
  BrownianPath p;
  p.index = index;
  p.V.push_back(0);
  const long e = c.eps_steps(), L = c.one_steps();
  const long cap = std::lround(c.T_cap / c.dt);
  StepStream s(CounterRng::stream(c.seed, index));
  long x = 0, k = 0;
  for (;;) {
    if (!walk_until<Fast>(s, x, k, e, false, 0, cap)) break;
    p.U.push_back(static_cast<double>(k) * c.dt);
    if (!walk_until<Fast>(s, x, k, L, true, 0, cap)) break;
    if (x == L) {
      p.T1 = static_cast<double>(k) * c.dt;
      finish(p);
      return p;
    }
    p.V.push_back(static_cast<double>(k) * c.dt);
  }
  p.censored = true;
  p.T1 = c.T_cap;
  finish(p);
  return p;
}

}  // namespace

BrownianPath brownian_path(const BrownianConfig& c, std::uint64_t index) { return run_path<true>(c, index); }

BrownianPath brownian_path_reference(const BrownianConfig& c, std::uint64_t index) {
  return run_path<false>(c, index);
}

BrownianPath ladder_from_steps(const std::vector<int>& steps, long e, long L, double dt) {
  BrownianPath p;
  p.V.push_back(0);
  long x = 0;
  bool seeking_eps = true;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    x += steps[k];
    const double t = static_cast<double>(k + 1) * dt;
    if (seeking_eps && x == e) {
      p.U.push_back(t);
      seeking_eps = false;
    } else if (!seeking_eps && x == 0) {
      p.V.push_back(t);
      seeking_eps = true;
    } else if (!seeking_eps && x == L) {
      p.T1 = t;
      finish(p);
      return p;
    }
  }
  p.censored = true;
  p.T1 = static_cast<double>(steps.size()) * dt;
  finish(p);
  return p;
}

NestedZ nested_z_tau(const BrownianConfig& c, std::uint64_t index) {
  const long e = c.eps_steps(), L = c.one_steps();
  const std::uint64_t inner_seed = mix64(c.seed ^ 0x5a5a5a5a5a5a5a5aULL) + index;
  std::size_t back = 0;
  for (std::size_t j = 0; j < c.inner_paths; ++j) {
    StepStream s(CounterRng::stream(inner_seed, j));
    long x = e, k = 0;
    walk_until<true>(s, x, k, L, true, 0, std::numeric_limits<long>::max() - 64);
    if (x == 0) ++back;
  }
  const double m = static_cast<double>(c.inner_paths);
  const double z = static_cast<double>(back) / m;
  return {z, std::sqrt(z * (1 - z) / m)};
}

BrownianReport brownian_demo(const BrownianConfig& c, Execution exec) {
  c.validate();
  std::vector<BrownianPath> paths(c.paths);
  for_each_index(c.paths, exec, [&](std::size_t i) { paths[i] = brownian_path(c, i); });

  BrownianReport rep;
  rep.paths = c.paths;
  rep.z_tau_theory = 1 - c.epsilon;
  std::vector<double> taus, excursions;
  std::vector<std::uint64_t> nested_idx;
  std::size_t zero = 0;
  for (const auto& p : paths) {
    if (p.censored) continue;
    taus.push_back(p.tau);
    excursions.push_back(static_cast<double>(p.V.size() - 1));
    if (p.tau == 0) ++zero;
    if (!p.honest_ok) ++rep.honesty_failures;
    if (nested_idx.size() < c.nested_paths) nested_idx.push_back(p.index);
  }
  rep.uncensored = taus.size();
  const auto ms = mean_se(taus);
  rep.mean_tau = ms.mean;
  rep.se_tau = ms.se;
  rep.mean_excursions = mean_se(excursions).mean;
  rep.tau_zero_fraction = taus.empty() ? 0 : static_cast<double>(zero) / static_cast<double>(taus.size());

  rep.z_samples.resize(nested_idx.size());
  for_each_index(nested_idx.size(), exec, [&](std::size_t i) { rep.z_samples[i] = nested_z_tau(c, nested_idx[i]); });
  rep.nested = nested_idx.size();
  std::vector<double> zs;
  std::size_t near_one = 0;
  for (const auto& z : rep.z_samples) {
    zs.push_back(z.z);
    if (z.z > 1 - 3 * z.se) ++near_one;
  }
  rep.mean_z_tau = mean_se(zs).mean;
  rep.fraction_near_one = zs.empty() ? 0 : static_cast<double>(near_one) / static_cast<double>(zs.size());
  return rep;
}

}  // namespace enlab
