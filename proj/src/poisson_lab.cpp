#include <enlab/errors.hpp>
#include <enlab/poisson_lab.hpp>
#include <enlab/rational.hpp>
#include <enlab/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace enlab {

PoissonModel PoissonModel::make(const RuinTable& psi, double a, double eps_tail, double T_max) {
  if (!(a > 0) || !std::isfinite(a)) throw EnlabError(ErrorKind::InvalidModel, "level a must be > 0");
  if (!(eps_tail > 0 && eps_tail < 1)) throw EnlabError(ErrorKind::InvalidModel, "eps_tail must lie in (0, 1)");
  PoissonModel m;
  m.mu = psi.mu();
  m.a = a;
  m.eps_tail = eps_tail;
  m.u_star = psi.u_star(eps_tail);
  m.T_max = T_max;
  return m;
}

PoissonPath simulate_path(const PoissonModel& model, std::uint64_t seed, std::uint64_t index) {
  PoissonPath path;
  path.seed = seed;
  path.index = index;
  auto rng = CounterRng::stream(seed, index);
  const double mu = model.mu, a = model.a, top = model.a + model.u_star;
  double t = 0;
  double n = 0;
  for (;;) {
    const double next = t + rng.exponential();
    const double y0 = mu * t - n;
    const double y1 = mu * next - n;
    if (y0 <= a && y1 > a) path.tau_hat = t + (a - y0) / mu;
    const double hit = y0 >= top ? t : t + (top - y0) / mu;
    const double stop = std::max(hit, model.min_end);
    if (stop < next && stop <= model.T_max) {
      path.end_time = stop;
      return path;
    }
    if (next > model.T_max) {
      path.end_time = model.T_max;
      path.censored = true;
      return path;
    }
    path.jump_times.push_back(next);
    t = next;
    n += 1;
  }
}

std::vector<Segment> segments(const PoissonPath& path, double mu) {
  std::vector<Segment> out;
  out.reserve(path.jump_times.size() + 1);
  double s0 = 0, n = 0;
  for (double s1 : path.jump_times) {
    out.push_back({s0, s1, mu * s0 - n, mu * s1 - n, true});
    s0 = s1;
    n += 1;
  }
  out.push_back({s0, path.end_time, mu * s0 - n, mu * path.end_time - n, false});
  return out;
}

double phi_of(const RuinTable& psi, double u) {
  if (u > 1) return psi(u - 1) - psi(u);
  if (u > 0) return 1 - psi(u);
  return 0;
}

double xi_of(const RuinTable& psi, double u) {
  if (u <= 1) return 0;
  return (psi(u - 1) - psi(u)) / (1 - psi(u - 1));
}

PathFunctionals path_functionals(const PoissonPath& path, const PoissonModel& model, const RuinTable& psi) {
  PathFunctionals out;
  out.censored = path.censored;
  const double a = model.a;
  for (const auto& seg : segments(path, model.mu)) {
    EventValues ev{};
    ev.t = seg.s1;
    ev.y_minus = seg.y1;
    const double y = seg.jump ? seg.y1 - 1 : seg.y1;
    ev.Z = y >= a ? psi(y - a) : 1.0;
    const double u = seg.y1 - a;
    ev.one_minus_zm = u > 0 ? 1 - psi(u) : 0.0;
    ev.phi = phi_of(psi, u);
    ev.after_tau = seg.s1 > path.tau_hat;
    ev.xi = ev.after_tau ? xi_of(psi, u) : 0.0;
    out.events.push_back(ev);
  }
  return out;
}

MeanSe mean_se(const std::vector<double>& x) {
  if (x.empty()) return {0, 0};
  const double n = static_cast<double>(x.size());
  const double mean = pairwise_sum(x) / n;
  if (x.size() < 2) return {mean, 0};
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  return {mean, std::sqrt(pairwise_sum(sq) / (n - 1) / n)};
}

// ---------------------------------------------------------------- example 1

namespace {

struct Example1Path {
  Example1Row row;
  std::vector<double> scaled;
  std::vector<char> exact;
  double drawdown = 0;
};

Example1Path example1_path(const PoissonModel& model, std::uint64_t seed, std::uint64_t index,
                           const std::vector<double>& lambdas) {
  const auto path = simulate_path(model, seed, index);
  Example1Path r;
  r.row = {index, 0, 0, path.censored, true};
  r.scaled.assign(lambdas.size(), 0);
  r.exact.assign(lambdas.size(), 1);
  if (path.censored) return r;

  const double a = model.a, mu = model.mu;
  Rational W = 0;
  std::vector<Rational> Wl(lambdas.size(), 0);
  std::vector<Rational> lam;
  for (double l : lambdas) lam.emplace_back(l);
  double peak = 0, low = 0;
  auto record = [&] {
    const double w = W.get_d();
    low = std::min(low, w);
    peak = std::max(peak, w);
    r.drawdown = std::max(r.drawdown, peak - w);
  };
  for (const auto& seg : segments(path, mu)) {
    if (seg.s1 <= path.tau_hat) continue;
    const double lo = std::max(seg.s0, path.tau_hat);
    const double y_lo = seg.y0 + mu * (lo - seg.s0);
    // drift: -H d(S - S^tau) = 1{a < Y <= a + 1} dt
    const double len = std::max(0.0, std::min(seg.y1, a + 1) - std::max(y_lo, a)) / mu;
    if (len < 0) r.row.nondecreasing = false;
    const Rational inc(len);
    W += inc;
    for (std::size_t k = 0; k < lam.size(); ++k) Wl[k] += lam[k] * inc;
    record();
    // jump of N with a < Y_- <= a + 1 after tau costs the position one unit
    if (seg.jump && seg.y1 > a && seg.y1 <= a + 1) {
      W -= 1;
      for (std::size_t k = 0; k < lam.size(); ++k) Wl[k] -= lam[k];
      r.row.nondecreasing = false;
      record();
    }
  }
  r.row.terminal_wealth = W.get_d();
  r.row.min_wealth = low;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    r.scaled[k] = Wl[k].get_d();
    r.exact[k] = Wl[k] == lam[k] * W;
  }
  return r;
}

}  // namespace

Example1Report example1_run(const PoissonModel& model, std::size_t paths, std::uint64_t seed, Execution exec,
                            const std::vector<double>& lambdas) {
  std::vector<Example1Path> per(paths);
  for_each_index(paths, exec, [&](std::size_t i) { per[i] = example1_path(model, seed, i, lambdas); });

  Example1Report rep;
  rep.paths = paths;
  rep.all_nondecreasing = true;
  std::vector<double> wealth;
  std::vector<std::vector<double>> scaled(lambdas.size());
  std::vector<bool> exact(lambdas.size(), true);
  std::size_t positive = 0;
  for (auto& p : per) {
    rep.rows.push_back(p.row);
    if (p.row.censored) continue;
    wealth.push_back(p.row.terminal_wealth);
    if (p.row.terminal_wealth > 0) ++positive;
    rep.all_nondecreasing = rep.all_nondecreasing && p.row.nondecreasing;
    rep.max_drawdown = std::max(rep.max_drawdown, p.drawdown);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      scaled[k].push_back(p.scaled[k]);
      exact[k] = exact[k] && p.exact[k];
    }
  }
  rep.uncensored = wealth.size();
  const auto ms = mean_se(wealth);
  rep.mean_terminal_wealth = ms.mean;
  rep.se = ms.se;
  rep.lower_99 = ms.mean - 2.5758293035489 * ms.se;
  rep.positive_fraction = wealth.empty() ? 0 : static_cast<double>(positive) / static_cast<double>(wealth.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    rep.scaling.push_back({lambdas[k], mean_se(scaled[k]).mean, exact[k]});
  return rep;
}

// ---------------------------------------------------------------- example 2

DeflatedValue deflated_at(const PoissonPath& path, const PoissonModel& model, const RuinTable& psi, double t,
                          const Example2Config& config) {
  const double a = model.a, mu = model.mu, tau = path.tau_hat;
  double logY = 0, X = 0;
  for (const auto& seg : segments(path, mu)) {
    if (seg.s0 >= t) break;
    const double e = std::min(seg.s1, t);
    const bool jump_in = seg.jump && seg.s1 <= t;
    if (config.asset == Example2Asset::compensated_poisson) {
      X += (jump_in ? 1.0 : 0.0) - (e - seg.s0);
    }
    const double lo = std::max(seg.s0, tau);
    if (lo >= e && !(jump_in && seg.s1 > tau)) continue;
    const double y_lo = seg.y0 + mu * (lo - seg.s0);
    const double y_e = seg.y0 + mu * (e - seg.s0);
    const bool after_jump = jump_in && seg.s1 > tau;
    if (lo < e) {
      if (config.asset == Example2Asset::upper)
        X -= std::max(0.0, y_e - std::max(y_lo, a + 1)) / mu;
      else if (config.asset == Example2Asset::band)
        X -= std::max(0.0, std::min(y_e, a + 1) - std::max(y_lo, a)) / mu;
      // drift of log Y^G on {Y > a + 1}: -int g(Y - a) ds with g = mu d/du log(1 - Psi)
      const double u0 = std::max(y_lo - a, 1.0), u1 = y_e - a;
      if (!config.zero_xi && u1 > u0) logY += std::log1p(-psi(u0)) - std::log1p(-psi(u1));
    }
    if (after_jump) {
      const double u = seg.y1 - a;
      if (config.asset == Example2Asset::upper && u > 1) X += 1;
      if (config.asset == Example2Asset::band && u >= 0 && u < 1) X += 1;
      if (!config.zero_xi && u > 1) logY += std::log1p(xi_of(psi, u));
    }
  }
  return {std::exp(logY), X};
}

Example2Report example2_run(const PoissonModel& base, const RuinTable& psi, std::size_t paths, std::uint64_t seed,
                            const Example2Config& config, Execution exec) {
  PoissonModel model = base;
  for (double c : config.checkpoints) {
    if (!(c >= 0)) throw EnlabError(ErrorKind::InvalidModel, "checkpoints must be >= 0");
    model.min_end = std::max(model.min_end, c);
  }
  const auto nc = config.checkpoints.size();
  struct PerPath {
    bool censored = false;
    std::vector<DeflatedValue> v;
    double min_YG = 1;
  };
  std::vector<PerPath> per(paths);
  for_each_index(paths, exec, [&](std::size_t i) {
    const auto path = simulate_path(model, seed, i);
    auto& r = per[i];
    r.censored = path.censored;
    if (path.censored) return;
    for (double c : config.checkpoints) {
      r.v.push_back(deflated_at(path, model, psi, c, config));
      r.min_YG = std::min(r.min_YG, r.v.back().YG);
    }
    r.min_YG = std::min(r.min_YG, deflated_at(path, model, psi, path.end_time, config).YG);
  });

  Example2Report rep;
  rep.paths = paths;
  rep.min_YG = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> yg(nc), prod(nc);
  for (const auto& r : per) {
    if (r.censored) continue;
    ++rep.uncensored;
    rep.min_YG = std::min(rep.min_YG, r.min_YG);
    for (std::size_t c = 0; c < nc; ++c) {
      yg[c].push_back(r.v[c].YG);
      prod[c].push_back(r.v[c].YG * r.v[c].X);
    }
  }
  rep.positive = rep.uncensored > 0 && rep.min_YG > 0;
  rep.martingale = rep.uncensored > 0;
  auto add = [&](double cp, const char* q, const std::vector<double>& x, double target) {
    const auto ms = mean_se(x);
    const double dev = std::abs(ms.mean - target);
    const bool flag = ms.se > 0 ? dev <= 4 * ms.se : dev == 0;
    rep.rows.push_back({cp, q, ms.mean, ms.se, target, flag});
    rep.martingale = rep.martingale && flag;
  };
  for (std::size_t c = 0; c < nc; ++c) {
    add(config.checkpoints[c], "YG", yg[c], 1.0);
    add(config.checkpoints[c], "YG*X", prod[c], 0.0);
  }
  return rep;
}

// ---------------------------------------------------------------- ruin MC

std::vector<RuinEstimate> ruin_mc(const RuinTable& psi, const std::vector<double>& us, std::size_t paths,
                                  std::uint64_t seed, Execution exec) {
  const double mu = psi.mu();
  const double L = psi.u_star(1e-9);
  double umax = 0;
  for (double u : us) {
    if (!(u >= 0)) throw EnlabError(ErrorKind::InvalidModel, "ruin levels must be >= 0");
    umax = std::max(umax, u);
  }
  std::vector<double> sup(paths);
  for_each_index(paths, exec, [&](std::size_t i) {
    auto rng = CounterRng::stream(seed, i);
    double x = 0, best = -std::numeric_limits<double>::infinity();
    // x is N - mu t just after each claim; the supremum over t > 0 is attained there
    for (std::size_t k = 0; k < 100000000; ++k) {
      x += 1 - mu * rng.exponential();
      best = std::max(best, x);
      if (best >= umax || x <= -L) break;
    }
    sup[i] = best;
  });
  std::vector<RuinEstimate> out;
  for (double u : us) {
    std::size_t hits = 0;
    for (double s : sup) hits += s >= u ? 1 : 0;
    const double n = static_cast<double>(paths);
    const double p = static_cast<double>(hits) / n;
    out.push_back({u, p, std::sqrt(p * (1 - p) / n)});
  }
  return out;
}

}  // namespace enlab
