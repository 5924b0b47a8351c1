#pragma once

// Brute-force one-step arbitrage search for d <= 2, independent of the simplex.

#include <enlab/finite_prob.hpp>

#include <optional>
#include <vector>

namespace oracle {

using enlab::Rational;
using Vec = std::vector<Rational>;

/// Tries every candidate direction +-v_j and +-perp(v_j) (d = 2) or +-1 (d = 1).
/// In the plane the arbitrage cone, when non-trivial, has an extreme ray among these.
inline std::optional<Vec> find_arbitrage(const std::vector<Vec>& v) {
  const auto d = v.empty() ? 0 : v[0].size();
  std::vector<Vec> cand;
  if (d == 1) {
    cand = {{Rational(1)}, {Rational(-1)}};
  } else {
    for (const auto& x : v) {
      cand.push_back({x[0], x[1]});
      cand.push_back({-x[0], -x[1]});
      cand.push_back({-x[1], x[0]});
      cand.push_back({x[1], -x[0]});
    }
  }
  for (const auto& h : cand) {
    bool nonneg = true, pos = false;
    for (const auto& x : v) {
      Rational s = 0;
      for (std::size_t r = 0; r < d; ++r) s += h[r] * x[r];
      if (s < 0) nonneg = false;
      if (s > 0) pos = true;
    }
    if (nonneg && pos) return h;
  }
  return std::nullopt;
}

/// Searches strictly positive weights a_i / den summing to 1 with sum q v = 0.
inline bool grid_weights(const std::vector<Vec>& v, long den) {
  const auto k = v.size();
  const auto d = v.empty() ? 0 : v[0].size();
  std::vector<long> a(k, 1);
  auto check = [&]() {
    long total = 0;
    for (auto x : a) total += x;
    if (total != den) return false;
    for (std::size_t r = 0; r < d; ++r) {
      Rational s = 0;
      for (std::size_t j = 0; j < k; ++j) s += Rational(a[j]) * v[j][r];
      if (s != 0) return false;
    }
    return true;
  };
  for (;;) {
    if (check()) return true;
    std::size_t i = 0;
    while (i < k && ++a[i] > den) a[i++] = 1;
    if (i == k) return false;
  }
}

}  // namespace oracle
