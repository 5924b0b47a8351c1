#pragma once

// Ladder times of a scaled symmetric random walk standing in for Brownian
// motion: V_0 = 0, U_n = first visit to eps after V_n, V_{n+1} = first return
// to 0 after U_n, T_1 = first visit to 1, tau = last V_n before T_1.

#include <enlab/parallel.hpp>

#include <cstdint>
#include <vector>

namespace enlab {

struct BrownianConfig {
  double epsilon = 0.25;
  double dt = 1e-4;
  std::size_t paths = 20000;
  std::uint64_t seed = 0;
  double T_cap = 100;              ///< paths with T_1 > T_cap are censored
  std::size_t nested_paths = 200;  ///< outer paths that get a nested estimate of Z_tau
  std::size_t inner_paths = 500;

  /// Throws InvalidModel unless 0 < epsilon < 1, 0 < dt <= 1e-3 and eps / sqrt(dt) is an integer.
  void validate() const;
  long eps_steps() const;
  long one_steps() const;
};

struct BrownianPath {
  std::uint64_t index = 0;
  std::vector<double> U, V;
  double T1 = 0;
  double tau = 0;
  bool censored = false;
  bool honest_ok = false;  ///< tau recomputed from every prefix ending after tau agrees
};

BrownianPath brownian_path(const BrownianConfig& config, std::uint64_t index);
/// One bit per step, no block skipping; must agree with brownian_path.
BrownianPath brownian_path_reference(const BrownianConfig& config, std::uint64_t index);

/// Ladder structure of an explicit +-1 step sequence (levels in steps).
BrownianPath ladder_from_steps(const std::vector<int>& steps, long eps_steps, long one_steps, double dt);

/// Nested estimate of Z_tau = P(another return to 0 before T_1 | F_tau). By the
/// strong Markov property the inner walks restart at 0, and they pass eps before 1.
struct NestedZ {
  double z, se;
};
NestedZ nested_z_tau(const BrownianConfig& config, std::uint64_t index);

struct BrownianReport {
  std::size_t paths = 0, uncensored = 0;
  std::size_t honesty_failures = 0;
  double mean_tau = 0, se_tau = 0;
  double tau_zero_fraction = 0;
  double mean_excursions = 0;
  std::size_t nested = 0;
  double mean_z_tau = 0;
  double z_tau_theory = 0;          ///< 1 - eps
  double fraction_near_one = 0;     ///< share of nested Z_tau above 1 - 3 inner SE
  std::vector<NestedZ> z_samples;
  bool ok() const { return honesty_failures == 0 && uncensored > 0; }
};

BrownianReport brownian_demo(const BrownianConfig& config, Execution exec = Execution::parallel);

}  // namespace enlab
