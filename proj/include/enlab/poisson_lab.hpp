#pragma once

// Monte Carlo lab for Y_t = mu t - N_t (N Poisson, intensity 1) and the last
// exit time tau = sup{t : Y_t <= a}. Paths are simulated event by event.

#include <enlab/parallel.hpp>
#include <enlab/ruin.hpp>

#include <cstdint>
#include <vector>

namespace enlab {

struct PoissonModel {
  double mu = 2;
  double a = 1;
  double eps_tail = 1e-6;
  double u_star = 0;     ///< stop once Y - a >= u_star; Psi(u_star) < eps_tail
  double T_max = 1000;   ///< censoring cap
  double min_end = 0;    ///< never stop before this time

  /// Throws InvalidDrift unless mu > 1, InvalidModel unless a > 0.
  static PoissonModel make(const RuinTable& psi, double a, double eps_tail = 1e-6, double T_max = 1000);
};

struct PoissonPath {
  std::vector<double> jump_times;
  double end_time = 0;
  double tau_hat = 0;  ///< last continuous upcrossing of a
  bool censored = false;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// Deterministic in (seed, index).
PoissonPath simulate_path(const PoissonModel& model, std::uint64_t seed, std::uint64_t index = 0);

/// A linear piece of the path: Y goes from y0 at s0 to y1 at s1- and jumps
/// by -1 at s1 when `jump` is set.
struct Segment {
  double s0, s1, y0, y1;
  bool jump;
};
std::vector<Segment> segments(const PoissonPath& path, double mu);

struct EventValues {
  double t;
  double y_minus;  ///< Y_{t-}
  double Z;        ///< Z_t
  double one_minus_zm;
  double phi;
  double xi;       ///< deflator integrand, 0 before tau and on {Y_- <= a + 1}
  bool after_tau;
};

struct PathFunctionals {
  std::vector<EventValues> events;  ///< at every jump time and at end_time
  bool censored = false;
};

/// Z = Psi(Y - a) 1{Y >= a} + 1{Y < a}, 1 - Z_- = (1 - Psi(Y_- - a)) 1{Y_- > a},
/// phi = (Psi(u - 1) - Psi(u)) 1{u > 1} + (1 - Psi(u)) 1{0 < u <= 1}, u = Y_- - a,
/// xi = (Psi(u - 1) - Psi(u)) / (1 - Psi(u - 1)) on {u > 1} after tau.
PathFunctionals path_functionals(const PoissonPath& path, const PoissonModel& model, const RuinTable& psi);

double phi_of(const RuinTable& psi, double u);
double xi_of(const RuinTable& psi, double u);

// ---------------------------------------------------------------- example 1

struct Example1Row {
  std::uint64_t path_id;
  double terminal_wealth;
  double min_wealth;
  bool censored;
  bool nondecreasing;
};

struct ScalingRow {
  double lambda;
  double mean_terminal_wealth;
  bool exact;  ///< lambda-strategy wealth equals lambda times the unit wealth, exactly, on every path
};

struct Example1Report {
  std::size_t paths = 0, uncensored = 0;
  double mean_terminal_wealth = 0, se = 0, lower_99 = 0;
  double positive_fraction = 0;
  bool all_nondecreasing = false;
  double max_drawdown = 0;
  std::vector<ScalingRow> scaling;
  std::vector<Example1Row> rows;
  bool ok() const { return all_nondecreasing && lower_99 > 0 && uncensored > 0; }
};

/// Wealth of H = -1{a < Y_- <= a + 1} 1{t > tau} against S - S^tau with
/// S = 1{a <= Y_- < a + 1} . (N - t).
Example1Report example1_run(const PoissonModel& model, std::size_t paths, std::uint64_t seed,
                            Execution exec = Execution::parallel,
                            const std::vector<double>& lambdas = {1, 10, 100});

// ---------------------------------------------------------------- example 2

enum class Example2Asset {
  upper,                 ///< S = 1{Y_- > a + 1} . M
  band,                  ///< S = 1{a <= Y_- < a + 1} . M
  compensated_poisson,   ///< S = M, no after-tau cut
};

struct Example2Config {
  std::vector<double> checkpoints{1, 2, 5};
  Example2Asset asset = Example2Asset::upper;
  bool zero_xi = false;  ///< force xi = 0 (harness self-test)
};

struct Example2Row {
  double checkpoint;
  const char* quantity;  ///< "YG" or "YG*X"
  double mean, se;
  double target;
  bool flag;             ///< |mean - target| <= 4 se
};

struct Example2Report {
  std::size_t paths = 0, uncensored = 0;
  std::vector<Example2Row> rows;
  double min_YG = 0;
  bool positive = false;
  bool martingale = false;
  bool ok() const { return positive && martingale; }
};

Example2Report example2_run(const PoissonModel& model, const RuinTable& psi, std::size_t paths,
                            std::uint64_t seed, const Example2Config& config = {},
                            Execution exec = Execution::parallel);

/// Y^G_t and X_t = (S - S^tau)_t on one path (exposed for tests).
struct DeflatedValue {
  double YG, X;
};
DeflatedValue deflated_at(const PoissonPath& path, const PoissonModel& model, const RuinTable& psi, double t,
                          const Example2Config& config);

// ---------------------------------------------------------------- ruin MC

struct RuinEstimate {
  double u;
  double p;
  double se;
};

/// Direct simulation of sup_{t>0}(N_t - mu t) from 0; a path is abandoned as
/// non-ruined once it falls below -L with Psi(L) < 1e-9.
std::vector<RuinEstimate> ruin_mc(const RuinTable& psi, const std::vector<double>& us, std::size_t paths,
                                  std::uint64_t seed, Execution exec = Execution::parallel);

/// Sample mean and standard error, summed pairwise in index order.
struct MeanSe {
  double mean, se;
};
MeanSe mean_se(const std::vector<double>& x);

}  // namespace enlab
