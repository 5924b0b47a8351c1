#pragma once

#include <enlab/parallel.hpp>
#include <enlab/random_times.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace enlab {

/// Exact identity checks on one generated model. Counters hold violations.
struct ModelReport {
  std::uint64_t seed = 0;
  std::size_t outcomes = 0;
  std::size_t basis_size = 0;
  std::size_t fv_tested = 0;
  bool honest = false;
  bool class_h = false;
  bool m_martingale = false;
  std::size_t mhat = 0;
  std::size_t gcomp = 0;
  std::size_t gcomp_u = 0;
  std::size_t proj = 0;
  std::size_t nu_g = 0;
  std::size_t psi = 0;
  bool positivity = false;
  bool pre_tau_zero = false;
  bool deflator_other = false;  ///< W nondecreasing, jump identity, L a G-martingale, no guard firing
  std::size_t closed_endpoint_gaps = 0;
  std::size_t hypothesis_true = 0;       ///< basis martingales meeting the thin-jump hypothesis
  std::size_t hypothesis_true_conclusion_false = 0;
  std::string error;  ///< non-empty if an exception stopped the checks

  bool ok() const {
    return error.empty() && honest && class_h && m_martingale && mhat == 0 && gcomp == 0 && gcomp_u == 0 &&
           proj == 0 && nu_g == 0 && psi == 0 && positivity && pre_tau_zero && deflator_other;
  }
};

ModelReport verify_model(const GeneratedModel& model);

std::vector<ModelReport> run_verify_suite(std::uint64_t first_seed, std::uint64_t last_seed,
                                          const GeneratorConfig& config, Execution exec);

struct CrosscheckRow {
  std::uint64_t seed = 0;
  bool a = false, b = false, c = false, agree = false;
  std::size_t jump_set_size = 0;
  bool witnesses_sound = false;
  std::string error;
};

std::vector<CrosscheckRow> run_crosscheck(std::uint64_t first_seed, std::uint64_t last_seed,
                                          const GeneratorConfig& config, Execution exec);

}  // namespace enlab
