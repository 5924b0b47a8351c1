#pragma once

// JSON model files. Rationals are "p/q" strings; every process is a map from
// outcome name to its values at t = 0..T. Derived properties (honesty, class H)
// are always recomputed, never read.

#include <enlab/random_times.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enlab {

struct TauSpec {
  RandomTimeMap values;
  /// set when tau is given as the last visit of a named process to a set
  std::optional<std::pair<std::string, std::vector<Rational>>> last_visit;
};

struct LoadedModel {
  FiniteFilteredSpace space;
  std::map<std::string, Process> processes;
  VectorProcess S;  ///< may be empty
  TauSpec tau;
  std::optional<std::uint64_t> seed;
};

/// Throws EnlabError(SchemaError) naming the offending field (and the line for
/// syntax errors); invariant failures keep their own kinds (ProbabilityNotOne, ...).
LoadedModel parse_model(const std::string& text);
LoadedModel load_model(const std::string& path);

std::string dump_model(const LoadedModel& model);
void save_model(const std::string& path, const LoadedModel& model);

/// Generated model as a file: X under "processes", S, tau as the last visit of X.
LoadedModel to_loaded(const GeneratedModel& model);

}  // namespace enlab
