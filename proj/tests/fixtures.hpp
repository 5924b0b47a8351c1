#pragma once

#include <enlab/finite_prob.hpp>
#include <enlab/random_times.hpp>

#include <string>
#include <vector>

namespace fixtures {

using enlab::Rational;

/// Binary tree {uu, ud, du, dd}, uniform, T = 2, natural filtration of the walk.
inline enlab::FiniteFilteredSpace binary_tree() {
  enlab::SpaceDescription d;
  d.outcomes = {"uu", "ud", "du", "dd"};
  d.prob.assign(4, Rational(1, 4));
  d.partitions = {{{"uu", "ud", "du", "dd"}}, {{"uu", "ud"}, {"du", "dd"}}, {{"uu"}, {"ud"}, {"du"}, {"dd"}}};
  return enlab::FiniteFilteredSpace::build(d);
}

/// Uniform binary tree of given depth; outcome names are u/d strings.
inline enlab::FiniteFilteredSpace binary_tree(std::size_t depth) {
  enlab::SpaceDescription d;
  const std::size_t n = std::size_t{1} << depth;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    for (std::size_t l = 0; l < depth; ++l) s += ((i >> (depth - 1 - l)) & 1) ? 'd' : 'u';
    d.outcomes.push_back(s);
  }
  d.prob.assign(n, enlab::ratio(1, static_cast<long>(n)));
  d.partitions.resize(depth + 1);
  for (std::size_t t = 0; t <= depth; ++t) {
    const std::size_t size = n >> t;
    for (std::size_t b = 0; b < (std::size_t{1} << t); ++b)
      d.partitions[t].emplace_back(d.outcomes.begin() + static_cast<long>(b * size),
                                   d.outcomes.begin() + static_cast<long>((b + 1) * size));
  }
  return enlab::FiniteFilteredSpace::build(d);
}

/// Symmetric +-1 walk read off the outcome names.
inline enlab::Process walk(const enlab::FiniteFilteredSpace& s) {
  enlab::Process x(s.size(), s.horizon());
  for (std::size_t w = 0; w < s.size(); ++w)
    for (std::size_t t = 1; t <= s.horizon(); ++t)
      x(w, t) = x(w, t - 1) + (s.outcome(w)[t - 1] == 'u' ? 1 : -1);
  return x;
}

inline enlab::RandomTimeMap stop_tau() { return {1, 1, 1, 1}; }
/// Last zero of the walk: uu -> 0, ud -> 2, du -> 2, dd -> 0.
inline enlab::RandomTimeMap tent_tau() { return {0, 2, 2, 0}; }

inline Rational R(long p, long q = 1) { return enlab::ratio(p, q); }

}  // namespace fixtures
