#pragma once

// Brute-force enumeration oracle for tree models whose outcome names spell the
// path one character per period, so the P_t block of w is its length-t prefix.

#include <enlab/rational.hpp>

#include <functional>
#include <string>
#include <vector>

namespace oracle {

using enlab::Rational;

struct Tree {
  std::vector<std::string> names;
  std::vector<Rational> prob;
};

std::string prefix(const std::string& name, std::size_t t);

/// E[f | name has the given prefix].
Rational cexp(const Tree& tree, const std::string& pre, const std::function<Rational(std::size_t)>& f);

/// P(prefix) for the given prefix.
Rational prob(const Tree& tree, const std::string& pre);

}  // namespace oracle
