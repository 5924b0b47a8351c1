#pragma once

// Exact discrete-time stochastic calculus on finite filtered probability spaces.
//
// Conventions used throughout:
//   * time grid is {0, ..., T}; "predictable at t" means measurable at t-1,
//     and the left limit X_- at t is X_{t-1};
//   * integrals and brackets sum increments over s = 1..t; the value at 0 is
//     the initial value (0 for brackets and integrals, 1 for exponentials).

#include <enlab/rational.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enlab {

using Column = std::vector<Rational>;

/// A partition of {0, ..., n-1}. Blocks are sorted and ordered by their smallest element.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t n_outcomes);

  static Partition trivial(std::size_t n_outcomes);
  static Partition discrete(std::size_t n_outcomes);

  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_[b]; }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  std::size_t block_of(std::size_t outcome) const { return block_of_[outcome]; }

  /// True iff every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  /// Common refinement of *this with the level sets of `key`.
  template <class Key>
  Partition split_by(const std::vector<Key>& key) const;

  bool operator==(const Partition& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

/// A refining sequence of partitions P_0, ..., P_T together with the reference measure.
class Filtration {
 public:
  Filtration(std::shared_ptr<const std::vector<Rational>> prob, std::vector<Partition> partitions);

  std::size_t horizon() const noexcept { return parts_.size() - 1; }
  std::size_t outcomes() const noexcept { return prob_->size(); }
  const Partition& at(std::size_t t) const { return parts_[t]; }
  const std::vector<Partition>& partitions() const noexcept { return parts_; }
  const std::vector<Rational>& prob() const noexcept { return *prob_; }
  const Rational& prob(std::size_t outcome) const { return (*prob_)[outcome]; }
  const Rational& block_prob(std::size_t t, std::size_t b) const { return block_prob_[t][b]; }
  std::shared_ptr<const std::vector<Rational>> prob_handle() const noexcept { return prob_; }

  /// Blocks of P_t contained in block `b` of P_{t-1}, in increasing block order.
  const std::vector<std::size_t>& children(std::size_t t, std::size_t b) const { return children_[t][b]; }

 private:
  std::shared_ptr<const std::vector<Rational>> prob_;
  std::vector<Partition> parts_;
  std::vector<std::vector<Rational>> block_prob_;
  std::vector<std::vector<std::vector<std::size_t>>> children_;
};

/// Parsed description of a finite model, before validation.
struct SpaceDescription {
  std::vector<std::string> outcomes;
  std::vector<Rational> prob;
  /// partitions[t][block] = list of outcome names; partitions.size() == T + 1.
  std::vector<std::vector<std::vector<std::string>>> partitions;
};

class FiniteFilteredSpace {
 public:
  /// Validates the description: probabilities strictly positive and summing to
  /// exactly one, each P_t a partition of the outcome set, P_{t+1} refining P_t.
  static FiniteFilteredSpace build(const SpaceDescription& description);

  std::size_t size() const noexcept { return names_.size(); }
  std::size_t horizon() const noexcept { return filtration_.horizon(); }
  const std::string& outcome(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& outcome_names() const noexcept { return names_; }
  std::size_t index_of(const std::string& name) const;
  const Rational& prob(std::size_t i) const { return filtration_.prob(i); }
  const Filtration& filtration() const noexcept { return filtration_; }

 private:
  FiniteFilteredSpace(std::vector<std::string> names, Filtration filtration)
      : names_(std::move(names)), filtration_(std::move(filtration)) {}

  std::vector<std::string> names_;
  Filtration filtration_;
};

/// Scalar process on the outcome x time grid.
class Process {
 public:
  Process() = default;
  Process(std::size_t n_outcomes, std::size_t horizon, const Rational& fill = 0)
      : n_(n_outcomes), t_(horizon), v_(n_outcomes * (horizon + 1), fill) {}

  std::size_t outcomes() const noexcept { return n_; }
  std::size_t horizon() const noexcept { return t_; }

  Rational& operator()(std::size_t w, std::size_t t) { return v_[w * (t_ + 1) + t]; }
  const Rational& operator()(std::size_t w, std::size_t t) const { return v_[w * (t_ + 1) + t]; }

  /// X_t - X_{t-1}, t >= 1.
  Rational increment(std::size_t w, std::size_t t) const { return (*this)(w, t) - (*this)(w, t - 1); }

  Column column(std::size_t t) const;
  void set_column(std::size_t t, std::span<const Rational> values);

  /// Rebuilds a process from initial values and increments: X_0 = init, X_t = X_{t-1} + inc_t.
  static Process from_increments(const Process& increments, std::span<const Rational> initial);

  bool operator==(const Process& other) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t t_ = 0;
  std::vector<Rational> v_;
};

/// d-dimensional process stored componentwise.
using VectorProcess = std::vector<Process>;

Process operator+(const Process& a, const Process& b);
Process operator-(const Process& a, const Process& b);
Process operator*(const Rational& c, const Process& a);

/// Deterministic process X_t = values[t].
Process deterministic(std::size_t n_outcomes, std::span<const Rational> values);

/// Stopped process X^tau: X_{min(t, tau)}.
Process stopped(const Process& x, std::span<const int> tau);

bool is_measurable(std::span<const Rational> values, const Partition& partition);
bool is_adapted(const Process& x, const Filtration& f);
bool is_predictable(const Process& x, const Filtration& f);

/// E[X | P_t], exact.
Column cond_exp(const Filtration& f, std::size_t t, std::span<const Rational> x);

/// (^o V)_t = E[V_t | P_t].
Process optional_projection(const Filtration& f, const Process& v);

/// (^p V)_t = E[V_t | P_{t-1}] for t >= 1 and E[V_0 | P_0] at 0.
Process predictable_projection(const Filtration& f, const Process& v);

/// Dual predictable projection: V^p_0 = V_0, Delta V^p_t = E[Delta V_t | P_{t-1}].
Process compensator(const Filtration& f, const Process& v);

/// Dual optional projection: V^o_0 = E[V_0 | P_0], Delta V^o_t = E[Delta V_t | P_t].
Process dual_optional_projection(const Filtration& f, const Process& v);

/// [X, Y]_t = sum_{s<=t} Delta X_s Delta Y_s.
Process bracket(const Process& x, const Process& y);

/// <X, Y> := compensator([X, Y]).
Process angle_bracket(const Filtration& f, const Process& x, const Process& y);

/// (H . X)_t = sum_{s<=t} H_s Delta X_s.
Process stochastic_integral(const Process& h, const Process& x);

/// Vector form: sum over components of H^i . X^i. Throws DimensionMismatch.
Process stochastic_integral(const VectorProcess& h, const VectorProcess& x);

/// E(X)_t = prod_{s<=t} (1 + Delta X_s).
Process stochastic_exponential(const Process& x);

/// True iff 1 + Delta X > 0 everywhere, i.e. E(X) is strictly positive.
bool exponential_is_positive(const Process& x);

struct MartingaleWitness {
  std::size_t t = 0;       ///< increment time
  std::size_t block = 0;   ///< block of P_{t-1}
  Rational drift;          ///< E[Delta X_t | block] != 0
};

struct MartingaleCheck {
  bool ok = true;
  bool adapted = true;
  std::optional<MartingaleWitness> witness;
  explicit operator bool() const noexcept { return ok; }
};

/// Exact martingale test: E[Delta X_t | P_{t-1}] == 0 for all t and blocks.
/// The first violation in (t, block) order is returned as witness.
/// A process that is not adapted to `f` fails with adapted == false and no witness.
MartingaleCheck is_martingale(const Filtration& f, const Process& x);

}  // namespace enlab

#include <enlab/detail/partition_impl.hpp>
