#include <enlab/errors.hpp>
#include <enlab/finite_prob.hpp>

#include <algorithm>
#include <map>
#include <unordered_map>

namespace enlab {

// ---------------------------------------------------------------- Partition

Partition::Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t n_outcomes)
    : blocks_(std::move(blocks)), block_of_(n_outcomes, n_outcomes) {
  for (auto& blk : blocks_) {
    if (blk.empty()) throw EnlabError(ErrorKind::InvalidSpace, "empty block in partition");
    std::sort(blk.begin(), blk.end());
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (auto w : blocks_[b]) {
      if (w >= n_outcomes) throw EnlabError(ErrorKind::InvalidSpace, "outcome index out of range");
      if (block_of_[w] != n_outcomes)
        throw EnlabError(ErrorKind::InvalidSpace, "outcome listed in two blocks");
      block_of_[w] = b;
    }
  }
  for (auto b : block_of_)
    if (b == n_outcomes) throw EnlabError(ErrorKind::InvalidSpace, "partition does not cover every outcome");
}

Partition Partition::trivial(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return Partition({all}, n);
}

Partition Partition::discrete(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
  return Partition(std::move(blocks), n);
}

bool Partition::refines(const Partition& coarser) const {
  for (const auto& blk : blocks_) {
    const auto parent = coarser.block_of(blk.front());
    for (auto w : blk)
      if (coarser.block_of(w) != parent) return false;
  }
  return true;
}

// --------------------------------------------------------------- Filtration

Filtration::Filtration(std::shared_ptr<const std::vector<Rational>> prob, std::vector<Partition> partitions)
    : prob_(std::move(prob)), parts_(std::move(partitions)) {
  if (parts_.empty()) throw EnlabError(ErrorKind::InvalidSpace, "filtration needs at least P_0");
  block_prob_.resize(parts_.size());
  children_.resize(parts_.size());
  for (std::size_t t = 0; t < parts_.size(); ++t) {
    const auto& part = parts_[t];
    block_prob_[t].assign(part.size(), 0);
    for (std::size_t b = 0; b < part.size(); ++b)
      for (auto w : part.block(b)) block_prob_[t][b] += (*prob_)[w];
    if (t == 0) continue;
    if (!part.refines(parts_[t - 1]))
      throw EnlabError(ErrorKind::NonRefiningFiltration,
                       "P_" + std::to_string(t) + " does not refine P_" + std::to_string(t - 1));
    children_[t].assign(parts_[t - 1].size(), {});
    for (std::size_t b = 0; b < part.size(); ++b)
      children_[t][parts_[t - 1].block_of(part.block(b).front())].push_back(b);
  }
}

// -------------------------------------------------------------------- Space

FiniteFilteredSpace FiniteFilteredSpace::build(const SpaceDescription& d) {
  const auto n = d.outcomes.size();
  if (n == 0) throw EnlabError(ErrorKind::InvalidSpace, "no outcomes");
  if (d.prob.size() != n) throw EnlabError(ErrorKind::InvalidSpace, "probability vector size mismatch");
  if (d.partitions.size() < 2) throw EnlabError(ErrorKind::InvalidSpace, "horizon must be at least 1");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i)
    if (!index.emplace(d.outcomes[i], i).second)
      throw EnlabError(ErrorKind::InvalidSpace, "duplicate outcome '" + d.outcomes[i] + "'");

  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(d.prob[i]) <= 0)
      throw EnlabError(ErrorKind::ZeroProbabilityOutcome, "outcome '" + d.outcomes[i] + "' has probability " +
                                                              format_rational(d.prob[i]));
    total += d.prob[i];
  }
  if (total != 1) throw EnlabError(ErrorKind::ProbabilityNotOne, "probabilities sum to " + format_rational(total));

  std::vector<Partition> parts;
  for (std::size_t t = 0; t < d.partitions.size(); ++t) {
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& blk : d.partitions[t]) {
      std::vector<std::size_t> members;
      for (const auto& name : blk) {
        auto it = index.find(name);
        if (it == index.end())
          throw EnlabError(ErrorKind::InvalidSpace, "unknown outcome '" + name + "' in P_" + std::to_string(t));
        members.push_back(it->second);
      }
      blocks.push_back(std::move(members));
    }
    parts.emplace_back(std::move(blocks), n);
  }
  auto prob = std::make_shared<const std::vector<Rational>>(d.prob);
  return FiniteFilteredSpace(d.outcomes, Filtration(std::move(prob), std::move(parts)));
}

std::size_t FiniteFilteredSpace::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw EnlabError(ErrorKind::InvalidSpace, "unknown outcome '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

// ------------------------------------------------------------------ Process

Column Process::column(std::size_t t) const {
  Column c(n_);
  for (std::size_t w = 0; w < n_; ++w) c[w] = (*this)(w, t);
  return c;
}

void Process::set_column(std::size_t t, std::span<const Rational> values) {
  for (std::size_t w = 0; w < n_; ++w) (*this)(w, t) = values[w];
}

Process Process::from_increments(const Process& inc, std::span<const Rational> initial) {
  Process out(inc.outcomes(), inc.horizon());
  for (std::size_t w = 0; w < inc.outcomes(); ++w) {
    out(w, 0) = initial[w];
    for (std::size_t t = 1; t <= inc.horizon(); ++t) {
      if (sgn(inc(w, t)) == 0)
        out(w, t) = out(w, t - 1);
      else
        out(w, t) = out(w, t - 1) + inc(w, t);
    }
  }
  return out;
}

namespace {

void require_same_shape(const Process& a, const Process& b) {
  if (a.outcomes() != b.outcomes() || a.horizon() != b.horizon())
    throw EnlabError(ErrorKind::DimensionMismatch, "process shapes differ");
}

}  // namespace

Process operator+(const Process& a, const Process& b) {
  require_same_shape(a, b);
  Process out(a.outcomes(), a.horizon());
  for (std::size_t w = 0; w < a.outcomes(); ++w)
    for (std::size_t t = 0; t <= a.horizon(); ++t) out(w, t) = a(w, t) + b(w, t);
  return out;
}

Process operator-(const Process& a, const Process& b) {
  require_same_shape(a, b);
  Process out(a.outcomes(), a.horizon());
  for (std::size_t w = 0; w < a.outcomes(); ++w)
    for (std::size_t t = 0; t <= a.horizon(); ++t) out(w, t) = a(w, t) - b(w, t);
  return out;
}

Process operator*(const Rational& c, const Process& a) {
  Process out(a.outcomes(), a.horizon());
  for (std::size_t w = 0; w < a.outcomes(); ++w)
    for (std::size_t t = 0; t <= a.horizon(); ++t) out(w, t) = c * a(w, t);
  return out;
}

Process deterministic(std::size_t n, std::span<const Rational> values) {
  Process out(n, values.size() - 1);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 0; t < values.size(); ++t) out(w, t) = values[t];
  return out;
}

Process stopped(const Process& x, std::span<const int> tau) {
  Process out(x.outcomes(), x.horizon());
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 0; t <= x.horizon(); ++t)
      out(w, t) = x(w, std::min<std::size_t>(t, static_cast<std::size_t>(tau[w])));
  return out;
}

// ---------------------------------------------------------- measurability

bool is_measurable(std::span<const Rational> values, const Partition& partition) {
  for (const auto& blk : partition.blocks())
    for (auto w : blk)
      if (values[w] != values[blk.front()]) return false;
  return true;
}

bool is_adapted(const Process& x, const Filtration& f) {
  for (std::size_t t = 0; t <= x.horizon(); ++t)
    for (const auto& blk : f.at(t).blocks())
      for (auto w : blk)
        if (x(w, t) != x(blk.front(), t)) return false;
  return true;
}

bool is_predictable(const Process& x, const Filtration& f) {
  for (std::size_t t = 0; t <= x.horizon(); ++t)
    for (const auto& blk : f.at(t == 0 ? 0 : t - 1).blocks())
      for (auto w : blk)
        if (x(w, t) != x(blk.front(), t)) return false;
  return true;
}

// ------------------------------------------------------------- projections

Column cond_exp(const Filtration& f, std::size_t t, std::span<const Rational> x) {
  const auto& part = f.at(t);
  Column out(x.size());
  Rational acc;
  for (std::size_t b = 0; b < part.size(); ++b) {
    acc = 0;
    for (auto w : part.block(b)) acc += f.prob(w) * x[w];
    acc /= f.block_prob(t, b);
    for (auto w : part.block(b)) out[w] = acc;
  }
  return out;
}

namespace {

/// E[V_s | P_u] evaluated in place into out(., s).
void project_column(const Filtration& f, std::size_t u, const Process& v, std::size_t s, Process& out) {
  const auto& part = f.at(u);
  Rational acc;
  for (std::size_t b = 0; b < part.size(); ++b) {
    acc = 0;
    for (auto w : part.block(b))
      if (sgn(v(w, s)) != 0) acc += f.prob(w) * v(w, s);
    if (sgn(acc) != 0) acc /= f.block_prob(u, b);
    for (auto w : part.block(b)) out(w, s) = acc;
  }
}

}  // namespace

Process optional_projection(const Filtration& f, const Process& v) {
  Process out(v.outcomes(), v.horizon());
  for (std::size_t t = 0; t <= v.horizon(); ++t) project_column(f, t, v, t, out);
  return out;
}

Process predictable_projection(const Filtration& f, const Process& v) {
  Process out(v.outcomes(), v.horizon());
  for (std::size_t t = 0; t <= v.horizon(); ++t) project_column(f, t == 0 ? 0 : t - 1, v, t, out);
  return out;
}

namespace {

Process increments_of(const Process& v) {
  Process inc(v.outcomes(), v.horizon());
  for (std::size_t w = 0; w < v.outcomes(); ++w)
    for (std::size_t t = 1; t <= v.horizon(); ++t)
      if (v(w, t) != v(w, t - 1)) inc(w, t) = v(w, t) - v(w, t - 1);
  return inc;
}

}  // namespace

Process compensator(const Filtration& f, const Process& v) {
  const auto inc = increments_of(v);
  Process proj(v.outcomes(), v.horizon());
  for (std::size_t t = 1; t <= v.horizon(); ++t) project_column(f, t - 1, inc, t, proj);
  return Process::from_increments(proj, v.column(0));
}

Process dual_optional_projection(const Filtration& f, const Process& v) {
  auto inc = increments_of(v);
  for (std::size_t w = 0; w < v.outcomes(); ++w) inc(w, 0) = v(w, 0);
  Process proj(v.outcomes(), v.horizon());
  for (std::size_t t = 0; t <= v.horizon(); ++t) project_column(f, t, inc, t, proj);
  return Process::from_increments(proj, proj.column(0));
}

Process bracket(const Process& x, const Process& y) {
  require_same_shape(x, y);
  Process out(x.outcomes(), x.horizon());
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 1; t <= x.horizon(); ++t) {
      if (x(w, t) == x(w, t - 1) || y(w, t) == y(w, t - 1))
        out(w, t) = out(w, t - 1);
      else
        out(w, t) = out(w, t - 1) + (x(w, t) - x(w, t - 1)) * (y(w, t) - y(w, t - 1));
    }
  return out;
}

Process angle_bracket(const Filtration& f, const Process& x, const Process& y) {
  return compensator(f, bracket(x, y));
}

Process stochastic_integral(const Process& h, const Process& x) {
  require_same_shape(h, x);
  Process out(x.outcomes(), x.horizon());
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 1; t <= x.horizon(); ++t) out(w, t) = out(w, t - 1) + h(w, t) * (x(w, t) - x(w, t - 1));
  return out;
}

Process stochastic_integral(const VectorProcess& h, const VectorProcess& x) {
  if (h.size() != x.size() || x.empty())
    throw EnlabError(ErrorKind::DimensionMismatch,
                     "integrand has dimension " + std::to_string(h.size()) + ", integrator " +
                         std::to_string(x.size()));
  auto out = stochastic_integral(h[0], x[0]);
  for (std::size_t i = 1; i < x.size(); ++i) out = out + stochastic_integral(h[i], x[i]);
  return out;
}

Process stochastic_exponential(const Process& x) {
  Process out(x.outcomes(), x.horizon(), 1);
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 1; t <= x.horizon(); ++t) out(w, t) = out(w, t - 1) * (1 + x(w, t) - x(w, t - 1));
  return out;
}

bool exponential_is_positive(const Process& x) {
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 1; t <= x.horizon(); ++t)
      if (sgn(1 + x(w, t) - x(w, t - 1)) <= 0) return false;
  return true;
}

MartingaleCheck is_martingale(const Filtration& f, const Process& x) {
  MartingaleCheck res;
  if (!is_adapted(x, f)) {
    res.ok = false;
    res.adapted = false;
    return res;
  }
  Rational acc;
  for (std::size_t t = 1; t <= x.horizon(); ++t) {
    const auto& part = f.at(t - 1);
    for (std::size_t b = 0; b < part.size(); ++b) {
      acc = 0;
      for (auto w : part.block(b))
        if (x(w, t) != x(w, t - 1)) acc += f.prob(w) * (x(w, t) - x(w, t - 1));
      if (sgn(acc) != 0) {
        res.ok = false;
        res.witness = MartingaleWitness{t, b, acc / f.block_prob(t - 1, b)};
        return res;
      }
    }
  }
  return res;
}

}  // namespace enlab

namespace enlab::detail {
bool install_gmp_pool();
namespace {
// runs before main; every GMP object in the program is created after this
const bool gmp_pool_installed = install_gmp_pool();
}  // namespace
}  // namespace enlab::detail
