#include <enlab/errors.hpp>
#include <enlab/random_times.hpp>
#include <enlab/rng.hpp>

#include <algorithm>
#include <set>

namespace enlab {

RandomTimeAnalysis analyze(const FiniteFilteredSpace& space, const RandomTimeMap& tau) {
  const auto& f = space.filtration();
  const auto n = space.size();
  const auto T = space.horizon();
  if (tau.size() != n) throw EnlabError(ErrorKind::InvalidModel, "tau must be defined on every outcome");
  for (auto v : tau)
    if (v < 0 || static_cast<std::size_t>(v) > T)
      throw EnlabError(ErrorKind::InvalidModel, "tau value " + std::to_string(v) + " outside the time grid");

  RandomTimeAnalysis a;
  a.tau = tau;
  Process gt(n, T), ge(n, T), D(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 0; t <= T; ++t) {
      const int ti = static_cast<int>(t);
      gt(w, t) = tau[w] > ti ? 1 : 0;
      ge(w, t) = tau[w] >= ti ? 1 : 0;
      D(w, t) = ti >= tau[w] ? 1 : 0;
    }
  a.Z = optional_projection(f, gt);
  a.Ztilde = optional_projection(f, ge);
  a.D_oF = dual_optional_projection(f, D);
  a.m = a.Z + a.D_oF;

  a.V_F = Process(n, T);
  for (std::size_t t = 1; t <= T; ++t) {
    const auto& part = f.at(t);
    for (std::size_t b = 0; b < part.size(); ++b) {
      const auto w0 = part.block(b).front();
      if (a.Ztilde(w0, t) == 1 && a.Z(w0, t - 1) < 1) a.jump_set.push_back({t, b});
    }
    for (std::size_t w = 0; w < n; ++w) a.V_F(w, t) = a.V_F(w, t - 1);
    for (const auto& jp : a.jump_set)
      if (jp.t == t)
        for (auto w : part.block(jp.block)) a.V_F(w, t) += 1;
  }

  a.honest = true;
  a.is_stopping_time = true;
  for (std::size_t t = 0; t <= T; ++t) {
    const int ti = static_cast<int>(t);
    for (const auto& blk : f.at(t).blocks()) {
      std::optional<int> seen;
      bool any_before = false, any_after = false;
      for (auto w : blk) {
        if (tau[w] <= ti) {
          any_before = true;
          if (seen && *seen != tau[w]) a.honest = false;
          seen = tau[w];
        } else {
          any_after = true;
        }
      }
      if (any_before && any_after) a.is_stopping_time = false;
    }
  }

  a.class_h = a.honest;
  for (std::size_t w = 0; w < n && a.class_h; ++w)
    if (a.Z(w, static_cast<std::size_t>(tau[w])) >= 1) a.class_h = false;

  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = static_cast<std::size_t>(tau[w]); t <= T; ++t)
      if (a.Z(w, t) != a.Ztilde(w, t)) a.closed_endpoint_gaps.emplace_back(w, t);
  return a;
}

Filtration enlarge(const FiniteFilteredSpace& space, const RandomTimeMap& tau) {
  const auto& f = space.filtration();
  std::vector<Partition> parts;
  std::vector<int> key(space.size());
  for (std::size_t t = 0; t <= space.horizon(); ++t) {
    const int ti = static_cast<int>(t);
    for (std::size_t w = 0; w < space.size(); ++w) key[w] = tau[w] <= ti ? tau[w] : ti + 1;
    parts.push_back(f.at(t).split_by(key));
  }
  return Filtration(f.prob_handle(), std::move(parts));
}

RandomTimeMap last_visit(const Process& x, const std::vector<Rational>& set) {
  RandomTimeMap tau(x.outcomes(), 0);
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 0; t <= x.horizon(); ++t)
      if (std::find(set.begin(), set.end(), x(w, t)) != set.end()) tau[w] = static_cast<int>(t);
  return tau;
}

std::vector<Process> martingale_basis(const Filtration& f) {
  std::vector<Process> basis;
  const auto n = f.outcomes();
  const auto T = f.horizon();
  for (std::size_t t = 1; t <= T; ++t) {
    const auto& prev = f.at(t - 1);
    for (std::size_t b = 0; b < prev.size(); ++b) {
      const auto& kids = f.children(t, b);
      for (std::size_t j = 0; j + 1 < kids.size(); ++j) {
        const Rational pj = f.block_prob(t, kids[j]) / f.block_prob(t - 1, b);
        Process m(n, T);
        for (auto w : prev.block(b)) {
          const Rational v = (f.at(t).block_of(w) == kids[j] ? Rational(1) : Rational(0)) - pj;
          for (std::size_t s = t; s <= T; ++s) m(w, s) = v;
        }
        basis.push_back(std::move(m));
      }
    }
  }
  return basis;
}

// ---------------------------------------------------------------- generator

namespace {

struct TreeNode {
  std::size_t parent;
  std::size_t level;
  Rational cond_prob;
  std::int64_t dx;
  std::vector<std::int64_t> ds;
  std::string name;
};

GeneratedModel try_generate(std::uint64_t seed, CounterRng rng, const GeneratorConfig& cfg) {
  const auto T = cfg.depth;
  const auto d = cfg.dimension;
  std::vector<TreeNode> nodes{{0, 0, 1, 0, std::vector<std::int64_t>(d, 0), ""}};
  std::vector<std::size_t> frontier{0};
  for (std::size_t level = 1; level <= T; ++level) {
    std::vector<std::size_t> next;
    for (auto parent : frontier) {
      const auto k = cfg.branching <= 1 ? std::size_t{1}
                                        : static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(cfg.branching)));
      std::vector<std::int64_t> weights(k);
      std::int64_t total = 0;
      for (auto& wgt : weights) total += (wgt = rng.uniform_int(1, 6));
      for (std::size_t c = 0; c < k; ++c) {
        TreeNode node{parent, level, Rational(weights[c], total), rng.uniform_int(-2, 2),
                      std::vector<std::int64_t>(d), nodes[parent].name + static_cast<char>('a' + c)};
        node.cond_prob.canonicalize();
        for (auto& v : node.ds) v = rng.uniform_int(-2, 2);
        next.push_back(nodes.size());
        nodes.push_back(std::move(node));
      }
    }
    frontier = std::move(next);
  }
  const bool centre = rng.uniform_int(0, 1) == 1;

  // leaves are the outcomes; ancestors[w][t] is the level-t node above leaf w
  const auto n = frontier.size();
  std::vector<std::vector<std::size_t>> ancestors(n, std::vector<std::size_t>(T + 1));
  SpaceDescription desc;
  for (std::size_t w = 0; w < n; ++w) {
    auto node = frontier[w];
    for (std::size_t t = T + 1; t-- > 0;) {
      ancestors[w][t] = node;
      node = nodes[node].parent;
    }
    desc.outcomes.push_back(nodes[frontier[w]].name);
    Rational p = 1;
    for (std::size_t t = 1; t <= T; ++t) p *= nodes[ancestors[w][t]].cond_prob;
    desc.prob.push_back(p);
  }
  desc.partitions.resize(T + 1);
  for (std::size_t t = 0; t <= T; ++t) {
    std::map<std::size_t, std::vector<std::string>> groups;
    for (std::size_t w = 0; w < n; ++w) groups[ancestors[w][t]].push_back(desc.outcomes[w]);
    for (auto& [node, members] : groups) desc.partitions[t].push_back(std::move(members));
  }

  GeneratedModel model{seed, FiniteFilteredSpace::build(desc), Process(n, T), {}, {}, {}};
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t) model.X(w, t) = model.X(w, t - 1) + nodes[ancestors[w][t]].dx;

  // visit set: either a random interval or a random set of attained values
  if (rng.uniform_int(0, 1) == 0) {
    const auto lo = rng.uniform_int(-3, 2);
    const auto hi = lo + rng.uniform_int(0, 2);
    for (auto v = lo; v <= hi; ++v) model.visit_set.emplace_back(v);
  } else {
    std::set<std::int64_t> vals;
    const auto count = rng.uniform_int(1, 3);
    for (std::int64_t i = 0; i < count; ++i) vals.insert(rng.uniform_int(-4, 4));
    for (auto v : vals) model.visit_set.emplace_back(v);
  }
  model.tau = last_visit(model.X, model.visit_set);

  const auto& f = model.space.filtration();
  model.S.assign(d, Process(n, T));
  for (std::size_t i = 0; i < d; ++i) {
    Process inc(n, T);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t t = 1; t <= T; ++t) inc(w, t) = Rational(nodes[ancestors[w][t]].ds[i]);
    if (centre) {
      for (std::size_t t = 1; t <= T; ++t) {
        const auto col = inc.column(t);
        const auto mean = cond_exp(f, t - 1, col);
        for (std::size_t w = 0; w < n; ++w) inc(w, t) -= mean[w];
      }
    }
    const Column zero(n, 0);
    model.S[i] = Process::from_increments(inc, zero);
  }
  return model;
}

}  // namespace

GeneratedModel generate_honest_model(std::uint64_t seed, const GeneratorConfig& cfg) {
  if (cfg.depth < 1 || cfg.depth > 8 || cfg.branching < 1 || cfg.branching > 4 || cfg.dimension < 1)
    throw EnlabError(ErrorKind::InvalidModel, "generator needs 1 <= depth <= 8, 1 <= branching <= 4, d >= 1");
  for (std::size_t attempt = 0; attempt < cfg.max_retries; ++attempt) {
    auto model = try_generate(seed, CounterRng::stream(seed, attempt), cfg);
    const auto a = analyze(model.space, model.tau);
    if (a.honest && a.class_h) return model;
  }
  throw EnlabError(ErrorKind::GenerationExhausted,
                   "no honest class-H model for seed " + std::to_string(seed) + " after " +
                       std::to_string(cfg.max_retries) + " attempts");
}

}  // namespace enlab
