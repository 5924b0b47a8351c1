#include <enlab/errors.hpp>
#include <enlab/exact_lp.hpp>
#include <enlab/nupbr.hpp>

namespace enlab {

namespace {

using Vec = std::vector<Rational>;

Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_zero(const std::vector<Vec>& vs) {
  for (const auto& v : vs)
    for (const auto& x : v)
      if (sgn(x) != 0) return false;
  return true;
}

/// q >= 0, q_i = 1, sum_j q_j v_j = 0.
std::optional<Vec> child_weights(const std::vector<Vec>& v, std::size_t i, std::size_t d) {
  const auto k = v.size();
  Matrix A(d + 1, Vec(k, 0));
  Vec b(d + 1, 0);
  A[0][i] = 1;
  b[0] = 1;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t j = 0; j < k; ++j) A[r + 1][j] = v[j][r];
  return feasible_point(A, b);
}

/// h with h . v_j >= 0 for all j and h . v_i >= 1.
Vec arbitrage_direction(const std::vector<Vec>& v, std::size_t i, std::size_t d) {
  const auto k = v.size();
  Matrix A(k, Vec(2 * d + k, 0));
  Vec b(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t r = 0; r < d; ++r) {
      A[j][r] = v[j][r];
      A[j][d + r] = -v[j][r];
    }
    A[j][2 * d + j] = -1;
    b[j] = j == i ? 1 : 0;
  }
  const auto sol = feasible_point(A, b);
  if (!sol) throw EnlabError(ErrorKind::InvalidWitness, "arbitrage LP infeasible although the weight LP failed");
  Vec h(d);
  for (std::size_t r = 0; r < d; ++r) h[r] = (*sol)[r] - (*sol)[d + r];
  return h;
}

struct Node {
  std::vector<std::size_t> children;
  Vec p;
  std::vector<Vec> v;
};

Node node_data(const Filtration& f, const VectorProcess& X, std::size_t t, std::size_t b) {
  Node nd;
  nd.children = f.children(t, b);
  const auto w_parent = f.at(t - 1).block(b).front();
  for (auto c : nd.children) {
    const auto w = f.at(t).block(c).front();
    nd.p.push_back(f.block_prob(t, c) / f.block_prob(t - 1, b));
    Vec inc(X.size());
    for (std::size_t r = 0; r < X.size(); ++r) inc[r] = X[r](w, t) - X[r](w_parent, t - 1);
    nd.v.push_back(std::move(inc));
  }
  return nd;
}

}  // namespace

NupbrVerdict nupbr_check(const Filtration& f, const VectorProcess& X) {
  const auto d = X.size();
  if (d > kMaxNupbrDimension)
    throw EnlabError(ErrorKind::DimensionTooLarge, "dimension " + std::to_string(d) + " exceeds 4");
  for (const auto& x : X)
    if (!is_adapted(x, f)) throw EnlabError(ErrorKind::NotAdapted, "process is not adapted to the filtration");

  NupbrVerdict verdict;
  const auto n = f.outcomes();
  const auto T = f.horizon();
  for (std::size_t t = 1; t <= T; ++t) {
    const auto& prev = f.at(t - 1);
    for (std::size_t b = 0; b < prev.size(); ++b) {
      auto nd = node_data(f, X, t, b);
      const auto k = nd.children.size();
      NodeWeights nw{t, b, nd.children, nd.p, {}};
      Vec mean(d, 0);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t r = 0; r < d; ++r) mean[r] += nd.p[j] * nd.v[j][r];
      if (all_zero(nd.v) || all_zero({mean})) {
        nw.q = nd.p;
      } else {
        Vec sum(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
          const auto q = child_weights(nd.v, i, d);
          if (!q) {
            verdict.satisfied = false;
            verdict.nodes.clear();
            verdict.arbitrage = ArbitrageWitness{t, b, arbitrage_direction(nd.v, i, d)};
            return verdict;
          }
          for (std::size_t j = 0; j < k; ++j) sum[j] += (*q)[j];
        }
        Rational total = 0;
        for (const auto& s : sum) total += s;
        for (auto& s : sum) s /= total;
        nw.q = std::move(sum);
      }
      verdict.nodes.push_back(std::move(nw));
    }
  }

  verdict.satisfied = true;
  verdict.deflator = Process(n, T, 1);
  for (const auto& nw : verdict.nodes)
    for (std::size_t j = 0; j < nw.children.size(); ++j) {
      const Rational ratio = nw.q[j] / nw.p[j];
      for (auto w : f.at(nw.t).block(nw.children[j]))
        for (std::size_t s = nw.t; s <= T; ++s) verdict.deflator(w, s) *= ratio;
    }
  return verdict;
}

bool verify_verdict(const Filtration& f, const VectorProcess& X, const NupbrVerdict& verdict) {
  if (verdict.satisfied == verdict.arbitrage.has_value()) return false;
  if (verdict.satisfied) {
    const auto& L = verdict.deflator;
    if (L.outcomes() != f.outcomes() || L.horizon() != f.horizon()) return false;
    for (std::size_t w = 0; w < L.outcomes(); ++w) {
      if (L(w, 0) != 1) return false;
      for (std::size_t t = 0; t <= L.horizon(); ++t)
        if (sgn(L(w, t)) <= 0) return false;
    }
    if (!is_martingale(f, L)) return false;
    for (const auto& x : X) {
      Process lx(x.outcomes(), x.horizon());
      for (std::size_t w = 0; w < x.outcomes(); ++w)
        for (std::size_t t = 0; t <= x.horizon(); ++t) lx(w, t) = L(w, t) * x(w, t);
      if (!is_martingale(f, lx)) return false;
    }
    return true;
  }
  const auto& arb = *verdict.arbitrage;
  if (arb.t < 1 || arb.t > f.horizon() || arb.block >= f.at(arb.t - 1).size() || arb.h.size() != X.size())
    return false;
  const auto nd = node_data(f, X, arb.t, arb.block);
  Rational expected = 0;
  for (std::size_t j = 0; j < nd.v.size(); ++j) {
    const Rational wealth = dot(arb.h, nd.v[j]);
    if (sgn(wealth) < 0) return false;
    expected += nd.p[j] * wealth;
  }
  return sgn(expected) > 0;
}

WitnessConditionsReport witness_conditions_check(const Filtration& f, const VectorProcess& X,
                                                 const NupbrVerdict& verdict) {
  WitnessConditionsReport rep;
  rep.assump1 = true;
  rep.assump2 = true;
  if (!verdict.satisfied) {
    if (verdict.arbitrage) rep.infeasible_node = std::make_pair(verdict.arbitrage->t, verdict.arbitrage->block);
    return rep;
  }
  const auto d = X.size();
  for (const auto& nw : verdict.nodes) {
    const auto nd = node_data(f, X, nw.t, nw.block);
    std::map<Vec, std::pair<Rational, Rational>, RationalVectorLess> law;  // x -> (F, Q)
    for (std::size_t j = 0; j < nd.v.size(); ++j) {
      auto& e = law[nd.v[j]];
      e.first += nd.p[j];
      e.second += nw.q[j];
    }
    Vec drift(d, 0);  // b + sum (x f(x) - x) F(x) with b = sum x F(x)
    for (const auto& [x, fq] : law) {
      const Rational density = fq.second / fq.first;
      if (sgn(density) <= 0)
        throw EnlabError(ErrorKind::InvalidWitness, "non-positive density at t=" + std::to_string(nw.t));
      for (std::size_t r = 0; r < d; ++r) drift[r] += x[r] * fq.first + (x[r] * density - x[r]) * fq.first;
    }
    for (const auto& v : drift)
      if (sgn(v) != 0)
        throw EnlabError(ErrorKind::InvalidWitness, "drift condition fails at t=" + std::to_string(nw.t) +
                                                        " block " + std::to_string(nw.block));
    ++rep.nodes_checked;
  }
  rep.assump3 = true;
  return rep;
}

VectorProcess after_tau_part(const VectorProcess& S, const RandomTimeMap& tau) {
  VectorProcess out;
  for (const auto& s : S) out.push_back(after_tau_part(s, tau));
  return out;
}

TransformBundle transform(const EnlargementContext& ctx, const VectorProcess& S) {
  const auto& F = ctx.F();
  const auto& a = ctx.analysis();
  const auto n = ctx.space().size();
  const auto T = ctx.space().horizon();
  const auto d = S.size();
  const auto jf = jump_functionals(ctx.space(), a, S);

  TransformBundle tb;
  tb.V_F = a.V_F;
  for (const auto& s : S) {
    Process ta(n, T), sc(n, T), ind(n, T);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t t = 1; t <= T; ++t) {
        const Rational dta = a.in_jump_set(w, t) ? Rational(0) : s.increment(w, t);
        const Rational zm = a.Z(w, t - 1);
        ta(w, t) = ta(w, t - 1) + dta;
        sc(w, t) = sc(w, t - 1) + (1 - zm) * dta;
        ind(w, t) = ind(w, t - 1) + (zm < 1 ? dta : Rational(0));
      }
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t t = 0; t <= T; ++t) ta(w, t) += s(w, 0);
    tb.Ta_S.push_back(std::move(ta));
    tb.scaled.push_back(std::move(sc));
    tb.indicator_scaled.push_back(std::move(ind));
  }

  auto psi_zero = [&](std::size_t t, std::size_t fb, const JumpValue& x) {
    const auto it = jf.support.find(JumpKey{t, fb, x});
    return it != jf.support.end() && sgn(it->second.psi) == 0;
  };
  tb.m1 = Process(n, T);
  for (std::size_t t = 1; t <= T; ++t) {
    const auto& part = F.at(t - 1);
    for (std::size_t b = 0; b < part.size(); ++b) {
      const auto& blk = part.block(b);
      const bool live = a.Z(blk.front(), t - 1) < 1;
      Rational comp = 0;
      auto it = jf.support.lower_bound(JumpKey{t, b, {}});
      for (; it != jf.support.end() && it->first.t == t && it->first.f_block == b; ++it) {
        const auto& [key, e] = *it;
        if (live) {
          tb.nu0[key] = e.psi * e.F;
          if (sgn(e.psi) > 0) tb.nu1[key] = e.F;
          if (sgn(e.psi) == 0) comp += e.F;
        }
      }
      for (auto w : blk) {
        JumpValue x(d);
        bool nonzero = false;
        for (std::size_t i = 0; i < d; ++i) {
          x[i] = S[i].increment(w, t);
          nonzero = nonzero || sgn(x[i]) != 0;
        }
        const bool hit = live && nonzero && psi_zero(t, b, x);
        tb.m1(w, t) = tb.m1(w, t - 1) + (hit ? Rational(1) : Rational(0)) - comp;
      }
    }
  }
  tb.m1_martingale = static_cast<bool>(is_martingale(F, tb.m1));

  for (const auto& s : S) {
    Process s1(n, T);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t t = 1; t <= T; ++t) {
        const Rational ds = s.increment(w, t);
        s1(w, t) = s1(w, t - 1) + (a.Z(w, t - 1) < 1 ? ds : Rational(0)) - ds * tb.m1.increment(w, t);
      }
    tb.S1.push_back(std::move(s1));
  }
  tb.purge_ok = after_tau_part(tb.Ta_S, a.tau) == after_tau_part(S, a.tau);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t)
      if (a.in_jump_set(w, t))
        for (const auto& ta : tb.Ta_S)
          if (sgn(ta.increment(w, t)) != 0) tb.purge_ok = false;
  return tb;
}

CrosscheckReport theorem2_crosscheck(const EnlargementContext& ctx, const VectorProcess& S) {
  const auto tb = transform(ctx, S);
  const auto after = after_tau_part(S, ctx.analysis().tau);
  const auto va = nupbr_check(ctx.G(), after);
  const auto vb = nupbr_check(ctx.F(), tb.scaled);
  const auto vc = nupbr_check(ctx.F(), tb.indicator_scaled);
  CrosscheckReport r;
  r.a = va.satisfied;
  r.b = vb.satisfied;
  r.c = vc.satisfied;
  r.agree = r.a == r.b && r.b == r.c;
  r.jump_set_size = ctx.analysis().jump_set.size();
  r.witnesses_sound = verify_verdict(ctx.G(), after, va) && verify_verdict(ctx.F(), tb.scaled, vb) &&
                      verify_verdict(ctx.F(), tb.indicator_scaled, vc);
  return r;
}

CorollaryReport corollary_check(const EnlargementContext& ctx, const VectorProcess& S) {
  const auto& a = ctx.analysis();
  CorollaryReport r;
  r.jump_set_empty = a.jump_set.empty();
  r.disjoint = true;
  for (std::size_t w = 0; w < ctx.space().size(); ++w)
    for (std::size_t t = 1; t <= ctx.space().horizon(); ++t)
      if (a.in_jump_set(w, t))
        for (const auto& s : S)
          if (sgn(s.increment(w, t)) != 0) r.disjoint = false;
  r.nupbr_g = nupbr_check(ctx.G(), after_tau_part(S, a.tau)).satisfied;
  r.implication_holds = !r.disjoint || r.nupbr_g;
  return r;
}

LevyReport levy_condition_check(const EnlargementContext& ctx, const VectorProcess& S) {
  const auto ch = g_characteristics(ctx, S);
  const auto jf = jump_functionals(ctx.space(), ctx.analysis(), S);
  LevyReport r;
  r.equivalent_by_atoms = true;
  for (const auto& e : ch.nu)
    if (sgn(e.direct) <= 0) r.equivalent_by_atoms = false;
  r.equivalent_by_fm = true;
  for (const auto& [key, e] : jf.support)
    if (e.Zm < 1 && e.Zm + e.f_m == 1) r.equivalent_by_fm = false;
  r.agree = r.equivalent_by_atoms == r.equivalent_by_fm;
  r.nupbr_f = nupbr_check(ctx.F(), S).satisfied;
  r.hypothesis_holds = r.nupbr_f && r.equivalent_by_atoms;
  return r;
}

}  // namespace enlab
