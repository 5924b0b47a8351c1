#include <enlab/enlargement.hpp>
#include <enlab/errors.hpp>

namespace enlab {

EnlargementContext::EnlargementContext(const FiniteFilteredSpace& space, RandomTimeAnalysis analysis)
    : space_(space), a_(std::move(analysis)), g_(enlarge(space, a_.tau)) {
  if (!a_.honest) throw EnlabError(ErrorKind::NotHonest, "random time is not honest");
  if (!a_.class_h) throw EnlabError(ErrorKind::NotClassH, "Z_tau < 1 fails somewhere");
  for (std::size_t t = 1; t <= space_.horizon(); ++t) {
    const auto& q = g_.at(t - 1);
    for (std::size_t b = 0; b < q.size(); ++b) {
      const auto w0 = q.block(b).front();
      if (a_.tau[w0] <= static_cast<int>(t) - 1) atoms_.push_back({t, b, F().at(t - 1).block_of(w0)});
    }
  }
  const auto n = space_.size(), T = space_.horizon();
  one_minus_zt_ = Process(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 0; t <= T; ++t) one_minus_zt_(w, t) = 1 - a_.Ztilde(w, t);
  for (const auto& atom : atoms_) {
    const auto t = atom.t;
    const auto& prev_g = g_.at(t - 1);
    const auto& prev_f = F().at(t - 1);
    Rational lhs = 0, rhs = 0;
    for (auto w : prev_g.block(atom.g_block)) lhs += g_.prob(w) / one_minus_zt_(w, t);
    lhs /= g_.block_prob(t - 1, atom.g_block);
    for (auto w : prev_f.block(atom.f_block))
      if (sgn(one_minus_zt_(w, t)) > 0) rhs += F().prob(w);
    rhs /= F().block_prob(t - 1, atom.f_block) * one_minus_zm(prev_g.block(atom.g_block).front(), t);
    inverse_.emplace_back(std::move(lhs), std::move(rhs));
  }
}

namespace {

Process increments(const Process& x) {
  Process inc(x.outcomes(), x.horizon());
  for (std::size_t w = 0; w < x.outcomes(); ++w)
    for (std::size_t t = 1; t <= x.horizon(); ++t)
      if (x(w, t) != x(w, t - 1)) inc(w, t) = x(w, t) - x(w, t - 1);
  return inc;
}

Process cumulate(const Process& inc) { return Process::from_increments(inc, Column(inc.outcomes(), 0)); }

/// E[y | block b of partition at time u] for a column given as a function of w.
template <class Fn>
Rational block_mean(const Filtration& f, std::size_t u, std::size_t b, Fn&& y) {
  Rational acc = 0;
  for (auto w : f.at(u).block(b)) acc += f.prob(w) * y(w);
  return acc / f.block_prob(u, b);
}

JumpValue jump_of(const VectorProcess& S, std::size_t w, std::size_t t) {
  JumpValue x(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) x[i] = S[i].increment(w, t);
  return x;
}

bool is_zero(const JumpValue& x) {
  for (const auto& v : x)
    if (sgn(v) != 0) return false;
  return true;
}

}  // namespace

Process after_tau_part(const Process& M, const RandomTimeMap& tau) { return M - stopped(M, tau); }

HatResult hat_transform(const EnlargementContext& ctx, const Process& M) {
  const auto& F = ctx.F();
  const auto& a = ctx.analysis();
  if (!is_martingale(F, M)) throw EnlabError(ErrorKind::NotMartingale, "hat_transform needs an F-martingale");
  const auto dM = increments(M);
  const auto dMm = increments(angle_bracket(F, M, a.m));
  Process inc(M.outcomes(), M.horizon());
  for (std::size_t w = 0; w < M.outcomes(); ++w)
    for (std::size_t t = 1; t <= M.horizon(); ++t)
      if (a.after(w, t)) inc(w, t) = dM(w, t) + dMm(w, t) / ctx.one_minus_zm(w, t);
  HatResult r{cumulate(inc), {}};
  r.g_martingale = is_martingale(ctx.G(), r.m_hat);
  return r;
}

CompensatorPair g_compensator_after(const EnlargementContext& ctx, const Process& V) {
  const auto& F = ctx.F();
  const auto& a = ctx.analysis();
  if (!is_adapted(V, F)) throw EnlabError(ErrorKind::NotAdapted, "V must be F-adapted");
  const auto n = V.outcomes();
  const auto T = V.horizon();
  const auto dV = increments(V);

  Process after_inc(n, T), u_inc(n, T), weighted(n, T), kept(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t) {
      if (sgn(dV(w, t)) == 0) continue;
      const Rational& one_minus_zt = ctx.one_minus_ztilde(w, t);
      weighted(w, t) = one_minus_zt * dV(w, t);
      if (sgn(one_minus_zt) > 0) kept(w, t) = dV(w, t);
      if (a.after(w, t)) {
        after_inc(w, t) = dV(w, t);
        u_inc(w, t) = dV(w, t) / one_minus_zt;
      }
    }

  CompensatorPair r;
  r.direct = compensator(ctx.G(), cumulate(after_inc));
  r.u_direct = compensator(ctx.G(), cumulate(u_inc));

  const auto proj_w = predictable_projection(F, weighted);
  const auto proj_k = predictable_projection(F, kept);
  Process f_inc(n, T), fu_inc(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t)
      if (a.after(w, t)) {
        const auto den = ctx.one_minus_zm(w, t);
        f_inc(w, t) = proj_w(w, t) / den;
        fu_inc(w, t) = proj_k(w, t) / den;
      }
  r.formula = cumulate(f_inc);
  r.u_formula = cumulate(fu_inc);
  r.equal = r.direct == r.formula;
  r.u_equal = r.u_direct == r.u_formula;
  return r;
}

ProjectionReport proj_identity_check(const EnlargementContext& ctx, const Process& M) {
  const auto& F = ctx.F();
  const auto& G = ctx.G();
  ProjectionReport rep;
  const auto& atoms = ctx.after_atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& atom = atoms[i];
    const auto t = atom.t;
    ++rep.atoms_checked;
    const auto& [lhs2, rhs2] = ctx.inverse_identity()[i];
    if (lhs2 != rhs2) rep.violations.push_back({"inverse_one_minus_ztilde", t, atom.g_block, lhs2, rhs2});

    bool quiet = true;
    for (auto w : F.at(t - 1).block(atom.f_block)) quiet = quiet && M(w, t) == M(w, t - 1);
    if (quiet) continue;  // every mean below is a mean of zeros

    const auto w0 = G.at(t - 1).block(atom.g_block).front();
    const auto den = ctx.one_minus_zm(w0, t);
    auto omz = [&](std::size_t w) -> const Rational& { return ctx.one_minus_ztilde(w, t); };
    auto dM = [&](std::size_t w) -> Rational { return M.increment(w, t); };

    const Rational lhs1 = block_mean(G, t - 1, atom.g_block, [&](auto w) -> Rational { return dM(w) / omz(w); });
    const Rational rhs1 =
        block_mean(F, t - 1, atom.f_block, [&](auto w) -> Rational { return sgn(omz(w)) > 0 ? dM(w) : Rational(0); }) / den;
    const Rational lhs3 = block_mean(G, t - 1, atom.g_block, dM);
    const Rational rhs3 = block_mean(F, t - 1, atom.f_block, [&](auto w) -> Rational { return omz(w) * dM(w); }) / den;

    if (lhs1 != rhs1) rep.violations.push_back({"jump_over_one_minus_ztilde", t, atom.g_block, lhs1, rhs1});
    if (lhs3 != rhs3) rep.violations.push_back({"jump_projection", t, atom.g_block, lhs3, rhs3});
  }
  return rep;
}

JumpFunctionals jump_functionals(const FiniteFilteredSpace& space, const RandomTimeAnalysis& a,
                                 const VectorProcess& S) {
  const auto& F = space.filtration();
  JumpFunctionals jf;
  struct Acc {
    Rational p, dm, keep;
    bool all_ztilde_one = true;
  };
  for (std::size_t t = 1; t <= space.horizon(); ++t) {
    const auto& part = F.at(t - 1);
    for (std::size_t b = 0; b < part.size(); ++b) {
      std::map<JumpValue, Acc, RationalVectorLess> groups;
      for (auto w : part.block(b)) {
        auto x = jump_of(S, w, t);
        if (is_zero(x)) continue;
        auto& g = groups[std::move(x)];
        const auto& p = F.prob(w);
        g.p += p;
        g.dm += p * a.m.increment(w, t);
        if (a.Ztilde(w, t) < 1) {
          g.keep += p;
          g.all_ztilde_one = false;
        }
      }
      const auto pb = F.block_prob(t - 1, b);
      const auto& zm = a.Z(part.block(b).front(), t - 1);
      for (auto& [x, g] : groups) {
        JumpEntry e{g.p / pb, g.dm / g.p, g.keep / g.p, zm};
        JumpKey key{t, b, x};
        const bool psi_zero = sgn(e.psi) == 0;
        const bool fm_full = e.Zm + e.f_m == 1;
        const Rational slack = 1 - e.Zm - e.f_m;
        if (psi_zero != fm_full || (psi_zero && !g.all_ztilde_one) || sgn(slack) < 0 || slack > e.psi)
          jf.identity_violations.push_back(key);
        jf.support.emplace(std::move(key), std::move(e));
      }
    }
  }
  return jf;
}

CharacteristicsReport g_characteristics(const EnlargementContext& ctx, const VectorProcess& S) {
  const auto& F = ctx.F();
  const auto& G = ctx.G();
  const auto d = S.size();
  const auto jf = jump_functionals(ctx.space(), ctx.analysis(), S);
  CharacteristicsReport rep;

  for (const auto& [key, e] : jf.support) {
    auto& b = rep.b_F[{key.t, key.f_block}];
    b.resize(d);
    for (std::size_t i = 0; i < d; ++i) b[i] += key.x[i] * e.F;
  }

  for (const auto& atom : ctx.after_atoms()) {
    const auto t = atom.t;
    const auto& blk = G.at(t - 1).block(atom.g_block);
    const auto pa = G.block_prob(t - 1, atom.g_block);
    const auto den = ctx.one_minus_zm(blk.front(), t);

    std::map<JumpValue, Rational, RationalVectorLess> direct;
    JumpValue bg_direct(d);
    for (auto w : blk) {
      auto x = jump_of(S, w, t);
      for (std::size_t i = 0; i < d; ++i) bg_direct[i] += F.prob(w) * x[i] / pa;
      if (!is_zero(x)) direct[std::move(x)] += F.prob(w) / pa;
    }

    JumpValue bg_formula(d);
    auto bf = rep.b_F.find({t, atom.f_block});
    if (bf != rep.b_F.end()) bg_formula = bf->second;
    auto it = jf.support.lower_bound(JumpKey{t, atom.f_block, {}});
    for (; it != jf.support.end() && it->first.t == t && it->first.f_block == atom.f_block; ++it) {
      const auto& [key, e] = *it;
      const Rational density = 1 - e.f_m / den;
      if (sgn(density) < 0) rep.density_nonnegative = false;
      const Rational formula = density * e.F;
      for (std::size_t i = 0; i < d; ++i) bg_formula[i] -= key.x[i] * e.f_m * e.F / den;
      auto dit = direct.find(key.x);
      Rational dval = dit == direct.end() ? Rational(0) : dit->second;
      if (dit != direct.end()) direct.erase(dit);
      if (dval != formula) ++rep.violations;
      rep.nu.push_back({t, atom.g_block, atom.f_block, key.x, std::move(dval), formula});
    }
    // jumps seen on the atom but absent from the F-support would be a bug
    for (auto& [x, v] : direct) {
      ++rep.violations;
      rep.nu.push_back({t, atom.g_block, atom.f_block, x, v, Rational(0)});
    }
    if (bg_direct != bg_formula) ++rep.violations;
    rep.b_G_direct[{t, atom.g_block}] = std::move(bg_direct);
    rep.b_G_formula[{t, atom.g_block}] = std::move(bg_formula);
  }
  return rep;
}

DeflatorBundle build_deflator(const EnlargementContext& ctx) {
  const auto& F = ctx.F();
  const auto& G = ctx.G();
  const auto& a = ctx.analysis();
  const auto n = ctx.space().size();
  const auto T = ctx.space().horizon();
  const auto dm = increments(a.m);
  const auto dmm = increments(angle_bracket(F, a.m, a.m));

  DeflatorBundle db;
  Process mhat_inc(n, T), w_inc(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t) {
      if (!a.after(w, t)) continue;
      const auto den = ctx.one_minus_zm(w, t);
      mhat_inc(w, t) = dm(w, t) + dmm(w, t) / den;
      const Rational one_minus_zt = 1 - a.Ztilde(w, t);
      if (sgn(one_minus_zt) == 0) {
        ++db.ztilde_one_after_tau;
        continue;
      }
      w_inc(w, t) = dm(w, t) * dm(w, t) / (den * one_minus_zt);
    }
  db.m_hat = cumulate(mhat_inc);
  db.W_G = cumulate(w_inc);
  db.W_G_comp = compensator(G, db.W_G);

  Process l_inc(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t) {
      l_inc(w, t) = db.W_G.increment(w, t) - db.W_G_comp.increment(w, t);
      if (a.after(w, t)) l_inc(w, t) += mhat_inc(w, t) / ctx.one_minus_zm(w, t);
    }
  db.L_G = cumulate(l_inc);
  db.E_L_G = stochastic_exponential(db.L_G);
  db.positivity_ok = exponential_is_positive(db.L_G);
  db.l_is_g_martingale = static_cast<bool>(is_martingale(G, db.L_G));

  db.pre_tau_zero_ok = true;
  db.w_nondecreasing = true;
  db.jump_identity_ok = true;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t t = 0; t <= T; ++t) {
      if (static_cast<int>(t) <= a.tau[w] && (sgn(db.L_G(w, t)) != 0 || sgn(db.W_G(w, t)) != 0))
        db.pre_tau_zero_ok = false;
      if (t >= 1 && db.W_G(w, t) < db.W_G(w, t - 1)) db.w_nondecreasing = false;
    }
  }
  // 1 + dL = (1 - Z_-)/(1 - Ztilde) + P(Ztilde = 1 | P_{t-1}) after tau
  for (std::size_t t = 1; t <= T; ++t) {
    Column full(n);
    for (std::size_t w = 0; w < n; ++w) full[w] = a.Ztilde(w, t) == 1 ? 1 : 0;
    const auto p_full = cond_exp(F, t - 1, full);
    for (std::size_t w = 0; w < n; ++w) {
      if (!a.after(w, t) || a.Ztilde(w, t) == 1) continue;
      const Rational rhs = ctx.one_minus_zm(w, t) / (1 - a.Ztilde(w, t)) + p_full[w];
      if (1 + l_inc(w, t) != rhs) db.jump_identity_ok = false;
    }
  }
  return db;
}

DeflatorVerifyReport deflator_verify(const EnlargementContext& ctx, const DeflatorBundle& bundle, const Process& M) {
  const auto& a = ctx.analysis();
  if (!is_martingale(ctx.F(), M)) throw EnlabError(ErrorKind::NotMartingale, "deflator_verify needs an F-martingale");
  const auto n = M.outcomes();
  const auto T = M.horizon();
  Process thin(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 1; t <= T; ++t)
      thin(w, t) = thin(w, t - 1) + (a.in_jump_set(w, t) ? M.increment(w, t) : Rational(0));
  const auto after = after_tau_part(M, a.tau);
  Process prod(n, T);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t t = 0; t <= T; ++t) prod(w, t) = bundle.E_L_G(w, t) * after(w, t);
  return {static_cast<bool>(is_martingale(ctx.F(), thin)), static_cast<bool>(is_martingale(ctx.G(), prod))};
}

}  // namespace enlab
