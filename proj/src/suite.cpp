#include <enlab/enlargement.hpp>
#include <enlab/nupbr.hpp>
#include <enlab/suite.hpp>

namespace enlab {

ModelReport verify_model(const GeneratedModel& model) {
  ModelReport r;
  r.seed = model.seed;
  r.outcomes = model.space.size();
  try {
    const auto& F = model.space.filtration();
    auto a = analyze(model.space, model.tau);
    r.honest = a.honest;
    r.class_h = a.class_h;
    r.m_martingale = static_cast<bool>(is_martingale(F, a.m));
    r.closed_endpoint_gaps = a.closed_endpoint_gaps.size();
    const EnlargementContext ctx(model.space, std::move(a));
    const auto& an = ctx.analysis();

    const auto basis = martingale_basis(F);
    r.basis_size = basis.size();
    const auto db = build_deflator(ctx);
    r.positivity = db.positivity_ok;
    r.pre_tau_zero = db.pre_tau_zero_ok;
    r.deflator_other = db.w_nondecreasing && db.jump_identity_ok && db.l_is_g_martingale && db.ztilde_one_after_tau == 0;

    std::vector<Process> fv{bracket(model.X, model.X), an.D_oF, bracket(an.m, an.m)};
    for (const auto& s : model.S) fv.push_back(bracket(s, s));
    for (const auto& M : basis) {
      if (!hat_transform(ctx, M).g_martingale) ++r.mhat;
      r.proj += proj_identity_check(ctx, M).violations.size();
      fv.push_back(bracket(M, M));
      const auto dv = deflator_verify(ctx, db, M);
      if (dv.hypothesis_holds) {
        ++r.hypothesis_true;
        if (!dv.conclusion_holds) ++r.hypothesis_true_conclusion_false;
      }
    }
    for (const auto& V : fv) {
      const auto cp = g_compensator_after(ctx, V);
      if (!cp.equal) ++r.gcomp;
      if (!cp.u_equal) ++r.gcomp_u;
    }
    r.fv_tested = fv.size();
    r.nu_g = g_characteristics(ctx, model.S).violations;
    r.psi = jump_functionals(model.space, an, model.S).identity_violations.size() +
            jump_functionals(model.space, an, {model.X}).identity_violations.size();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<ModelReport> run_verify_suite(std::uint64_t first_seed, std::uint64_t last_seed,
                                          const GeneratorConfig& config, Execution exec) {
  const auto count = last_seed >= first_seed ? static_cast<std::size_t>(last_seed - first_seed + 1) : 0;
  std::vector<ModelReport> out(count);
  for_each_index(count, exec, [&](std::size_t i) {
    const auto seed = first_seed + i;
    try {
      out[i] = verify_model(generate_honest_model(seed, config));
    } catch (const std::exception& e) {
      out[i].seed = seed;
      out[i].error = e.what();
    }
  });
  return out;
}

std::vector<CrosscheckRow> run_crosscheck(std::uint64_t first_seed, std::uint64_t last_seed,
                                          const GeneratorConfig& config, Execution exec) {
  const auto count = last_seed >= first_seed ? static_cast<std::size_t>(last_seed - first_seed + 1) : 0;
  std::vector<CrosscheckRow> out(count);
  for_each_index(count, exec, [&](std::size_t i) {
    auto& row = out[i];
    row.seed = first_seed + i;
    try {
      const auto model = generate_honest_model(row.seed, config);
      const EnlargementContext ctx(model.space, analyze(model.space, model.tau));
      const auto rep = theorem2_crosscheck(ctx, model.S);
      row.a = rep.a;
      row.b = rep.b;
      row.c = rep.c;
      row.agree = rep.agree;
      row.jump_set_size = rep.jump_set_size;
      row.witnesses_sound = rep.witnesses_sound;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return out;
}

}  // namespace enlab
