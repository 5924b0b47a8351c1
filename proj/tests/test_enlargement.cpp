#include <doctest.h>

#include <enlab/enlargement.hpp>
#include <enlab/errors.hpp>

#include "fixtures.hpp"

using namespace enlab;
using fixtures::R;

namespace {

EnlargementContext context(const FiniteFilteredSpace& s, const RandomTimeMap& tau) {
  return EnlargementContext(s, analyze(s, tau));
}

}  // namespace

TEST_CASE("STOP: transfer formulas are trivial") {
  const auto s = fixtures::binary_tree();
  const auto ctx = context(s, fixtures::stop_tau());
  const auto X = fixtures::walk(s);
  const auto h = hat_transform(ctx, X);
  CHECK(h.g_martingale);
  CHECK(h.m_hat == after_tau_part(X, ctx.analysis().tau));
  const auto pr = proj_identity_check(ctx, X);
  CHECK(pr.ok());
  CHECK(pr.atoms_checked == 2);

  const auto jf = jump_functionals(s, ctx.analysis(), VectorProcess{X});
  CHECK(jf.identity_ok());
  for (const auto& [k, e] : jf.support) {
    CHECK(e.f_m == 0);
    // psi is 1 only where Z_- < 1; at t = 1 Ztilde = 1 on every outcome
    CHECK(e.psi == (k.t == 1 ? 0 : 1));
  }
  const auto ch = g_characteristics(ctx, VectorProcess{X});
  CHECK(ch.ok());
  for (const auto& e : ch.nu) CHECK(e.direct == R(1, 2));

  const auto db = build_deflator(ctx);
  CHECK(db.ok());
  CHECK(db.L_G == Process(4, 2));
  CHECK(db.E_L_G == Process(4, 2, 1));
  const auto dv = deflator_verify(ctx, db, X);
  CHECK(dv.conclusion_holds);
}

TEST_CASE("TENT: hat transform, compensators and deflator") {
  const auto s = fixtures::binary_tree();
  const auto ctx = context(s, fixtures::tent_tau());
  const auto& a = ctx.analysis();
  const auto X = fixtures::walk(s);

  // after-tau region is {uu, dd} x {1, 2}: atom {uu, dd} at t = 1, {uu} and {dd} at t = 2
  CHECK(ctx.after_atoms().size() == 3);
  CHECK(a.after(0, 1));
  CHECK(a.after(3, 2));
  CHECK_FALSE(a.after(1, 2));

  const auto hx = hat_transform(ctx, X);
  CHECK(hx.g_martingale);
  const auto hm = hat_transform(ctx, a.m);
  CHECK(hm.g_martingale);
  CHECK(hm.m_hat.increment(0, 2) == 0);  // -1/2 + (1/4)/(1/2)
  CHECK(hm.m_hat == Process(4, 2));

  const auto V = bracket(X, X);
  const auto cp = g_compensator_after(ctx, V);
  CHECK(cp.equal);
  CHECK(cp.u_equal);

  const auto pr = proj_identity_check(ctx, X);
  CHECK(pr.ok());

  const auto jf = jump_functionals(s, a, VectorProcess{X});
  CHECK(jf.identity_ok());
  const auto up = jf.support.at(JumpKey{2, 0, {R(1)}});
  CHECK(up.psi == 1);
  CHECK(up.f_m == R(-1, 2));
  const auto down = jf.support.at(JumpKey{2, 0, {R(-1)}});
  CHECK(down.psi == 0);
  CHECK(down.f_m == R(1, 2));
  CHECK(down.Zm + down.f_m == 1);

  const auto ch = g_characteristics(ctx, VectorProcess{X});
  CHECK(ch.ok());
  for (const auto& e : ch.nu) {
    if (e.t != 2 || e.f_block != 0) continue;  // atom {uu}
    if (e.x[0] == 1) {
      CHECK(e.direct == 1);
      CHECK(e.formula == 1);
    } else {
      CHECK(e.direct == 0);
      CHECK(e.formula == 0);
    }
  }

  const auto db = build_deflator(ctx);
  CHECK(db.ok());
  CHECK(db.m_hat == Process(4, 2));
  CHECK(db.W_G.increment(0, 2) == R(1, 2));
  CHECK(db.W_G_comp.increment(0, 2) == R(1, 2));
  CHECK(db.L_G == Process(4, 2));
  CHECK(db.E_L_G == Process(4, 2, 1));

  const auto dv = deflator_verify(ctx, db, X);
  CHECK_FALSE(dv.hypothesis_holds);
  CHECK_FALSE(dv.conclusion_holds);
}

TEST_CASE("context refuses times outside class H") {
  const auto s = fixtures::binary_tree(3);
  RandomTimeMap tau(8, 3);
  tau[0] = 0;
  tau[1] = 1;
  try {
    context(s, tau);
    FAIL("expected NotHonest");
  } catch (const EnlabError& e) {
    CHECK(e.kind() == ErrorKind::NotHonest);
  }
  const auto t2 = fixtures::binary_tree();
  const auto ctx = context(t2, fixtures::tent_tau());
  Process drift(4, 2);
  for (std::size_t w = 0; w < 4; ++w) drift(w, 2) = 1;
  CHECK_THROWS_AS(hat_transform(ctx, drift), EnlabError);
}

TEST_CASE("transfer identities on generated models") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto model = generate_honest_model(seed, {4, 3, 2, 64});
    const EnlargementContext ctx(model.space, analyze(model.space, model.tau));
    const auto& f = model.space.filtration();
    for (const auto& M : martingale_basis(f)) {
      CHECK(hat_transform(ctx, M).g_martingale);
      CHECK(proj_identity_check(ctx, M).ok());
      const auto cp = g_compensator_after(ctx, bracket(M, M));
      CHECK(cp.equal);
      CHECK(cp.u_equal);
    }
    const auto cp = g_compensator_after(ctx, ctx.analysis().D_oF);
    CHECK(cp.equal);
    CHECK(jump_functionals(model.space, ctx.analysis(), model.S).identity_ok());
    CHECK(g_characteristics(ctx, model.S).ok());
    const auto db = build_deflator(ctx);
    CHECK(db.ok());
    CHECK(db.ztilde_one_after_tau == 0);
  }
}
