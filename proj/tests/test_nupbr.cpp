#include <doctest.h>

#include <enlab/errors.hpp>
#include <enlab/exact_lp.hpp>
#include <enlab/nupbr.hpp>
#include <enlab/rng.hpp>

#include "fixtures.hpp"
#include "nupbr_oracle.hpp"

using namespace enlab;
using fixtures::R;

TEST_CASE("exact simplex feasibility") {
  // x + y = 1, x - y = 0
  const auto sol = feasible_point({{R(1), R(1)}, {R(1), R(-1)}}, {R(1), R(0)});
  REQUIRE(sol);
  CHECK((*sol)[0] == R(1, 2));
  CHECK((*sol)[1] == R(1, 2));
  // x + y = -1 has no nonnegative solution
  CHECK_FALSE(feasible_point({{R(1), R(1)}}, {R(-1)}));
  // redundant rows
  const auto red = feasible_point({{R(1), R(2)}, {R(2), R(4)}}, {R(3), R(6)});
  REQUIRE(red);
  CHECK((*red)[0] + 2 * (*red)[1] == 3);
}

TEST_CASE("martingale and drift verdicts") {
  const auto s = fixtures::binary_tree();
  const auto& f = s.filtration();
  const auto X = fixtures::walk(s);
  const auto v = nupbr_check(f, {X});
  CHECK(v.satisfied);
  CHECK(verify_verdict(f, {X}, v));
  for (const auto& nw : v.nodes) CHECK(nw.q == nw.p);

  const Column ts{0, 1, 2};
  const auto drift = deterministic(4, ts);
  const auto vd = nupbr_check(f, {drift});
  CHECK_FALSE(vd.satisfied);
  REQUIRE(vd.arbitrage);
  CHECK(vd.arbitrage->t == 1);
  CHECK(vd.arbitrage->h == std::vector<Rational>{1});
  CHECK(verify_verdict(f, {drift}, vd));
  CHECK_THROWS_AS(nupbr_check(f, VectorProcess(5, X)), EnlabError);

  const auto wc = witness_conditions_check(f, {X}, v);
  CHECK(wc.assump3);
  const auto wd = witness_conditions_check(f, {drift}, vd);
  CHECK_FALSE(wd.assump3);
  CHECK(wd.infeasible_node);
}

TEST_CASE("STOP and TENT transforms and cross-checks") {
  const auto s = fixtures::binary_tree();
  const auto X = fixtures::walk(s);

  const EnlargementContext stop(s, analyze(s, fixtures::stop_tau()));
  const auto ts = transform(stop, {X});
  CHECK(ts.purge_ok);
  CHECK(ts.Ta_S[0] == X);
  for (std::size_t w = 0; w < 4; ++w) {
    CHECK(ts.scaled[0].increment(w, 1) == 0);
    CHECK(ts.scaled[0].increment(w, 2) == X.increment(w, 2));
  }
  CHECK(ts.m1 == Process(4, 2));
  const auto cs = theorem2_crosscheck(stop, {X});
  CHECK(cs.a);
  CHECK(cs.b);
  CHECK(cs.c);
  CHECK(cs.agree);
  CHECK(cs.witnesses_sound);
  const auto cors = corollary_check(stop, {X});
  CHECK(cors.jump_set_empty);
  CHECK(cors.nupbr_g);
  CHECK(levy_condition_check(stop, {X}).equivalent_by_atoms);
  const auto vstop = nupbr_check(s.filtration(), ts.scaled);
  CHECK(witness_conditions_check(s.filtration(), ts.scaled, vstop).assump3);

  const EnlargementContext tent(s, analyze(s, fixtures::tent_tau()));
  const auto tt = transform(tent, {X});
  CHECK(tt.purge_ok);
  const std::vector<std::vector<long>> paths{{0, 1, 2}, {0, 1, 1}, {0, -1, -1}, {0, -1, -2}};
  for (std::size_t w = 0; w < 4; ++w)
    for (std::size_t t = 0; t <= 2; ++t) CHECK(tt.Ta_S[0](w, t) == paths[w][t]);
  CHECK(tt.scaled[0].increment(0, 2) == R(1, 2));
  CHECK(tt.scaled[0].increment(1, 2) == 0);
  CHECK(tt.scaled[0].increment(2, 2) == 0);
  CHECK(tt.scaled[0].increment(3, 2) == R(-1, 2));
  CHECK(tt.m1_martingale);

  const auto ct = theorem2_crosscheck(tent, {X});
  CHECK_FALSE(ct.a);
  CHECK_FALSE(ct.b);
  CHECK_FALSE(ct.c);
  CHECK(ct.agree);
  CHECK(ct.witnesses_sound);
  CHECK(ct.jump_set_size == 2);

  const auto va = nupbr_check(tent.G(), after_tau_part(VectorProcess{X}, tent.analysis().tau));
  REQUIRE(va.arbitrage);
  CHECK(va.arbitrage->t == 2);  // atom {uu}: deterministic +1

  const auto vb = nupbr_check(s.filtration(), tt.scaled);
  const auto wc = witness_conditions_check(s.filtration(), tt.scaled, vb);
  CHECK_FALSE(wc.assump3);
  REQUIRE(wc.infeasible_node);
  CHECK(wc.infeasible_node->first == 2);
  CHECK(wc.infeasible_node->second == 0);

  const auto cort = corollary_check(tent, {X});
  CHECK_FALSE(cort.disjoint);
  CHECK_FALSE(cort.nupbr_g);
  CHECK(cort.implication_holds);

  const auto lt = levy_condition_check(tent, {X});
  CHECK_FALSE(lt.equivalent_by_atoms);
  CHECK_FALSE(lt.equivalent_by_fm);
  CHECK(lt.agree);

  // constant asset: NUPBR regardless of the jump set
  const auto cc = corollary_check(tent, {Process(4, 2, 3)});
  CHECK(cc.nupbr_g);
}

TEST_CASE("verdicts match the brute-force oracle on small trees") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t d = 1 + seed % 2;
    const auto model = generate_honest_model(seed, {3, 3, d, 64});
    const auto& f = model.space.filtration();
    const auto v = nupbr_check(f, model.S);
    CHECK(verify_verdict(f, model.S, v));

    bool oracle_ok = true;
    for (std::size_t t = 1; t <= f.horizon() && oracle_ok; ++t)
      for (std::size_t b = 0; b < f.at(t - 1).size() && oracle_ok; ++b) {
        std::vector<oracle::Vec> inc;
        const auto wp = f.at(t - 1).block(b).front();
        for (auto c : f.children(t, b)) {
          const auto w = f.at(t).block(c).front();
          oracle::Vec x;
          for (const auto& s : model.S) x.push_back(s(w, t) - s(wp, t - 1));
          inc.push_back(x);
        }
        const auto arb = oracle::find_arbitrage(inc);
        if (arb) oracle_ok = false;
        // grid weights certify no-arbitrage whenever the coarse grid happens to contain one
        if (inc.size() <= 3 && oracle::grid_weights(inc, 12)) CHECK_FALSE(arb);
      }
    CHECK(v.satisfied == oracle_ok);
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("predictable finite-variation processes after tau admit arbitrage") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto model = generate_honest_model(seed, {4, 3, 1, 64});
    const EnlargementContext ctx(model.space, analyze(model.space, model.tau));
    if (ctx.after_atoms().empty()) continue;
    CounterRng rng(seed);
    const auto& G = ctx.G();
    Process X(model.space.size(), model.space.horizon());
    bool nonconstant = false;
    for (std::size_t t = 1; t <= model.space.horizon(); ++t) {
      for (std::size_t w = 0; w < X.outcomes(); ++w) X(w, t) = X(w, t - 1);
      for (const auto& atom : ctx.after_atoms()) {
        if (atom.t != t) continue;
        const auto c = rng.uniform_int(-2, 2);
        nonconstant = nonconstant || c != 0;
        for (auto w : G.at(t - 1).block(atom.g_block)) X(w, t) += c;
      }
    }
    const auto v = nupbr_check(G, {X});
    CHECK(v.satisfied == !nonconstant);
    CHECK(verify_verdict(G, {X}, v));
    // stopping at the horizon changes nothing
    const RandomTimeMap T_all(X.outcomes(), static_cast<int>(model.space.horizon()));
    CHECK(nupbr_check(G, {stopped(X, T_all)}).satisfied == v.satisfied);
  }
}

TEST_CASE("martingale deflators satisfy the drift condition") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto model = generate_honest_model(seed, {4, 3, 2, 64});
    const auto& f = model.space.filtration();
    const auto v = nupbr_check(f, model.S);
    CHECK(verify_verdict(f, model.S, v));
    if (v.satisfied) CHECK(witness_conditions_check(f, model.S, v).assump3);
  }
}
