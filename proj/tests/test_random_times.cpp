#include <doctest.h>

#include <enlab/errors.hpp>
#include <enlab/random_times.hpp>

#include "fixtures.hpp"
#include "oracle.hpp"

using namespace enlab;
using fixtures::R;

namespace {

Column col(const Process& p, std::size_t t) { return p.column(t); }

}  // namespace

TEST_CASE("STOP: deterministic time") {
  const auto s = fixtures::binary_tree();
  const auto a = analyze(s, fixtures::stop_tau());
  CHECK(a.is_stopping_time);
  CHECK(a.honest);
  CHECK(a.class_h);
  for (std::size_t w = 0; w < 4; ++w) {
    CHECK(a.Z(w, 0) == 1);
    CHECK(a.Z(w, 1) == 0);
    CHECK(a.Z(w, 2) == 0);
    CHECK(a.Ztilde(w, 1) == 1);
    CHECK(a.D_oF(w, 0) == 0);
    CHECK(a.D_oF(w, 1) == 1);
    CHECK(a.D_oF(w, 2) == 1);
  }
  CHECK(is_martingale(s.filtration(), a.m));
  const auto G = enlarge(s, a.tau);
  for (std::size_t t = 0; t <= 2; ++t) CHECK(G.at(t) == s.filtration().at(t));
}

TEST_CASE("TENT: last zero of the walk") {
  const auto s = fixtures::binary_tree();
  const auto a = analyze(s, fixtures::tent_tau());
  CHECK(a.honest);
  CHECK(a.class_h);
  CHECK_FALSE(a.is_stopping_time);
  CHECK(col(a.Z, 0) == Column(4, R(1, 2)));
  CHECK(col(a.Z, 1) == Column(4, R(1, 2)));
  CHECK(col(a.Z, 2) == Column(4, 0));
  CHECK(col(a.Ztilde, 0) == Column(4, 1));
  CHECK(col(a.Ztilde, 1) == Column(4, R(1, 2)));
  CHECK(col(a.Ztilde, 2) == Column{0, 1, 1, 0});
  CHECK(col(a.D_oF, 0) == Column(4, R(1, 2)));
  CHECK(col(a.D_oF, 1) == Column(4, R(1, 2)));
  CHECK(col(a.D_oF, 2) == Column{R(1, 2), R(3, 2), R(3, 2), R(1, 2)});
  CHECK(col(a.m, 0) == Column(4, 1));
  CHECK(col(a.m, 1) == Column(4, 1));
  CHECK(col(a.m, 2) == Column{R(1, 2), R(3, 2), R(3, 2), R(1, 2)});
  CHECK(is_martingale(s.filtration(), a.m));
  // {Ztilde = 1 > Z_-} sits at t = 2 on ud and du
  REQUIRE(a.jump_set.size() == 2);
  for (const auto& jp : a.jump_set) CHECK(jp.t == 2);
  CHECK(a.in_jump_set(1, 2));
  CHECK(a.in_jump_set(2, 2));
  CHECK_FALSE(a.in_jump_set(0, 2));
  // closed endpoint fails at tau: (uu,0), (dd,0), (ud,2), (du,2)
  CHECK(a.closed_endpoint_gaps.size() == 4);

  const auto G = enlarge(s, a.tau);
  CHECK(G.at(0).size() == 2);
  CHECK(G.at(0).block(0) == std::vector<std::size_t>{0, 3});
  CHECK(G.at(1) == Partition::discrete(4));

  const auto& f = s.filtration();
  Column zt1(4);
  for (std::size_t w = 0; w < 4; ++w) zt1[w] = a.Ztilde(w, 2) == 1 ? 1 : 0;
  CHECK(cond_exp(f, 1, zt1) == Column(4, R(1, 2)));
  Process dm(4, 2);
  for (std::size_t w = 0; w < 4; ++w) dm(w, 2) = a.m.increment(w, 2);
  const auto pp = predictable_projection(f, dm);
  CHECK(col(pp, 1) == Column(4, 0));
  CHECK(col(pp, 2) == Column(4, 0));
  const auto mm = angle_bracket(f, a.m, a.m);
  CHECK(col(mm, 2) == Column(4, R(1, 4)));
}

TEST_CASE("non-honest time on a depth-3 tree") {
  const auto s = fixtures::binary_tree(3);
  // uuu and uud share a P_2 block but have distinct times below 2
  RandomTimeMap tau(8, 3);
  tau[0] = 0;
  tau[1] = 1;
  const auto a = analyze(s, tau);
  CHECK_FALSE(a.honest);
  CHECK_FALSE(a.class_h);
  CHECK_THROWS_AS(analyze(s, RandomTimeMap(8, 4)), EnlabError);
}

TEST_CASE("tau = 0 adds nothing to the filtration") {
  const auto s = fixtures::binary_tree();
  const auto G = enlarge(s, RandomTimeMap(4, 0));
  for (std::size_t t = 0; t <= 2; ++t) CHECK(G.at(t) == s.filtration().at(t));
}

TEST_CASE("generated models: analysis invariants against the enumeration oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto model = generate_honest_model(seed, {4, 3, 1, 64});
    const auto& f = model.space.filtration();
    const auto a = analyze(model.space, model.tau);
    REQUIRE(a.honest);
    REQUIRE(a.class_h);
    const oracle::Tree tree{model.space.outcome_names(), f.prob()};
    const auto n = model.space.size();
    const auto T = model.space.horizon();
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t t = 0; t <= T; ++t) {
        const auto pre = oracle::prefix(model.space.outcome(w), t);
        const int ti = static_cast<int>(t);
        CHECK(a.Z(w, t) == oracle::cexp(tree, pre, [&](auto i) { return Rational(model.tau[i] > ti); }));
        CHECK(a.Ztilde(w, t) == oracle::cexp(tree, pre, [&](auto i) { return Rational(model.tau[i] >= ti); }));
        CHECK(a.Z(w, t) >= 0);
        CHECK(a.Z(w, t) <= 1);
        CHECK(a.Ztilde(w, t) <= 1);
        if (t >= 1) {
          CHECK(a.Ztilde(w, t) == a.Z(w, t - 1) + a.m.increment(w, t));
          // strictly after tau Z and Ztilde agree
          if (static_cast<int>(t) > model.tau[w]) CHECK(a.Z(w, t) == a.Ztilde(w, t));
        }
      }
    CHECK(is_martingale(f, a.m));
    for (std::size_t w = 0; w < n; ++w) CHECK(a.Z(w, T) == 0);
    for (const auto& [w, t] : a.closed_endpoint_gaps) CHECK(static_cast<int>(t) == model.tau[w]);
    // supermartingale
    for (std::size_t t = 1; t <= T; ++t) {
      const auto e = cond_exp(f, t - 1, a.Z.column(t));
      for (std::size_t w = 0; w < n; ++w) CHECK(e[w] <= a.Z(w, t - 1));
    }
    // 1 - Z_- bounded below by the smallest atom where positive
    Rational pmin = 1;
    for (const auto& p : f.prob()) pmin = std::min(pmin, p);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t t = 0; t < T; ++t)
        if (a.Z(w, t) < 1) CHECK(1 - a.Z(w, t) >= pmin);

    const auto G = enlarge(model.space, model.tau);
    for (std::size_t t = 0; t <= T; ++t) {
      CHECK(G.at(t).refines(f.at(t)));
      if (t > 0) CHECK(G.at(t).refines(G.at(t - 1)));
      // honest: after tau a Q_t block is the whole of B cap {tau <= t}
      for (const auto& blk : G.at(t).blocks()) {
        if (model.tau[blk.front()] > static_cast<int>(t)) continue;
        const auto& fb = f.at(t).block(f.at(t).block_of(blk.front()));
        std::size_t count = 0;
        for (auto w : fb) count += model.tau[w] <= static_cast<int>(t);
        CHECK(count == blk.size());
      }
    }
  }
}

TEST_CASE("stopping times are honest class-H with Z_tau = 0") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto model = generate_honest_model(seed, {4, 3, 1, 64});
    // first visit of X to {X >= 1}, capped at T
    const auto T = model.space.horizon();
    RandomTimeMap tau(model.space.size(), static_cast<int>(T));
    for (std::size_t w = 0; w < model.space.size(); ++w)
      for (std::size_t t = 0; t <= T; ++t)
        if (model.X(w, t) >= 1) {
          tau[w] = static_cast<int>(t);
          break;
        }
    const auto a = analyze(model.space, tau);
    CHECK(a.is_stopping_time);
    CHECK(a.honest);
    CHECK(a.class_h);
    for (std::size_t w = 0; w < model.space.size(); ++w) CHECK(a.Z(w, static_cast<std::size_t>(tau[w])) == 0);
  }
}

TEST_CASE("generator is deterministic and validates its bounds") {
  const auto a = generate_honest_model(42, {5, 3, 1, 64});
  const auto b = generate_honest_model(42, {5, 3, 1, 64});
  CHECK(a.tau == b.tau);
  CHECK(a.visit_set == b.visit_set);
  CHECK_THROWS_AS(generate_honest_model(1, {9, 3, 1, 64}), EnlabError);
  CHECK_THROWS_AS(generate_honest_model(1, {3, 5, 1, 64}), EnlabError);
}
