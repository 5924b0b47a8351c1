#include <doctest.h>

#include <enlab/errors.hpp>
#include <enlab/model_io.hpp>

#include "fixtures.hpp"

#include <string>

using namespace enlab;
using fixtures::R;

namespace {

const std::string kDir = ENLAB_SOURCE_DIR;

std::string tent_text() {
  return R"({
  "outcomes": ["uu", "ud", "du", "dd"],
  "prob": ["1/4", "1/4", "1/4", "1/4"],
  "partitions": [[["uu", "ud", "du", "dd"]], [["uu", "ud"], ["du", "dd"]], [["uu"], ["ud"], ["du"], ["dd"]]],
  "S": {"uu": ["0", "1", "2"], "ud": ["0", "1", "0"], "du": ["0", "-1", "0"], "dd": ["0", "-1", "-2"]},
  "tau": {"uu": 0, "ud": 2, "du": 2, "dd": 0}
})";
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const EnlabError& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::InvalidModel;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("shipped fixtures load and match the code fixtures") {
  const auto tent = load_model(kDir + "/fixtures/tent.json");
  CHECK(tent.tau.values == fixtures::tent_tau());
  CHECK(tent.S.size() == 1);
  const auto s = fixtures::binary_tree();
  CHECK(tent.S[0] == fixtures::walk(s));
  CHECK(tent.processes.at("X") == fixtures::walk(s));
  const auto stop = load_model(kDir + "/fixtures/stop.json");
  CHECK(stop.tau.values == fixtures::stop_tau());
  CHECK_FALSE(stop.tau.last_visit);
}

TEST_CASE("model files round trip") {
  const auto m = parse_model(tent_text());
  CHECK(m.tau.values == fixtures::tent_tau());
  const auto again = parse_model(dump_model(m));
  CHECK(again.S[0] == m.S[0]);
  CHECK(again.tau.values == m.tau.values);
  CHECK(again.space.outcome_names() == m.space.outcome_names());
  CHECK(dump_model(again) == dump_model(m));

  const auto keyed = parse_model(
      replace(tent_text(), R"("prob": ["1/4", "1/4", "1/4", "1/4"])", R"("prob": {"dd": "1/8", "du": "1/8", "ud": "1/4", "uu": "1/2"})"));
  CHECK(keyed.space.prob(keyed.space.index_of("uu")) == R(1, 2));
  CHECK(keyed.space.prob(keyed.space.index_of("dd")) == R(1, 8));

  GeneratorConfig cfg;
  cfg.depth = 4;
  cfg.dimension = 2;
  const auto g = generate_honest_model(17, cfg);
  const auto loaded = parse_model(dump_model(to_loaded(g)));
  REQUIRE(loaded.S.size() == 2);
  CHECK(loaded.S[0] == g.S[0]);
  CHECK(loaded.S[1] == g.S[1]);
  CHECK(loaded.tau.values == g.tau);
  CHECK(loaded.seed == std::optional<std::uint64_t>(17));
  for (std::size_t w = 0; w < g.space.size(); ++w) CHECK(loaded.space.prob(w) == g.space.prob(w));
}

TEST_CASE("invariant and schema errors") {
  const auto t = tent_text();
  CHECK(kind_of(replace(t, R"("1/4", "1/4", "1/4", "1/4")", R"("1/4", "1/4", "1/4", "3/8")")) ==
        ErrorKind::ProbabilityNotOne);
  CHECK(kind_of(replace(t, R"([["uu"], ["ud"], ["du"], ["dd"]])", R"([["uu", "du"], ["ud"], ["dd"]])")) ==
        ErrorKind::NonRefiningFiltration);
  CHECK(kind_of(replace(t, R"("1/4", "1/4", "1/4", "1/4")", R"("1/4", "1/4", "1/2", "0")")) ==
        ErrorKind::ZeroProbabilityOutcome);
  CHECK(kind_of(replace(t, R"("1/4", "1/4")", R"("0.25", "1/4")")) == ErrorKind::SchemaError);
  CHECK(kind_of(replace(t, R"("dd": 0)", R"("dd": 5)")) == ErrorKind::SchemaError);
  CHECK(kind_of(replace(t, R"("dd": 0)", R"("zz": 0)")) == ErrorKind::SchemaError);
  CHECK(kind_of(replace(t, R"("dd": ["0", "-1", "-2"])", R"("dd": ["0", "-1"])")) == ErrorKind::SchemaError);
  CHECK(kind_of(replace(t, "\"tau\"", "\"tou\"")) == ErrorKind::SchemaError);
  CHECK(kind_of("{\"outcomes\": [") == ErrorKind::SchemaError);
  CHECK(kind_of(replace(t, R"(["1/4", "1/4", "1/4", "1/4"])", R"({"uu": "1/2", "ud": "1/2", "du": "0"})")) ==
        ErrorKind::SchemaError);

  try {
    parse_model(replace(t, R"("1/4", "1/4")", R"("1/4", "x")"));
  } catch (const EnlabError& e) {
    CHECK(std::string(e.what()).find("/prob/1") != std::string::npos);
  }
  try {
    parse_model("{\n\"outcomes\": [\n,]}");
  } catch (const EnlabError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_model(kDir + "/fixtures/missing.json"), EnlabError);
}
