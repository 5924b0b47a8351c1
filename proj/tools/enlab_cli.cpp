// enlab: exact identity suites, NUPBR verdicts and Monte Carlo labs.
// Exit codes: 0 all checks passed, 1 a hard check failed, 2 usage or input error.

#include <enlab/brownian.hpp>
#include <enlab/errors.hpp>
#include <enlab/model_io.hpp>
#include <enlab/nupbr.hpp>
#include <enlab/poisson_lab.hpp>
#include <enlab/ruin.hpp>
#include <enlab/suite.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace enlab;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "enlab 1.0.0";

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoull(s);
      return {v, v};
    }
    const auto a = std::stoull(s.substr(0, dots)), b = std::stoull(s.substr(dots + 2));
    if (b < a) throw Usage("empty seed range " + s);
    return {a, b};
  } catch (const std::logic_error&) {
    throw Usage("seed range must look like 1..500, got " + s);
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw Usage("not a number: " + item);
    }
  }
  if (out.empty()) throw Usage("empty list");
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Usage("cannot write " + path);
  out << text;
}

void write_report(const std::string& path, json report, int status) {
  report["tool_version"] = kVersion;
  report["exit_status"] = status;
  if (!path.empty()) write_text(path, report.dump(2) + "\n");
}

Execution exec_of(bool serial) { return serial ? Execution::serial : Execution::parallel; }

GeneratedModel as_generated(const LoadedModel& m) {
  GeneratedModel g{m.seed.value_or(0), m.space, Process(m.space.size(), m.space.horizon()), {}, m.tau.values, m.S};
  if (const auto it = m.processes.find("X"); it != m.processes.end())
    g.X = it->second;
  else if (!m.S.empty())
    g.X = m.S[0];
  if (m.tau.last_visit) g.visit_set = m.tau.last_visit->second;
  if (g.S.empty()) g.S = {g.X};
  return g;
}

json names_of(const FiniteFilteredSpace& s, const std::vector<std::size_t>& block) {
  json j = json::array();
  for (auto w : block) j.push_back(s.outcome(w));
  return j;
}

json rationals(const std::vector<Rational>& v) {
  json j = json::array();
  for (const auto& r : v) j.push_back(format_rational(r));
  return j;
}

// ---------------------------------------------------------------- gen

struct GenOpts {
  std::uint64_t seed = 0;
  std::size_t depth = 5, branching = 3, dimension = 1;
  std::string out;
};

int cmd_gen(const GenOpts& o) {
  GeneratorConfig cfg{o.depth, o.branching, o.dimension, 64};
  const auto text = dump_model(to_loaded(generate_honest_model(o.seed, cfg)));
  if (o.out.empty())
    std::cout << text;
  else
    write_text(o.out, text);
  if (!o.out.empty()) std::printf("gen: seed %" PRIu64 " written to %s\n", o.seed, o.out.c_str());
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  std::string range, model, out;
  std::size_t depth = 5, branching = 3, dimension = 1;
  bool serial = false;
};

json model_row(const ModelReport& r) {
  return {{"seed", r.seed},
          {"ok", r.ok()},
          {"outcomes", r.outcomes},
          {"basis_size", r.basis_size},
          {"fv_tested", r.fv_tested},
          {"honest", r.honest},
          {"class_h", r.class_h},
          {"m_martingale", r.m_martingale},
          {"mhat_violations", r.mhat},
          {"gcomp_violations", r.gcomp},
          {"gcomp_u_violations", r.gcomp_u},
          {"projection_violations", r.proj},
          {"nu_g_violations", r.nu_g},
          {"psi_violations", r.psi},
          {"deflator_positive", r.positivity},
          {"deflator_zero_before_tau", r.pre_tau_zero},
          {"deflator_other", r.deflator_other},
          {"closed_endpoint_gaps", r.closed_endpoint_gaps},
          {"hypothesis_true", r.hypothesis_true},
          {"hypothesis_true_conclusion_false", r.hypothesis_true_conclusion_false},
          {"error", r.error}};
}

int cmd_verify(const VerifyOpts& o) {
  if (o.range.empty() == o.model.empty()) throw Usage("verify needs exactly one of --models-seed-range or --model");
  GeneratorConfig cfg{o.depth, o.branching, o.dimension, 64};
  std::vector<ModelReport> reps;
  json config = {{"command", "verify"}};
  if (!o.model.empty()) {
    reps.push_back(verify_model(as_generated(load_model(o.model))));
    config["model"] = o.model;
  } else {
    const auto [a, b] = parse_range(o.range);
    reps = run_verify_suite(a, b, cfg, exec_of(o.serial));
    config["models_seed_range"] = o.range;
    config["depth"] = o.depth;
    config["branching"] = o.branching;
    config["dimension"] = o.dimension;
  }
  json rows = json::array();
  std::size_t failing = 0, violations = 0, hyp = 0, hyp_bad = 0, gaps = 0;
  for (const auto& r : reps) {
    rows.push_back(model_row(r));
    if (!r.ok()) ++failing;
    violations += r.mhat + r.gcomp + r.gcomp_u + r.proj + r.nu_g + r.psi;
    hyp += r.hypothesis_true;
    hyp_bad += r.hypothesis_true_conclusion_false;
    gaps += r.closed_endpoint_gaps;
  }
  const int status = failing == 0 ? 0 : 1;
  write_report(o.out,
               {{"config", config},
                {"rows", rows},
                {"summary",
                 {{"models", reps.size()},
                  {"failing_models", failing},
                  {"identity_violations", violations},
                  {"hypothesis_true", hyp},
                  {"hypothesis_true_conclusion_false", hyp_bad},
                  {"closed_endpoint_gaps", gaps}}}},
               status);
  std::printf("verify: %zu models, %zu failing, %zu identity violations%s\n", reps.size(), failing, violations,
              status ? " (see report rows with ok=false)" : "");
  return status;
}

// ---------------------------------------------------------------- nupbr

struct NupbrOpts {
  std::string model, out, filtration = "F";
  bool after_tau = false;
};

int cmd_nupbr(const NupbrOpts& o) {
  const auto m = load_model(o.model);
  if (m.S.empty()) throw Usage("model has no \"S\"");
  VectorProcess X = m.S;
  if (o.after_tau) X = after_tau_part(X, m.tau.values);
  std::optional<EnlargementContext> ctx;
  if (o.filtration == "G") ctx.emplace(m.space, analyze(m.space, m.tau.values));
  const Filtration& f = ctx ? ctx->G() : m.space.filtration();
  const auto v = nupbr_check(f, X);
  const bool sound = verify_verdict(f, X, v);

  json nodes = json::array();
  for (const auto& n : v.nodes) {
    json kids = json::array();
    for (auto c : n.children) kids.push_back(names_of(m.space, f.at(n.t).block(c)));
    nodes.push_back({{"t", n.t},
                     {"block", names_of(m.space, f.at(n.t - 1).block(n.block))},
                     {"children", kids},
                     {"p", rationals(n.p)},
                     {"q", rationals(n.q)}});
  }
  json report = {{"config", {{"command", "nupbr"}, {"model", o.model}, {"filtration", o.filtration}, {"after_tau", o.after_tau}}},
                 {"satisfied", v.satisfied},
                 {"witness_verified", sound},
                 {"deflator_nodes", nodes}};
  if (v.arbitrage)
    report["arbitrage"] = {{"t", v.arbitrage->t},
                           {"block", names_of(m.space, f.at(v.arbitrage->t - 1).block(v.arbitrage->block))},
                           {"h", rationals(v.arbitrage->h)}};
  const int status = sound ? 0 : 1;
  write_report(o.out, report, status);
  std::printf("nupbr(%s): %s, witness %s\n", o.filtration.c_str(), v.satisfied ? "satisfied" : "arbitrage",
              sound ? "verified" : "FAILED re-verification");
  return status;
}

// ---------------------------------------------------------------- crosscheck

struct CrossOpts {
  std::string range, model, csv, archive, out;
  std::size_t depth = 5, branching = 3, dimension = 1;
  bool serial = false;
};

int cmd_crosscheck(const CrossOpts& o) {
  if (o.range.empty() == o.model.empty()) throw Usage("crosscheck needs exactly one of --models-seed-range or --model");
  GeneratorConfig cfg{o.depth, o.branching, o.dimension, 64};
  std::vector<CrosscheckRow> rows;
  if (!o.model.empty()) {
    const auto m = load_model(o.model);
    const auto g = as_generated(m);
    const EnlargementContext ctx(g.space, analyze(g.space, g.tau));
    const auto r = theorem2_crosscheck(ctx, g.S);
    rows.push_back({g.seed, r.a, r.b, r.c, r.agree, r.jump_set_size, r.witnesses_sound, ""});
  } else {
    const auto [a, b] = parse_range(o.range);
    rows = run_crosscheck(a, b, cfg, exec_of(o.serial));
  }

  std::string csv = "seed,a,b,c,agree,jump_set_size\n";
  std::size_t agree = 0, unsound = 0, errors = 0, archived = 0;
  json jrows = json::array();
  for (const auto& r : rows) {
    csv += std::to_string(r.seed) + "," + (r.a ? "1" : "0") + "," + (r.b ? "1" : "0") + "," + (r.c ? "1" : "0") + "," +
           (r.agree ? "1" : "0") + "," + std::to_string(r.jump_set_size) + "\n";
    jrows.push_back({{"seed", r.seed}, {"a", r.a}, {"b", r.b}, {"c", r.c}, {"agree", r.agree},
                     {"jump_set_size", r.jump_set_size}, {"witnesses_sound", r.witnesses_sound}, {"error", r.error}});
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    if (!r.witnesses_sound) ++unsound;
    if (r.agree) {
      ++agree;
    } else if (o.model.empty()) {
      // disagreements become replayable fixtures
      const std::string dir = o.archive.empty() ? "crosscheck_disagreements" : o.archive;
      std::filesystem::create_directories(dir);
      save_model(dir + "/seed_" + std::to_string(r.seed) + ".json",
                 to_loaded(generate_honest_model(r.seed, cfg)));
      ++archived;
    }
  }
  if (!o.csv.empty()) write_text(o.csv, csv);
  const int status = unsound == 0 && errors == 0 ? 0 : 1;
  json config = {{"command", "crosscheck"}, {"depth", o.depth}, {"branching", o.branching}, {"dimension", o.dimension}};
  if (!o.range.empty()) config["models_seed_range"] = o.range;
  if (!o.model.empty()) config["model"] = o.model;
  write_report(o.out,
               {{"config", config},
                {"rows", jrows},
                {"summary",
                 {{"models", rows.size()}, {"agree", agree}, {"disagree", rows.size() - agree - errors},
                  {"archived", archived}, {"unsound_witnesses", unsound}, {"errors", errors}}}},
               status);
  std::printf("crosscheck: %zu models, %zu agree, %zu disagree (%zu archived), %zu unsound, %zu errors\n", rows.size(),
              agree, rows.size() - agree - errors, archived, unsound, errors);
  if (!o.model.empty() && rows.size() == 1) {
    const auto& r = rows[0];
    std::printf("  a=%d b=%d c=%d agree=%d jump_set_size=%zu\n", r.a, r.b, r.c, r.agree, r.jump_set_size);
  }
  return status;
}

// ---------------------------------------------------------------- Poisson labs

struct PoissonOpts {
  double mu = 2, a = 1;
  std::size_t paths = 100000;
  std::uint64_t seed = 0;
  std::string csv, out, checkpoints = "1,2,5";
  bool serial = false;
};

int cmd_example1(const PoissonOpts& o) {
  const RuinTable psi(o.mu);
  const auto model = PoissonModel::make(psi, o.a);
  const auto rep = example1_run(model, o.paths, o.seed, exec_of(o.serial));
  if (!o.csv.empty()) {
    std::string csv = "path_id,terminal_wealth,min_wealth\n";
    for (const auto& r : rep.rows)
      if (!r.censored) csv += std::to_string(r.path_id) + "," + num(r.terminal_wealth) + "," + num(r.min_wealth) + "\n";
    write_text(o.csv, csv);
  }
  bool exact = true;
  json scaling = json::array();
  for (const auto& s : rep.scaling) {
    exact = exact && s.exact;
    scaling.push_back({{"lambda", s.lambda}, {"mean_terminal_wealth", s.mean_terminal_wealth}, {"exact", s.exact}});
  }
  const int status = rep.ok() && exact ? 0 : 1;
  write_report(o.out,
               {{"config", {{"command", "example1"}, {"mu", o.mu}, {"a", o.a}, {"paths", o.paths}, {"seed", o.seed},
                            {"u_star", model.u_star}, {"T_max", model.T_max}}},
                {"summary",
                 {{"uncensored", rep.uncensored}, {"censored", rep.paths - rep.uncensored},
                  {"mean_terminal_wealth", rep.mean_terminal_wealth}, {"se", rep.se}, {"lower_99", rep.lower_99},
                  {"positive_fraction", rep.positive_fraction}, {"all_nondecreasing", rep.all_nondecreasing},
                  {"max_drawdown", rep.max_drawdown}}},
                {"scaling", scaling}},
               status);
  std::printf("example1: %zu/%zu uncensored, mean wealth %.6g (99%% lower %.6g), nondecreasing %s, scaling %s\n",
              rep.uncensored, rep.paths, rep.mean_terminal_wealth, rep.lower_99,
              rep.all_nondecreasing ? "all" : "NOT all", exact ? "exact" : "INEXACT");
  return status;
}

int cmd_example2(const PoissonOpts& o) {
  const RuinTable psi(o.mu);
  const auto model = PoissonModel::make(psi, o.a);
  Example2Config cfg;
  cfg.checkpoints = parse_list(o.checkpoints);
  for (double c : cfg.checkpoints)
    if (!(c >= 0 && c <= model.T_max)) throw Usage("checkpoints must lie in [0, T_max]");
  const auto rep = example2_run(model, psi, o.paths, o.seed, cfg, exec_of(o.serial));
  std::string csv = "checkpoint,quantity,mean,se,flag\n";
  json rows = json::array();
  for (const auto& r : rep.rows) {
    csv += num(r.checkpoint) + "," + r.quantity + "," + num(r.mean) + "," + num(r.se) + "," + (r.flag ? "1" : "0") + "\n";
    rows.push_back({{"checkpoint", r.checkpoint}, {"quantity", r.quantity}, {"mean", r.mean}, {"se", r.se},
                    {"target", r.target}, {"flag", r.flag}});
  }
  if (!o.csv.empty()) write_text(o.csv, csv);
  const int status = rep.ok() ? 0 : 1;
  write_report(o.out,
               {{"config", {{"command", "example2"}, {"mu", o.mu}, {"a", o.a}, {"paths", o.paths}, {"seed", o.seed},
                            {"checkpoints", cfg.checkpoints}}},
                {"rows", rows},
                {"summary", {{"uncensored", rep.uncensored}, {"censored", rep.paths - rep.uncensored},
                             {"min_YG", rep.min_YG}, {"positive", rep.positive}, {"martingale", rep.martingale}}}},
               status);
  std::printf("example2: %zu/%zu uncensored, min Y^G %.6g, martingale flags %s\n", rep.uncensored, rep.paths,
              rep.min_YG, rep.martingale ? "all true" : "NOT all true");
  return status;
}

struct PsiOpts {
  double mu = 2;
  std::string u = "0";
  std::size_t paths = 1000000;
  std::uint64_t seed = 1;
  std::string csv, out;
  bool serial = false;
};

int cmd_psi(const PsiOpts& o) {
  const auto us = parse_list(o.u);
  const RuinOracle pk(o.mu);
  const RuinTable tab(o.mu);
  const auto mc = ruin_mc(tab, us, o.paths, o.seed, exec_of(o.serial));
  std::string csv = "u,psi_pk,psi_mc,se\n";
  json rows = json::array();
  bool agree = true;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto v = pk.evaluate(us[i]);
    const double se = std::sqrt(mc[i].se * mc[i].se + v.tail_bound * v.tail_bound);
    const bool ok = std::abs(v.value - mc[i].p) <= 3 * se;
    agree = agree && ok;
    csv += num(us[i]) + "," + num(v.value) + "," + num(mc[i].p) + "," + num(mc[i].se) + "\n";
    rows.push_back({{"u", us[i]}, {"psi_pk", v.value}, {"tail_bound", v.tail_bound}, {"psi_mc", mc[i].p},
                    {"se", mc[i].se}, {"agree", ok}});
    std::printf("psi(%g) = %.12g  (mc %.6g +- %.2g)\n", us[i], v.value, mc[i].p, mc[i].se);
  }
  if (!o.csv.empty()) write_text(o.csv, csv);
  const int status = agree ? 0 : 1;
  write_report(o.out,
               {{"config", {{"command", "psi"}, {"mu", o.mu}, {"paths", o.paths}, {"seed", o.seed}}},
                {"rows", rows},
                {"summary", {{"agree", agree}}}},
               status);
  return status;
}

// ---------------------------------------------------------------- brownian

struct BrownOpts {
  BrownianConfig cfg;
  bool seed_given = false;
  std::string out;
  bool serial = false;
};

int cmd_brownian(const BrownOpts& o) {
  o.cfg.validate();
  const auto rep = brownian_demo(o.cfg, exec_of(o.serial));
  json z = json::array();
  for (const auto& s : rep.z_samples) z.push_back({{"z", s.z}, {"se", s.se}});
  const int status = rep.ok() ? 0 : 1;
  write_report(o.out,
               {{"config", {{"command", "brownian"}, {"epsilon", o.cfg.epsilon}, {"dt", o.cfg.dt},
                            {"paths", o.cfg.paths}, {"seed", o.cfg.seed}, {"T_cap", o.cfg.T_cap},
                            {"nested_paths", o.cfg.nested_paths}, {"inner_paths", o.cfg.inner_paths}}},
                {"summary",
                 {{"uncensored", rep.uncensored}, {"censored", rep.paths - rep.uncensored},
                  {"honesty_failures", rep.honesty_failures}, {"mean_tau", rep.mean_tau}, {"se_tau", rep.se_tau},
                  {"tau_zero_fraction", rep.tau_zero_fraction}, {"mean_excursions", rep.mean_excursions},
                  {"nested", rep.nested}, {"mean_z_tau", rep.mean_z_tau}, {"z_tau_theory", rep.z_tau_theory},
                  {"fraction_near_one", rep.fraction_near_one}}},
                {"z_tau_samples", z}},
               status);
  std::printf("brownian: %zu/%zu uncensored, honesty failures %zu, mean tau %.4g, mean Z_tau %.4g (1 - eps = %.4g)\n",
              rep.uncensored, rep.paths, rep.honesty_failures, rep.mean_tau, rep.mean_z_tau, rep.z_tau_theory);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact enlargement-of-filtration checks and Monte Carlo labs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenOpts gen;
  auto* g = app.add_subcommand("gen", "generate an honest class-H model");
  g->add_option("--seed", gen.seed, "model seed")->required();
  g->add_option("--depth", gen.depth)->capture_default_str();
  g->add_option("--branching", gen.branching)->capture_default_str();
  g->add_option("--dimension", gen.dimension)->capture_default_str();
  g->add_option("--out", gen.out, "model file (default stdout)");

  VerifyOpts ver;
  auto* v = app.add_subcommand("verify", "exact identity suite");
  v->add_option("--models-seed-range", ver.range, "e.g. 1..500");
  v->add_option("--model", ver.model, "model file");
  v->add_option("--depth", ver.depth)->capture_default_str();
  v->add_option("--branching", ver.branching)->capture_default_str();
  v->add_option("--dimension", ver.dimension)->capture_default_str();
  v->add_option("--out", ver.out, "JSON report");
  v->add_flag("--serial", ver.serial, "disable parallel fan-out");

  NupbrOpts nup;
  auto* n = app.add_subcommand("nupbr", "NUPBR verdict with witness");
  n->add_option("--model", nup.model)->required();
  n->add_option("--filtration", nup.filtration)->check(CLI::IsMember({"F", "G"}))->capture_default_str();
  n->add_flag("--after-tau", nup.after_tau, "use S - S^tau");
  n->add_option("--out", nup.out, "JSON verdict");

  CrossOpts cro;
  auto* c = app.add_subcommand("crosscheck", "three-way NUPBR cross-check");
  c->add_option("--models-seed-range", cro.range);
  c->add_option("--model", cro.model);
  c->add_option("--depth", cro.depth)->capture_default_str();
  c->add_option("--branching", cro.branching)->capture_default_str();
  c->add_option("--dimension", cro.dimension)->capture_default_str();
  c->add_option("--csv", cro.csv);
  c->add_option("--archive", cro.archive, "directory for disagreeing models");
  c->add_option("--out", cro.out);
  c->add_flag("--serial", cro.serial);

  PoissonOpts ex1, ex2;
  auto* e1 = app.add_subcommand("example1", "arbitrage after the last exit time");
  auto* e2 = app.add_subcommand("example2", "explicit deflator after the last exit time");
  for (auto [sub, o] : {std::pair{e1, &ex1}, std::pair{e2, &ex2}}) {
    sub->add_option("--mu", o->mu)->capture_default_str();
    sub->add_option("--a", o->a)->capture_default_str();
    sub->add_option("--paths", o->paths)->capture_default_str();
    sub->add_option("--seed", o->seed)->required();
    sub->add_option("--csv", o->csv);
    sub->add_option("--out", o->out);
    sub->add_flag("--serial", o->serial);
  }
  e2->add_option("--checkpoints", ex2.checkpoints, "comma separated")->capture_default_str();

  PsiOpts ps;
  auto* p = app.add_subcommand("psi", "ruin probability with a Monte Carlo cross-check");
  p->add_option("--mu", ps.mu)->required();
  p->add_option("--u", ps.u, "comma separated levels")->capture_default_str();
  p->add_option("--paths", ps.paths)->capture_default_str();
  p->add_option("--seed", ps.seed, "seed of the cross-check")->capture_default_str();
  p->add_option("--csv", ps.csv);
  p->add_option("--out", ps.out);
  p->add_flag("--serial", ps.serial);

  BrownOpts br;
  auto* b = app.add_subcommand("brownian", "honest time from Brownian excursions");
  b->add_option("--epsilon", br.cfg.epsilon)->capture_default_str();
  b->add_option("--dt", br.cfg.dt)->capture_default_str();
  b->add_option("--paths", br.cfg.paths)->capture_default_str();
  b->add_option("--seed", br.cfg.seed)->required();
  b->add_option("--t-cap", br.cfg.T_cap)->capture_default_str();
  b->add_option("--nested", br.cfg.nested_paths)->capture_default_str();
  b->add_option("--inner", br.cfg.inner_paths)->capture_default_str();
  b->add_option("--out", br.out);
  b->add_flag("--serial", br.serial);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (v->parsed()) return cmd_verify(ver);
    if (n->parsed()) return cmd_nupbr(nup);
    if (c->parsed()) return cmd_crosscheck(cro);
    if (e1->parsed()) return cmd_example1(ex1);
    if (e2->parsed()) return cmd_example2(ex2);
    if (p->parsed()) return cmd_psi(ps);
    if (b->parsed()) return cmd_brownian(br);
  } catch (const Usage& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const EnlabError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
