#include <enlab/errors.hpp>
#include <enlab/model_io.hpp>

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace enlab {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& field, const std::string& msg) {
  throw EnlabError(ErrorKind::SchemaError, field + ": " + msg);
}

const json& member(const json& j, const std::string& key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) schema(field, "missing \"" + key + "\"");
  return j.at(key);
}

Rational rational_at(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) schema(field, "expected a rational written as \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    schema(field, e.what());
  }
}

std::string name_at(const json& j, const std::string& field) {
  if (!j.is_string()) schema(field, "expected an outcome name");
  return j.get<std::string>();
}

// {"w": [v_0, ..., v_T]} for scalars, {"w": [[...d...], ...]} for vectors
VectorProcess process_at(const json& j, const FiniteFilteredSpace& space, const std::string& field) {
  if (!j.is_object()) schema(field, "expected a map from outcome to values");
  const auto n = space.size(), T = space.horizon();
  std::optional<std::size_t> dim;
  bool vec_form = false;
  VectorProcess out;
  std::vector<bool> seen(n, false);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string f = field + "/" + it.key();
    std::size_t w;
    try {
      w = space.index_of(it.key());
    } catch (const std::exception&) {
      schema(f, "unknown outcome");
    }
    seen[w] = true;
    const auto& vals = it.value();
    if (!vals.is_array() || vals.size() != T + 1) schema(f, "expected " + std::to_string(T + 1) + " values");
    const bool vec = vals[0].is_array();
    const std::size_t d = vec ? vals[0].size() : 1;
    if (!dim) {
      if (d == 0) schema(f, "empty vector");
      dim = d;
      vec_form = vec;
      out.assign(d, Process(n, T));
    } else if (*dim != d || vec_form != vec) {
      schema(f, "dimension differs between outcomes");
    }
    for (std::size_t t = 0; t <= T; ++t) {
      const std::string ft = f + "/" + std::to_string(t);
      if (vec) {
        if (!vals[t].is_array() || vals[t].size() != d) schema(ft, "expected a vector of length " + std::to_string(d));
        for (std::size_t i = 0; i < d; ++i) out[i](w, t) = rational_at(vals[t][i], ft + "/" + std::to_string(i));
      } else {
        out[0](w, t) = rational_at(vals[t], ft);
      }
    }
  }
  for (std::size_t w = 0; w < n; ++w)
    if (!seen[w]) schema(field, "no values for outcome \"" + space.outcome(w) + "\"");
  return out;
}

json process_json(const VectorProcess& X, const FiniteFilteredSpace& space) {
  json j = json::object();
  for (std::size_t w = 0; w < space.size(); ++w) {
    json vals = json::array();
    for (std::size_t t = 0; t <= space.horizon(); ++t) {
      if (X.size() == 1) {
        vals.push_back(format_rational(X[0](w, t)));
      } else {
        json v = json::array();
        for (const auto& c : X) v.push_back(format_rational(c(w, t)));
        vals.push_back(v);
      }
    }
    j[space.outcome(w)] = vals;
  }
  return j;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

LoadedModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw EnlabError(ErrorKind::SchemaError,
                     "line " + std::to_string(line_of(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " + e.what());
  }
  if (!j.is_object()) schema("/", "expected an object");

  SpaceDescription desc;
  const auto& outs = member(j, "outcomes", "/");
  if (!outs.is_array() || outs.empty()) schema("/outcomes", "expected a non-empty array");
  for (std::size_t i = 0; i < outs.size(); ++i) desc.outcomes.push_back(name_at(outs[i], "/outcomes/" + std::to_string(i)));
  const auto& prob = member(j, "prob", "/");
  if (prob.is_object()) {
    // map form keyed by outcome name
    if (prob.size() != outs.size()) schema("/prob", "expected one probability per outcome");
    for (const auto& name : desc.outcomes) {
      if (!prob.contains(name)) schema("/prob/" + name, "missing probability");
      desc.prob.push_back(rational_at(prob[name], "/prob/" + name));
    }
  } else {
    if (!prob.is_array() || prob.size() != outs.size()) schema("/prob", "expected one probability per outcome");
    for (std::size_t i = 0; i < prob.size(); ++i) desc.prob.push_back(rational_at(prob[i], "/prob/" + std::to_string(i)));
  }
  const auto& parts = member(j, "partitions", "/");
  if (!parts.is_array() || parts.empty()) schema("/partitions", "expected one partition per time");
  for (std::size_t t = 0; t < parts.size(); ++t) {
    const std::string ft = "/partitions/" + std::to_string(t);
    if (!parts[t].is_array()) schema(ft, "expected an array of blocks");
    auto& blocks = desc.partitions.emplace_back();
    for (std::size_t b = 0; b < parts[t].size(); ++b) {
      const std::string fb = ft + "/" + std::to_string(b);
      if (!parts[t][b].is_array()) schema(fb, "expected an array of outcome names");
      auto& blk = blocks.emplace_back();
      for (std::size_t k = 0; k < parts[t][b].size(); ++k)
        blk.push_back(name_at(parts[t][b][k], fb + "/" + std::to_string(k)));
    }
  }

  LoadedModel m{FiniteFilteredSpace::build(desc), {}, {}, {}, {}};
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) schema("/seed", "expected a non-negative integer");
    m.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("processes")) {
    const auto& ps = j["processes"];
    if (!ps.is_object()) schema("/processes", "expected a map of named processes");
    for (auto it = ps.begin(); it != ps.end(); ++it) {
      auto v = process_at(it.value(), m.space, "/processes/" + it.key());
      if (v.size() != 1) schema("/processes/" + it.key(), "named processes are scalar");
      m.processes.emplace(it.key(), std::move(v[0]));
    }
  }
  if (j.contains("S")) m.S = process_at(j["S"], m.space, "/S");

  const auto& tau = member(j, "tau", "/");
  if (!tau.is_object()) schema("/tau", "expected an outcome map or {\"last_visit\": ...}");
  if (tau.contains("last_visit")) {
    const auto& lv = tau["last_visit"];
    const auto pname = member(lv, "process", "/tau/last_visit");
    if (!pname.is_string()) schema("/tau/last_visit/process", "expected a process name");
    const auto it = m.processes.find(pname.get<std::string>());
    if (it == m.processes.end()) schema("/tau/last_visit/process", "no such process");
    const auto& set = member(lv, "set", "/tau/last_visit");
    if (!set.is_array()) schema("/tau/last_visit/set", "expected an array of rationals");
    std::vector<Rational> values;
    for (std::size_t i = 0; i < set.size(); ++i)
      values.push_back(rational_at(set[i], "/tau/last_visit/set/" + std::to_string(i)));
    m.tau.values = last_visit(it->second, values);
    m.tau.last_visit.emplace(it->first, std::move(values));
  } else {
    m.tau.values.assign(m.space.size(), -1);
    for (auto it = tau.begin(); it != tau.end(); ++it) {
      const std::string f = "/tau/" + it.key();
      std::size_t w;
      try {
        w = m.space.index_of(it.key());
      } catch (const std::exception&) {
        schema(f, "unknown outcome");
      }
      if (!it.value().is_number_integer()) schema(f, "expected an integer time");
      const auto v = it.value().get<long>();
      if (v < 0 || v > static_cast<long>(m.space.horizon())) schema(f, "time outside 0..T");
      m.tau.values[w] = static_cast<int>(v);
    }
    for (std::size_t w = 0; w < m.space.size(); ++w)
      if (m.tau.values[w] < 0) schema("/tau", "no value for outcome \"" + m.space.outcome(w) + "\"");
  }
  return m;
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnlabError(ErrorKind::SchemaError, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string dump_model(const LoadedModel& m) {
  const auto& s = m.space;
  json j;
  if (m.seed) j["seed"] = *m.seed;
  j["outcomes"] = s.outcome_names();
  json prob = json::array();
  for (std::size_t w = 0; w < s.size(); ++w) prob.push_back(format_rational(s.prob(w)));
  j["prob"] = prob;
  json parts = json::array();
  for (std::size_t t = 0; t <= s.horizon(); ++t) {
    json blocks = json::array();
    for (const auto& blk : s.filtration().at(t).blocks()) {
      json names = json::array();
      for (auto w : blk) names.push_back(s.outcome(w));
      blocks.push_back(names);
    }
    parts.push_back(blocks);
  }
  j["partitions"] = parts;
  if (!m.processes.empty()) {
    json ps = json::object();
    for (const auto& [name, p] : m.processes) ps[name] = process_json({p}, s);
    j["processes"] = ps;
  }
  if (!m.S.empty()) j["S"] = process_json(m.S, s);
  if (m.tau.last_visit) {
    json set = json::array();
    for (const auto& v : m.tau.last_visit->second) set.push_back(format_rational(v));
    j["tau"] = {{"last_visit", {{"process", m.tau.last_visit->first}, {"set", set}}}};
  } else {
    json tau = json::object();
    for (std::size_t w = 0; w < s.size(); ++w) tau[s.outcome(w)] = m.tau.values[w];
    j["tau"] = tau;
  }
  return j.dump(2) + "\n";
}

void save_model(const std::string& path, const LoadedModel& model) {
  std::ofstream out(path);
  if (!out) throw EnlabError(ErrorKind::SchemaError, path + ": cannot write");
  out << dump_model(model);
}

LoadedModel to_loaded(const GeneratedModel& g) {
  LoadedModel m{g.space, {{"X", g.X}}, g.S, {g.tau, std::make_pair(std::string("X"), g.visit_set)}, g.seed};
  return m;
}

}  // namespace enlab
