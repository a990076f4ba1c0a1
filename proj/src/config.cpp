#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "gsample/bench.hpp"
#include "gsample/errors.hpp"

namespace gsample::bench {

using nlohmann::json;

Method parse_method(std::string_view s) {
  if (s == "proposed") return Method::Proposed;
  if (s == "m1") return Method::M1;
  if (s == "m3") return Method::M3;
  throw ConfigError("unknown method '" + std::string(s) + "' (expected proposed, m1 or m3)");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::M1: return "m1";
    case Method::M3: return "m3";
  }
  return "?";
}

std::vector<long> ScenarioConfig::bandwidths() const {
  std::vector<long> out;
  for (long k = signal.bandwidth_min; k <= signal.bandwidth_max; k += signal.bandwidth_step) out.push_back(k);
  return out;
}

void ScenarioConfig::validate() const {
  if (signal.bandwidth_min < 1) throw ConfigError("bandwidth_min must be >= 1");
  if (signal.bandwidth_max < signal.bandwidth_min) throw ConfigError("bandwidth_max must be >= bandwidth_min");
  if (signal.bandwidth_step < 1) throw ConfigError("bandwidth_step must be >= 1");
  if (graph.kind != GraphConfig::Kind::File && static_cast<std::size_t>(signal.bandwidth_max) > graph.n) {
    throw ConfigError("bandwidth_max exceeds the node count");
  }
  if (!(signal.coeff_std >= 0.0)) throw ConfigError("coeff_std must be nonnegative");
  if (signal.snr_db_grid.empty()) throw ConfigError("snr_db_grid must be nonempty");
  for (double s : signal.snr_db_grid) {
    if (std::isnan(s) || (std::isinf(s) && s < 0)) throw ConfigError("snr values must be finite or +inf");
  }
  if (budget_rule < 1) throw ConfigError("budget_rule must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (methods.empty()) throw ConfigError("methods must be nonempty");
  if (solver.max_iter < 0 || !(solver.tol > 0.0)) throw ConfigError("invalid solver options");
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  std::set<std::string_view> keys(allowed);
  for (const auto& [key, _] : obj.items()) {
    if (!keys.contains(key)) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
T get(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

double parse_snr(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v == "inf" || v == "+inf")) return std::numeric_limits<double>::infinity();
  throw ConfigError("snr_db_grid entries must be numbers or \"inf\"");
}

GraphConfig parse_graph(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("graph.kind is required");
  GraphConfig g;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "watts_strogatz") {
    reject_unknown(j, {"kind", "n", "k", "beta", "seed"}, "graph");
    g.kind = GraphConfig::Kind::WattsStrogatz;
    g.n = get<std::size_t>(j, "n", 1000);
    g.k = get<std::size_t>(j, "k", 5);
    g.beta = get<double>(j, "beta", 0.1);
  } else if (kind == "random_geometric") {
    reject_unknown(j, {"kind", "n", "radius", "kernel_width", "seed"}, "graph");
    g.kind = GraphConfig::Kind::RandomGeometric;
    g.n = get<std::size_t>(j, "n", 500);
    g.radius = get<double>(j, "radius", 0.6);
    g.kernel_width = get<double>(j, "kernel_width", g.radius / 2.0);
  } else if (kind == "file") {
    reject_unknown(j, {"kind", "path"}, "graph");
    g.kind = GraphConfig::Kind::File;
    g.path = get<std::string>(j, "path", "");
    if (g.path.empty()) throw ConfigError("graph.path is required for kind 'file'");
  } else {
    throw ConfigError("unknown graph kind '" + kind + "'");
  }
  if (j.contains("seed")) g.seed = get<std::uint64_t>(j, "seed", 0);
  return g;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(j, {"schema", "scenario", "graph", "signal", "budget_rule", "trials", "methods", "criterion",
                     "master_seed", "solver", "record_timing"},
                 "config");
  if (get<int>(j, "schema", 1) != 1) throw ConfigError("unsupported schema version");
  ScenarioConfig cfg;
  cfg.scenario = get<std::string>(j, "scenario", cfg.scenario);
  if (!j.contains("graph")) throw ConfigError("graph is required");
  cfg.graph = parse_graph(j.at("graph"));
  if (j.contains("signal")) {
    const auto& s = j.at("signal");
    reject_unknown(s, {"bandwidth_min", "bandwidth_max", "bandwidth_step", "coeff_mean", "coeff_std", "snr_db_grid",
                       "snr_reference"},
                   "signal");
    cfg.signal.bandwidth_min = get<long>(s, "bandwidth_min", cfg.signal.bandwidth_min);
    cfg.signal.bandwidth_max = get<long>(s, "bandwidth_max", cfg.signal.bandwidth_min);
    cfg.signal.bandwidth_step = get<long>(s, "bandwidth_step", 1);
    cfg.signal.coeff_mean = get<double>(s, "coeff_mean", 1.0);
    cfg.signal.coeff_std = get<double>(s, "coeff_std", 0.5);
    if (s.contains("snr_reference")) {
      const auto ref = get<std::string>(s, "snr_reference", "signal");
      if (ref == "signal") cfg.signal.snr_reference = estimation::SnrReference::Signal;
      else if (ref == "samples") cfg.signal.snr_reference = estimation::SnrReference::Samples;
      else throw ConfigError("snr_reference must be 'signal' or 'samples'");
    }
    if (s.contains("snr_db_grid")) {
      const auto& grid = s.at("snr_db_grid");
      if (!grid.is_array()) throw ConfigError("snr_db_grid must be an array");
      cfg.signal.snr_db_grid.clear();
      for (const auto& v : grid) cfg.signal.snr_db_grid.push_back(parse_snr(v));
    }
  }
  cfg.budget_rule = get<long>(j, "budget_rule", cfg.budget_rule);
  cfg.trials = get<int>(j, "trials", cfg.trials);
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("criterion")) {
    try {
      cfg.criterion = design::parse_criterion(j.at("criterion").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  cfg.master_seed = get<std::uint64_t>(j, "master_seed", cfg.master_seed);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s, {"max_iter", "tol"}, "solver");
    cfg.solver.max_iter = get<int>(s, "max_iter", cfg.solver.max_iter);
    cfg.solver.tol = get<double>(s, "tol", cfg.solver.tol);
  }
  cfg.record_timing = get<bool>(j, "record_timing", false);
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json g;
  switch (cfg.graph.kind) {
    case GraphConfig::Kind::WattsStrogatz:
      g = {{"kind", "watts_strogatz"}, {"n", cfg.graph.n}, {"k", cfg.graph.k}, {"beta", cfg.graph.beta}};
      break;
    case GraphConfig::Kind::RandomGeometric:
      g = {{"kind", "random_geometric"},
           {"n", cfg.graph.n},
           {"radius", cfg.graph.radius},
           {"kernel_width", cfg.graph.kernel_width}};
      break;
    case GraphConfig::Kind::File:
      g = {{"kind", "file"}, {"path", cfg.graph.path}};
      break;
  }
  if (cfg.graph.seed && cfg.graph.kind != GraphConfig::Kind::File) g["seed"] = *cfg.graph.seed;
  json grid = json::array();
  for (double s : cfg.signal.snr_db_grid) {
    if (std::isinf(s)) grid.push_back("inf");
    else grid.push_back(s);
  }
  json methods = json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(to_string(m)));
  json j = {
      {"schema", 1},
      {"scenario", cfg.scenario},
      {"graph", g},
      {"signal",
       {{"bandwidth_min", cfg.signal.bandwidth_min},
        {"bandwidth_max", cfg.signal.bandwidth_max},
        {"bandwidth_step", cfg.signal.bandwidth_step},
        {"coeff_mean", cfg.signal.coeff_mean},
        {"coeff_std", cfg.signal.coeff_std},
        {"snr_db_grid", grid},
        {"snr_reference", cfg.signal.snr_reference == estimation::SnrReference::Signal ? "signal" : "samples"}}},
      {"budget_rule", cfg.budget_rule},
      {"trials", cfg.trials},
      {"methods", methods},
      {"criterion", std::string(design::to_string(cfg.criterion))},
      {"master_seed", cfg.master_seed},
      {"solver", {{"max_iter", cfg.solver.max_iter}, {"tol", cfg.solver.tol}}},
      {"record_timing", cfg.record_timing},
  };
  return j.dump(2);
}

ScenarioConfig preset(std::string_view graph_preset, std::string_view signal_model) {
  ScenarioConfig cfg;
  auto& g = cfg.graph;
  if (graph_preset == "g1-paper" || graph_preset == "g1-desk") {
    g.kind = GraphConfig::Kind::WattsStrogatz;
    g.n = graph_preset == "g1-paper" ? 1000 : 200;
    g.k = 5;
    g.beta = 0.1;
  } else if (graph_preset == "g2-paper" || graph_preset == "g2-desk") {
    g.kind = GraphConfig::Kind::RandomGeometric;
    g.n = graph_preset == "g2-paper" ? 500 : 200;
    g.radius = 0.6;
    g.kernel_width = 0.3;
  } else {
    throw ConfigError("unknown graph preset '" + std::string(graph_preset) +
                      "' (expected g1-paper, g1-desk, g2-paper or g2-desk)");
  }
  if (signal_model == "f1") {
    cfg.signal.bandwidth_min = 10;
    cfg.signal.bandwidth_max = 20;
    cfg.signal.snr_db_grid = {10.0};
  } else if (signal_model == "f2") {
    cfg.signal.bandwidth_min = 15;
    cfg.signal.bandwidth_max = 15;
    cfg.signal.snr_db_grid = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
  } else {
    throw ConfigError("unknown signal model '" + std::string(signal_model) + "' (expected f1 or f2)");
  }
  cfg.scenario = std::string(graph_preset) + "-" + std::string(signal_model);
  cfg.validate();
  return cfg;
}

}  // namespace gsample::bench
