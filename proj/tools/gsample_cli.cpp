// gsample: command-line front end for graph sampling design.
//
//   gsample generate-graph --preset g2-desk --seed 11 --out g.txt
//   gsample design --graph g.txt --bandwidth 15 --budget 60 --criterion a
//   gsample estimate --graph g.txt --bandwidth 15 --samples y.csv
//   gsample bench --preset g2-desk --signal f2 --out trials.csv
//   gsample bound --sigma-min 0.1 --n 10 --eta 0.9

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsample/bench.hpp"
#include "gsample/design.hpp"
#include "gsample/errors.hpp"
#include "gsample/estimation.hpp"
#include "gsample/graph.hpp"
#include "gsample/spectral.hpp"

namespace {

using nlohmann::json;
using namespace gsample;

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << text;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

spectral::SpectralBasis load_basis(const std::string& path) {
  return spectral::eigendecompose(graph::laplacian(graph::load_edge_list(path)));
}

struct GenerateArgs {
  std::string preset;
  std::string kind = "random_geometric";
  std::size_t n = 200;
  std::size_t k = 5;
  double beta = 0.1;
  double radius = 0.6;
  std::optional<double> kernel_width;
  std::uint64_t seed = 1;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  graph::WeightedGraph g = [&] {
    if (!a.preset.empty()) {
      auto cfg = bench::preset(a.preset, "f2");
      cfg.graph.seed = a.seed;
      return bench::build_graph(cfg);
    }
    if (a.kind == "watts_strogatz") return graph::watts_strogatz(a.n, a.k, a.beta, a.seed);
    if (a.kind == "random_geometric") {
      return graph::random_geometric(a.n, a.radius, a.kernel_width.value_or(a.radius / 2.0), a.seed);
    }
    throw std::invalid_argument("unknown graph kind '" + a.kind + "'");
  }();
  std::ostringstream os;
  graph::write_edge_list(g, os);
  emit(a.out, os.str());
  return 0;
}

struct DesignArgs {
  std::string graph;
  long bandwidth = 0;
  long budget = 0;
  std::string criterion = "a";
  std::uint64_t seed = 1;
  int max_iter = 50000;
  double tol = 1e-6;
  std::string out;
};

int run_design(const DesignArgs& a) {
  const auto basis = load_basis(a.graph);
  const auto crit = design::parse_criterion(a.criterion);
  design::SolverOptions opts;
  opts.max_iter = a.max_iter;
  opts.tol = a.tol;
  const auto outcome = design::design_pipeline(basis, a.bandwidth, a.budget, crit, a.seed, opts);
  const auto& d = outcome.diagnostics;
  if (d.warning) std::cerr << "warning: " << *d.warning << '\n';
  json j = {
      {"schema", 1},
      {"criterion", std::string(design::to_string(crit))},
      {"K", a.bandwidth},
      {"M", a.budget},
      {"seed", a.seed},
      {"p", to_json(outcome.weights.values())},
      {"m", outcome.allocation.counts},
      {"objective", d.relaxed_objective},
      {"quantized_objective", d.quantized_objective},
      {"gap", d.duality_gap},
      {"iterations", d.iterations},
      {"converged", d.converged},
      {"sigma_min", d.sigma_min},
      {"invertibility_bound", d.invertibility_bound},
      {"fallback_steps", d.fallback_steps},
  };
  if (d.warning) j["warning"] = *d.warning;
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

struct EstimateArgs {
  std::string graph;
  long bandwidth = 0;
  std::string samples;
  std::string truth;
  std::string out;
};

// "node,value" per line; a non-numeric first line is treated as a header.
std::pair<estimation::SamplingSequence, Eigen::VectorXd> read_samples(const std::string& path) {
  std::istringstream is(read_file(path));
  std::string line;
  estimation::SamplingSequence seq;
  std::vector<double> values;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'node,value'", lineno);
    try {
      const long node = std::stol(line.substr(0, comma));
      if (node < 0) throw ParseError("negative node index", lineno);
      seq.nodes.push_back(static_cast<std::size_t>(node));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      if (lineno == 1 && seq.nodes.empty()) continue;
      throw ParseError("expected 'node,value'", lineno);
    }
  }
  return {std::move(seq), Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()))};
}

Eigen::VectorXd read_vector(const std::string& path) {
  std::istringstream is(read_file(path));
  std::vector<double> values;
  double x = 0.0;
  while (is >> x) values.push_back(x);
  if (!is.eof()) throw Error("non-numeric entry in " + path);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int run_estimate(const EstimateArgs& a) {
  const auto basis = load_basis(a.graph);
  auto [seq, y] = read_samples(a.samples);
  std::optional<Eigen::VectorXd> truth;
  if (!a.truth.empty()) truth = read_vector(a.truth);
  const auto est = estimation::blue_estimate(basis, a.bandwidth, seq, y, truth ? &*truth : nullptr);
  const auto cov = estimation::error_covariance(spectral::design_rows(basis, a.bandwidth), seq);
  json j = {
      {"schema", 1},
      {"K", a.bandwidth},
      {"M", seq.size()},
      {"coeff_estimate", to_json(est.coeff_estimate)},
      {"signal_estimate", to_json(est.signal_estimate)},
      {"trace_error_covariance", cov.trace},
  };
  if (est.error_l2) j["error_l2"] = *est.error_l2;
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string preset;
  std::string signal = "f2";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> criterion;
  std::vector<std::string> methods;
  std::string out;
  std::string summary;
  bool dump_config = false;
  bool record_timing = false;
};

int run_bench(const BenchArgs& a) {
  bench::ScenarioConfig cfg;
  if (!a.config.empty()) cfg = bench::parse_config(read_file(a.config));
  else if (!a.preset.empty()) cfg = bench::preset(a.preset, a.signal);
  else throw CLI::ValidationError("bench", "either --config or --preset is required");
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (a.criterion) cfg.criterion = design::parse_criterion(*a.criterion);
  if (!a.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : a.methods) cfg.methods.push_back(bench::parse_method(m));
  }
  if (a.record_timing) cfg.record_timing = true;
  cfg.validate();
  if (a.dump_config) {
    std::cout << bench::config_to_json(cfg) << '\n';
    return 0;
  }
  const auto records = bench::run_scenario(cfg);
  std::ostringstream trials;
  bench::write_trials_csv(records, trials);
  emit(a.out, trials.str());

  const auto rows = bench::summarize(records);
  std::ostringstream summary;
  bench::write_summary_csv(rows, summary);
  if (!a.summary.empty()) emit(a.summary, summary.str());
  else if (!a.out.empty()) std::cout << summary.str();
  return 0;
}

struct BoundArgs {
  double sigma_min = 0.0;
  std::size_t n = 0;
  double eta = 0.0;
  std::optional<long> budget;
};

int run_bound(const BoundArgs& a) {
  std::cout << "M = " << design::min_sample_size(a.sigma_min, a.n, a.eta) << '\n';
  if (a.budget) {
    std::cout << "P(invertible) > " << design::invertibility_probability_bound(a.sigma_min, *a.budget, a.n)
              << " at M = " << *a.budget << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-set design for bandlimited graph signals"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate-graph", "Generate a graph and write it as an edge list");
  gen_cmd->add_option("--preset", gen.preset, "g1-paper, g1-desk, g2-paper or g2-desk");
  gen_cmd->add_option("--kind", gen.kind, "watts_strogatz or random_geometric")
      ->check(CLI::IsMember({"watts_strogatz", "random_geometric"}));
  gen_cmd->add_option("--n", gen.n, "Node count");
  gen_cmd->add_option("--k", gen.k, "Ring half-degree (watts_strogatz)");
  gen_cmd->add_option("--beta", gen.beta, "Rewiring probability (watts_strogatz)");
  gen_cmd->add_option("--radius", gen.radius, "Connection radius (random_geometric)");
  gen_cmd->add_option("--kernel-width", gen.kernel_width, "Gaussian kernel width, default radius/2");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  DesignArgs des;
  auto* des_cmd = app.add_subcommand("design", "Solve the relaxed design and quantize it to sample quotas");
  des_cmd->add_option("--graph", des.graph, "Edge-list file")->required();
  des_cmd->add_option("--bandwidth", des.bandwidth, "Signal bandwidth K")->required();
  des_cmd->add_option("--budget", des.budget, "Total sample count M")->required();
  des_cmd->add_option("--criterion", des.criterion, "a, d or e");
  des_cmd->add_option("--seed", des.seed, "Quantization seed");
  des_cmd->add_option("--max-iter", des.max_iter, "Solver iteration cap");
  des_cmd->add_option("--tol", des.tol, "Duality-gap tolerance");
  des_cmd->add_option("--out", des.out, "Output JSON path (default stdout)");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Reconstruct a bandlimited signal from samples");
  est_cmd->add_option("--graph", est.graph, "Edge-list file")->required();
  est_cmd->add_option("--bandwidth", est.bandwidth, "Signal bandwidth K")->required();
  est_cmd->add_option("--samples", est.samples, "CSV of node,value lines")->required();
  est_cmd->add_option("--truth", est.truth, "Ground-truth signal, one value per node");
  est_cmd->add_option("--out", est.out, "Output JSON path (default stdout)");

  BenchArgs ben;
  auto* ben_cmd = app.add_subcommand("bench", "Monte Carlo comparison of sampling methods");
  ben_cmd->add_option("--config", ben.config, "Scenario JSON");
  ben_cmd->add_option("--preset", ben.preset, "g1-paper, g1-desk, g2-paper or g2-desk");
  ben_cmd->add_option("--signal", ben.signal, "Signal model for --preset: f1 or f2")
      ->check(CLI::IsMember({"f1", "f2"}));
  ben_cmd->add_option("--seed", ben.seed, "Override master_seed");
  ben_cmd->add_option("--trials", ben.trials, "Override trial count");
  ben_cmd->add_option("--criterion", ben.criterion, "Override criterion");
  ben_cmd->add_option("--methods", ben.methods, "Override methods (proposed, m1, m3)");
  ben_cmd->add_option("--out", ben.out, "Trial CSV path (default stdout)");
  ben_cmd->add_option("--summary", ben.summary, "Summary CSV path");
  ben_cmd->add_flag("--dump-config", ben.dump_config, "Print the resolved config and exit");
  ben_cmd->add_flag("--record-timing", ben.record_timing, "Fill wall_ms (output is then not byte-stable)");

  BoundArgs bnd;
  auto* bnd_cmd = app.add_subcommand("bound", "Minimum sample size for a target invertibility probability");
  bnd_cmd->add_option("--sigma-min", bnd.sigma_min, "Smallest singular value of the relaxed information matrix")
      ->required();
  bnd_cmd->add_option("--n", bnd.n, "Node count N")->required();
  bnd_cmd->add_option("--eta", bnd.eta, "Target probability in (0, 1)")->required();
  bnd_cmd->add_option("--budget", bnd.budget, "Also evaluate the probability bound at this M");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return run_generate(gen);
    if (des_cmd->parsed()) return run_design(des);
    if (est_cmd->parsed()) return run_estimate(est);
    if (ben_cmd->parsed()) return run_bench(ben);
    if (bnd_cmd->parsed()) return run_bound(bnd);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
