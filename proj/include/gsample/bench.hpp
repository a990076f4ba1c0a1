#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsample/design.hpp"
#include "gsample/estimation.hpp"
#include "gsample/graph.hpp"

namespace gsample::bench {

enum class Method { Proposed, M1, M3 };

Method parse_method(std::string_view s);
std::string_view to_string(Method m);

struct GraphConfig {
  enum class Kind { WattsStrogatz, RandomGeometric, File } kind = Kind::RandomGeometric;
  std::size_t n = 200;
  std::size_t k = 5;           // watts_strogatz half-degree
  double beta = 0.1;           // watts_strogatz rewiring probability
  double radius = 0.6;         // random_geometric
  double kernel_width = 0.3;   // random_geometric
  std::optional<std::uint64_t> seed;  // defaults to a substream of master_seed
  std::string path;            // file
};

struct SignalConfig {
  long bandwidth_min = 15;
  long bandwidth_max = 15;
  long bandwidth_step = 1;
  double coeff_mean = 1.0;
  double coeff_std = 0.5;
  std::vector<double> snr_db_grid{10.0};  // +inf allowed
  // Noise power is set against the whole signal so every method in a trial
  // sees the same noise level.
  estimation::SnrReference snr_reference = estimation::SnrReference::Signal;
};

struct ScenarioConfig {
  std::string scenario = "scenario";
  GraphConfig graph;
  SignalConfig signal;
  long budget_rule = 4;  // M = budget_rule * K
  int trials = 200;
  std::vector<Method> methods{Method::Proposed, Method::M1, Method::M3};
  design::Criterion criterion = design::Criterion::A;
  std::uint64_t master_seed = 1;
  design::SolverOptions solver;
  bool record_timing = false;  // wall_ms stays 0 unless set, keeping output byte-stable

  /// Throws ConfigError on violated invariants.
  void validate() const;
  std::vector<long> bandwidths() const;
};

/// Parses the JSON scenario schema; unknown keys are rejected.
ScenarioConfig parse_config(const std::string& json_text);
std::string config_to_json(const ScenarioConfig& cfg);

/// Built-in scenarios: graph presets g1-paper, g1-desk, g2-paper, g2-desk
/// combined with signal models f1 (bandwidth sweep 10..20 at 10 dB) or f2
/// (bandwidth 15, SNR 0..10 dB).
ScenarioConfig preset(std::string_view graph_preset, std::string_view signal_model);

graph::WeightedGraph build_graph(const ScenarioConfig& cfg);

struct TrialRecord {
  std::string scenario;
  Method method = Method::Proposed;
  design::Criterion criterion = design::Criterion::A;
  long bandwidth = 0;
  long budget = 0;
  double snr_db = 0.0;
  int trial = 0;
  double error_l2 = 0.0;      // NaN on failure
  double solver_gap = 0.0;    // NaN for methods without a relaxation
  double wall_ms = 0.0;
  std::string status = "ok";  // "ok" or "failed: <reason>"
  std::uint64_t noise_digest = 0;  // hash of the standard-normal noise draws

  bool ok() const { return status == "ok"; }
};

/// Runs every (bandwidth, snr) grid point x trial x method. Within a trial all
/// methods see the same signal and the same standard-normal noise draws.
/// Worker count comes from thread_count(); the result order is fixed.
std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg, const graph::WeightedGraph& g);
std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg);

struct SummaryRow {
  std::string scenario;
  Method method = Method::Proposed;
  design::Criterion criterion = design::Criterion::A;
  long bandwidth = 0;
  long budget = 0;
  double snr_db = 0.0;
  int n_ok = 0;
  int n_failed = 0;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation, 0 for a single record
};

/// Per (method, grid point) mean and std of error_l2 over successful trials.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

inline constexpr const char* kTrialCsvHeader =
    "scenario,method,criterion,K,M,snr_db,trial,error_l2,solver_gap,wall_ms,status";
inline constexpr const char* kSummaryCsvHeader =
    "scenario,method,criterion,K,M,snr_db,n_ok,n_failed,mean_error_l2,std_error_l2";

void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& os);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os);

std::string format_double(double x);

/// Worker count: GSAMPLE_THREADS when set to a positive integer (at most
/// 256), otherwise the hardware concurrency.
unsigned thread_count();

}  // namespace gsample::bench
