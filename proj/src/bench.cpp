#include "gsample/bench.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "gsample/baselines.hpp"
#include "gsample/errors.hpp"
#include "gsample/estimation.hpp"
#include "gsample/rng.hpp"
#include "gsample/spectral.hpp"

namespace gsample::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t digest(const Eigen::VectorXd& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v[i], sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string sanitize(std::string s) {
  for (auto& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

// Per-bandwidth state shared by all trials: rows, relaxation, M1 selection.
struct BandState {
  long bandwidth = 0;
  long budget = 0;
  spectral::DesignRows rows;
  std::optional<design::SolverResult> relaxed;
  std::string relaxed_error;
  std::optional<estimation::SamplingSequence> greedy;
  std::string greedy_error;
};

struct GridPoint {
  std::size_t band = 0;
  double snr_db = 0.0;
};

}  // namespace

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GSAMPLE_THREADS")) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec == std::errc() && *ptr == '\0' && v > 0) return std::min(v, 256u);
  }
  return hw;
}

graph::WeightedGraph build_graph(const ScenarioConfig& cfg) {
  const auto& g = cfg.graph;
  const std::uint64_t seed = g.seed.value_or(derive_seed(cfg.master_seed, {stream::kGraph}));
  switch (g.kind) {
    case GraphConfig::Kind::WattsStrogatz: return graph::watts_strogatz(g.n, g.k, g.beta, seed);
    case GraphConfig::Kind::RandomGeometric: return graph::random_geometric(g.n, g.radius, g.kernel_width, seed);
    case GraphConfig::Kind::File: return graph::load_edge_list(g.path);
  }
  throw ConfigError("unknown graph kind");
}

std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg) { return run_scenario(cfg, build_graph(cfg)); }

std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg, const graph::WeightedGraph& g) {
  cfg.validate();
  const auto n = static_cast<long>(g.num_nodes());
  if (cfg.signal.bandwidth_max > n) throw ConfigError("bandwidth_max exceeds the node count");
  const auto basis = spectral::eigendecompose(graph::laplacian(g));
  const bool need_relaxed = std::ranges::any_of(cfg.methods, [](Method m) { return m != Method::M1; });
  const bool need_greedy = std::ranges::find(cfg.methods, Method::M1) != cfg.methods.end();

  std::vector<BandState> bands;
  for (long K : cfg.bandwidths()) {
    BandState b;
    b.bandwidth = K;
    b.budget = cfg.budget_rule * K;
    b.rows = spectral::design_rows(basis, K);
    if (need_relaxed) {
      try {
        b.relaxed = design::solve_relaxed(b.rows, cfg.criterion, cfg.solver);
      } catch (const std::exception& e) {
        b.relaxed_error = e.what();
      }
    }
    if (need_greedy) {
      try {
        b.greedy = baselines::greedy_sigma_min(b.rows, static_cast<std::size_t>(b.budget));
      } catch (const std::exception& e) {
        b.greedy_error = e.what();
      }
    }
    bands.push_back(std::move(b));
  }

  std::vector<GridPoint> grid;
  for (std::size_t bi = 0; bi < bands.size(); ++bi)
    for (double snr : cfg.signal.snr_db_grid) grid.push_back({bi, snr});

  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialRecord> records(grid.size() * n_trials * n_methods);

  auto run_task = [&](std::size_t task) {
    const std::size_t gi = task / n_trials;
    const std::size_t t = task % n_trials;
    const auto& band = bands[grid[gi].band];
    const double snr = grid[gi].snr_db;
    const long K = band.bandwidth;

    auto signal_rng = make_rng(derive_seed(cfg.master_seed, {stream::kSignal, gi, t}));
    std::normal_distribution<double> coeff(cfg.signal.coeff_mean, cfg.signal.coeff_std);
    spectral::BandlimitedSpec spec{K, Eigen::VectorXd(K)};
    for (Eigen::Index k = 0; k < K; ++k) spec.coefficients[k] = coeff(signal_rng);
    const Eigen::VectorXd f = spectral::synthesize_bandlimited(basis, spec);
    const std::uint64_t noise_seed = derive_seed(cfg.master_seed, {stream::kNoise, gi, t});

    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const Method method = cfg.methods[mi];
      TrialRecord& rec = records[task * n_methods + mi];
      rec.scenario = cfg.scenario;
      rec.method = method;
      rec.criterion = cfg.criterion;
      rec.bandwidth = K;
      rec.budget = band.budget;
      rec.snr_db = snr;
      rec.trial = static_cast<int>(t);
      rec.solver_gap = method == Method::M1 || !band.relaxed ? kNaN : band.relaxed->gap;
      const auto start = std::chrono::steady_clock::now();
      try {
        estimation::SamplingSequence seq;
        switch (method) {
          case Method::Proposed: {
            if (!band.relaxed) throw Error("relaxed solve failed: " + band.relaxed_error);
            const auto seed = derive_seed(cfg.master_seed, {stream::kMethod, static_cast<std::uint64_t>(method), gi, t});
            const auto outcome = design::quantize_design(band.rows, *band.relaxed, band.budget, cfg.criterion, seed);
            seq = estimation::sequence_from_allocation(outcome.allocation);
            break;
          }
          case Method::M1:
            if (!band.greedy) throw Error("greedy selection failed: " + band.greedy_error);
            seq = *band.greedy;
            break;
          case Method::M3:
            if (!band.relaxed) throw Error("relaxed solve failed: " + band.relaxed_error);
            seq = baselines::top_m_selection(band.relaxed->weights, static_cast<std::size_t>(band.budget));
            break;
        }
        rec.noise_digest = digest(estimation::standard_noise(seq.size(), noise_seed));
        const auto y = estimation::sample_with_noise(f, seq, snr, noise_seed, cfg.signal.snr_reference);
        const auto est = estimation::blue_estimate(basis, K, seq, y.values, &f);
        rec.error_l2 = *est.error_l2;
        rec.status = "ok";
      } catch (const std::exception& e) {
        rec.error_l2 = kNaN;
        rec.status = "failed: " + sanitize(e.what());
      }
      if (cfg.record_timing) {
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
    }
  };

  const std::size_t n_tasks = grid.size() * n_trials;
  const unsigned workers = std::min<std::size_t>(thread_count(), n_tasks);
  if (workers <= 1) {
    for (std::size_t task = 0; task < n_tasks; ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t task = next++; task < n_tasks; task = next++) run_task(task);
      });
    }
  }
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  using Key = std::tuple<std::string, int, long, long, double>;
  std::map<Key, std::size_t> index;
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> values;
  for (const auto& r : records) {
    Key key{r.scenario, static_cast<int>(r.method), r.bandwidth, r.budget, r.snr_db};
    auto [it, inserted] = index.try_emplace(key, rows.size());
    if (inserted) {
      SummaryRow row;
      row.scenario = r.scenario;
      row.method = r.method;
      row.criterion = r.criterion;
      row.bandwidth = r.bandwidth;
      row.budget = r.budget;
      row.snr_db = r.snr_db;
      rows.push_back(row);
      values.emplace_back();
    }
    auto& row = rows[it->second];
    if (r.ok()) {
      ++row.n_ok;
      values[it->second].push_back(r.error_l2);
    } else {
      ++row.n_failed;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& v = values[i];
    if (v.empty()) {
      rows[i].mean_error = kNaN;
      rows[i].std_error = kNaN;
      continue;
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    rows[i].mean_error = mean;
    rows[i].std_error = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return rows;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& os) {
  os << "# schema: 1\n" << kTrialCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.scenario << ',' << to_string(r.method) << ',' << design::to_string(r.criterion) << ',' << r.bandwidth
       << ',' << r.budget << ',' << format_double(r.snr_db) << ',' << r.trial << ',' << format_double(r.error_l2)
       << ',' << format_double(r.solver_gap) << ',' << format_double(r.wall_ms) << ',' << r.status << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << "# schema: 1\n" << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.scenario << ',' << to_string(r.method) << ',' << design::to_string(r.criterion) << ',' << r.bandwidth
       << ',' << r.budget << ',' << format_double(r.snr_db) << ',' << r.n_ok << ',' << r.n_failed << ','
       << format_double(r.mean_error) << ',' << format_double(r.std_error) << '\n';
  }
}

}  // namespace gsample::bench
