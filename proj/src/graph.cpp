#include "gsample/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "gsample/errors.hpp"
#include "gsample/rng.hpp"

namespace gsample::graph {

WeightedGraph WeightedGraph::make(std::size_t n, std::vector<Edge> edges) {
  if (n == 0) throw GraphError("graph must have at least one node");
  for (auto& e : edges) {
    if (e.i >= n || e.j >= n) {
      throw GraphError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                       ") references a node outside [0," + std::to_string(n) + ")");
    }
    if (e.i == e.j) throw GraphError("self-loop on node " + std::to_string(e.i));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw GraphError("nonpositive weight on edge (" + std::to_string(e.i) + "," +
                       std::to_string(e.j) + ")");
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j) {
      throw GraphError("duplicate edge (" + std::to_string(edges[k].i) + "," +
                       std::to_string(edges[k].j) + ")");
    }
  }
  if (!is_connected(n, edges)) throw GraphError("graph is disconnected");
  return WeightedGraph(n, std::move(edges));
}

std::vector<std::size_t> WeightedGraph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.i];
    ++deg[e.j];
  }
  return deg;
}

bool is_connected(std::size_t n, const std::vector<Edge>& edges) {
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

namespace {

// One attempt of the rewiring process; may return a disconnected edge set.
std::vector<Edge> watts_strogatz_attempt(std::size_t n, std::size_t k, double beta, Rng& rng) {
  std::vector<std::set<std::size_t>> nbrs(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= k; ++j) {
      const auto v = (u + j) % n;
      nbrs[u].insert(v);
      nbrs[v].insert(u);
    }
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  // Lattice edges are visited ring distance first, then node, so the far
  // endpoint (u + j) is the one that moves.
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      if (coin(rng) >= beta) continue;
      const auto v = (u + j) % n;
      if (!nbrs[u].contains(v)) continue;  // already moved away by an earlier rewire
      if (nbrs[u].size() >= n - 1) continue;
      std::size_t w = pick(rng);
      while (w == u || nbrs[u].contains(w)) w = pick(rng);
      nbrs[u].erase(v);
      nbrs[v].erase(u);
      nbrs[u].insert(w);
      nbrs[w].insert(u);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(n * k);
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : nbrs[u]) {
      if (u < v) edges.push_back({u, v, 1.0});
    }
  }
  return edges;
}

std::vector<Edge> random_geometric_attempt(std::size_t n, double radius, double kernel_width,
                                           Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = unit(rng);
    y[i] = unit(rng);
  }
  const double r2 = radius * radius;
  const double denom = 2.0 * kernel_width * kernel_width;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const double d2 = dx * dx + dy * dy;
      if (d2 <= r2) {
        // Underflow to zero would violate positivity; clamp to the smallest normal.
        edges.push_back({i, j, std::max(std::exp(-d2 / denom), std::numeric_limits<double>::min())});
      }
    }
  }
  return edges;
}

}  // namespace

WeightedGraph watts_strogatz(std::size_t n, std::size_t k, double beta, std::uint64_t seed) {
  if (k < 1 || n <= 2 * k) throw std::invalid_argument("watts_strogatz requires n > 2k >= 2");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  for (int attempt = 0; attempt < kMaxConnectivityAttempts; ++attempt) {
    auto rng = make_rng(derive_seed(seed, {stream::kGraph, static_cast<std::uint64_t>(attempt)}));
    auto edges = watts_strogatz_attempt(n, k, beta, rng);
    if (is_connected(n, edges)) return WeightedGraph::make(n, std::move(edges));
  }
  throw GraphError("watts_strogatz: no connected graph after " +
                   std::to_string(kMaxConnectivityAttempts) + " attempts");
}

WeightedGraph random_geometric(std::size_t n, double radius, double kernel_width,
                               std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_geometric requires n >= 2");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!(kernel_width > 0.0)) throw std::invalid_argument("kernel_width must be positive");
  for (int attempt = 0; attempt < kMaxConnectivityAttempts; ++attempt) {
    auto rng = make_rng(derive_seed(seed, {stream::kGraph, static_cast<std::uint64_t>(attempt)}));
    auto edges = random_geometric_attempt(n, radius, kernel_width, rng);
    if (is_connected(n, edges)) return WeightedGraph::make(n, std::move(edges));
  }
  throw GraphError("random_geometric: no connected graph after " +
                   std::to_string(kMaxConnectivityAttempts) + " attempts");
}

LaplacianMatrix laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  LaplacianMatrix L = LaplacianMatrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    L(i, j) -= e.w;
    L(j, i) -= e.w;
    L(i, i) += e.w;
    L(j, j) += e.w;
  }
  return L;
}

void write_edge_list(const WeightedGraph& g, std::ostream& os) {
  os << "# gsample-graph v1 n=" << g.num_nodes() << '\n';
  char buf[64];
  for (const auto& e : g.edges()) {
    auto res = std::to_chars(buf, buf + sizeof(buf), e.w);
    os << e.i << ' ' << e.j << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::size_t parse_header(std::string_view line, std::size_t lineno) {
  constexpr std::string_view prefix = "# gsample-graph v1 n=";
  if (!line.starts_with(prefix)) {
    throw ParseError("missing header '# gsample-graph v1 n=<N>'", lineno);
  }
  auto rest = line.substr(prefix.size());
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || n == 0) {
    throw ParseError("invalid node count in header", lineno);
  }
  return n;
}

}  // namespace

WeightedGraph read_edge_list(std::istream& is) {
  std::string raw;
  std::size_t lineno = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  while (std::getline(is, raw)) {
    ++lineno;
    auto line = trim(raw);
    if (line.empty()) continue;
    if (!have_header) {
      n = parse_header(line, lineno);
      have_header = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));

    std::istringstream fields{std::string(line)};
    long long i = 0, j = 0;
    double w = 0.0;
    std::string extra;
    if (!(fields >> i >> j >> w)) throw ParseError("expected 'i j w'", lineno);
    if (fields >> extra) throw ParseError("trailing fields", lineno);
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
      throw ParseError("node index out of range [0," + std::to_string(n) + ")", lineno);
    }
    if (i == j) throw ParseError("self-loop", lineno);
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("nonpositive weight", lineno);
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(j);
    const std::pair<std::size_t, std::size_t> key{std::min(a, b), std::max(a, b)};
    if (!seen.insert(key).second) throw ParseError("duplicate edge", lineno);
    edges.push_back({key.first, key.second, w});
  }
  if (!have_header) throw ParseError("empty edge list", lineno);
  return WeightedGraph::make(n, std::move(edges));
}

void save_edge_list(const WeightedGraph& g, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_edge_list(g, os);
  if (!os) throw Error("failed writing " + path.string());
}

WeightedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  return read_edge_list(is);
}

}  // namespace gsample::graph
