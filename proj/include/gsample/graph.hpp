#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace gsample::graph {

struct Edge {
  std::size_t i;
  std::size_t j;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected, connected, positively weighted graph without self-loops.
///
/// Edges are stored canonically with i < j, sorted lexicographically. A
/// WeightedGraph can only be obtained through `make` (or the generators and
/// loader built on it), so every instance satisfies the invariants.
class WeightedGraph {
 public:
  /// Validates and canonicalizes. Edges given as (j, i) are flipped.
  /// Throws GraphError naming the violated invariant.
  static WeightedGraph make(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::vector<std::size_t> degrees() const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {}

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

bool is_connected(std::size_t n, const std::vector<Edge>& edges);

/// Small-world graph: ring lattice of half-degree k, each lattice edge's far
/// endpoint rewired with probability beta. Unit weights. Regenerates from a
/// fresh substream until connected (at most 100 attempts).
WeightedGraph watts_strogatz(std::size_t n, std::size_t k, double beta, std::uint64_t seed);

/// n uniform points in the unit square, edges within `radius`, Gaussian
/// kernel weights exp(-d^2 / (2 kernel_width^2)).
WeightedGraph random_geometric(std::size_t n, double radius, double kernel_width,
                               std::uint64_t seed);

using LaplacianMatrix = Eigen::MatrixXd;

/// Dense combinatorial Laplacian L = D - W.
LaplacianMatrix laplacian(const WeightedGraph& g);

void save_edge_list(const WeightedGraph& g, const std::filesystem::path& path);
WeightedGraph load_edge_list(const std::filesystem::path& path);

// Stream variants used by the file functions and tests.
void write_edge_list(const WeightedGraph& g, std::ostream& os);
WeightedGraph read_edge_list(std::istream& is);

inline constexpr int kMaxConnectivityAttempts = 100;

}  // namespace gsample::graph
