#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lossynet {

/// Undirected link between nodes u < v (0-based) with a positive weight.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

/// Dense square matrix, row-major. Only what the Laplacian and eigensolver need.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  bool is_symmetric(double tol = 0.0) const;
  /// Frobenius norm.
  double norm() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Fixed-size bitset over the edges of a base graph; marks which links are
/// active at one iteration.
class EdgeMask {
 public:
  EdgeMask() = default;
  explicit EdgeMask(std::size_t size, bool value = false);

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value = true);
  std::size_t count() const;
  EdgeMask& operator|=(const EdgeMask& other);

  bool operator==(const EdgeMask&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Undirected graph with symmetric positive link weights W_ij = W_ji.
/// Edges are kept sorted by (u, v) with u < v, so equality is structural.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n) : n_(n) {}

  /// Builds from an arbitrary edge list (endpoints in any order). Rejects
  /// self-loops, duplicate links, out-of-range nodes and non-positive weights.
  static WeightedGraph from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  void add_edge(std::size_t u, std::size_t v, double weight = 1.0);
  std::optional<std::size_t> edge_index(std::size_t u, std::size_t v) const;
  bool has_edge(std::size_t u, std::size_t v) const { return edge_index(u, v).has_value(); }
  /// W_uv, zero for absent links.
  double weight(std::size_t u, std::size_t v) const;
  void set_weight(std::size_t edge, double weight);

  std::vector<std::size_t> degrees() const;
  std::vector<double> weighted_degrees() const;
  DenseMatrix weight_matrix() const;

  /// Same nodes, only the edges whose bit is set in `mask`.
  WeightedGraph subgraph(const EdgeMask& mask) const;

  bool operator==(const WeightedGraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const noexcept { return components_; }
  std::size_t largest() const noexcept { return largest_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t components_;
  std::size_t largest_;
};

/// L = D - W with D the diagonal of row sums of W.
DenseMatrix laplacian(const WeightedGraph& g);

std::size_t component_count(const WeightedGraph& g);
/// True iff a traversal from node 0 reaches every node. A graph with no
/// nodes is not connected; a single node is.
bool is_connected(const WeightedGraph& g);
/// Largest shortest-path hop count; throws DomainError on disconnected input.
std::size_t hop_diameter(const WeightedGraph& g);

/// Edge present iff present in any member; the weight comes from the earliest
/// member containing it. All members must share the node count.
WeightedGraph union_graph(std::span<const WeightedGraph> graphs);

/// 2|E| / n.
double mean_degree(const WeightedGraph& g);

}  // namespace lossynet
