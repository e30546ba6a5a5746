#include "lossynet/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <string>

#include "lossynet/errors.hpp"

namespace lossynet {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  return a.u != b.u ? a.u < b.u : a.v < b.v;
}

void check_endpoints(std::size_t n, std::size_t u, std::size_t v, double w) {
  if (u >= n || v >= n) {
    throw DomainError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                      ") references a node outside [0," + std::to_string(n) + ")");
  }
  if (u == v) throw DomainError("self-loop at node " + std::to_string(u));
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw DomainError("link weights must be finite and strictly positive");
  }
}

}  // namespace

bool DenseMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    }
  }
  return true;
}

double DenseMatrix::norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

EdgeMask::EdgeMask(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && size % 64 != 0) words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
}

void EdgeMask::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

std::size_t EdgeMask::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

EdgeMask& EdgeMask::operator|=(const EdgeMask& other) {
  if (other.size_ != size_) throw DomainError("edge mask sizes differ");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::vector<Edge> edges) {
  for (auto& e : edges) {
    check_endpoints(n, e.u, e.v, e.weight);
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), edge_less);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw DomainError("duplicate link (" + std::to_string(edges[i].u) + "," +
                        std::to_string(edges[i].v) + ")");
    }
  }
  WeightedGraph g(n);
  g.edges_ = std::move(edges);
  return g;
}

void WeightedGraph::add_edge(std::size_t u, std::size_t v, double weight) {
  check_endpoints(n_, u, v, weight);
  if (u > v) std::swap(u, v);
  const Edge e{u, v, weight};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e, edge_less);
  if (it != edges_.end() && it->u == u && it->v == v) {
    throw DomainError("duplicate link (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  edges_.insert(it, e);
}

std::optional<std::size_t> WeightedGraph::edge_index(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  const Edge key{u, v, 0.0};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key, edge_less);
  if (it != edges_.end() && it->u == u && it->v == v) {
    return static_cast<std::size_t>(it - edges_.begin());
  }
  return std::nullopt;
}

double WeightedGraph::weight(std::size_t u, std::size_t v) const {
  const auto idx = edge_index(u, v);
  return idx ? edges_[*idx].weight : 0.0;
}

void WeightedGraph::set_weight(std::size_t edge, double weight) {
  check_endpoints(n_, edges_.at(edge).u, edges_.at(edge).v, weight);
  edges_[edge].weight = weight;
}

std::vector<std::size_t> WeightedGraph::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::vector<double> WeightedGraph::weighted_degrees() const {
  std::vector<double> deg(n_, 0.0);
  for (const auto& e : edges_) {
    deg[e.u] += e.weight;
    deg[e.v] += e.weight;
  }
  return deg;
}

DenseMatrix WeightedGraph::weight_matrix() const {
  DenseMatrix w(n_);
  for (const auto& e : edges_) {
    w(e.u, e.v) = e.weight;
    w(e.v, e.u) = e.weight;
  }
  return w;
}

WeightedGraph WeightedGraph::subgraph(const EdgeMask& mask) const {
  if (mask.size() != edges_.size()) throw DomainError("edge mask does not match the graph");
  WeightedGraph g(n_);
  g.edges_.reserve(mask.count());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (mask.test(i)) g.edges_.push_back(edges_[i]);
  }
  return g;
}

DisjointSets::DisjointSets(std::size_t n)
    : parent_(n), size_(n, 1), components_(n), largest_(n > 0 ? 1 : 0) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  largest_ = std::max(largest_, size_[a]);
  --components_;
  return true;
}

DenseMatrix laplacian(const WeightedGraph& g) {
  DenseMatrix l(g.node_count());
  for (const auto& e : g.edges()) {
    l(e.u, e.v) -= e.weight;
    l(e.v, e.u) -= e.weight;
    l(e.u, e.u) += e.weight;
    l(e.v, e.v) += e.weight;
  }
  return l;
}

std::size_t component_count(const WeightedGraph& g) {
  DisjointSets sets(g.node_count());
  for (const auto& e : g.edges()) sets.unite(e.u, e.v);
  return sets.components();
}

bool is_connected(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (auto j : adj[i]) {
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == n;
}

std::size_t hop_diameter(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  if (!is_connected(g)) throw DomainError("diameter is undefined for a disconnected graph");
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::size_t diameter = 0;
  std::vector<std::size_t> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    while (!queue.empty()) {
      const auto i = queue.front();
      queue.pop_front();
      for (auto j : adj[i]) {
        if (dist[j] == SIZE_MAX) {
          dist[j] = dist[i] + 1;
          diameter = std::max(diameter, dist[j]);
          queue.push_back(j);
        }
      }
    }
  }
  return diameter;
}

WeightedGraph union_graph(std::span<const WeightedGraph> graphs) {
  if (graphs.empty()) return WeightedGraph{};
  const std::size_t n = graphs.front().node_count();
  std::vector<Edge> all;
  for (const auto& g : graphs) {
    if (g.node_count() != n) {
      throw DomainError("union_graph: node counts differ (" + std::to_string(n) + " vs " +
                        std::to_string(g.node_count()) + ")");
    }
    all.insert(all.end(), g.edges().begin(), g.edges().end());
  }
  // Stable sort keeps the earliest member first among equal links.
  std::stable_sort(all.begin(), all.end(), edge_less);
  std::vector<Edge> unique;
  unique.reserve(all.size());
  for (const auto& e : all) {
    if (unique.empty() || unique.back().u != e.u || unique.back().v != e.v) unique.push_back(e);
  }
  return WeightedGraph::from_edges(n, std::move(unique));
}

double mean_degree(const WeightedGraph& g) {
  if (g.node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

}  // namespace lossynet
