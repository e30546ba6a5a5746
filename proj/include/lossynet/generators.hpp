#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lossynet/graph.hpp"

namespace lossynet {

enum class GraphModel { erdos_renyi, small_world, scale_free, square_grid };

std::string_view to_string(GraphModel model);
/// Accepts the long names and the short CLI forms (er, sw, sf, grid).
std::optional<GraphModel> parse_graph_model(std::string_view text);

/// A random-graph ensemble plus its seed. Only the fields of `kind` are read.
struct GraphModelSpec {
  GraphModel kind = GraphModel::erdos_renyi;
  std::size_t nodes = 0;                // ER, SW, SF
  double link_probability = 0.0;        // ER: p
  std::size_t ring_neighbors = 1;       // SW: m (neighbors on each side)
  double shortcut_probability = 0.0;    // SW: theta
  double degree_exponent = 3.0;         // SF: sigma
  std::size_t min_degree = 1;           // SF: minimum degree
  std::size_t rows = 0;                 // grid
  std::size_t cols = 0;                 // grid
  std::uint64_t seed = 0;

  static GraphModelSpec erdos_renyi(std::size_t n, double p, std::uint64_t seed = 0);
  static GraphModelSpec small_world(std::size_t n, std::size_t m, double theta,
                                    std::uint64_t seed = 0);
  static GraphModelSpec scale_free(std::size_t n, double sigma, std::size_t min_degree,
                                   std::uint64_t seed = 0);
  static GraphModelSpec square_grid(std::size_t rows, std::size_t cols);

  /// Throws DomainError when a parameter is outside its domain.
  void validate() const;
  std::size_t node_count() const;
  /// Short human-readable parameter list, e.g. "n=20;p=0.3".
  std::string summary() const;

  bool operator==(const GraphModelSpec&) const = default;
};

/// Draws a unit-weight graph from the ensemble. Pure function of `spec`.
///
/// - Erdos-Renyi: every pair (i, j), i < j, linked independently with p.
/// - Small-world: ring lattice of m nearest neighbors per side; each ring
///   edge spawns one shortcut to a uniform random node with probability theta.
/// - Scale-free: configuration model on a degree sequence drawn from
///   P(d) ~ d^-sigma truncated to [min_degree, n-1]. Self-loops and repeated
///   links are rejected with bounded rewiring; leftover stubs are discarded.
/// - Square grid: rows x cols lattice, 4-neighborhood, no wrap-around.
WeightedGraph generate(const GraphModelSpec& spec);

/// Gives every link one weight drawn uniformly from (low, high], the same
/// value for both directions. low may be 0 since the interval is open there;
/// low == high yields exactly `high`. Deterministic given `seed`.
WeightedGraph assign_weights(const WeightedGraph& g, double low, double high, std::uint64_t seed);

}  // namespace lossynet
