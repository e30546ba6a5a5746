#include "lossynet/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "lossynet/errors.hpp"
#include "lossynet/format.hpp"
#include "lossynet/rng.hpp"

namespace lossynet {

namespace {

constexpr int kShortcutRetries = 16;
constexpr int kDegreeResamples = 64;
constexpr int kWiringRounds = 50;

class LinkSet {
 public:
  explicit LinkSet(std::size_t n) : n_(n) {}
  bool insert(std::size_t u, std::size_t v) {
    if (u > v) std::swap(u, v);
    return keys_.insert(static_cast<std::uint64_t>(u) * n_ + v).second;
  }
  bool contains(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    return keys_.count(static_cast<std::uint64_t>(u) * n_ + v) > 0;
  }

 private:
  std::size_t n_;
  std::unordered_set<std::uint64_t> keys_;
};

WeightedGraph erdos_renyi(const GraphModelSpec& spec) {
  Rng rng(spec.seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < spec.nodes; ++i) {
    for (std::size_t j = i + 1; j < spec.nodes; ++j) {
      if (rng.bernoulli(spec.link_probability)) edges.push_back({i, j, 1.0});
    }
  }
  return WeightedGraph::from_edges(spec.nodes, std::move(edges));
}

WeightedGraph small_world(const GraphModelSpec& spec) {
  const std::size_t n = spec.nodes;
  Rng rng(spec.seed);
  LinkSet links(n);
  std::vector<Edge> ring;
  for (std::size_t k = 1; k <= spec.ring_neighbors; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + k) % n;
      if (links.insert(i, j)) ring.push_back({i, j, 1.0});
    }
  }
  std::vector<Edge> edges = ring;
  for (const auto& e : ring) {
    if (!rng.bernoulli(spec.shortcut_probability)) continue;
    for (int attempt = 0; attempt < kShortcutRetries; ++attempt) {
      const auto target = static_cast<std::size_t>(rng.below(n));
      if (target == e.u || links.contains(e.u, target)) continue;
      links.insert(e.u, target);
      edges.push_back({e.u, target, 1.0});
      break;
    }
  }
  return WeightedGraph::from_edges(n, std::move(edges));
}

WeightedGraph scale_free(const GraphModelSpec& spec) {
  const std::size_t n = spec.nodes;
  const std::size_t dmin = spec.min_degree;
  const std::size_t dmax = n - 1;
  Rng rng(spec.seed);

  std::vector<double> cdf;
  double total = 0.0;
  for (std::size_t d = dmin; d <= dmax; ++d) {
    total += std::pow(static_cast<double>(d), -spec.degree_exponent);
    cdf.push_back(total);
  }
  auto draw_degree = [&]() {
    const double r = rng.uniform() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    const auto offset = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    return dmin + offset;
  };

  std::vector<std::size_t> degree(n);
  std::size_t stub_sum = 0;
  for (auto& d : degree) {
    d = draw_degree();
    stub_sum += d;
  }
  for (int attempt = 0; attempt < kDegreeResamples && stub_sum % 2 == 1; ++attempt) {
    stub_sum -= degree.back();
    degree.back() = draw_degree();
    stub_sum += degree.back();
  }
  if (stub_sum % 2 == 1) {
    // Still odd: nudge the last degree by one within range.
    if (degree.back() < dmax) {
      ++degree.back();
    } else if (degree.back() > dmin) {
      --degree.back();
    }
  }

  std::vector<std::size_t> stubs;
  for (std::size_t i = 0; i < n; ++i) stubs.insert(stubs.end(), degree[i], i);

  LinkSet links(n);
  std::vector<Edge> edges;
  for (int round = 0; round < kWiringRounds && stubs.size() >= 2; ++round) {
    rng.shuffle(std::span<std::size_t>(stubs));
    std::vector<std::size_t> leftover;
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
      const auto a = stubs[k];
      const auto b = stubs[k + 1];
      if (a != b && links.insert(a, b)) {
        edges.push_back({a, b, 1.0});
      } else {
        leftover.push_back(a);
        leftover.push_back(b);
      }
    }
    if (stubs.size() % 2 == 1) leftover.push_back(stubs.back());
    stubs = std::move(leftover);
  }
  return WeightedGraph::from_edges(n, std::move(edges));
}

WeightedGraph square_grid(const GraphModelSpec& spec) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const std::size_t v = r * spec.cols + c;
      if (c + 1 < spec.cols) edges.push_back({v, v + 1, 1.0});
      if (r + 1 < spec.rows) edges.push_back({v, v + spec.cols, 1.0});
    }
  }
  return WeightedGraph::from_edges(spec.rows * spec.cols, std::move(edges));
}

}  // namespace

std::string_view to_string(GraphModel model) {
  switch (model) {
    case GraphModel::erdos_renyi: return "erdos-renyi";
    case GraphModel::small_world: return "small-world";
    case GraphModel::scale_free: return "scale-free";
    case GraphModel::square_grid: return "square-grid";
  }
  return "unknown";
}

std::optional<GraphModel> parse_graph_model(std::string_view text) {
  if (text == "er" || text == "erdos-renyi") return GraphModel::erdos_renyi;
  if (text == "sw" || text == "small-world") return GraphModel::small_world;
  if (text == "sf" || text == "scale-free") return GraphModel::scale_free;
  if (text == "grid" || text == "square-grid") return GraphModel::square_grid;
  return std::nullopt;
}

GraphModelSpec GraphModelSpec::erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  GraphModelSpec s;
  s.kind = GraphModel::erdos_renyi;
  s.nodes = n;
  s.link_probability = p;
  s.seed = seed;
  return s;
}

GraphModelSpec GraphModelSpec::small_world(std::size_t n, std::size_t m, double theta,
                                           std::uint64_t seed) {
  GraphModelSpec s;
  s.kind = GraphModel::small_world;
  s.nodes = n;
  s.ring_neighbors = m;
  s.shortcut_probability = theta;
  s.seed = seed;
  return s;
}

GraphModelSpec GraphModelSpec::scale_free(std::size_t n, double sigma, std::size_t min_degree,
                                          std::uint64_t seed) {
  GraphModelSpec s;
  s.kind = GraphModel::scale_free;
  s.nodes = n;
  s.degree_exponent = sigma;
  s.min_degree = min_degree;
  s.seed = seed;
  return s;
}

GraphModelSpec GraphModelSpec::square_grid(std::size_t rows, std::size_t cols) {
  GraphModelSpec s;
  s.kind = GraphModel::square_grid;
  s.rows = rows;
  s.cols = cols;
  return s;
}

void GraphModelSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(what);
  };
  switch (kind) {
    case GraphModel::erdos_renyi:
      require(nodes >= 1, "erdos-renyi: n must be at least 1");
      require(link_probability >= 0.0 && link_probability <= 1.0,
              "erdos-renyi: link probability must lie in [0,1]");
      break;
    case GraphModel::small_world:
      require(ring_neighbors >= 1, "small-world: m must be at least 1");
      require(nodes > 2 * ring_neighbors, "small-world: n must exceed 2m");
      require(shortcut_probability >= 0.0 && shortcut_probability <= 1.0,
              "small-world: shortcut probability must lie in [0,1]");
      break;
    case GraphModel::scale_free:
      require(nodes >= 2, "scale-free: n must be at least 2");
      require(degree_exponent > 2.0, "scale-free: sigma must exceed 2");
      require(min_degree >= 1, "scale-free: minimum degree must be at least 1");
      require(min_degree <= nodes - 1, "scale-free: minimum degree must not exceed n-1");
      break;
    case GraphModel::square_grid:
      require(rows >= 1 && cols >= 1 && rows * cols >= 2, "square-grid: rows*cols must be >= 2");
      break;
  }
}

std::size_t GraphModelSpec::node_count() const {
  return kind == GraphModel::square_grid ? rows * cols : nodes;
}

std::string GraphModelSpec::summary() const {
  std::ostringstream out;
  switch (kind) {
    case GraphModel::erdos_renyi:
      out << "n=" << nodes << ";p=" << format_double(link_probability);
      break;
    case GraphModel::small_world:
      out << "n=" << nodes << ";m=" << ring_neighbors
          << ";theta=" << format_double(shortcut_probability);
      break;
    case GraphModel::scale_free:
      out << "n=" << nodes << ";sigma=" << format_double(degree_exponent)
          << ";min_degree=" << min_degree;
      break;
    case GraphModel::square_grid:
      out << "rows=" << rows << ";cols=" << cols;
      break;
  }
  return out.str();
}

WeightedGraph generate(const GraphModelSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GraphModel::erdos_renyi: return erdos_renyi(spec);
    case GraphModel::small_world: return small_world(spec);
    case GraphModel::scale_free: return scale_free(spec);
    case GraphModel::square_grid: return square_grid(spec);
  }
  throw DomainError("unknown graph model");
}

WeightedGraph assign_weights(const WeightedGraph& g, double low, double high, std::uint64_t seed) {
  // Draws come from (low, high], so low = 0 still yields strictly positive weights.
  if (!(low >= 0.0)) throw DomainError("weight range: low must be non-negative");
  if (!(high > 0.0) || !(high >= low) || !std::isfinite(high)) {
    throw DomainError("weight range: need 0 <= low <= high with high > 0");
  }
  Rng rng(seed);
  WeightedGraph out = g;
  for (std::size_t i = 0; i < out.edge_count(); ++i) {
    out.set_weight(i, low == high ? high : rng.uniform_open_closed(low, high));
  }
  return out;
}

}  // namespace lossynet
