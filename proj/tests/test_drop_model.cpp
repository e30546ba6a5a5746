#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>

#include "lossynet/drop_model.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/generators.hpp"

using namespace lossynet;

namespace {

WeightedGraph many_edges(std::size_t count) {
  // A disjoint union of single links: count edges on 2 count nodes.
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < count; ++i) edges.push_back({2 * i, 2 * i + 1, 1.0});
  return WeightedGraph::from_edges(2 * count, std::move(edges));
}

}  // namespace

TEST_CASE("no drops keeps the base graph, certain drops empty it", "[drops]") {
  const auto g = assign_weights(generate(GraphModelSpec::erdos_renyi(30, 0.3, 2)), 0, 10, 2);
  Rng rng(1);
  CHECK(sample_active_links(g, DropSchedule::homogeneous(0.0), 0, rng) == g);
  CHECK(sample_active_links(g, DropSchedule::homogeneous(1.0), 0, rng).edge_count() == 0);
}

TEST_CASE("single draw removal fraction is binomial around 2p - p^2", "[drops]") {
  const auto g = many_edges(10000);
  Rng rng(77);
  const auto mask = sample_active_mask(g, DropSchedule::homogeneous(0.4), 0, rng);
  const double removed = static_cast<double>(g.edge_count() - mask.count());
  const double p = 0.64;
  const double n = 10000.0;
  CHECK(std::abs(removed - n * p) <= 3.0 * std::sqrt(n * p * (1 - p)));
}

TEST_CASE("removal frequency converges to 2p - p^2", "[drops]") {
  const auto g = many_edges(1000);
  Rng rng(78);
  const auto schedule = DropSchedule::homogeneous(0.27);
  std::size_t removed = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    removed += g.edge_count() - sample_active_mask(g, schedule, k, rng).count();
  }
  const double freq = static_cast<double>(removed) / 1e5;
  const double expected = 2 * 0.27 - 0.27 * 0.27;
  CHECK(std::abs(freq - expected) <= 0.01 * expected);
}

TEST_CASE("sampled subgraphs keep base weights and symmetry", "[drops]") {
  const auto g = assign_weights(generate(GraphModelSpec::erdos_renyi(25, 0.4, 5)), 0, 10, 6);
  Rng rng(3);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto a = sample_active_links(g, DropSchedule::homogeneous(0.3), k, rng);
    for (const auto& e : a.edges()) CHECK(e.weight == g.weight(e.u, e.v));
    CHECK(a.weight_matrix().is_symmetric());
  }
}

TEST_CASE("heterogeneous rates are applied per link", "[drops]") {
  const auto g = many_edges(2000);
  std::vector<double> rates(2000, 0.0);
  for (std::size_t e = 1000; e < 2000; ++e) rates[e] = 1.0;
  Rng rng(4);
  const auto mask = sample_active_mask(g, DropSchedule::heterogeneous(rates), 0, rng);
  for (std::size_t e = 0; e < 1000; ++e) CHECK(mask.test(e));
  for (std::size_t e = 1000; e < 2000; ++e) CHECK_FALSE(mask.test(e));
}

TEST_CASE("rate specs map onto base links", "[drops]") {
  const auto g = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  DropRateSpec spec;
  spec.homogeneous = 0.2;
  spec.per_link = {{2, 1, 0.7}};
  const auto s = DropSchedule::from_rate_spec(g, spec);
  CHECK(s.mode == DropMode::heterogeneous);
  CHECK(s.per_link == std::vector<double>{0.2, 0.7});
  CHECK(s.max_rate() == 0.7);
  spec.per_link = {{0, 2, 0.5}};
  CHECK_THROWS_AS(DropSchedule::from_rate_spec(g, spec), DomainError);
}

TEST_CASE("scheduled rates hold for a period and permute each cycle", "[drops]") {
  const std::vector<double> rates{0.4, 0.46, 0.54, 0.62, 0.73};
  const auto s = DropSchedule::scheduled(rates, 40, 2020);
  for (std::uint64_t cycle = 0; cycle < 20; ++cycle) {
    auto order = s.cycle_order(cycle);
    for (std::uint64_t slot = 0; slot < 5; ++slot) {
      const std::uint64_t start = cycle * 200 + slot * 40;
      for (std::uint64_t k = start; k < start + 40; ++k) CHECK(s.rate_at(k) == order[slot]);
    }
    std::sort(order.begin(), order.end());
    CHECK(order == rates);
  }
  bool differs = false;
  for (std::uint64_t c = 1; c < 20; ++c) differs |= s.cycle_order(c) != s.cycle_order(0);
  CHECK(differs);
  CHECK(s.max_rate() == 0.73);
  CHECK(DropSchedule::scheduled(rates, 40, 2020).cycle_order(3) == s.cycle_order(3));
}

TEST_CASE("schedule validation", "[drops]") {
  CHECK_THROWS_AS(DropSchedule::homogeneous(1.5).validate(3), DomainError);
  CHECK_THROWS_AS(DropSchedule::scheduled({}, 40).validate(3), DomainError);
  CHECK_THROWS_AS(DropSchedule::scheduled({0.1}, 0).validate(3), DomainError);
  CHECK_THROWS_AS(DropSchedule::heterogeneous({0.1, 0.2}).validate(3), DomainError);
  CHECK_THROWS_AS(DropSchedule::heterogeneous({0.1, 0.2}).rate_at(0), DomainError);
  CHECK(parse_drop_mode("scheduled") == DropMode::scheduled);
}
