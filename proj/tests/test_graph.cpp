#include "catch_amalgamated.hpp"

#include <sstream>

#include "lossynet/edge_list.hpp"
#include "lossynet/errors.hpp"
#include "lossynet/graph.hpp"

using namespace lossynet;
using Catch::Matchers::WithinAbs;

namespace {

WeightedGraph triangle_123() {
  return WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}});
}

}  // namespace

TEST_CASE("from_edges normalizes endpoint order and sorts", "[graph]") {
  const auto g = WeightedGraph::from_edges(4, {{3, 1, 2.0}, {0, 2, 1.0}});
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edges()[0] == Edge{0, 2, 1.0});
  CHECK(g.edges()[1] == Edge{1, 3, 2.0});
  CHECK(g.weight(3, 1) == 2.0);
  CHECK(g.weight(1, 3) == 2.0);
  CHECK(g.weight(0, 1) == 0.0);
}

TEST_CASE("from_edges rejects invalid input", "[graph]") {
  CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{1, 1, 1.0}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 0, 1.0}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 3, 1.0}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 1, 0.0}}), DomainError);
  CHECK_THROWS_AS(WeightedGraph::from_edges(3, {{0, 1, -1.0}}), DomainError);
}

TEST_CASE("laplacian of K2 and of an empty graph", "[graph]") {
  const auto l = laplacian(WeightedGraph::from_edges(2, {{0, 1, 1.0}}));
  CHECK(l(0, 0) == 1.0);
  CHECK(l(0, 1) == -1.0);
  CHECK(l(1, 0) == -1.0);
  CHECK(l(1, 1) == 1.0);

  const auto z = laplacian(WeightedGraph(3));
  for (double v : z.data()) CHECK(v == 0.0);
}

TEST_CASE("laplacian of a weighted triangle matches D - W", "[graph]") {
  const auto g = triangle_123();
  const auto l = laplacian(g);
  const double w[3][3] = {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
  for (std::size_t i = 0; i < 3; ++i) {
    double row = 0.0;
    double deg = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      row += l(i, j);
      deg += w[i][j];
      if (i != j) CHECK(l(i, j) == -w[i][j]);
    }
    CHECK(l(i, i) == deg);
    CHECK_THAT(row, WithinAbs(0.0, 1e-15));
  }
  CHECK(l.is_symmetric());
}

TEST_CASE("connectivity queries", "[graph]") {
  CHECK(is_connected(WeightedGraph::from_edges(2, {{0, 1, 1.0}})));
  CHECK_FALSE(is_connected(WeightedGraph(2)));
  CHECK(is_connected(WeightedGraph(1)));
  CHECK_FALSE(is_connected(WeightedGraph(0)));
  const auto g = WeightedGraph::from_edges(5, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK(component_count(g) == 3);
  CHECK_THROWS_AS(hop_diameter(g), DomainError);
  const auto path = WeightedGraph::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  CHECK(hop_diameter(path) == 3);
}

TEST_CASE("union of two spanning halves is connected", "[graph]") {
  const auto a = WeightedGraph::from_edges(4, {{0, 1, 1.0}, {2, 3, 5.0}});
  const auto b = WeightedGraph::from_edges(4, {{1, 2, 2.0}, {2, 3, 7.0}});
  CHECK_FALSE(is_connected(a));
  CHECK_FALSE(is_connected(b));
  const std::vector<WeightedGraph> parts{a, b};
  const auto u = union_graph(parts);
  CHECK(is_connected(u));
  CHECK(u.edge_count() == 3);
  CHECK(u.weight(2, 3) == 5.0);

  const std::vector<WeightedGraph> bad{a, WeightedGraph(5)};
  CHECK_THROWS_AS(union_graph(bad), DomainError);
}

TEST_CASE("mean degree and degrees", "[graph]") {
  const auto g = triangle_123();
  CHECK(mean_degree(g) == 2.0);
  CHECK(g.degrees() == std::vector<std::size_t>{2, 2, 2});
  CHECK(g.weighted_degrees() == std::vector<double>{4.0, 3.0, 5.0});
}

TEST_CASE("edge masks select subgraphs", "[graph]") {
  const auto g = triangle_123();
  EdgeMask m(g.edge_count());
  CHECK(m.count() == 0);
  m.set(2);
  CHECK(m.test(2));
  CHECK(m.count() == 1);
  const auto s = g.subgraph(m);
  CHECK(s.node_count() == 3);
  REQUIRE(s.edge_count() == 1);
  CHECK(s.edges()[0] == g.edges()[2]);

  EdgeMask big(130);
  big.set(129);
  EdgeMask other(130);
  other.set(0);
  big |= other;
  CHECK(big.count() == 2);
}

TEST_CASE("disjoint sets track components and the largest one", "[graph]") {
  DisjointSets ds(6);
  CHECK(ds.components() == 6);
  CHECK(ds.largest() == 1);
  CHECK(ds.unite(0, 1));
  CHECK(ds.unite(1, 2));
  CHECK_FALSE(ds.unite(0, 2));
  CHECK(ds.unite(4, 5));
  CHECK(ds.components() == 3);
  CHECK(ds.largest() == 3);
}

TEST_CASE("edge list text round-trips", "[graph]") {
  const auto g = triangle_123();
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream in(out.str());
  CHECK(read_edge_list(in) == g);

  std::istringstream missing("1 2 1\n");
  CHECK_THROWS(read_edge_list(missing));
  std::istringstream comment("# net\nn 2\n\n1 2 0.5\n");
  CHECK(read_edge_list(comment).weight(0, 1) == 0.5);
}
