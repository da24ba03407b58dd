#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lightspan/errors.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/spanner.hpp"
#include "oracles.hpp"

using namespace lightspan;
using oracle::make_graph;

namespace {

std::vector<EdgeKey> keys_of(const WeightedGraph& g, const std::vector<EdgeId>& ids) {
  std::vector<EdgeKey> out;
  for (EdgeId e : ids) out.push_back(g.edge(e).key);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
}

TEST(Graph, RejectsSelfLoopsDuplicatesAndNegativeWeights) {
  WeightedGraph g(3);
  g.add_edge(0, 1, 1);
  EXPECT_THROW(g.add_edge(1, 1, 1), InputError);
  EXPECT_THROW(g.add_edge(1, 0, 2), InputError);
  EXPECT_THROW(g.add_edge(1, 2, -1), InputError);
  EXPECT_THROW(g.add_edge(0, 3, 1), InputError);
  EXPECT_NO_THROW(g.add_edge(1, 2, 0));  // zero weights are legal
}

TEST(Mst, SingleEdge) {
  auto g = make_graph(2, {{0, 1, 5}});
  auto t = mst(g);
  ASSERT_EQ(t.edges.size(), 1u);
  EXPECT_EQ(t.weight, 5);
}

TEST(Mst, TriangleKeepsBothLightEdges) {
  auto g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  auto t = mst(g);
  EXPECT_EQ(t.weight, 2);
  EXPECT_EQ(keys_of(g, t.edges), (std::vector<EdgeKey>{{0, 1}, {1, 2}}));
  long long trees = 0;
  EXPECT_EQ(oracle::min_spanning_weight_exhaustive(g, &trees), 2);
  EXPECT_EQ(trees, 3);
}

TEST(Mst, UnitFourCycleTieBreak) {
  // Listed in canonical (u, v) order, so "lowest ids" and the (weight, u, v)
  // tie-break pick the same three edges.
  auto g = make_graph(4, {{0, 1, 1}, {0, 3, 1}, {1, 2, 1}, {2, 3, 1}});
  auto t = mst(g);
  EXPECT_EQ(t.weight, 3);
  std::vector<EdgeId> ids = t.edges;
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<EdgeId>{0, 1, 2}));
  EXPECT_EQ(oracle::min_spanning_weight_exhaustive(g), 3);
}

TEST(Mst, TieBreakFollowsEndpointsNotInsertionOrder) {
  auto g = make_graph(4, {{2, 3, 1}, {1, 2, 1}, {0, 3, 1}, {0, 1, 1}});
  EXPECT_EQ(keys_of(g, mst(g).edges), (std::vector<EdgeKey>{{0, 1}, {0, 3}, {1, 2}}));
}

TEST(Mst, DisconnectedGivesSpanningForest) {
  auto g = make_graph(5, {{0, 1, 2}, {3, 4, 7}});
  auto t = mst(g);
  EXPECT_EQ(t.edges.size(), 2u);
  EXPECT_EQ(t.weight, 9);
  EXPECT_FALSE(is_connected(g));
  EXPECT_EQ(component_labels(g), (std::vector<int>{0, 0, 1, 2, 2}));
}

TEST(Mst, MatchesExhaustiveEnumerationOnRandomSmallGraphs) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = generate_gnp(6 + static_cast<int>(seed % 3), 0.5, seed, WeightDistribution::uniform(1, 4));
    if (g.edge_count() > 20) continue;
    EXPECT_EQ(mst(g).weight, oracle::min_spanning_weight_exhaustive(g)) << "seed " << seed;
  }
}

TEST(Distances, Basics) {
  auto path = make_graph(3, {{0, 1, 2}, {1, 2, 3}});
  EXPECT_EQ(shortest_dist(path, 1, 1), Rational(0));
  EXPECT_EQ(shortest_dist(path, 0, 2), Rational(5));
  auto tri = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  EXPECT_EQ(shortest_dist(tri, 0, 2), Rational(2));
  EXPECT_EQ(shortest_path(tri, 0, 2), (std::vector<VertexId>{0, 1, 2}));
  EXPECT_THROW(shortest_dist(tri, 0, 3), InputError);
  auto split = make_graph(3, {{0, 1, 1}});
  EXPECT_FALSE(shortest_dist(split, 0, 2).has_value());
}

TEST(Distances, SkipAndBoundedQueries) {
  auto tri = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  EXPECT_EQ(single_source_distances(tri, 0, tri.find_edge(0, 1))[1], Rational(4));
  EXPECT_EQ(bounded_dist(tri, 0, 2, 5), Rational(2));
  EXPECT_FALSE(bounded_dist(tri, 0, 2, Rational(1, 2)).has_value());
}

TEST(Distances, MatchFloydWarshallAndTriangleInequality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = generate_gnp(14, 0.25, seed, WeightDistribution::uniform(1, 30));
    auto fast = all_pairs_distances(g);
    auto slow = oracle::all_pairs_floyd(g);
    ASSERT_EQ(fast, slow) << "seed " << seed;
    const int n = g.vertex_count();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (fast[a][b] && fast[b][c]) EXPECT_TRUE(leq(*fast[a][c], *fast[a][b] + *fast[b][c]));
  }
}

TEST(Subgraphs, Induced) {
  auto tri = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}});
  std::vector<VertexId> all{0, 1, 2};
  auto same = induced_subgraph(tri, all);
  EXPECT_EQ(same.edge_count(), 3);
  EXPECT_EQ(same.total_weight(), 5);
  std::vector<VertexId> two{0, 2};
  auto one = induced_subgraph(tri, two);
  ASSERT_EQ(one.edge_count(), 1);
  EXPECT_EQ(one.edge(0).key, EdgeKey(0, 1));
  EXPECT_EQ(one.edge(0).weight, 3);
  EXPECT_EQ(induced_subgraph(tri, std::vector<VertexId>{}).vertex_count(), 0);
  EXPECT_THROW(induced_subgraph(tri, std::vector<VertexId>{0, 5}), InputError);
  EXPECT_THROW(induced_subgraph(tri, std::vector<VertexId>{1, 1}), InputError);
}

TEST(GraphIo, RoundTripAndErrors) {
  std::istringstream in("# comment\n3 2\n0 1 1 2\n1 2 3\n");
  auto g = read_graph(in);
  EXPECT_EQ(g.edge(0).weight, Rational(1, 2));
  std::ostringstream out;
  write_graph(out, g);
  std::istringstream back(out.str());
  auto h = read_graph(back);
  ASSERT_EQ(h.edge_count(), 2);
  EXPECT_EQ(h.edge(1).weight, 3);

  std::istringstream loop("2 1\n1 1 4\n");
  EXPECT_THROW(read_graph(loop), InputError);
  std::istringstream dup("2 2\n0 1 4\n1 0 5\n");
  EXPECT_THROW(read_graph(dup), InputError);
  std::istringstream short_file("3 2\n0 1 4\n");
  EXPECT_THROW(read_graph(short_file), InputError);
}

TEST(Mst, ContainedInEveryGreedySpanner) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = generate_gnp(15, 0.4, seed);
    auto t = mst(g);
    for (Rational eps : {Rational(1, 10), Rational(1, 2), Rational(2)}) {
      auto s = greedy_spanner(g, eps);
      for (EdgeId e : t.edges) EXPECT_TRUE(s.graph.has_edge(g.edge(e).key.u, g.edge(e).key.v));
    }
  }
}
