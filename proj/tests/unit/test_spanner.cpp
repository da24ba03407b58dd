#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lightspan/errors.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/spanner.hpp"
#include "oracles.hpp"

using namespace lightspan;
using oracle::make_graph;

namespace {

Spanner as_spanner(const WeightedGraph& g, Rational eps) { return Spanner{g, eps}; }

}  // namespace

TEST(GreedySpanner, TreeInputIsReturnedUnchanged) {
  auto tree = make_graph(5, {{0, 1, 3}, {1, 2, 1}, {1, 3, 8}, {3, 4, 2}});
  for (Rational eps : {Rational(1, 100), Rational(1), Rational(50)})
    EXPECT_EQ(greedy_spanner(tree, eps).graph.edge_count(), 4);
}

TEST(GreedySpanner, SkipsNearlyShortcutEdge) {
  // (11/10) * (19/10) = 209/100 > 2, so the heavy edge is not needed.
  auto g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, Rational(19, 10)}});
  auto s = greedy_spanner(g, Rational(1, 10));
  EXPECT_EQ(s.graph.edge_count(), 2);
  EXPECT_FALSE(s.graph.has_edge(0, 2));
}

TEST(GreedySpanner, KeepsWholeUnitFourCycleAtHalf) {
  auto g = make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}});
  auto s = greedy_spanner(g, Rational(1, 2));
  EXPECT_EQ(s.graph.edge_count(), 4);
  EXPECT_EQ(lightness(g, s), Rational(4, 3));
}

TEST(GreedySpanner, RejectsNonPositiveEpsilon) {
  auto g = make_graph(2, {{0, 1, 1}});
  EXPECT_THROW(greedy_spanner(g, 0), InputError);
  EXPECT_THROW(greedy_spanner(g, -1), InputError);
}

TEST(GreedySpanner, IsIdempotent) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto g = generate_gnp(20, 0.3, seed);
    auto s = greedy_spanner(g, Rational(1, 3));
    auto again = greedy_spanner(s.graph, Rational(1, 3));
    EXPECT_EQ(again.graph.edge_count(), s.graph.edge_count());
  }
}

TEST(VerifyStretch, FullGraphAlwaysPasses) {
  auto g = generate_gnp(12, 0.5, 3);
  EXPECT_TRUE(verify_stretch(g, as_spanner(g, Rational(1, 1000))).ok());
}

TEST(VerifyStretch, MstOfUnitTriangleFailsAtOneTenth) {
  auto g = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  auto t = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
  auto rep = verify_stretch(g, as_spanner(t, Rational(1, 10)));
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(EdgeKey(rep.violations[0].u, rep.violations[0].v), EdgeKey(0, 2));
  EXPECT_EQ(rep.violations[0].spanner_distance, Rational(2));
  EXPECT_EQ(rep.violations[0].graph_distance, Rational(1));
}

TEST(VerifyStretch, ForeignEdgeIsInputError) {
  auto g = make_graph(3, {{0, 1, 1}, {1, 2, 1}});
  auto s = make_graph(3, {{0, 2, 1}});
  EXPECT_THROW(verify_stretch(g, as_spanner(s, 1)), InputError);
}

TEST(VerifyStretch, GreedyOutputMatchesFloydOracle) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto g = generate_gnp(16, 0.35, seed, WeightDistribution::uniform(1, 20));
    Rational eps(1 + static_cast<long>(seed % 4), 4);
    auto s = greedy_spanner(g, eps);
    EXPECT_TRUE(verify_stretch(g, s).ok());
    auto dg = oracle::all_pairs_floyd(g);
    auto ds = oracle::all_pairs_floyd(s.graph);
    for (int u = 0; u < g.vertex_count(); ++u)
      for (int v = 0; v < g.vertex_count(); ++v) {
        ASSERT_EQ(dg[u][v].has_value(), ds[u][v].has_value());
        if (dg[u][v]) EXPECT_LE(*ds[u][v], (1 + eps) * *dg[u][v]);
      }
  }
}

TEST(EdgePathProperty, UnitTriangleAtHalfAndThreeHalves) {
  auto tri = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  EXPECT_TRUE(verify_edge_path_property(as_spanner(tri, Rational(1, 2))).ok());
  auto rep = verify_edge_path_property(as_spanner(tri, Rational(3, 2)));
  EXPECT_EQ(rep.violations.size(), 3u);
  EXPECT_EQ(rep.violations[0].lhs, Rational(5, 2));
  EXPECT_EQ(rep.violations[0].detour, Rational(2));
}

TEST(EdgePathProperty, BridgeIsVacuous) {
  auto g = make_graph(2, {{0, 1, 9}});
  EXPECT_TRUE(verify_edge_path_property(as_spanner(g, Rational(1000))).ok());
}

TEST(EdgePathProperty, HoldsOnGreedyOutput) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = generate_gnp(18, 0.4, seed);
    EXPECT_TRUE(verify_edge_path_property(greedy_spanner(g, Rational(1, 2))).ok());
  }
}

TEST(Hereditary, WholeSpannerAndItsMst) {
  auto g = generate_gnp(20, 0.3, 11);
  auto s = greedy_spanner(g, Rational(1, 2));
  std::vector<EdgeId> all(s.graph.edge_count());
  std::iota(all.begin(), all.end(), 0);
  EXPECT_TRUE(verify_hereditary(s, all));
  EXPECT_TRUE(verify_hereditary(s, mst(s.graph).edges));
}

TEST(Hereditary, RandomSubsets) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = greedy_spanner(generate_gnp(25, 0.3, seed), Rational(1, 4));
    for (int t = 0; t < 5; ++t) {
      std::vector<EdgeId> subset;
      for (EdgeId e = 0; e < s.graph.edge_count(); ++e)
        if (rng() % 2) subset.push_back(e);
      EXPECT_TRUE(verify_hereditary(s, subset));
    }
  }
}

TEST(Hereditary, DetectsNonGreedySubgraph) {
  // At eps = 3/2 greedy skips the third unit edge: 5/2 > 2.
  auto tri = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  std::vector<EdgeId> all{0, 1, 2};
  EXPECT_FALSE(verify_hereditary(as_spanner(tri, Rational(3, 2)), all));
}

TEST(Lightness, MstAndZeroWeight) {
  auto g = make_graph(3, {{0, 1, 2}, {1, 2, 2}, {0, 2, 3}});
  EXPECT_EQ(lightness(g, as_spanner(make_graph(3, {{0, 1, 2}, {1, 2, 2}}), 1)), 1);
  auto zero = make_graph(2, {{0, 1, 0}});
  EXPECT_THROW(lightness(zero, as_spanner(zero, 1)), InputError);
}

TEST(Lightness, OuterplanarWithinPlanarBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = generate_outerplanar(8 + static_cast<int>(seed % 20), seed);
    auto s = greedy_spanner(inst.graph, Rational(1, 2));
    EXPECT_LE(lightness(inst.graph, s), 5);
  }
}

TEST(SpannerIo, RoundTripKeepsEpsilon) {
  auto s = greedy_spanner(make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}), Rational(2, 3));
  std::ostringstream out;
  write_spanner(out, s);
  EXPECT_EQ(out.str().rfind("# eps 2/3\n", 0), 0u);
}
