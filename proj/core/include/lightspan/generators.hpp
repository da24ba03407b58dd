#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lightspan/graph.hpp"
#include "lightspan/pathdec.hpp"

namespace lightspan {

struct OuterplanarInstance {
  WeightedGraph graph;
  std::vector<VertexId> boundary;  // outer face in cyclic order
  int attempts = 1;                // weightings tried before one was accepted
  bool fallback = false;           // true when the boundary-favouring weighting was used
};

/// Random outer-planar graph: a random triangulation of a convex n-gon keeps
/// each chord with probability `chord_keep`; the whole boundary is always
/// present and vertex labels are shuffled.
///
/// When `keep_boundary_eps` is set, the weighting is redrawn (up to
/// `max_attempts` times) until the greedy spanner for that epsilon keeps
/// every boundary edge, so that the spanner itself has the same outer face.
/// After that the generator switches to a weighting where boundary edges are
/// strictly lighter than chords; InputError if even that fails (epsilon too
/// large for the cycle length).
OuterplanarInstance generate_outerplanar(int n, std::uint64_t seed, const WeightDistribution& weights = {},
                                         double chord_keep = 0.5,
                                         std::optional<Rational> keep_boundary_eps = std::nullopt,
                                         int max_attempts = 32);

/// Random connected subgraph of a random k-path: every edge survives with
/// probability `keep`, then dropped edges are restored in random order until
/// the graph is connected. The k-path's decomposition is returned unchanged
/// and remains valid.
KPathInstance generate_partial_kpath(int n, int pw, std::uint64_t seed, const WeightDistribution& weights = {},
                                     double keep = 0.6);

/// Erdos-Renyi G(n, p) with weights from `weights`; may be disconnected.
WeightedGraph generate_gnp(int n, double p, std::uint64_t seed, const WeightDistribution& weights = {});

}  // namespace lightspan
