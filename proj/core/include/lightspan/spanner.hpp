#pragma once

#include <span>
#include <string>
#include <vector>

#include "lightspan/graph.hpp"

namespace lightspan {

/// A spanner: the same vertex set as its parent graph, a subset of its edges,
/// and the stretch parameter it was built for.
struct Spanner {
  WeightedGraph graph;
  Rational epsilon;

  Rational weight() const { return graph.total_weight(); }
};

/// Greedy (1+eps)-spanner: edges in canonical order, uv kept iff
/// (1+eps)*w(uv) <= d_S(u,v) in the partial spanner.
Spanner greedy_spanner(const WeightedGraph& g, const Rational& eps);

struct StretchViolation {
  VertexId u;
  VertexId v;
  Distance spanner_distance;
  Distance graph_distance;
};

struct StretchReport {
  std::vector<StretchViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Exact all-pairs check d_S(u,v) <= (1+eps) d_G(u,v).
/// Throws InputError when s uses an edge absent from g.
StretchReport verify_stretch(const WeightedGraph& g, const Spanner& s);

struct EdgePathViolation {
  EdgeKey edge;
  Rational lhs;        // (1+eps) w(e)
  Rational detour;     // shortest u-v distance in S \ {e}
};

struct EdgePathReport {
  std::vector<EdgePathViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// For every e=uv in S: (1+eps) w(e) <= d_{S \ e}(u,v). The shortest detour is
/// the strongest witness, so this covers every u-v path in S \ e.
EdgePathReport verify_edge_path_property(const Spanner& s);

/// True iff the greedy spanner of the subgraph formed by `subset` (edge ids
/// into s.graph), at s.epsilon, is that subgraph itself.
bool verify_hereditary(const Spanner& s, std::span<const EdgeId> subset);

/// w(S) / w(MST(g)). Throws InputError when w(MST(g)) == 0.
Rational lightness(const WeightedGraph& g, const Spanner& s);

// Spanner file: graph file format with a "# eps p/q" header comment.
void write_spanner(std::ostream& out, const Spanner& s);
Spanner read_spanner_file(const std::string& path);

}  // namespace lightspan
