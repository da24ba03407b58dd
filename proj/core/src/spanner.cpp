#include "lightspan/spanner.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "lightspan/errors.hpp"

namespace lightspan {

Spanner greedy_spanner(const WeightedGraph& g, const Rational& eps) {
  if (sgn(eps) <= 0) throw InputError("epsilon must be positive, got " + to_string(eps));
  Spanner s{WeightedGraph(g.vertex_count()), eps};
  const Rational stretch = 1 + eps;
  for (EdgeId id : canonical_edge_order(g)) {
    const Edge& e = g.edge(id);
    Rational need = stretch * e.weight;
    // The edge is added iff need <= d_S(u,v); a bounded search that proves
    // d_S(u,v) >= need (or infinity) is enough.
    Distance d = bounded_dist(s.graph, e.key.u, e.key.v, need);
    if (leq(need, d)) s.graph.add_edge(e.key.u, e.key.v, e.weight);
  }
  return s;
}

StretchReport verify_stretch(const WeightedGraph& g, const Spanner& s) {
  if (s.graph.vertex_count() != g.vertex_count())
    throw InputError("spanner and graph have different vertex counts");
  for (const Edge& e : s.graph.edges()) {
    EdgeId id = g.find_edge(e.key.u, e.key.v);
    if (id == kNoEdge || g.edge(id).weight != e.weight)
      throw InputError("spanner edge " + std::to_string(e.key.u) + "-" + std::to_string(e.key.v) +
                       " is not an edge of the graph");
  }
  StretchReport report;
  const Rational stretch = 1 + s.epsilon;
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    auto dg = single_source_distances(g, u);
    auto ds = single_source_distances(s.graph, u);
    for (VertexId v = u + 1; v < g.vertex_count(); ++v) {
      bool bad;
      if (!dg[v]) bad = ds[v].has_value();  // cannot happen for subgraphs, kept for completeness
      else bad = !ds[v] || *ds[v] > stretch * *dg[v];
      if (bad) report.violations.push_back({u, v, ds[v], dg[v]});
    }
  }
  return report;
}

EdgePathReport verify_edge_path_property(const Spanner& s) {
  EdgePathReport report;
  const Rational stretch = 1 + s.epsilon;
  for (EdgeId id = 0; id < s.graph.edge_count(); ++id) {
    const Edge& e = s.graph.edge(id);
    Rational lhs = stretch * e.weight;
    Distance detour = bounded_dist(s.graph, e.key.u, e.key.v, lhs, id);
    if (!leq(lhs, detour)) report.violations.push_back({e.key, lhs, *detour});
  }
  return report;
}

bool verify_hereditary(const Spanner& s, std::span<const EdgeId> subset) {
  WeightedGraph h = edge_subgraph(s.graph, subset);
  Spanner again = greedy_spanner(h, s.epsilon);
  return again.graph.edge_count() == h.edge_count();
}

Rational lightness(const WeightedGraph& g, const Spanner& s) {
  Rational base = mst(g).weight;
  if (sgn(base) == 0) throw InputError("lightness undefined: minimum spanning tree has zero weight");
  return s.weight() / base;
}

void write_spanner(std::ostream& out, const Spanner& s) {
  write_graph(out, s.graph, "eps " + to_string(s.epsilon));
}

Spanner read_spanner_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spanner file '" + path + "'");
  std::string first;
  std::getline(in, first);
  std::istringstream hdr(first);
  std::string hash, tag, value;
  if (!(hdr >> hash >> tag >> value) || hash != "#" || tag != "eps")
    throw InputError(path + ": spanner file must start with '# eps p/q'");
  Spanner s;
  s.epsilon = parse_rational(value);
  if (sgn(s.epsilon) <= 0) throw InputError(path + ": epsilon must be positive");
  try {
    s.graph = read_graph(in);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
  return s;
}

}  // namespace lightspan
