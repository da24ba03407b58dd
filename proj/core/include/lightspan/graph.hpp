#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lightspan/rational.hpp"

namespace lightspan {

using VertexId = int;
using EdgeId = int;

inline constexpr EdgeId kNoEdge = -1;

/// Unordered vertex pair, always stored with u < v.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;

  EdgeKey() = default;
  EdgeKey(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  bool has(VertexId x) const { return x == u || x == v; }
  VertexId other(VertexId x) const { return x == u ? v : u; }

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.u) << 32) ^
                                      static_cast<std::uint32_t>(k.v));
  }
};

struct Edge {
  EdgeKey key;
  Rational weight;
};

struct Neighbor {
  VertexId vertex;
  EdgeId edge;
};

/// Simple undirected graph on vertices 0..n-1 with exact non-negative weights.
/// Self-loops, parallel edges and negative weights are rejected on insertion.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int vertex_count);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  EdgeId add_edge(VertexId a, VertexId b, Rational weight);

  const Edge& edge(EdgeId id) const { return edges_.at(id); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexId v) const { return adjacency_.at(v); }

  EdgeId find_edge(VertexId a, VertexId b) const;
  bool has_edge(VertexId a, VertexId b) const { return find_edge(a, b) != kNoEdge; }

  bool valid_vertex(VertexId v) const { return v >= 0 && v < vertex_count(); }
  void check_vertex(VertexId v) const;

  Rational total_weight() const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<EdgeKey, EdgeId, EdgeKeyHash> index_;
};

/// Spanning forest of a parent graph, as edge ids into that graph.
struct SpanningTree {
  std::vector<EdgeId> edges;
  Rational weight;
};

/// Edge processing order shared by Kruskal and the greedy spanner:
/// (weight, smaller endpoint, larger endpoint).
std::vector<EdgeId> canonical_edge_order(const WeightedGraph& g);

/// Kruskal's algorithm with the canonical tie-break. Returns a spanning
/// forest when g is disconnected.
SpanningTree mst(const WeightedGraph& g);

/// Dijkstra from `source`; entry v is nullopt when v is unreachable.
/// Edges listed in `skip` (by id) are ignored.
std::vector<Distance> single_source_distances(const WeightedGraph& g, VertexId source,
                                              EdgeId skip = kNoEdge);

Distance shortest_dist(const WeightedGraph& g, VertexId u, VertexId v);

/// Distance from u to v, giving up (returning nullopt) once every remaining
/// frontier label exceeds `bound`. Exact whenever the true distance <= bound.
Distance bounded_dist(const WeightedGraph& g, VertexId u, VertexId v, const Rational& bound,
                      EdgeId skip = kNoEdge);

/// Vertex sequence of a minimum-weight u-to-v path (empty if unreachable).
std::vector<VertexId> shortest_path(const WeightedGraph& g, VertexId u, VertexId v);

std::vector<std::vector<Distance>> all_pairs_distances(const WeightedGraph& g);

/// Induced subgraph on `vertices`; the result relabels the i-th listed
/// vertex to i. `vertices` must be duplicate-free.
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> vertices);

/// Same vertex set as g, only the listed edges.
WeightedGraph edge_subgraph(const WeightedGraph& g, std::span<const EdgeId> edge_ids);

/// Connected-component label per vertex (labels are 0..k-1 in order of the
/// smallest vertex of each component).
std::vector<int> component_labels(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

// Text format: "n m" header, then m lines "u v p [q]". Lines starting with
// '#' are comments.
WeightedGraph read_graph(std::istream& in);
WeightedGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const WeightedGraph& g, const std::string& header_comment = {});

}  // namespace lightspan
