#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lightspan/graph.hpp"

namespace lightspan {

using Bag = std::vector<VertexId>;  // sorted, duplicate-free

/// Ordered bag sequence X_1..X_k (stored 0-based).
struct PathDecomposition {
  std::vector<Bag> bags;

  int size() const { return static_cast<int>(bags.size()); }
  /// max bag size - 1; -1 for an empty decomposition.
  int width() const;
};

struct DecompositionViolation {
  enum class Kind { VertexOutOfRange, VertexUncovered, EdgeUncovered, NonContiguous };
  Kind kind;
  VertexId vertex = -1;   // offending vertex (or first endpoint)
  VertexId other = -1;    // second endpoint for EdgeUncovered
  int bag = -1;           // offending bag index where meaningful
  std::string describe() const;
};

struct DecompositionReport {
  std::vector<DecompositionViolation> violations;
  int width = -1;
  bool ok() const { return violations.empty(); }
};

/// Checks the three path-decomposition conditions: every vertex covered,
/// every edge inside some bag, bags containing a vertex contiguous.
DecompositionReport validate(const WeightedGraph& g, const PathDecomposition& d);

/// |X_i| = pw+1 for all i and |X_i n X_{i+1}| = pw for consecutive bags.
bool is_smooth(const PathDecomposition& d);

/// A path decomposition known to be smooth. Index 0 is the first bag.
class SmoothPathDecomposition {
 public:
  SmoothPathDecomposition() = default;
  /// Throws InputError unless `d` is smooth.
  explicit SmoothPathDecomposition(PathDecomposition d);

  const PathDecomposition& decomposition() const { return dec_; }
  const std::vector<Bag>& bags() const { return dec_.bags; }
  const Bag& bag(int i) const { return dec_.bags.at(i); }
  int size() const { return dec_.size(); }
  int pathwidth() const { return pw_; }

  /// Vertex of X_i \ X_{i-1}; -1 for the first bag (all of its vertices are introduced).
  VertexId introduced(int i) const { return introduced_.at(i); }
  /// Vertex of X_i \ X_{i+1}; -1 for the last bag.
  VertexId forgotten(int i) const { return forgotten_.at(i); }

  bool contains(int i, VertexId v) const;

  /// First and last bag index holding v.
  /// {-1, -1} when v is in no bag.
  std::pair<int, int> interval(VertexId v) const { return interval_.at(v); }

  /// One past the largest vertex id appearing in any bag.
  int vertex_span() const { return static_cast<int>(interval_.size()); }

 private:
  PathDecomposition dec_;
  int pw_ = -1;
  std::vector<VertexId> introduced_;
  std::vector<VertexId> forgotten_;
  std::vector<std::pair<int, int>> interval_;
};

/// Bags of the input that map to output bags [first, last].
struct BagRun {
  int first;
  int last;
};

/// Smooth decomposition of the same width. Vertices whose interval ends are
/// kept until room is needed for the next introduction, so every
/// transition swaps exactly one vertex.
SmoothPathDecomposition smooth(const WeightedGraph& g, const PathDecomposition& d,
                               std::vector<BagRun>* runs = nullptr);

/// Each edge goes to the lowest-index bag containing both endpoints; for
/// bags after the first, that bag's introduced vertex is an endpoint.
/// Throws InputError when an edge fits in no bag.
std::vector<int> assign_edges_to_bags(const WeightedGraph& g, const SmoothPathDecomposition& d);

/// Distribution of generated integer edge weights.
struct WeightDistribution {
  enum class Kind { Uniform, Constant };
  Kind kind = Kind::Uniform;
  long long lo = 1;
  long long hi = 1000;

  static WeightDistribution uniform(long long lo, long long hi) { return {Kind::Uniform, lo, hi}; }
  static WeightDistribution constant(long long c) { return {Kind::Constant, c, c}; }
  /// "uniform:LO:HI" or "const:C".
  static WeightDistribution parse(const std::string& text);
  std::string to_string() const;
};

struct KPathInstance {
  WeightedGraph graph;
  SmoothPathDecomposition decomposition;
};

/// Random k-path with k = pw: bags are cliques, the first bag holds pw+1
/// vertices, every later bag introduces one new vertex and drops a random
/// one. Vertex labels are shuffled. Deterministic per seed.
KPathInstance generate_kpath(int n, int pw, std::uint64_t seed, const WeightDistribution& weights = {});

/// Normalized graph: one copy of each bag vertex per bag, original edges
/// placed in their assigned bag graph, zero-weight glue edges between copies
/// of the same vertex in consecutive bags.
struct NormalizedGraph {
  WeightedGraph graph;
  std::vector<VertexId> original_vertex;        // per copy
  std::vector<int> copy_bag;                    // per copy
  std::vector<EdgeId> original_edge;            // per normalized edge; kNoEdge for glue
  std::vector<int> edge_bag;                    // per original edge
  std::vector<std::vector<EdgeId>> bag_edges;   // original edge ids per bag graph
  std::vector<std::vector<VertexId>> bag_copies;  // copies per bag, aligned with the bag's vertex order

  bool is_glue(EdgeId normalized_edge) const { return original_edge.at(normalized_edge) == kNoEdge; }
  VertexId copy(int bag, VertexId v, const SmoothPathDecomposition& d) const;
};

NormalizedGraph normalize(const WeightedGraph& g, const SmoothPathDecomposition& d);

/// g with every missing intra-bag pair added at weight d_g(u,v). Original
/// edges keep their ids; added edges are flagged virtual.
struct KPathCompletion {
  WeightedGraph graph;
  std::vector<bool> is_virtual;  // per edge of `graph`
  int virtual_count() const;
};

/// Throws InputError when two vertices of a bag are disconnected in g.
KPathCompletion complete_to_kpath(const WeightedGraph& g, const SmoothPathDecomposition& d);

bool is_kpath(const WeightedGraph& g, const SmoothPathDecomposition& d);

// Decomposition file: line i lists the vertex ids of bag i.
PathDecomposition read_decomposition(std::istream& in);
PathDecomposition read_decomposition_file(const std::string& path);
void write_decomposition(std::ostream& out, const PathDecomposition& d);

}  // namespace lightspan
