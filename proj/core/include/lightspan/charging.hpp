#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lightspan/graph.hpp"
#include "lightspan/spanner.hpp"

namespace lightspan {

/// A non-tree edge and the path it charges, as consecutive edges walking
/// from one endpoint of `edge` to the other.
struct ChargingPair {
  EdgeKey edge;
  std::vector<EdgeKey> path;
};

/// Charging pairs for every edge of S \ T, together with the tree T.
struct ChargingScheme {
  std::vector<EdgeKey> tree;
  std::vector<ChargingPair> pairs;
};

/// Arc i -> j when the path of pair i contains the edge of pair j
/// (pair j's edge is charged to by pair i).
std::vector<std::vector<int>> charged_to_digraph(const ChargingScheme& cs);

struct SimplicityReport {
  std::vector<EdgeKey> edges;        // edges of S, aligned with `charges`
  std::vector<int> charges;          // times each edge is charged to
  std::vector<char> in_tree;         // per edge of S
  int max_tree_charge = 0;
  int max_non_tree_charge = 0;
  int k = 0;
  bool k_simple = false;             // non-tree <= 1 and tree <= k
  bool acyclic = false;
  bool strong = false;               // (1+eps) w(e) <= w(P(e)) for every pair
  std::vector<EdgeKey> weak_pairs;   // pairs failing the strong inequality
  std::vector<EdgeKey> over_charged; // edges breaking k-simplicity

  bool ok() const { return k_simple && acyclic && strong; }
  int charge_of(const EdgeKey& e) const;
};

/// Counts charges and checks k-simplicity, acyclicity and the per-pair
/// stretch inequality. Throws StructuralError when a pair's path is not a
/// simple path in S between the pair's endpoints, when T is not a spanning
/// forest of S, or when the pairs do not cover S \ T exactly once.
SimplicityReport verify_scheme(const Spanner& s, const ChargingScheme& cs, int k);

/// Thrown by lightness_certificate when the scheme does not qualify.
class CertificateRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LightnessCertificate {
  Rational factor;          // 1 + k/eps
  Rational spanner_weight;  // w(S)
  Rational tree_weight;     // w(T)
  bool holds = false;       // w(S) <= factor * w(T)
};

/// Bound implied by a k-simple acyclic strong scheme: w(S) <= (1 + k/eps) w(T).
LightnessCertificate lightness_certificate(const Spanner& s, const ChargingScheme& cs, const SimplicityReport& report);

/// Outer-planar construction. `boundary` lists the outer face in cyclic
/// order; every edge of g is either a boundary edge or a chord, and chords
/// may not cross. T is the boundary minus `dropped` (which must be a
/// boundary edge). Pairs come from a post-order walk of the dual tree of
/// internal faces: each face charges its parent edge to the rest of its
/// boundary.
ChargingScheme outerplanar_charging(const WeightedGraph& g, std::span<const VertexId> boundary, EdgeKey dropped);

/// Same, dropping the heaviest boundary edge (ties: smallest key).
ChargingScheme outerplanar_charging(const WeightedGraph& g, std::span<const VertexId> boundary);

/// Per-splice bookkeeping from strengthen_weak_scheme.
struct StrengthenStep {
  EdgeKey removed;
  int rewired_pair = -1;    // index into the scheme before the step, -1 if none
  int max_tree_charge = 0;  // after the step
};

/// Removes every edge of `super` that is not in S (heaviest first), splicing
/// its charging path into the unique pair that charged it. `super_cs` must
/// be a (weak) scheme on `super` whose tree lies inside S.
ChargingScheme strengthen_weak_scheme(const Spanner& s, const WeightedGraph& super, const ChargingScheme& super_cs,
                                      std::vector<StrengthenStep>* trace = nullptr);

/// Simple from-to path using only `edges`, fewest edges, ties broken toward
/// smaller vertex ids. Empty when disconnected (or from == to).
std::vector<EdgeKey> simple_path_within(std::span<const EdgeKey> edges, VertexId from, VertexId to);

/// T = edges of S that own no pair.
std::vector<EdgeKey> infer_tree(const WeightedGraph& s, const std::vector<ChargingPair>& pairs);

Rational path_weight(const WeightedGraph& g, std::span<const EdgeKey> path);

// Scheme file: one pair per line, "eu ev : p1u p1v p2u p2v ...".
void write_scheme(std::ostream& out, const ChargingScheme& cs);
std::vector<ChargingPair> read_scheme_pairs(std::istream& in);
std::vector<ChargingPair> read_scheme_pairs_file(const std::string& path);

}  // namespace lightspan
