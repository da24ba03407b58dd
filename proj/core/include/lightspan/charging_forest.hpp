#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lightspan/charging.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/pathdec.hpp"
#include "lightspan/spanner.hpp"

namespace lightspan {

/// Per-edge charge bound of the bounded-pathwidth scheme: 2(pw-2) + 4pw^2.
int forest_charge_bound(int pw);

enum class PhiEdgeKind { Bold, Dashed, Mixed };

const char* to_string(PhiEdgeKind kind);

/// Edge ((apex, b), (apex, c)) of the charging forest between the phi-vertices
/// of graph edges apex-b and apex-c. For a bold edge bc is an MST edge; for
/// dashed and mixed edges b and c are joined by an MST path.
struct PhiEdge {
  EdgeId a = kNoEdge;  // phi-vertex = edge id of the k-path
  EdgeId b = kNoEdge;
  VertexId apex = -1;
  EdgeKey associated;  // bc
  PhiEdgeKind kind = PhiEdgeKind::Bold;
  int rank = 0;        // dashed/mixed: inherited contracted-forest rank
  int time = 0;        // bag in which the edge was added
  long long seq = 0;   // global insertion counter
  bool alive = true;
};

struct InvariantViolation {
  std::string invariant;  // "(i)".."(iv)" or "structure"
  std::string detail;
};

struct InvariantReport {
  int bag = -1;
  std::vector<InvariantViolation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& invariant) const;
};

/// Charging forest over a connected k-path H with a smooth decomposition in
/// which every bag is a clique. Phi-vertices are the edges of H and the
/// roots are the edges of MST(H). The forest is grown one bag at a time;
/// the glue edges of the normalized graph are contracted throughout, so
/// "MST[X_j .. X_i]" means the MST edges assigned to bags j..i.
class ChargingForest {
 public:
  ChargingForest(WeightedGraph h, SmoothPathDecomposition d);

  /// Phi_1: bold edges of the first bag under the triangle rule, and the
  /// first contracted forest.
  void init_forest();
  /// Processes the next bag with the free or non-free rule.
  void step();
  /// init_forest() and every step().
  void run();

  void step_free(int bag);
  void step_nonfree(int bag);
  /// Dashed-to-mixed conversion. `forgotten_rule` enables the rule for the
  /// phi-vertex (u, v) of the introduced vertex u and forgotten vertex v.
  void convert_dashed(int bag, bool forgotten_rule);

  int processed_bags() const { return bag_ + 1; }
  bool done() const { return bag_ + 1 == d_.size(); }

  /// Brute-force evaluation of invariants (i)-(iv) and the structural
  /// properties (forest, at most one root per tree, contracted forest ranks)
  /// for the state after the last processed bag.
  InvariantReport check_invariants() const;

  // Fault injection for testing the checker. Both return false when no
  // applicable edge exists.
  bool inject_remove_edge(std::mt19937_64& rng);
  bool inject_cross_bold_edge(std::mt19937_64& rng);

  const WeightedGraph& graph() const { return h_; }
  const SmoothPathDecomposition& decomposition() const { return d_; }
  const std::vector<PhiEdge>& edges() const { return edges_; }
  const std::vector<char>& in_mst() const { return in_mst_; }
  const std::vector<int>& edge_bag() const { return edge_bag_; }
  /// Rank of an MST edge (0 before its bag is processed, or for non-MST edges).
  int mst_rank(EdgeId e) const { return mst_rank_.at(e); }
  const std::map<EdgeKey, int>& contracted_forest() const { return lambda_; }
  bool phi_exists(EdgeId e) const { return exists_.at(e); }

  /// MST(H) edges on the b-to-c path (empty when b == c).
  std::vector<EdgeId> mst_path(VertexId b, VertexId c) const;
  /// Alive forest edges on the path between two phi-vertices of one tree.
  std::vector<int> phi_path(EdgeId from, EdgeId to) const;

 private:
  struct Labels {
    std::vector<int> comp, dft;
    std::vector<char> comp_rooted, dft_rooted;
  };

  EdgeId phi_id(VertexId a, VertexId b) const;
  void add_phi_vertices(int bag);
  int add_edge(EdgeId p, EdgeId q, VertexId apex, PhiEdgeKind kind, int rank, int time);
  void kill_edge(int idx);
  bool try_bold(EdgeId p, EdgeId q, VertexId apex, int bag);
  void add_bold_greedily(std::vector<std::pair<EdgeId, EdgeId>> candidates, int bag);
  void update_lambda(int bag, VertexId u, VertexId v);
  bool is_active(EdgeId phi, int bag) const;
  const Labels& labels() const;
  std::vector<EdgeId> side_of(EdgeId start, int cut_edge) const;

  WeightedGraph h_;
  SmoothPathDecomposition d_;
  std::vector<int> edge_bag_;
  std::vector<char> in_mst_;
  std::vector<std::vector<Neighbor>> mst_adj_;
  std::vector<int> mst_rank_;
  std::vector<char> exists_;
  std::vector<PhiEdge> edges_;
  std::vector<std::vector<int>> incident_;  // phi-vertex -> forest edge indices (alive or not)
  std::map<EdgeKey, int> lambda_;           // contracted forest edge -> rank
  std::vector<VertexId> lambda_vertices_;   // sorted
  int next_rank_ = 0;
  long long seq_ = 0;
  int bag_ = -1;
  mutable Labels labels_;
  mutable bool dirty_ = true;
};

/// Charging scheme on H read off the final forest: phi-vertices in DFS
/// pre-order per root, each charged to the path through its predecessor.
/// Throws InvariantError when the forest is unfinished, still has dashed
/// edges or has an unrooted tree.
ChargingScheme extract_scheme(const ChargingForest& phi);

struct EdgeAudit {
  EdgeKey edge;
  int triangles = 0;
  int pseudo_triangles = 0;
  int total_charges = 0;
};

struct ChargeAudit {
  int pw = 0;
  int triangle_bound = 0;  // max(0, pw - 2)
  int pseudo_bound = 0;    // 2 pw^2
  int total_bound = 0;     // 2(pw-2) + 4pw^2
  std::vector<EdgeAudit> edges;  // one per MST edge
  int max_triangles = 0;
  int max_pseudo_triangles = 0;
  int max_total = 0;
  int triangle_violations = 0;
  int pseudo_violations = 0;
  int total_violations = 0;
  bool ok() const { return triangle_violations == 0 && pseudo_violations == 0 && total_violations == 0; }
};

/// Per MST edge: bold edges whose associated edge it is, mixed edges whose
/// associated MST path contains it, and its charge count in `scheme`.
ChargeAudit audit_charges(const ChargingForest& phi, const ChargingScheme& scheme, int pw);

struct ForestPipelineResult {
  Spanner spanner;
  KPathCompletion completion;      // spanner completed to a k-path
  ChargingScheme weak_scheme;      // on the completion
  ChargingScheme scheme;           // on the spanner, after strengthening
  SimplicityReport report;         // verify_scheme(spanner, scheme, k)
  int k = 0;
  int pathwidth = 0;
  std::vector<InvariantReport> invariant_failures;  // bags whose check failed
  ChargeAudit audit;
  int bags = 0;
  bool invariants_ok() const { return invariant_failures.empty(); }
};

/// Greedy spanner of g, completion to a k-path, the charging forest (with
/// invariants checked after every bag when `check_each_bag`), extraction,
/// strengthening, verification and audit. g must be connected and `d` a
/// valid smooth decomposition of g.
ForestPipelineResult run_charging_forest(const WeightedGraph& g, const SmoothPathDecomposition& d,
                                         const Rational& eps, bool check_each_bag = true);

}  // namespace lightspan
