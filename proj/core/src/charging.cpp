#include "lightspan/charging.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lightspan/errors.hpp"
#include "lightspan/union_find.hpp"

namespace lightspan {

namespace {

std::string key_str(const EdgeKey& k) { return std::to_string(k.u) + "-" + std::to_string(k.v); }

// Walks `path` from one endpoint of `edge` and returns an error message, or
// an empty string when the path is simple and ends at the other endpoint.
std::string check_path_shape(const EdgeKey& edge, const std::vector<EdgeKey>& path) {
  if (path.empty()) return "empty charging path";
  VertexId at = path.front().has(edge.u) ? edge.u : edge.v;
  VertexId goal = edge.other(at);
  if (!path.front().has(at)) return "path does not start at an endpoint";
  std::unordered_set<VertexId> seen{at};
  for (const EdgeKey& step : path) {
    if (step == edge) return "path contains the charged edge itself";
    if (!step.has(at)) return "path is not contiguous at vertex " + std::to_string(at);
    at = step.other(at);
    if (!seen.insert(at).second) return "path revisits vertex " + std::to_string(at);
  }
  if (at != goal) return "path ends at " + std::to_string(at) + " instead of " + std::to_string(goal);
  return {};
}

}  // namespace

int SimplicityReport::charge_of(const EdgeKey& e) const {
  auto it = std::find(edges.begin(), edges.end(), e);
  return it == edges.end() ? 0 : charges[it - edges.begin()];
}

std::vector<std::vector<int>> charged_to_digraph(const ChargingScheme& cs) {
  std::unordered_map<EdgeKey, int, EdgeKeyHash> owner;
  for (int i = 0; i < static_cast<int>(cs.pairs.size()); ++i) owner.emplace(cs.pairs[i].edge, i);
  std::vector<std::vector<int>> arcs(cs.pairs.size());
  for (int i = 0; i < static_cast<int>(cs.pairs.size()); ++i)
    for (const EdgeKey& step : cs.pairs[i].path)
      if (auto it = owner.find(step); it != owner.end()) arcs[i].push_back(it->second);
  return arcs;
}

SimplicityReport verify_scheme(const Spanner& s, const ChargingScheme& cs, int k) {
  const WeightedGraph& g = s.graph;
  SimplicityReport r;
  r.k = k;
  r.charges.assign(g.edge_count(), 0);
  r.in_tree.assign(g.edge_count(), 0);
  for (const Edge& e : g.edges()) r.edges.push_back(e.key);

  DisjointSet forest(g.vertex_count());
  for (const EdgeKey& t : cs.tree) {
    EdgeId id = g.find_edge(t.u, t.v);
    if (id == kNoEdge) throw StructuralError("tree edge " + key_str(t) + " is not in the spanner");
    if (r.in_tree[id]) throw StructuralError("tree edge " + key_str(t) + " listed twice");
    if (!forest.unite(t.u, t.v)) throw StructuralError("tree edges contain a cycle through " + key_str(t));
    r.in_tree[id] = 1;
  }
  auto labels = component_labels(g);
  int components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  if (static_cast<int>(cs.tree.size()) != g.vertex_count() - components)
    throw StructuralError("tree is not a spanning forest of the spanner");

  std::vector<char> owned(g.edge_count(), 0);
  for (const ChargingPair& p : cs.pairs) {
    EdgeId id = g.find_edge(p.edge.u, p.edge.v);
    if (id == kNoEdge) throw StructuralError("charged edge " + key_str(p.edge) + " is not in the spanner");
    if (r.in_tree[id]) throw StructuralError("tree edge " + key_str(p.edge) + " has a charging pair");
    if (owned[id]) throw StructuralError("edge " + key_str(p.edge) + " has two charging pairs");
    owned[id] = 1;
    if (auto why = check_path_shape(p.edge, p.path); !why.empty())
      throw StructuralError("pair " + key_str(p.edge) + ": " + why);
    for (const EdgeKey& step : p.path) {
      EdgeId sid = g.find_edge(step.u, step.v);
      if (sid == kNoEdge)
        throw StructuralError("pair " + key_str(p.edge) + ": path edge " + key_str(step) + " is not in the spanner");
      ++r.charges[sid];
    }
  }
  for (EdgeId id = 0; id < g.edge_count(); ++id)
    if (!r.in_tree[id] && !owned[id])
      throw StructuralError("non-tree edge " + key_str(g.edge(id).key) + " has no charging pair");

  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    int c = r.charges[id];
    if (r.in_tree[id]) {
      r.max_tree_charge = std::max(r.max_tree_charge, c);
      if (c > k) r.over_charged.push_back(g.edge(id).key);
    } else {
      r.max_non_tree_charge = std::max(r.max_non_tree_charge, c);
      if (c > 1) r.over_charged.push_back(g.edge(id).key);
    }
  }
  r.k_simple = r.over_charged.empty();

  // Kahn's algorithm on the charged-to digraph.
  auto arcs = charged_to_digraph(cs);
  std::vector<int> indegree(arcs.size(), 0);
  for (const auto& out : arcs)
    for (int j : out) ++indegree[j];
  std::queue<int> ready;
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
    if (indegree[i] == 0) ready.push(i);
  std::size_t popped = 0;
  while (!ready.empty()) {
    int i = ready.front();
    ready.pop();
    ++popped;
    for (int j : arcs[i])
      if (--indegree[j] == 0) ready.push(j);
  }
  r.acyclic = popped == arcs.size();

  const Rational stretch = 1 + s.epsilon;
  for (const ChargingPair& p : cs.pairs) {
    const Rational& w = g.edge(g.find_edge(p.edge.u, p.edge.v)).weight;
    if (stretch * w > path_weight(g, p.path)) r.weak_pairs.push_back(p.edge);
  }
  r.strong = r.weak_pairs.empty();
  return r;
}

LightnessCertificate lightness_certificate(const Spanner& s, const ChargingScheme& cs, const SimplicityReport& report) {
  if (!report.k_simple) throw CertificateRefused("scheme is not " + std::to_string(report.k) + "-simple");
  if (!report.acyclic) throw CertificateRefused("charged-to digraph has a cycle");
  if (!report.strong) throw CertificateRefused("scheme is weak: some pair violates (1+eps) w(e) <= w(P(e))");
  LightnessCertificate c;
  c.factor = 1 + Rational(report.k) / s.epsilon;
  c.spanner_weight = s.weight();
  c.tree_weight = path_weight(s.graph, cs.tree);
  c.holds = c.spanner_weight <= c.factor * c.tree_weight;
  return c;
}

std::vector<EdgeKey> simple_path_within(std::span<const EdgeKey> edges, VertexId from, VertexId to) {
  if (from == to) return {};
  std::map<VertexId, std::set<VertexId>> adj;
  for (const EdgeKey& e : edges) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  std::map<VertexId, VertexId> parent{{from, from}};
  std::queue<VertexId> q;
  q.push(from);
  while (!q.empty() && !parent.contains(to)) {
    VertexId x = q.front();
    q.pop();
    for (VertexId y : adj[x])
      if (parent.emplace(y, x).second) q.push(y);
  }
  if (!parent.contains(to)) return {};
  std::vector<EdgeKey> path;
  for (VertexId x = to; x != from; x = parent[x]) path.emplace_back(parent[x], x);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<EdgeKey> infer_tree(const WeightedGraph& s, const std::vector<ChargingPair>& pairs) {
  std::unordered_set<EdgeKey, EdgeKeyHash> keyed;
  for (const auto& p : pairs) keyed.insert(p.edge);
  std::vector<EdgeKey> tree;
  for (const Edge& e : s.edges())
    if (!keyed.contains(e.key)) tree.push_back(e.key);
  return tree;
}

Rational path_weight(const WeightedGraph& g, std::span<const EdgeKey> path) {
  Rational sum = 0;
  for (const EdgeKey& k : path) {
    EdgeId id = g.find_edge(k.u, k.v);
    if (id == kNoEdge) throw StructuralError("edge " + key_str(k) + " is not in the graph");
    sum += g.edge(id).weight;
  }
  return sum;
}

ChargingScheme strengthen_weak_scheme(const Spanner& s, const WeightedGraph& super, const ChargingScheme& super_cs,
                                      std::vector<StrengthenStep>* trace) {
  ChargingScheme cs = super_cs;
  std::unordered_set<EdgeKey, EdgeKeyHash> tree(cs.tree.begin(), cs.tree.end());
  for (const EdgeKey& t : cs.tree)
    if (!s.graph.has_edge(t.u, t.v)) throw StructuralError("tree edge " + key_str(t) + " is not in the spanner");

  std::vector<EdgeId> extra;
  for (EdgeId id = 0; id < super.edge_count(); ++id) {
    const EdgeKey& k = super.edge(id).key;
    if (!s.graph.has_edge(k.u, k.v)) extra.push_back(id);
  }
  std::sort(extra.begin(), extra.end(), [&](EdgeId a, EdgeId b) {
    const Edge& ea = super.edge(a);
    const Edge& eb = super.edge(b);
    if (ea.weight != eb.weight) return ea.weight > eb.weight;
    return ea.key < eb.key;
  });

  for (EdgeId id : extra) {
    const EdgeKey hat = super.edge(id).key;
    if (tree.contains(hat)) throw StructuralError("removed edge " + key_str(hat) + " belongs to the tree");
    auto own = std::find_if(cs.pairs.begin(), cs.pairs.end(), [&](const ChargingPair& p) { return p.edge == hat; });
    if (own == cs.pairs.end()) throw StructuralError("edge " + key_str(hat) + " has no charging pair");
    StrengthenStep step{hat, -1, 0};
    for (int j = 0; j < static_cast<int>(cs.pairs.size()); ++j) {
      ChargingPair& p = cs.pairs[j];
      if (p.edge == hat || std::find(p.path.begin(), p.path.end(), hat) == p.path.end()) continue;
      std::vector<EdgeKey> pool;
      for (const EdgeKey& x : p.path)
        if (x != hat) pool.push_back(x);
      for (const EdgeKey& x : own->path)
        if (x != hat) pool.push_back(x);
      auto spliced = simple_path_within(pool, p.edge.u, p.edge.v);
      if (spliced.empty())
        throw StructuralError("splicing out " + key_str(hat) + " disconnects the endpoints of " + key_str(p.edge));
      p.path = std::move(spliced);
      step.rewired_pair = j;
      break;  // a non-tree edge is charged at most once in a weak simple scheme
    }
    cs.pairs.erase(std::find_if(cs.pairs.begin(), cs.pairs.end(), [&](const ChargingPair& p) { return p.edge == hat; }));
    if (trace) {
      std::unordered_map<EdgeKey, int, EdgeKeyHash> count;
      for (const auto& p : cs.pairs)
        for (const auto& x : p.path)
          if (tree.contains(x)) step.max_tree_charge = std::max(step.max_tree_charge, ++count[x]);
      trace->push_back(step);
    }
  }
  return cs;
}

void write_scheme(std::ostream& out, const ChargingScheme& cs) {
  for (const ChargingPair& p : cs.pairs) {
    out << p.edge.u << ' ' << p.edge.v << " :";
    for (const EdgeKey& k : p.path) out << ' ' << k.u << ' ' << k.v;
    out << '\n';
  }
}

std::vector<ChargingPair> read_scheme_pairs(std::istream& in) {
  std::vector<ChargingPair> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    auto colon = line.find(':');
    auto fail = [&](const std::string& why) {
      return InputError("scheme line " + std::to_string(line_no) + ": " + why);
    };
    if (colon == std::string::npos) throw fail("missing ':'");
    std::istringstream head(line.substr(0, colon));
    std::istringstream tail(line.substr(colon + 1));
    long long a, b;
    if (!(head >> a >> b) || a < 0 || b < 0 || a == b) throw fail("bad charged edge");
    ChargingPair p{EdgeKey(static_cast<VertexId>(a), static_cast<VertexId>(b)), {}};
    std::vector<long long> ends;
    long long x;
    while (tail >> x) ends.push_back(x);
    if (!tail.eof()) throw fail("non-numeric path entry");
    if (ends.empty() || ends.size() % 2 != 0) throw fail("path needs an even, non-zero number of endpoints");
    for (std::size_t i = 0; i < ends.size(); i += 2) {
      if (ends[i] < 0 || ends[i + 1] < 0 || ends[i] == ends[i + 1]) throw fail("bad path edge");
      p.path.emplace_back(static_cast<VertexId>(ends[i]), static_cast<VertexId>(ends[i + 1]));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<ChargingPair> read_scheme_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scheme file '" + path + "'");
  try {
    return read_scheme_pairs(in);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

}  // namespace lightspan
