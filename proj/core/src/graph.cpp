#include "lightspan/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "lightspan/errors.hpp"
#include "lightspan/union_find.hpp"

namespace lightspan {

WeightedGraph::WeightedGraph(int vertex_count) {
  if (vertex_count < 0) throw InputError("negative vertex count");
  adjacency_.resize(vertex_count);
}

void WeightedGraph::check_vertex(VertexId v) const {
  if (!valid_vertex(v))
    throw InputError("vertex " + std::to_string(v) + " out of range [0," +
                     std::to_string(vertex_count()) + ")");
}

EdgeId WeightedGraph::add_edge(VertexId a, VertexId b, Rational weight) {
  check_vertex(a);
  check_vertex(b);
  if (a == b) throw InputError("self-loop at vertex " + std::to_string(a));
  if (sgn(weight) < 0) throw InputError("negative weight on edge " + std::to_string(a) + "-" + std::to_string(b));
  EdgeKey key(a, b);
  if (index_.contains(key))
    throw InputError("duplicate edge " + std::to_string(key.u) + "-" + std::to_string(key.v));
  EdgeId id = edge_count();
  weight.canonicalize();
  edges_.push_back({key, std::move(weight)});
  adjacency_[a].push_back({b, id});
  adjacency_[b].push_back({a, id});
  index_.emplace(key, id);
  return id;
}

EdgeId WeightedGraph::find_edge(VertexId a, VertexId b) const {
  if (a == b) return kNoEdge;
  auto it = index_.find(EdgeKey(a, b));
  return it == index_.end() ? kNoEdge : it->second;
}

Rational WeightedGraph::total_weight() const {
  Rational sum = 0;
  for (const auto& e : edges_) sum += e.weight;
  return sum;
}

std::vector<EdgeId> canonical_edge_order(const WeightedGraph& g) {
  std::vector<EdgeId> order(g.edge_count());
  for (EdgeId i = 0; i < g.edge_count(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    const Edge& ea = g.edge(a);
    const Edge& eb = g.edge(b);
    if (ea.weight != eb.weight) return ea.weight < eb.weight;
    return ea.key < eb.key;
  });
  return order;
}

SpanningTree mst(const WeightedGraph& g) {
  SpanningTree tree;
  tree.weight = 0;
  DisjointSet dsu(g.vertex_count());
  for (EdgeId id : canonical_edge_order(g)) {
    const Edge& e = g.edge(id);
    if (dsu.unite(e.key.u, e.key.v)) {
      tree.edges.push_back(id);
      tree.weight += e.weight;
    }
  }
  return tree;
}

namespace {

struct QueueItem {
  Rational dist;
  VertexId vertex;
};

struct QueueOrder {
  bool operator()(const QueueItem& a, const QueueItem& b) const {
    if (a.dist != b.dist) return a.dist > b.dist;
    return a.vertex > b.vertex;
  }
};

// Core Dijkstra. Stops early when `target` is settled or the frontier passes
// `bound` (if given). Fills `parent_edge` when non-null.
std::vector<Distance> dijkstra(const WeightedGraph& g, VertexId source, VertexId target,
                               const Rational* bound, EdgeId skip,
                               std::vector<EdgeId>* parent_edge) {
  std::vector<Distance> dist(g.vertex_count());
  std::vector<char> done(g.vertex_count(), 0);
  if (parent_edge) parent_edge->assign(g.vertex_count(), kNoEdge);
  std::priority_queue<QueueItem, std::vector<QueueItem>, QueueOrder> pq;
  dist[source] = Rational(0);
  pq.push({Rational(0), source});
  while (!pq.empty()) {
    QueueItem top = pq.top();
    pq.pop();
    if (done[top.vertex]) continue;
    if (bound && top.dist > *bound) break;
    done[top.vertex] = 1;
    if (top.vertex == target) break;
    for (const Neighbor& nb : g.neighbors(top.vertex)) {
      if (nb.edge == skip || done[nb.vertex]) continue;
      Rational cand = top.dist + g.edge(nb.edge).weight;
      if (!dist[nb.vertex] || cand < *dist[nb.vertex]) {
        dist[nb.vertex] = cand;
        if (parent_edge) (*parent_edge)[nb.vertex] = nb.edge;
        pq.push({std::move(cand), nb.vertex});
      }
    }
  }
  // Labels of unsettled vertices are only upper bounds; drop them.
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!done[v]) dist[v].reset();
  return dist;
}

}  // namespace

std::vector<Distance> single_source_distances(const WeightedGraph& g, VertexId source, EdgeId skip) {
  g.check_vertex(source);
  return dijkstra(g, source, -1, nullptr, skip, nullptr);
}

Distance shortest_dist(const WeightedGraph& g, VertexId u, VertexId v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return Rational(0);
  return dijkstra(g, u, v, nullptr, kNoEdge, nullptr)[v];
}

Distance bounded_dist(const WeightedGraph& g, VertexId u, VertexId v, const Rational& bound, EdgeId skip) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return Rational(0);
  return dijkstra(g, u, v, &bound, skip, nullptr)[v];
}

std::vector<VertexId> shortest_path(const WeightedGraph& g, VertexId u, VertexId v) {
  g.check_vertex(u);
  g.check_vertex(v);
  std::vector<EdgeId> parent;
  auto dist = dijkstra(g, u, v, nullptr, kNoEdge, &parent);
  if (!dist[v]) return {};
  std::vector<VertexId> path{v};
  for (VertexId x = v; x != u;) {
    x = g.edge(parent[x]).key.other(x);
    path.push_back(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::vector<Distance>> all_pairs_distances(const WeightedGraph& g) {
  std::vector<std::vector<Distance>> out;
  out.reserve(g.vertex_count());
  for (VertexId s = 0; s < g.vertex_count(); ++s) out.push_back(single_source_distances(g, s));
  return out;
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> vertices) {
  std::vector<int> relabel(g.vertex_count(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    g.check_vertex(vertices[i]);
    if (relabel[vertices[i]] != -1) throw InputError("duplicate vertex in induced_subgraph");
    relabel[vertices[i]] = static_cast<int>(i);
  }
  WeightedGraph h(static_cast<int>(vertices.size()));
  for (const Edge& e : g.edges()) {
    int a = relabel[e.key.u];
    int b = relabel[e.key.v];
    if (a >= 0 && b >= 0) h.add_edge(a, b, e.weight);
  }
  return h;
}

WeightedGraph edge_subgraph(const WeightedGraph& g, std::span<const EdgeId> edge_ids) {
  WeightedGraph h(g.vertex_count());
  for (EdgeId id : edge_ids) {
    const Edge& e = g.edge(id);
    h.add_edge(e.key.u, e.key.v, e.weight);
  }
  return h;
}

std::vector<int> component_labels(const WeightedGraph& g) {
  std::vector<int> label(g.vertex_count(), -1);
  int next = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(x))
        if (label[nb.vertex] == -1) {
          label[nb.vertex] = next;
          stack.push_back(nb.vertex);
        }
    }
    ++next;
  }
  return label;
}

bool is_connected(const WeightedGraph& g) {
  auto label = component_labels(g);
  return std::all_of(label.begin(), label.end(), [](int l) { return l == 0; });
}

WeightedGraph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) throw InputError("graph file: missing 'n m' header");
  std::istringstream header(line);
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) throw InputError("graph file line " + std::to_string(line_no) + ": bad header");
  WeightedGraph g(static_cast<int>(n));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line)) throw InputError("graph file: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    std::istringstream row(line);
    long long u, v;
    std::string p, q;
    if (!(row >> u >> v >> p)) throw InputError("graph file line " + std::to_string(line_no) + ": expected 'u v p [q]'");
    row >> q;
    try {
      Rational w = parse_rational(p);
      if (!q.empty()) {
        Rational den = parse_rational(q);
        if (sgn(den) <= 0) throw InputError("weight denominator must be positive");
        w /= den;
      }
      if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("vertex id out of range");
      g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), std::move(w));
    } catch (const std::exception& ex) {
      throw InputError("graph file line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return g;
}

WeightedGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  try {
    return read_graph(in);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

void write_graph(std::ostream& out, const WeightedGraph& g, const std::string& header_comment) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.key.u << ' ' << e.key.v << ' ' << e.weight.get_num().get_str();
    if (e.weight.get_den() != 1) out << ' ' << e.weight.get_den().get_str();
    out << '\n';
  }
}

}  // namespace lightspan
