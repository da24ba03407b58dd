#include <algorithm>
#include <functional>
#include <cstdlib>
#include <map>
#include <optional>

#include "lightspan/charging.hpp"
#include "lightspan/errors.hpp"

namespace lightspan {

namespace {

// An internal face of the outer-planar embedding, as a run of boundary
// positions a = cycle.front() < ... < cycle.back() = b closed by the edge
// (b, a). For every face except the outermost region that closing edge is a
// chord shared with the parent region.
struct Face {
  std::vector<int> cycle;
  int parent = -1;
  std::vector<int> children;
};

struct Embedding {
  std::vector<Face> faces;
  std::map<EdgeKey, std::vector<int>> faces_of;  // keyed by boundary positions
};

Embedding recover_faces(const WeightedGraph& g, std::span<const VertexId> boundary) {
  const int n = g.vertex_count();
  if (n < 3) throw InputError("outer-planar charging needs at least 3 vertices");
  if (static_cast<int>(boundary.size()) != n)
    throw InputError("boundary order must list every vertex exactly once");
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    VertexId v = boundary[i];
    if (!g.valid_vertex(v) || pos[v] != -1) throw InputError("boundary order must list every vertex exactly once");
    pos[v] = i;
  }
  for (int i = 0; i < n; ++i)
    if (!g.has_edge(boundary[i], boundary[(i + 1) % n]))
      throw InputError("boundary edge " + std::to_string(boundary[i]) + "-" + std::to_string(boundary[(i + 1) % n]) +
                       " is missing from the graph");

  std::vector<std::vector<int>> chords_from(n);
  std::vector<std::pair<int, int>> chords;
  for (const Edge& e : g.edges()) {
    int a = std::min(pos[e.key.u], pos[e.key.v]);
    int b = std::max(pos[e.key.u], pos[e.key.v]);
    if (b - a == 1 || (a == 0 && b == n - 1)) continue;
    chords.emplace_back(a, b);
    chords_from[a].push_back(b);
  }
  for (auto& list : chords_from) std::sort(list.rbegin(), list.rend());

  // Chords (a,b) and (c,d) cross iff a < c < b < d. Sorting by (a asc, b desc)
  // makes every chord either nested in or disjoint from those on the stack.
  std::sort(chords.begin(), chords.end(), [](auto x, auto y) {
    return x.first != y.first ? x.first < y.first : x.second > y.second;
  });
  std::vector<std::pair<int, int>> open;
  for (auto [a, b] : chords) {
    while (!open.empty() && open.back().second <= a) open.pop_back();
    if (!open.empty() && open.back().second < b)
      throw InputError("chords " + std::to_string(boundary[open.back().first]) + "-" +
                       std::to_string(boundary[open.back().second]) + " and " + std::to_string(boundary[a]) + "-" +
                       std::to_string(boundary[b]) + " cross; graph is not outer-planar in this order");
    open.emplace_back(a, b);
  }

  Embedding emb;
  struct Pending {
    int a, b, parent;
  };
  std::vector<Pending> work{{0, n - 1, -1}};
  while (!work.empty()) {
    auto [a, b, parent] = work.back();
    work.pop_back();
    int id = static_cast<int>(emb.faces.size());
    emb.faces.push_back({{a}, parent, {}});
    if (parent >= 0) emb.faces[parent].children.push_back(id);
    int x = a;
    while (x != b) {
      int next = x + 1;
      for (int y : chords_from[x]) {
        if (y > b || (x == a && y == b)) continue;
        next = y;
        break;
      }
      if (next != x + 1) work.push_back({x, next, id});
      emb.faces[id].cycle.push_back(next);
      emb.faces_of[EdgeKey(x, next)].push_back(id);
      x = next;
    }
    emb.faces_of[EdgeKey(a, b)].push_back(id);
  }
  return emb;
}

}  // namespace

ChargingScheme outerplanar_charging(const WeightedGraph& g, std::span<const VertexId> boundary, EdgeKey dropped) {
  Embedding emb = recover_faces(g, boundary);
  const int n = g.vertex_count();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[boundary[i]] = i;

  if (!g.valid_vertex(dropped.u) || !g.valid_vertex(dropped.v))
    throw InputError("dropped edge is not a boundary edge");
  int da = pos[dropped.u], db = pos[dropped.v];
  if (!(std::abs(da - db) == 1 || std::abs(da - db) == n - 1))
    throw InputError("dropped edge " + std::to_string(dropped.u) + "-" + std::to_string(dropped.v) +
                     " is not a boundary edge");

  ChargingScheme cs;
  for (int i = 0; i < n; ++i) {
    EdgeKey e(boundary[i], boundary[(i + 1) % n]);
    if (e != dropped) cs.tree.push_back(e);
  }

  auto to_vertices = [&](EdgeKey p) { return EdgeKey(boundary[p.u], boundary[p.v]); };

  // Post-order over the dual tree rooted at the face holding the dropped edge.
  // Each face charges the edge towards its parent (the dropped edge at the
  // root) to the remaining edges of its boundary.
  const EdgeKey root_edge(da, db);
  const int root = emb.faces_of.at(root_edge).front();
  std::vector<std::vector<std::pair<int, EdgeKey>>> dual(emb.faces.size());
  for (int f = 0; f < static_cast<int>(emb.faces.size()); ++f) {
    const Face& face = emb.faces[f];
    if (face.parent >= 0) {
      EdgeKey chord(face.cycle.front(), face.cycle.back());
      dual[f].emplace_back(face.parent, chord);
      dual[face.parent].emplace_back(f, chord);
    }
  }
  std::function<void(int, int, EdgeKey)> visit = [&](int f, int from, EdgeKey parent_edge) {
    for (auto [h, chord] : dual[f])
      if (h != from) visit(h, f, chord);
    const auto& c = emb.faces[f].cycle;
    const int len = static_cast<int>(c.size());
    int j = 0;
    while (EdgeKey(c[j], c[(j + 1) % len]) != parent_edge) ++j;
    ChargingPair pair{to_vertices(parent_edge), {}};
    for (int step = 1; step < len; ++step) {
      int x = c[(j + step) % len], y = c[(j + step + 1) % len];
      pair.path.push_back(to_vertices(EdgeKey(x, y)));
    }
    // Walk from the smaller endpoint of the charged edge.
    if (!pair.path.front().has(pair.edge.u)) std::reverse(pair.path.begin(), pair.path.end());
    cs.pairs.push_back(std::move(pair));
  };
  visit(root, -1, root_edge);
  return cs;
}

ChargingScheme outerplanar_charging(const WeightedGraph& g, std::span<const VertexId> boundary) {
  const int n = static_cast<int>(boundary.size());
  if (n < 3) throw InputError("outer-planar charging needs at least 3 vertices");
  std::optional<EdgeKey> heaviest;
  Rational best;
  for (int i = 0; i < n; ++i) {
    EdgeId id = g.find_edge(boundary[i], boundary[(i + 1) % n]);
    if (id == kNoEdge) continue;  // reported by the main overload
    const Edge& e = g.edge(id);
    if (!heaviest || e.weight > best || (e.weight == best && e.key < *heaviest)) {
      heaviest = e.key;
      best = e.weight;
    }
  }
  if (!heaviest) throw InputError("no boundary edge of the given order is in the graph");
  return outerplanar_charging(g, boundary, *heaviest);
}

}  // namespace lightspan
