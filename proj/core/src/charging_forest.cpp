#include "lightspan/charging_forest.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "lightspan/errors.hpp"
#include "lightspan/union_find.hpp"

namespace lightspan {

namespace {

std::string key_str(const EdgeKey& k) { return std::to_string(k.u) + "-" + std::to_string(k.v); }

}  // namespace

int forest_charge_bound(int pw) { return 2 * (pw - 2) + 4 * pw * pw; }

const char* to_string(PhiEdgeKind kind) {
  switch (kind) {
    case PhiEdgeKind::Bold: return "bold";
    case PhiEdgeKind::Dashed: return "dashed";
    case PhiEdgeKind::Mixed: return "mixed";
  }
  return "?";
}

bool InvariantReport::has(const std::string& invariant) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const InvariantViolation& v) { return v.invariant == invariant; });
}

ChargingForest::ChargingForest(WeightedGraph h, SmoothPathDecomposition d) : h_(std::move(h)), d_(std::move(d)) {
  auto report = validate(h_, d_.decomposition());
  if (!report.ok()) throw InputError("charging forest: " + report.violations.front().describe());
  if (!is_kpath(h_, d_)) throw InputError("charging forest needs every bag to be a clique (complete to a k-path first)");
  if (!is_connected(h_)) throw InputError("charging forest needs a connected graph");

  edge_bag_ = assign_edges_to_bags(h_, d_);
  const int m = h_.edge_count();
  in_mst_.assign(m, 0);
  mst_adj_.assign(h_.vertex_count(), {});
  for (EdgeId e : mst(h_).edges) {
    in_mst_[e] = 1;
    const EdgeKey& k = h_.edge(e).key;
    mst_adj_[k.u].push_back({k.v, e});
    mst_adj_[k.v].push_back({k.u, e});
  }
  mst_rank_.assign(m, 0);
  exists_.assign(m, 0);
  incident_.assign(m, {});
}

EdgeId ChargingForest::phi_id(VertexId a, VertexId b) const {
  EdgeId e = h_.find_edge(a, b);
  if (e == kNoEdge) throw InvariantError("no phi-vertex for non-edge " + key_str(EdgeKey(a, b)));
  return e;
}

void ChargingForest::add_phi_vertices(int bag) {
  for (EdgeId e = 0; e < h_.edge_count(); ++e)
    if (edge_bag_[e] == bag) exists_[e] = 1;
  dirty_ = true;
}

int ChargingForest::add_edge(EdgeId p, EdgeId q, VertexId apex, PhiEdgeKind kind, int rank, int time) {
  PhiEdge e;
  e.a = p;
  e.b = q;
  e.apex = apex;
  const EdgeKey& kp = h_.edge(p).key;
  const EdgeKey& kq = h_.edge(q).key;
  if (apex >= 0 && kp.has(apex) && kq.has(apex)) e.associated = EdgeKey(kp.other(apex), kq.other(apex));
  e.kind = kind;
  e.rank = rank;
  e.time = time;
  e.seq = ++seq_;
  int idx = static_cast<int>(edges_.size());
  edges_.push_back(e);
  incident_[p].push_back(idx);
  incident_[q].push_back(idx);
  dirty_ = true;
  return idx;
}

void ChargingForest::kill_edge(int idx) {
  edges_.at(idx).alive = false;
  dirty_ = true;
}

const ChargingForest::Labels& ChargingForest::labels() const {
  if (!dirty_) return labels_;
  const int m = h_.edge_count();
  auto flood = [&](bool skip_dashed, std::vector<int>& label, std::vector<char>& rooted) {
    label.assign(m, -1);
    rooted.clear();
    int next = 0;
    for (EdgeId s = 0; s < m; ++s) {
      if (!exists_[s] || label[s] != -1) continue;
      rooted.push_back(0);
      std::vector<EdgeId> stack{s};
      label[s] = next;
      while (!stack.empty()) {
        EdgeId x = stack.back();
        stack.pop_back();
        if (in_mst_[x]) rooted[next] = 1;
        for (int idx : incident_[x]) {
          const PhiEdge& e = edges_[idx];
          if (!e.alive || (skip_dashed && e.kind == PhiEdgeKind::Dashed)) continue;
          EdgeId y = e.a == x ? e.b : e.a;
          if (label[y] == -1) {
            label[y] = next;
            stack.push_back(y);
          }
        }
      }
      ++next;
    }
  };
  flood(false, labels_.comp, labels_.comp_rooted);
  flood(true, labels_.dft, labels_.dft_rooted);
  dirty_ = false;
  return labels_;
}

std::vector<int> ChargingForest::phi_path(EdgeId from, EdgeId to) const {
  if (from == to) return {};
  std::vector<int> via(h_.edge_count(), -2);
  via[from] = -1;
  std::queue<EdgeId> q;
  q.push(from);
  while (!q.empty() && via[to] == -2) {
    EdgeId x = q.front();
    q.pop();
    for (int idx : incident_[x]) {
      const PhiEdge& e = edges_[idx];
      if (!e.alive) continue;
      EdgeId y = e.a == x ? e.b : e.a;
      if (via[y] == -2) {
        via[y] = idx;
        q.push(y);
      }
    }
  }
  if (via[to] == -2) throw InvariantError("phi-vertices " + key_str(h_.edge(from).key) + " and " +
                                          key_str(h_.edge(to).key) + " are in different trees");
  std::vector<int> path;
  for (EdgeId x = to; x != from;) {
    int idx = via[x];
    path.push_back(idx);
    x = edges_[idx].a == x ? edges_[idx].b : edges_[idx].a;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<EdgeId> ChargingForest::side_of(EdgeId start, int cut_edge) const {
  std::vector<char> seen(h_.edge_count(), 0);
  std::vector<EdgeId> out{start}, stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    EdgeId x = stack.back();
    stack.pop_back();
    for (int idx : incident_[x]) {
      const PhiEdge& e = edges_[idx];
      if (!e.alive || idx == cut_edge) continue;
      EdgeId y = e.a == x ? e.b : e.a;
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
        stack.push_back(y);
      }
    }
  }
  return out;
}

std::vector<EdgeId> ChargingForest::mst_path(VertexId b, VertexId c) const {
  if (b == c) return {};
  std::vector<EdgeId> via(h_.vertex_count(), -2);
  via[b] = -1;
  std::vector<VertexId> stack{b};
  while (!stack.empty() && via[c] == -2) {
    VertexId x = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : mst_adj_[x])
      if (via[nb.vertex] == -2) {
        via[nb.vertex] = nb.edge;
        stack.push_back(nb.vertex);
      }
  }
  if (via[c] == -2) throw InvariantError("MST does not connect " + std::to_string(b) + " and " + std::to_string(c));
  std::vector<EdgeId> path;
  for (VertexId x = c; x != b; x = h_.edge(via[x]).key.other(x)) path.push_back(via[x]);
  return path;
}

bool ChargingForest::is_active(EdgeId phi, int bag) const {
  if (bag + 1 >= d_.size()) return false;
  const EdgeKey& k = h_.edge(phi).key;
  return d_.contains(bag + 1, k.u) && d_.contains(bag + 1, k.v);
}

// Triangle rule: the two phi-vertices must lie in distinct dashed-free trees,
// at most one of which is rooted. Dashed edges are provisional: when the new
// bold edge would close a cycle, or would put two roots into one tree
// because a root hangs off the unrooted side through dashed edges, the
// newest dashed edge on the offending path is deleted first.
bool ChargingForest::try_bold(EdgeId p, EdgeId q, VertexId apex, int bag) {
  const Labels& L = labels();
  if (L.dft[p] == L.dft[q]) return false;
  if (L.dft_rooted[L.dft[p]] && L.dft_rooted[L.dft[q]]) return false;
  std::vector<int> path;
  if (L.comp[p] == L.comp[q]) {
    path = phi_path(p, q);
  } else if (L.comp_rooted[L.comp[p]] && L.comp_rooted[L.comp[q]]) {
    EdgeId loose = L.dft_rooted[L.dft[p]] ? q : p;
    EdgeId root = kNoEdge;
    for (EdgeId x = 0; x < h_.edge_count() && root == kNoEdge; ++x)
      if (exists_[x] && in_mst_[x] && L.comp[x] == L.comp[loose]) root = x;
    path = phi_path(loose, root);
  }
  if (!path.empty() || L.comp[p] == L.comp[q]) {
    int newest = -1;
    for (int idx : path)
      if (edges_[idx].kind == PhiEdgeKind::Dashed && (newest == -1 || edges_[idx].seq > edges_[newest].seq))
        newest = idx;
    if (newest == -1) return false;
    kill_edge(newest);
  }
  add_edge(p, q, apex, PhiEdgeKind::Bold, 0, bag);
  return true;
}

void ChargingForest::add_bold_greedily(std::vector<std::pair<EdgeId, EdgeId>> candidates, int bag) {
  auto key = [&](const std::pair<EdgeId, EdgeId>& c) {
    EdgeKey x = h_.edge(c.first).key, y = h_.edge(c.second).key;
    return x < y ? std::pair{x, y} : std::pair{y, x};
  };
  std::sort(candidates.begin(), candidates.end(), [&](const auto& l, const auto& r) { return key(l) < key(r); });
  std::vector<char> used(candidates.size(), 0);
  // Deleting a dashed edge can split a component and make an earlier
  // candidate admissible again, so scan until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      auto [p, q] = candidates[c];
      const EdgeKey kp = h_.edge(p).key, kq = h_.edge(q).key;
      VertexId apex = kp.has(kq.u) ? kq.u : kq.v;
      if (try_bold(p, q, apex, bag)) used[c] = 1, changed = true;
    }
  }
}

void ChargingForest::init_forest() {
  if (bag_ != -1) throw InvariantError("init_forest called twice");
  add_phi_vertices(0);
  const Bag& x0 = d_.bag(0);

  std::vector<EdgeId> tree;
  for (EdgeId e = 0; e < h_.edge_count(); ++e)
    if (edge_bag_[e] == 0 && in_mst_[e]) tree.push_back(e);

  std::vector<std::pair<EdgeId, EdgeId>> candidates;
  for (EdgeId e : tree) {
    const EdgeKey& bc = h_.edge(e).key;
    for (VertexId a : x0)
      if (!bc.has(a)) candidates.emplace_back(phi_id(a, bc.u), phi_id(a, bc.v));
  }
  add_bold_greedily(std::move(candidates), 0);

  const int m1 = static_cast<int>(tree.size());
  for (int r = 0; r < m1; ++r) mst_rank_[tree[r]] = r + 1;
  const VertexId v0 = d_.forgotten(0);
  EdgeId top = kNoEdge;
  if (v0 != -1)
    for (EdgeId e : tree)
      if (h_.edge(e).key.has(v0)) {
        top = e;
        break;
      }
  if (top != kNoEdge) std::swap(mst_rank_[top], mst_rank_[tree.back()]);

  lambda_vertices_.assign(x0.begin(), x0.end());
  for (EdgeId e : tree) lambda_[h_.edge(e).key] = mst_rank_[e];
  if (v0 != -1) {
    // Contract the top-ranked edge at the forgotten vertex into its neighbour.
    std::vector<std::pair<VertexId, int>> moved;
    for (auto it = lambda_.begin(); it != lambda_.end();) {
      if (it->first.has(v0)) {
        moved.emplace_back(it->first.other(v0), it->second);
        it = lambda_.erase(it);
      } else {
        ++it;
      }
    }
    if (top != kNoEdge) {
      VertexId x = h_.edge(top).key.other(v0);
      for (auto [y, r] : moved)
        if (y != x) lambda_[EdgeKey(x, y)] = r;
    }
    std::erase(lambda_vertices_, v0);
  }
  next_rank_ = m1;
  bag_ = 0;
}

void ChargingForest::step() {
  if (bag_ == -1) return init_forest();
  if (done()) throw InvariantError("all bags already processed");
  const int i = bag_ + 1;
  const VertexId u = d_.introduced(i);
  bool free = std::none_of(mst_adj_[u].begin(), mst_adj_[u].end(),
                           [&](const Neighbor& nb) { return edge_bag_[nb.edge] == i; });
  if (free) step_free(i);
  else step_nonfree(i);
}

void ChargingForest::run() {
  while (!done()) step();
}

void ChargingForest::step_free(int i) {
  if (i != bag_ + 1 || i == 0) throw InvariantError("step_free out of order");
  const VertexId u = d_.introduced(i);
  for (const Neighbor& nb : mst_adj_[u])
    if (edge_bag_[nb.edge] == i) throw InvariantError("step_free: introduced vertex " + std::to_string(u) + " is not free");
  add_phi_vertices(i);
  std::vector<std::pair<int, EdgeKey>> by_rank;
  for (const auto& [k, r] : lambda_) by_rank.emplace_back(r, k);
  std::sort(by_rank.begin(), by_rank.end());
  for (const auto& [r, k] : by_rank) add_edge(phi_id(u, k.u), phi_id(u, k.v), u, PhiEdgeKind::Dashed, r, i);
  convert_dashed(i, true);
  update_lambda(i, u, d_.forgotten(i));
  bag_ = i;
}

void ChargingForest::step_nonfree(int i) {
  if (i != bag_ + 1 || i == 0) throw InvariantError("step_nonfree out of order");
  const VertexId u = d_.introduced(i);
  const VertexId v = d_.forgotten(i);
  if (std::none_of(mst_adj_[u].begin(), mst_adj_[u].end(), [&](const Neighbor& nb) { return edge_bag_[nb.edge] == i; }))
    throw InvariantError("step_nonfree: introduced vertex " + std::to_string(u) + " is free");
  add_phi_vertices(i);
  std::vector<std::pair<EdgeId, EdgeId>> candidates;
  for (const Neighbor& nb : mst_adj_[u]) {
    if (edge_bag_[nb.edge] != i) continue;
    for (VertexId w : d_.bag(i))
      if (w != u && w != nb.vertex) candidates.emplace_back(phi_id(w, u), phi_id(w, nb.vertex));
  }
  add_bold_greedily(std::move(candidates), i);
  bool branching = v != -1 && v != u && !in_mst_[phi_id(u, v)];
  if (branching) convert_dashed(i, false);
  update_lambda(i, u, v);
  bag_ = i;
}

void ChargingForest::convert_dashed(int i, bool forgotten_rule) {
  const VertexId u = d_.introduced(i);
  const VertexId v = d_.forgotten(i);
  if (forgotten_rule && v != -1 && v != u) {
    EdgeId p = phi_id(u, v);
    int best = -1;
    for (int idx : incident_[p]) {
      const PhiEdge& e = edges_[idx];
      if (e.alive && e.kind == PhiEdgeKind::Dashed && e.time == i && (best == -1 || e.rank > edges_[best].rank))
        best = idx;
    }
    if (best != -1) {
      edges_[best].kind = PhiEdgeKind::Mixed;
      dirty_ = true;
    }
  }

  const int m = h_.edge_count();
  auto live_or_rooted = [&](EdgeId x) { return in_mst_[x] || is_active(x, i); };
  for (;;) {
    const Labels& L = labels();
    std::vector<char> good(L.dft_rooted.begin(), L.dft_rooted.end());
    for (EdgeId x = 0; x < m; ++x)
      if (exists_[x] && is_active(x, i)) good[L.dft[x]] = 1;
    EdgeId start = kNoEdge;
    for (EdgeId x = 0; x < m && start == kNoEdge; ++x)
      if (exists_[x] && !good[L.dft[x]]) start = x;
    if (start == kNoEdge) return;

    // Grow the dead tree Prim-style: among dashed edges leaving it towards a
    // side that still holds an active or root phi-vertex, convert the
    // earliest (then highest-ranked) one until the tree is alive again.
    for (;;) {
      const Labels& cur = labels();
      const int tree = cur.dft[start];
      bool alive = false;
      for (EdgeId x = 0; x < m && !alive; ++x)
        if (exists_[x] && cur.dft[x] == tree && live_or_rooted(x)) alive = true;
      if (alive) break;
      int pick = -1;
      for (int idx = 0; idx < static_cast<int>(edges_.size()); ++idx) {
        const PhiEdge& e = edges_[idx];
        if (!e.alive || e.kind != PhiEdgeKind::Dashed) continue;
        bool in_a = cur.dft[e.a] == tree, in_b = cur.dft[e.b] == tree;
        if (in_a == in_b) continue;
        auto far = side_of(in_a ? e.b : e.a, idx);
        if (std::none_of(far.begin(), far.end(), live_or_rooted)) continue;
        if (pick == -1 || std::tuple(e.time, -e.rank, e.seq) <
                              std::tuple(edges_[pick].time, -edges_[pick].rank, edges_[pick].seq))
          pick = idx;
      }
      if (pick == -1)
        throw InvariantError("bag " + std::to_string(i) + ": dashed-free tree of " + key_str(h_.edge(start).key) +
                             " cannot reach an active phi-vertex");
      edges_[pick].kind = PhiEdgeKind::Mixed;
      dirty_ = true;
    }
  }
}

void ChargingForest::update_lambda(int i, VertexId u, VertexId v) {
  std::vector<VertexId> nbrs;
  for (const Neighbor& nb : mst_adj_[u])
    if (edge_bag_[nb.edge] == i) nbrs.push_back(nb.vertex);
  std::sort(nbrs.begin(), nbrs.end());
  if (auto it = std::find(nbrs.begin(), nbrs.end(), v); it != nbrs.end()) std::rotate(nbrs.begin(), it, it + 1);
  const int p = static_cast<int>(nbrs.size());
  const int base = next_rank_;
  for (int j = 0; j < p; ++j) mst_rank_[phi_id(u, nbrs[j])] = base + j + 1;
  next_rank_ += p;

  auto detach = [&](VertexId x) {
    std::vector<std::pair<int, VertexId>> out;
    for (auto it = lambda_.begin(); it != lambda_.end();) {
      if (it->first.has(x)) {
        out.emplace_back(it->second, it->first.other(x));
        it = lambda_.erase(it);
      } else {
        ++it;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto add_vertex = [&](VertexId x) {
    lambda_vertices_.insert(std::lower_bound(lambda_vertices_.begin(), lambda_vertices_.end(), x), x);
  };

  if (u == v) {
    for (int j = 0; j + 1 < p; ++j) lambda_[EdgeKey(nbrs[j], nbrs[j + 1])] = base + j + 1;
  } else if (p > 0 && nbrs[0] == v) {
    for (auto [r, y] : detach(v)) lambda_[EdgeKey(u, y)] = r;
    std::erase(lambda_vertices_, v);
    add_vertex(u);
    for (int j = 1; j < p; ++j) lambda_[EdgeKey(u, nbrs[j])] = base + j + 1;
  } else {
    add_vertex(u);
    for (int j = 0; j < p; ++j) lambda_[EdgeKey(u, nbrs[j])] = base + j + 1;
    if (v != -1) {
      auto out = detach(v);
      for (std::size_t j = 0; j + 1 < out.size(); ++j) lambda_[EdgeKey(out[j].second, out[j + 1].second)] = out[j].first;
      std::erase(lambda_vertices_, v);
    }
  }
}

InvariantReport ChargingForest::check_invariants() const {
  InvariantReport rep;
  rep.bag = bag_;
  if (bag_ < 0) return rep;
  const int i = bag_;
  const int m = h_.edge_count();
  const int n = h_.vertex_count();
  auto fail = [&](const std::string& inv, std::string detail) { rep.violations.push_back({inv, std::move(detail)}); };
  auto phi_str = [&](EdgeId x) { return "(" + std::to_string(h_.edge(x).key.u) + "," + std::to_string(h_.edge(x).key.v) + ")"; };

  // Structure of the forest itself.
  DisjointSet cycles(m);
  for (const PhiEdge& e : edges_) {
    if (!e.alive) continue;
    if (!exists_[e.a] || !exists_[e.b]) fail("structure", "edge touches a phi-vertex that does not exist yet");
    if (!cycles.unite(e.a, e.b)) fail("structure", "cycle closed by " + phi_str(e.a) + "-" + phi_str(e.b));
  }
  const Labels& L = labels();
  {
    std::vector<int> roots(L.comp_rooted.size(), 0);
    for (EdgeId x = 0; x < m; ++x)
      if (exists_[x] && in_mst_[x]) ++roots[L.comp[x]];
    for (std::size_t c = 0; c < roots.size(); ++c)
      if (roots[c] > 1) fail("structure", "a tree of the forest holds " + std::to_string(roots[c]) + " roots");
  }

  // Components of MST[X_1 .. X_i].
  DisjointSet prefix(n);
  for (EdgeId e = 0; e < m; ++e)
    if (in_mst_[e] && edge_bag_[e] <= i) prefix.unite(h_.edge(e).key.u, h_.edge(e).key.v);

  for (const PhiEdge& e : edges_) {
    if (!e.alive) continue;
    const EdgeKey ka = h_.edge(e.a).key, kb = h_.edge(e.b).key;
    if (e.apex < 0 || !ka.has(e.apex) || !kb.has(e.apex)) {
      fail("structure", "forest edge " + phi_str(e.a) + "-" + phi_str(e.b) + " is not a line-graph edge");
      continue;
    }
    VertexId b = ka.other(e.apex), c = kb.other(e.apex);
    if (e.kind == PhiEdgeKind::Bold) {
      EdgeId bc = h_.find_edge(b, c);
      if (bc == kNoEdge || !in_mst_[bc] || edge_bag_[bc] > i)
        fail("structure", "bold edge " + phi_str(e.a) + "-" + phi_str(e.b) + " has no MST edge " + key_str(EdgeKey(b, c)));
    } else if (!prefix.same(b, c)) {
      fail("structure", std::string(to_string(e.kind)) + " edge " + phi_str(e.a) + "-" + phi_str(e.b) +
                            " joins vertices of different MST components");
    }
    if (done() && e.kind == PhiEdgeKind::Dashed) fail("structure", "dashed edge left in the final forest");
  }

  // Contracted forest: spans X_i minus the forgotten vertex, distinct ranks,
  // rank = minimum MST rank along the path, and the same connectivity as the MST prefix.
  {
    Bag expect = d_.bag(i);
    std::erase(expect, d_.forgotten(i));
    if (expect != lambda_vertices_) fail("structure", "contracted forest does not span X_i minus the forgotten vertex");
    std::set<int> ranks;
    DisjointSet lam(n);
    for (const auto& [k, r] : lambda_) {
      if (!ranks.insert(r).second) fail("structure", "contracted forest rank " + std::to_string(r) + " repeats");
      if (!std::binary_search(lambda_vertices_.begin(), lambda_vertices_.end(), k.u) ||
          !std::binary_search(lambda_vertices_.begin(), lambda_vertices_.end(), k.v))
        fail("structure", "contracted forest edge " + key_str(k) + " leaves its vertex set");
      if (!lam.unite(k.u, k.v)) fail("structure", "contracted forest has a cycle at " + key_str(k));
      if (!prefix.same(k.u, k.v)) {
        fail("structure", "contracted forest edge " + key_str(k) + " joins different MST components");
        continue;
      }
      int low = -1;
      for (EdgeId e : mst_path(k.u, k.v)) low = low == -1 ? mst_rank_[e] : std::min(low, mst_rank_[e]);
      if (low != r)
        fail("structure", "contracted forest edge " + key_str(k) + " has rank " + std::to_string(r) +
                              " but the MST path minimum is " + std::to_string(low));
    }
    for (VertexId x : lambda_vertices_)
      for (VertexId y : lambda_vertices_)
        if (x < y && lam.same(x, y) != prefix.same(x, y))
          fail("structure", "contracted forest connectivity differs from the MST at " + key_str(EdgeKey(x, y)));
  }

  // (i) cross pairs: one unrooted tree per pair of MST components, and
  // unrooted trees hold nothing else.
  // (ii) pairs inside one MST component sit in rooted dashed-free trees.
  std::map<std::pair<int, int>, int> tree_of_class;
  std::map<int, std::pair<int, int>> class_of_tree;
  for (EdgeId x = 0; x < m; ++x) {
    if (!exists_[x]) continue;
    const EdgeKey& k = h_.edge(x).key;
    int cu = prefix.find(k.u), cv = prefix.find(k.v);
    const int t = L.comp[x];
    if (cu == cv) {
      if (!L.dft_rooted[L.dft[x]]) fail("(ii)", phi_str(x) + " joins one MST component but its dashed-free tree has no root");
      if (!L.comp_rooted[t]) fail("(i)", "unrooted tree holds the same-component pair " + phi_str(x));
      continue;
    }
    std::pair<int, int> cls{std::min(cu, cv), std::max(cu, cv)};
    if (L.comp_rooted[t]) fail("(i)", "cross-component pair " + phi_str(x) + " lies in a rooted tree");
    auto [it, fresh] = tree_of_class.emplace(cls, t);
    if (!fresh && it->second != t) fail("(i)", "pairs between the MST components of " + phi_str(x) + " are split over two trees");
    auto [jt, fresh2] = class_of_tree.emplace(t, cls);
    if (!fresh2 && jt->second != cls) fail("(i)", "one unrooted tree spans two different pairs of MST components");
  }

  // (iii) every unrooted dashed-free tree keeps an active phi-vertex.
  {
    std::vector<char> active(L.dft_rooted.size(), 0);
    for (EdgeId x = 0; x < m; ++x)
      if (exists_[x] && is_active(x, i)) active[L.dft[x]] = 1;
    std::vector<char> reported(L.dft_rooted.size(), 0);
    for (EdgeId x = 0; x < m; ++x) {
      if (!exists_[x]) continue;
      int t = L.dft[x];
      if (!L.dft_rooted[t] && !active[t] && !reported[t]) {
        reported[t] = 1;
        fail("(iii)", "unrooted dashed-free tree of " + phi_str(x) + " has no active phi-vertex");
      }
    }
  }

  // (iv) for every window j..i and trees T1 != T2 of MST[X_j .. X_i] meeting
  // both end bags, all pairs across T1, T2 from X_j and from X_i share one
  // unrooted dashed-free tree. Only trees that are still apart in
  // MST[X_1 .. X_i] are quantified; once they are joined, (ii) requires the
  // pairs to be rooted instead.
  for (int j = 0; j <= i; ++j) {
    DisjointSet window(n);
    for (EdgeId e = 0; e < m; ++e)
      if (in_mst_[e] && edge_bag_[e] >= j && edge_bag_[e] <= i) window.unite(h_.edge(e).key.u, h_.edge(e).key.v);
    auto pairs_of = [&](const Bag& bag) {
      std::map<std::pair<int, int>, std::vector<EdgeId>> out;
      for (std::size_t a = 0; a < bag.size(); ++a)
        for (std::size_t b = a + 1; b < bag.size(); ++b) {
          int ca = window.find(bag[a]), cb = window.find(bag[b]);
          if (ca != cb) out[{std::min(ca, cb), std::max(ca, cb)}].push_back(phi_id(bag[a], bag[b]));
        }
      return out;
    };
    auto at_j = pairs_of(d_.bag(j));
    auto at_i = pairs_of(d_.bag(i));
    for (const auto& [cls, list] : at_i) {
      auto it = at_j.find(cls);
      if (it == at_j.end() || prefix.same(cls.first, cls.second)) continue;
      int t = L.dft[list.front()];
      bool same = !L.dft_rooted[t] &&
                  std::all_of(list.begin(), list.end(), [&](EdgeId x) { return L.dft[x] == t; }) &&
                  std::all_of(it->second.begin(), it->second.end(), [&](EdgeId x) { return L.dft[x] == t; });
      if (!same)
        fail("(iv)", "window " + std::to_string(j) + ".." + std::to_string(i) + ": pairs across two trees, e.g. " +
                         phi_str(list.front()) + " and " + phi_str(it->second.front()) + ", are not in one unrooted dashed-free tree");
    }
  }
  return rep;
}

bool ChargingForest::inject_remove_edge(std::mt19937_64& rng) {
  std::vector<int> alive;
  for (int idx = 0; idx < static_cast<int>(edges_.size()); ++idx)
    if (edges_[idx].alive) alive.push_back(idx);
  if (alive.empty()) return false;
  std::uniform_int_distribution<std::size_t> pick(0, alive.size() - 1);
  kill_edge(alive[pick(rng)]);
  return true;
}

bool ChargingForest::inject_cross_bold_edge(std::mt19937_64& rng) {
  const Labels& L = labels();
  // Prefer triangle-shaped edges (the shape the triangle rule would accept)
  // so the checker has to rely on the invariants rather than on shape.
  std::vector<std::tuple<EdgeId, EdgeId, VertexId>> shaped, other;
  for (VertexId a = 0; a < h_.vertex_count(); ++a) {
    std::vector<EdgeId> at;
    for (const Neighbor& nb : h_.neighbors(a))
      if (exists_[nb.edge]) at.push_back(nb.edge);
    for (std::size_t x = 0; x < at.size(); ++x)
      for (std::size_t y = x + 1; y < at.size(); ++y) {
        if (L.comp[at[x]] == L.comp[at[y]]) continue;
        EdgeId bc = h_.find_edge(h_.edge(at[x]).key.other(a), h_.edge(at[y]).key.other(a));
        (bc != kNoEdge && in_mst_[bc] ? shaped : other).emplace_back(at[x], at[y], a);
      }
  }
  auto& pool = shaped.empty() ? other : shaped;
  if (pool.empty()) return false;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  auto [p, q, a] = pool[pick(rng)];
  add_edge(p, q, a, PhiEdgeKind::Bold, 0, bag_);
  return true;
}

ChargingScheme extract_scheme(const ChargingForest& phi) {
  if (!phi.done()) throw InvariantError("extract_scheme needs the final forest");
  const WeightedGraph& h = phi.graph();
  const int m = h.edge_count();
  std::vector<std::vector<std::pair<EdgeId, int>>> adj(m);
  for (int idx = 0; idx < static_cast<int>(phi.edges().size()); ++idx) {
    const PhiEdge& e = phi.edges()[idx];
    if (!e.alive) continue;
    if (e.kind == PhiEdgeKind::Dashed) throw InvariantError("final forest still has dashed edges");
    adj[e.a].emplace_back(e.b, idx);
    adj[e.b].emplace_back(e.a, idx);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  // Fundamental cycle of e: e plus its MST path, as a symmetric difference.
  auto toggle = [](std::set<EdgeKey>& set, const EdgeKey& k) {
    if (!set.erase(k)) set.insert(k);
  };
  auto cycle_of = [&](EdgeId e, std::set<EdgeKey>& into) {
    toggle(into, h.edge(e).key);
    for (EdgeId t : phi.mst_path(h.edge(e).key.u, h.edge(e).key.v)) toggle(into, h.edge(t).key);
  };

  ChargingScheme cs;
  std::vector<char> seen(m, 0);
  for (EdgeId root = 0; root < m; ++root) {
    if (!phi.in_mst()[root]) continue;
    cs.tree.push_back(h.edge(root).key);
    std::vector<EdgeId> order;
    std::vector<std::pair<EdgeId, EdgeId>> stack{{root, kNoEdge}};
    while (!stack.empty()) {
      auto [x, parent] = stack.back();
      stack.pop_back();
      if (seen[x]) throw InvariantError("charging forest is not a forest");
      seen[x] = 1;
      order.push_back(x);
      for (auto it = adj[x].rbegin(); it != adj[x].rend(); ++it)
        if (it->first != parent) stack.emplace_back(it->first, x);
    }
    for (std::size_t k = 1; k < order.size(); ++k) {
      EdgeId prev = order[k - 1], cur = order[k];
      if (phi.in_mst()[cur]) throw InvariantError("a tree of the charging forest holds two roots");
      // Q_j per forest edge on the path prev -> cur: {ab, ac} plus the MST path b-c.
      std::set<EdgeKey> d;
      for (int idx : phi.phi_path(prev, cur)) {
        const PhiEdge& e = phi.edges()[idx];
        toggle(d, h.edge(e.a).key);
        toggle(d, h.edge(e.b).key);
        for (EdgeId t : phi.mst_path(e.associated.u, e.associated.v)) toggle(d, h.edge(t).key);
      }
      std::set<EdgeKey> check;
      cycle_of(prev, check);
      cycle_of(cur, check);
      if (d != check) throw InvariantError("triangle paths along the forest do not telescope");
      const EdgeKey target = h.edge(cur).key;
      d.erase(target);
      std::vector<EdgeKey> pool(d.begin(), d.end());
      auto path = simple_path_within(pool, target.u, target.v);
      if (path.empty()) throw InvariantError("no charging path for " + key_str(target));
      cs.pairs.push_back({target, std::move(path)});
    }
  }
  for (EdgeId x = 0; x < m; ++x)
    if (!seen[x]) throw InvariantError("phi-vertex " + key_str(h.edge(x).key) + " lies in an unrooted tree");
  return cs;
}

ChargeAudit audit_charges(const ChargingForest& phi, const ChargingScheme& scheme, int pw) {
  const WeightedGraph& h = phi.graph();
  ChargeAudit audit;
  audit.pw = pw;
  audit.triangle_bound = std::max(0, pw - 2);  // the literal pw-2 is negative for pw = 1
  audit.pseudo_bound = 2 * pw * pw;
  audit.total_bound = forest_charge_bound(pw);
  std::map<EdgeKey, std::size_t> slot;
  for (EdgeId e = 0; e < h.edge_count(); ++e)
    if (phi.in_mst()[e]) {
      slot[h.edge(e).key] = audit.edges.size();
      audit.edges.push_back({h.edge(e).key, 0, 0, 0});
    }
  for (const PhiEdge& e : phi.edges()) {
    if (!e.alive) continue;
    if (e.kind == PhiEdgeKind::Bold) {
      if (auto it = slot.find(e.associated); it != slot.end()) ++audit.edges[it->second].triangles;
    } else if (e.kind == PhiEdgeKind::Mixed) {
      for (EdgeId t : phi.mst_path(e.associated.u, e.associated.v)) ++audit.edges[slot.at(h.edge(t).key)].pseudo_triangles;
    }
  }
  for (const ChargingPair& p : scheme.pairs)
    for (const EdgeKey& k : p.path)
      if (auto it = slot.find(k); it != slot.end()) ++audit.edges[it->second].total_charges;
  for (const EdgeAudit& a : audit.edges) {
    audit.max_triangles = std::max(audit.max_triangles, a.triangles);
    audit.max_pseudo_triangles = std::max(audit.max_pseudo_triangles, a.pseudo_triangles);
    audit.max_total = std::max(audit.max_total, a.total_charges);
    audit.triangle_violations += a.triangles > audit.triangle_bound;
    audit.pseudo_violations += a.pseudo_triangles > audit.pseudo_bound;
    audit.total_violations += a.total_charges > audit.total_bound;
  }
  return audit;
}

ForestPipelineResult run_charging_forest(const WeightedGraph& g, const SmoothPathDecomposition& d, const Rational& eps,
                                         bool check_each_bag) {
  auto valid = validate(g, d.decomposition());
  if (!valid.ok()) throw InputError("decomposition: " + valid.violations.front().describe());
  if (!is_connected(g)) throw InputError("the charging-forest pipeline needs a connected graph");

  ForestPipelineResult r{greedy_spanner(g, eps), {}, {}, {}, {}, 0, d.pathwidth(), {}, {}, d.size()};
  r.completion = complete_to_kpath(r.spanner.graph, d);
  ChargingForest phi(r.completion.graph, d);
  for (EdgeId e = 0; e < r.completion.graph.edge_count(); ++e)
    if (phi.in_mst()[e] && r.completion.is_virtual[e])
      throw InvariantError("virtual edge " + key_str(r.completion.graph.edge(e).key) + " entered the MST of the completion");

  while (!phi.done()) {
    phi.step();
    if (check_each_bag || phi.done())
      if (auto rep = phi.check_invariants(); !rep.ok()) r.invariant_failures.push_back(std::move(rep));
  }
  r.weak_scheme = extract_scheme(phi);
  r.scheme = strengthen_weak_scheme(r.spanner, r.completion.graph, r.weak_scheme);
  r.k = forest_charge_bound(r.pathwidth);
  r.report = verify_scheme(r.spanner, r.scheme, r.k);
  r.audit = audit_charges(phi, r.scheme, r.pathwidth);
  return r;
}

}  // namespace lightspan
