#include "lightspan/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "lightspan/errors.hpp"
#include "lightspan/spanner.hpp"
#include "lightspan/union_find.hpp"

namespace lightspan {

namespace {

Rational draw_weight(const WeightDistribution& w, std::mt19937_64& rng) {
  if (w.kind == WeightDistribution::Kind::Constant) return Rational(static_cast<long>(w.lo));
  std::uniform_int_distribution<long long> d(w.lo, w.hi);
  return Rational(static_cast<long>(d(rng)));
}

bool keeps_boundary(const WeightedGraph& g, const std::vector<VertexId>& boundary, const Rational& eps) {
  Spanner s = greedy_spanner(g, eps);
  const int n = static_cast<int>(boundary.size());
  for (int i = 0; i < n; ++i)
    if (!s.graph.has_edge(boundary[i], boundary[(i + 1) % n])) return false;
  return true;
}

}  // namespace

OuterplanarInstance generate_outerplanar(int n, std::uint64_t seed, const WeightDistribution& weights,
                                         double chord_keep, std::optional<Rational> keep_boundary_eps,
                                         int max_attempts) {
  if (n < 3) throw InputError("outer-planar generator needs n >= 3");
  if (chord_keep < 0 || chord_keep > 1) throw InputError("chord keep probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);

  // Triangulate the polygon on positions 0..n-1 by splitting (a, b) at a
  // random apex; every split edge with b - a >= 2 is a chord.
  std::vector<std::pair<int, int>> chords;
  std::vector<std::pair<int, int>> work{{0, n - 1}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    if (b - a < 2) continue;
    std::uniform_int_distribution<int> apex(a + 1, b - 1);
    int c = apex(rng);
    for (auto side : {std::pair{a, c}, std::pair{c, b}}) {
      if (side.second - side.first >= 2) chords.push_back(side);
      work.push_back(side);
    }
  }
  std::bernoulli_distribution keep(chord_keep);
  std::vector<std::pair<int, int>> kept;
  for (auto ch : chords)
    if (keep(rng)) kept.push_back(ch);

  OuterplanarInstance inst;
  inst.boundary.resize(n);
  std::iota(inst.boundary.begin(), inst.boundary.end(), 0);
  std::shuffle(inst.boundary.begin(), inst.boundary.end(), rng);
  const auto& at = inst.boundary;

  auto build = [&](bool favour_boundary) {
    WeightedGraph g(n);
    Rational base = weights.lo > 0 ? Rational(static_cast<long>(weights.lo)) : Rational(1);
    for (int i = 0; i < n; ++i)
      g.add_edge(at[i], at[(i + 1) % n], favour_boundary ? base : draw_weight(weights, rng));
    for (auto [a, b] : kept)
      g.add_edge(at[a], at[b], favour_boundary ? 2 * base + draw_weight(weights, rng) : draw_weight(weights, rng));
    return g;
  };

  for (inst.attempts = 1; inst.attempts <= max_attempts; ++inst.attempts) {
    inst.graph = build(false);
    if (!keep_boundary_eps || keeps_boundary(inst.graph, inst.boundary, *keep_boundary_eps)) return inst;
  }
  inst.fallback = true;
  inst.graph = build(true);
  if (!keeps_boundary(inst.graph, inst.boundary, *keep_boundary_eps))
    throw InputError("no weighting keeps the whole boundary in the spanner for eps = " + to_string(*keep_boundary_eps));
  return inst;
}

KPathInstance generate_partial_kpath(int n, int pw, std::uint64_t seed, const WeightDistribution& weights,
                                     double keep) {
  if (keep < 0 || keep > 1) throw InputError("edge keep probability must lie in [0, 1]");
  KPathInstance full = generate_kpath(n, pw, seed, weights);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::bernoulli_distribution survive(keep);
  std::vector<char> chosen(full.graph.edge_count());
  DisjointSet dsu(n);
  for (EdgeId id = 0; id < full.graph.edge_count(); ++id)
    if ((chosen[id] = survive(rng))) dsu.unite(full.graph.edge(id).key.u, full.graph.edge(id).key.v);
  std::vector<EdgeId> rest;
  for (EdgeId id = 0; id < full.graph.edge_count(); ++id)
    if (!chosen[id]) rest.push_back(id);
  std::shuffle(rest.begin(), rest.end(), rng);
  for (EdgeId id : rest)
    if (dsu.unite(full.graph.edge(id).key.u, full.graph.edge(id).key.v)) chosen[id] = 1;

  WeightedGraph g(n);
  for (EdgeId id = 0; id < full.graph.edge_count(); ++id)
    if (chosen[id]) g.add_edge(full.graph.edge(id).key.u, full.graph.edge(id).key.v, full.graph.edge(id).weight);
  return {std::move(g), std::move(full.decomposition)};
}

WeightedGraph generate_gnp(int n, double p, std::uint64_t seed, const WeightDistribution& weights) {
  if (n < 0) throw InputError("vertex count must be non-negative");
  if (p < 0 || p > 1) throw InputError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(p);
  WeightedGraph g(n);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (edge(rng)) g.add_edge(u, v, draw_weight(weights, rng));
  return g;
}

}  // namespace lightspan
