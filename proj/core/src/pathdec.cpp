#include "lightspan/pathdec.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "lightspan/errors.hpp"

namespace lightspan {

int PathDecomposition::width() const {
  int w = -1;
  for (const Bag& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

std::string DecompositionViolation::describe() const {
  switch (kind) {
    case Kind::VertexOutOfRange:
      return "bag " + std::to_string(bag) + " holds out-of-range vertex " + std::to_string(vertex);
    case Kind::VertexUncovered:
      return "vertex " + std::to_string(vertex) + " is in no bag";
    case Kind::EdgeUncovered:
      return "edge " + std::to_string(vertex) + "-" + std::to_string(other) + " is in no bag";
    case Kind::NonContiguous:
      return "bags holding vertex " + std::to_string(vertex) + " are not contiguous (gap at bag " +
             std::to_string(bag) + ")";
  }
  return "unknown violation";
}

DecompositionReport validate(const WeightedGraph& g, const PathDecomposition& d) {
  DecompositionReport report;
  report.width = d.width();
  const int n = g.vertex_count();
  std::vector<std::vector<int>> holders(n);
  for (int i = 0; i < d.size(); ++i) {
    Bag bag = d.bags[i];
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    for (VertexId v : bag) {
      if (v < 0 || v >= n) {
        report.violations.push_back({DecompositionViolation::Kind::VertexOutOfRange, v, -1, i});
        continue;
      }
      holders[v].push_back(i);
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (holders[v].empty()) {
      report.violations.push_back({DecompositionViolation::Kind::VertexUncovered, v, -1, -1});
      continue;
    }
    for (std::size_t k = 1; k < holders[v].size(); ++k)
      if (holders[v][k] != holders[v][k - 1] + 1) {
        report.violations.push_back({DecompositionViolation::Kind::NonContiguous, v, -1, holders[v][k - 1] + 1});
        break;
      }
  }
  for (const Edge& e : g.edges()) {
    const auto& hu = holders[e.key.u];
    const auto& hv = holders[e.key.v];
    bool shared = false;
    for (std::size_t a = 0, b = 0; a < hu.size() && b < hv.size();) {
      if (hu[a] == hv[b]) {
        shared = true;
        break;
      }
      if (hu[a] < hv[b]) ++a;
      else ++b;
    }
    if (!shared) report.violations.push_back({DecompositionViolation::Kind::EdgeUncovered, e.key.u, e.key.v, -1});
  }
  return report;
}

bool is_smooth(const PathDecomposition& d) {
  const int w = d.width();
  for (int i = 0; i < d.size(); ++i) {
    Bag b = d.bags[i];
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) return false;
    if (static_cast<int>(b.size()) != w + 1) return false;
    if (i + 1 < d.size()) {
      Bag c = d.bags[i + 1];
      std::sort(c.begin(), c.end());
      Bag common;
      std::set_intersection(b.begin(), b.end(), c.begin(), c.end(), std::back_inserter(common));
      if (static_cast<int>(common.size()) != w) return false;
    }
  }
  return true;
}

SmoothPathDecomposition::SmoothPathDecomposition(PathDecomposition d) : dec_(std::move(d)) {
  for (Bag& b : dec_.bags) std::sort(b.begin(), b.end());
  if (!is_smooth(dec_)) throw InputError("path decomposition is not smooth");
  pw_ = dec_.width();
  const int k = dec_.size();
  introduced_.assign(k, -1);
  forgotten_.assign(k, -1);
  VertexId max_vertex = -1;
  for (const Bag& b : dec_.bags)
    if (!b.empty()) max_vertex = std::max(max_vertex, b.back());
  interval_.assign(max_vertex + 1, {-1, -1});
  for (int i = 0; i < k; ++i) {
    for (VertexId v : dec_.bags[i]) {
      if (v < 0) throw InputError("negative vertex id in decomposition");
      if (interval_[v].first == -1) interval_[v].first = i;
      interval_[v].second = i;
    }
    if (i > 0)
      for (VertexId v : dec_.bags[i])
        if (!std::binary_search(dec_.bags[i - 1].begin(), dec_.bags[i - 1].end(), v)) introduced_[i] = v;
    if (i + 1 < k)
      for (VertexId v : dec_.bags[i])
        if (!std::binary_search(dec_.bags[i + 1].begin(), dec_.bags[i + 1].end(), v)) forgotten_[i] = v;
  }
}

bool SmoothPathDecomposition::contains(int i, VertexId v) const {
  const Bag& b = dec_.bags.at(i);
  return std::binary_search(b.begin(), b.end(), v);
}

SmoothPathDecomposition smooth(const WeightedGraph& g, const PathDecomposition& d, std::vector<BagRun>* runs) {
  auto report = validate(g, d);
  if (!report.ok()) throw InputError("cannot smooth an invalid decomposition: " + report.violations.front().describe());
  const int n = g.vertex_count();
  const int k = d.size();
  const int capacity = d.width() + 1;
  std::vector<int> first(n, -1), last(n, -1);
  for (int i = 0; i < k; ++i)
    for (VertexId v : d.bags[i]) {
      if (first[v] == -1) first[v] = i;
      last[v] = i;
    }
  std::vector<std::vector<VertexId>> intros(k);
  for (VertexId v = 0; v < n; ++v) intros[first[v]].push_back(v);

  PathDecomposition out;
  std::vector<VertexId> current;
  std::vector<char> dead(n, 0);
  std::vector<BagRun> run(k, {0, 0});
  auto emit = [&] {
    Bag b = current;
    std::sort(b.begin(), b.end());
    out.bags.push_back(std::move(b));
  };
  for (int i = 0; i < k; ++i) {
    int before = out.size();
    for (VertexId x : intros[i]) {
      if (static_cast<int>(current.size()) < capacity) {
        current.push_back(x);
        if (static_cast<int>(current.size()) == capacity) emit();
        continue;
      }
      // Evict the vertex that died earliest (then smallest id).
      auto victim = current.end();
      for (auto it = current.begin(); it != current.end(); ++it) {
        if (!dead[*it]) continue;
        if (victim == current.end() || last[*it] < last[*victim] ||
            (last[*it] == last[*victim] && *it < *victim))
          victim = it;
      }
      if (victim == current.end()) throw InvariantError("smooth: no vertex available to evict");
      *victim = x;
      emit();
    }
    int after = out.size();
    if (after > before) run[i] = {std::max(before, 0), after - 1};
    else run[i] = {std::max(after - 1, 0), std::max(after - 1, 0)};
    for (VertexId v : d.bags[i])
      if (last[v] == i) dead[v] = 1;
  }
  if (out.bags.empty() && !current.empty()) emit();
  if (runs) *runs = std::move(run);
  return SmoothPathDecomposition(std::move(out));
}

std::vector<int> assign_edges_to_bags(const WeightedGraph& g, const SmoothPathDecomposition& d) {
  std::vector<int> bag_of(g.edge_count(), -1);
  for (EdgeId id = 0; id < g.edge_count(); ++id) {
    const EdgeKey& k = g.edge(id).key;
    auto in_range = [&](VertexId v) { return v < static_cast<VertexId>(d.vertex_span()); };
    if (!in_range(k.u) || !in_range(k.v))
      throw InputError("edge " + std::to_string(k.u) + "-" + std::to_string(k.v) + " has an endpoint in no bag");
    auto [su, tu] = d.interval(k.u);
    auto [sv, tv] = d.interval(k.v);
    int b = std::max(su, sv);
    if (su < 0 || sv < 0 || b > std::min(tu, tv))
      throw InputError("edge " + std::to_string(k.u) + "-" + std::to_string(k.v) + " lies in no bag of the decomposition");
    bag_of[id] = b;
  }
  return bag_of;
}

WeightDistribution WeightDistribution::parse(const std::string& text) {
  std::istringstream in(text);
  std::string kind, a, b;
  std::getline(in, kind, ':');
  std::getline(in, a, ':');
  std::getline(in, b, ':');
  try {
    if (kind == "uniform" && !a.empty() && !b.empty()) {
      auto d = uniform(std::stoll(a), std::stoll(b));
      if (d.lo < 1 || d.hi < d.lo) throw InputError("uniform weights need 1 <= lo <= hi");
      return d;
    }
    if ((kind == "const" || kind == "constant") && !a.empty() && b.empty()) {
      auto d = constant(std::stoll(a));
      if (d.lo < 1) throw InputError("constant weight must be positive");
      return d;
    }
  } catch (const std::logic_error&) {
  }
  throw InputError("bad weight distribution '" + text + "' (expected uniform:LO:HI or const:C)");
}

std::string WeightDistribution::to_string() const {
  if (kind == Kind::Constant) return "const:" + std::to_string(lo);
  return "uniform:" + std::to_string(lo) + ":" + std::to_string(hi);
}

KPathInstance generate_kpath(int n, int pw, std::uint64_t seed, const WeightDistribution& weights) {
  if (pw < 0) throw InputError("pathwidth must be non-negative");
  if (n < pw + 1) throw InputError("generate_kpath needs n >= pw+1 (n=" + std::to_string(n) + ", pw=" + std::to_string(pw) + ")");
  std::mt19937_64 rng(seed);
  std::vector<VertexId> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  std::shuffle(label.begin(), label.end(), rng);
  std::uniform_int_distribution<long long> draw(weights.lo, weights.hi);
  auto weight = [&]() -> Rational {
    if (weights.kind == WeightDistribution::Kind::Constant) return Rational(static_cast<long>(weights.lo));
    return Rational(static_cast<long>(draw(rng)));
  };

  WeightedGraph g(n);
  PathDecomposition d;
  std::vector<VertexId> current;
  for (int v = 0; v <= pw; ++v) {
    for (VertexId w : current) g.add_edge(label[w], label[v], weight());
    current.push_back(v);
  }
  auto push_bag = [&] {
    Bag b;
    for (VertexId v : current) b.push_back(label[v]);
    std::sort(b.begin(), b.end());
    d.bags.push_back(std::move(b));
  };
  push_bag();
  for (int v = pw + 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, current.size() - 1);
    current[pick(rng)] = current.back();
    current.back() = v;
    for (std::size_t j = 0; j + 1 < current.size(); ++j) g.add_edge(label[current[j]], label[v], weight());
    push_bag();
  }
  return {std::move(g), SmoothPathDecomposition(std::move(d))};
}

VertexId NormalizedGraph::copy(int bag, VertexId v, const SmoothPathDecomposition& d) const {
  const Bag& b = d.bag(bag);
  auto it = std::lower_bound(b.begin(), b.end(), v);
  if (it == b.end() || *it != v) throw InputError("vertex " + std::to_string(v) + " not in bag " + std::to_string(bag));
  return bag_copies.at(bag).at(it - b.begin());
}

NormalizedGraph normalize(const WeightedGraph& g, const SmoothPathDecomposition& d) {
  auto report = validate(g, d.decomposition());
  if (!report.ok()) throw InputError("normalize: " + report.violations.front().describe());
  NormalizedGraph ng;
  ng.edge_bag = assign_edges_to_bags(g, d);
  const int k = d.size();
  ng.bag_edges.assign(k, {});
  for (EdgeId id = 0; id < g.edge_count(); ++id) ng.bag_edges[ng.edge_bag[id]].push_back(id);

  int copies = 0;
  for (const Bag& b : d.bags()) copies += static_cast<int>(b.size());
  ng.graph = WeightedGraph(copies);
  ng.bag_copies.assign(k, {});
  for (int i = 0; i < k; ++i)
    for (VertexId v : d.bag(i)) {
      ng.bag_copies[i].push_back(static_cast<VertexId>(ng.original_vertex.size()));
      ng.original_vertex.push_back(v);
      ng.copy_bag.push_back(i);
    }
  for (int i = 0; i < k; ++i) {
    for (EdgeId id : ng.bag_edges[i]) {
      const Edge& e = g.edge(id);
      ng.graph.add_edge(ng.copy(i, e.key.u, d), ng.copy(i, e.key.v, d), e.weight);
      ng.original_edge.push_back(id);
    }
    if (i + 1 < k)
      for (VertexId v : d.bag(i))
        if (d.contains(i + 1, v)) {
          ng.graph.add_edge(ng.copy(i, v, d), ng.copy(i + 1, v, d), Rational(0));
          ng.original_edge.push_back(kNoEdge);
        }
  }
  return ng;
}

int KPathCompletion::virtual_count() const {
  return static_cast<int>(std::count(is_virtual.begin(), is_virtual.end(), true));
}

KPathCompletion complete_to_kpath(const WeightedGraph& g, const SmoothPathDecomposition& d) {
  auto report = validate(g, d.decomposition());
  if (!report.ok()) throw InputError("complete_to_kpath: " + report.violations.front().describe());
  KPathCompletion out{WeightedGraph(g.vertex_count()), {}};
  for (const Edge& e : g.edges()) {
    out.graph.add_edge(e.key.u, e.key.v, e.weight);
    out.is_virtual.push_back(false);
  }
  std::vector<std::vector<Distance>> dist(g.vertex_count());
  for (const Bag& b : d.bags())
    for (std::size_t x = 0; x < b.size(); ++x)
      for (std::size_t y = x + 1; y < b.size(); ++y) {
        if (out.graph.has_edge(b[x], b[y])) continue;
        if (dist[b[x]].empty()) dist[b[x]] = single_source_distances(g, b[x]);
        const Distance& dxy = dist[b[x]][b[y]];
        if (!dxy)
          throw InputError("complete_to_kpath: vertices " + std::to_string(b[x]) + " and " + std::to_string(b[y]) +
                           " share a bag but are disconnected");
        out.graph.add_edge(b[x], b[y], *dxy);
        out.is_virtual.push_back(true);
      }
  return out;
}

bool is_kpath(const WeightedGraph& g, const SmoothPathDecomposition& d) {
  for (const Bag& b : d.bags())
    for (std::size_t x = 0; x < b.size(); ++x)
      for (std::size_t y = x + 1; y < b.size(); ++y)
        if (!g.has_edge(b[x], b[y])) return false;
  return true;
}

PathDecomposition read_decomposition(std::istream& in) {
  PathDecomposition d;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream row(line);
    Bag bag;
    std::string tok;
    while (row >> tok) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size() || v < 0) throw InputError("");
        bag.push_back(static_cast<VertexId>(v));
      } catch (const std::exception&) {
        throw InputError("decomposition line " + std::to_string(line_no) + ": bad vertex id '" + tok + "'");
      }
    }
    std::sort(bag.begin(), bag.end());
    if (std::adjacent_find(bag.begin(), bag.end()) != bag.end())
      throw InputError("decomposition line " + std::to_string(line_no) + ": repeated vertex");
    d.bags.push_back(std::move(bag));
  }
  return d;
}

PathDecomposition read_decomposition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open decomposition file '" + path + "'");
  try {
    return read_decomposition(in);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

void write_decomposition(std::ostream& out, const PathDecomposition& d) {
  for (const Bag& b : d.bags) {
    for (std::size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << b[i];
    out << '\n';
  }
}

}  // namespace lightspan
