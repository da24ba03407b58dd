// Acceptance run: evaluates the eight end-to-end criteria and prints one
// PASS/FAIL line for each. The exit code is 0 when every criterion was
// evaluated; with --strict it is 1 as soon as one criterion fails.

#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lightspan/charging.hpp"
#include "lightspan/charging_forest.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/pathdec.hpp"
#include "lightspan/spanner.hpp"
#include "oracles.hpp"

using namespace lightspan;

namespace {

struct Verdict {
  int id;
  std::string name;
  bool pass = true;
  std::string detail;
  double seconds = 0;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void print(const Verdict& v) {
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << v.id << "] " << v.name << ": " << v.detail << " ("
            << std::fixed << std::setprecision(1) << v.seconds << "s)" << std::endl;
}

WeightDistribution mixed_weights(std::uint64_t seed) {
  switch (seed % 4) {
    case 0: return WeightDistribution::constant(1);
    case 1: return WeightDistribution::uniform(1, 5);
    default: return WeightDistribution::uniform(1, 1000);
  }
}

const std::vector<Rational> kEpsilons{Rational(1, 4), Rational(1, 2), Rational(1)};

// ---------------------------------------------------------------------------

Verdict stretch_correctness() {
  Timer t;
  Verdict v{1, "stretch correctness (greedy spanner, mixed families, n <= 40)"};
  const Rational eps_choices[] = {Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)};
  std::map<std::string, int> per_family;
  int instances = 0, stretch_bad = 0, edge_path_bad = 0;
  for (std::uint64_t seed = 0; seed < 520; ++seed) {
    const int n = 4 + static_cast<int>(seed * 13 % 37);  // 4..40
    const Rational eps = eps_choices[seed % 5];
    WeightedGraph g;
    std::string family;
    switch (seed % 4) {
      case 0:
        g = generate_gnp(n, 0.1 + 0.1 * static_cast<double>(seed % 6), seed, mixed_weights(seed));
        family = "gnp";
        break;
      case 1:
        g = generate_kpath(n, std::min(n - 1, 1 + static_cast<int>(seed % 5)), seed, mixed_weights(seed)).graph;
        family = "kpath";
        break;
      case 2:
        g = generate_partial_kpath(n, std::min(n - 1, 1 + static_cast<int>(seed % 5)), seed, mixed_weights(seed)).graph;
        family = "partial-kpath";
        break;
      default:
        g = generate_outerplanar(std::max(n, 3), seed, mixed_weights(seed)).graph;
        family = "outerplanar";
    }
    Spanner s = greedy_spanner(g, eps);
    stretch_bad += !verify_stretch(g, s).ok();
    edge_path_bad += !verify_edge_path_property(s).ok();
    ++per_family[family];
    ++instances;
  }
  v.pass = instances >= 500 && stretch_bad == 0 && edge_path_bad == 0;
  std::ostringstream d;
  d << instances << " instances (";
  bool first = true;
  for (const auto& [f, c] : per_family) d << (first ? "" : ", ") << f << ' ' << c, first = false;
  d << "), stretch violations in " << stretch_bad << ", edge-path violations in " << edge_path_bad;
  v.detail = d.str();
  v.seconds = t.seconds();
  return v;
}

Verdict hereditary_property() {
  Timer t;
  Verdict v{2, "hereditary property of greedy spanners"};
  std::mt19937_64 rng(2);
  int checks = 0, failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 6 + static_cast<int>(seed % 25);
    WeightedGraph g = seed % 2 ? generate_gnp(n, 0.35, seed, mixed_weights(seed))
                               : generate_partial_kpath(n, 2 + static_cast<int>(seed % 4), seed, mixed_weights(seed)).graph;
    Spanner s = greedy_spanner(g, Rational(1 + static_cast<long>(seed % 4), 4));
    for (int k = 0; k < 5; ++k) {
      const double keep = 0.2 + 0.15 * k;
      std::bernoulli_distribution coin(keep);
      std::vector<EdgeId> subset;
      for (EdgeId e = 0; e < s.graph.edge_count(); ++e)
        if (coin(rng)) subset.push_back(e);
      ++checks;
      failures += !verify_hereditary(s, subset);
    }
  }
  v.pass = checks == 500 && failures == 0;
  v.detail = std::to_string(checks) + " subsets of 100 spanners, " + std::to_string(failures) + " not their own greedy spanner";
  v.seconds = t.seconds();
  return v;
}

Verdict outerplanar_scheme() {
  Timer t;
  Verdict v{3, "outer-planar 1-simple charging scheme"};
  int instances = 0, scheme_bad = 0, cert_bad = 0, light_bad = 0, fallbacks = 0, errors = 0;
  Rational worst_ratio = 0;
  std::string first_error;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 3 + static_cast<int>(seed % 28);  // 3..30
    const Rational eps = kEpsilons[seed % 3];
    ++instances;
    try {
      auto inst = generate_outerplanar(n, seed, mixed_weights(seed), 0.3 + 0.1 * static_cast<double>(seed % 6), eps);
      fallbacks += inst.fallback;
      Spanner s = greedy_spanner(inst.graph, eps);
      ChargingScheme cs = outerplanar_charging(s.graph, inst.boundary);
      SimplicityReport rep = verify_scheme(s, cs, 1);
      if (!rep.ok() || rep.max_non_tree_charge > 1) {
        ++scheme_bad;
        continue;
      }
      LightnessCertificate cert = lightness_certificate(s, cs, rep);
      cert_bad += !(cert.holds && cert.factor == 1 + 1 / eps);
      Rational ratio = lightness(inst.graph, s);
      light_bad += ratio > 1 + 2 / eps;
      worst_ratio = std::max<Rational>(worst_ratio, ratio / (1 + 2 / eps));
    } catch (const std::exception& e) {
      if (errors++ == 0) first_error = e.what();
    }
  }
  v.pass = scheme_bad == 0 && cert_bad == 0 && light_bad == 0 && errors == 0;
  std::ostringstream d;
  d << instances << " instances; verify_scheme(k=1) failures " << scheme_bad << ", certificate failures " << cert_bad
    << ", lightness above 1+2/eps " << light_bad << " (max lightness/(1+2/eps) = " << to_decimal(worst_ratio, 3)
    << "), boundary-favouring weightings " << fallbacks << ", errors " << errors;
  if (errors) d << " [" << first_error << "]";
  v.detail = d.str();
  v.seconds = t.seconds();
  return v;
}

struct CorpusInstance {
  int pw;
  std::uint64_t seed;
  KPathInstance inst;
};

std::vector<CorpusInstance> kpath_corpus() {
  std::vector<CorpusInstance> corpus;
  for (int pw = 2; pw <= 5; ++pw)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const int n = pw + 2 + static_cast<int>((seed * 17 + pw) % static_cast<std::uint64_t>(59 - pw));  // <= 60
      corpus.push_back({pw, seed, generate_kpath(n, pw, 1000 * pw + seed, mixed_weights(seed))});
    }
  return corpus;
}

Verdict forest_invariants(const std::vector<CorpusInstance>& corpus) {
  Timer t;
  Verdict v{4, "charging-forest invariants after every bag, fault detection"};
  std::mt19937_64 rng(4);
  long long bag_checks = 0;
  int failing_runs = 0, injected = 0, detected = 0;
  std::string first_failure;
  for (const CorpusInstance& c : corpus) {
    ChargingForest phi(c.inst.graph, c.inst.decomposition);
    const int size = c.inst.decomposition.size();
    std::uniform_int_distribution<int> pick(0, size - 1);
    const int fault_bag[2] = {pick(rng), pick(rng)};
    bool run_failed = false;
    for (int i = 0; i < size; ++i) {
      phi.step();
      InvariantReport rep = phi.check_invariants();
      ++bag_checks;
      if (!rep.ok() && !run_failed) {
        run_failed = true;
        if (first_failure.empty())
          first_failure = "pw " + std::to_string(c.pw) + " seed " + std::to_string(c.seed) + " bag " +
                          std::to_string(i) + ": " + rep.violations.front().invariant + " " + rep.violations.front().detail;
      }
      for (int kind = 0; kind < 2; ++kind) {
        if (fault_bag[kind] != i) continue;
        ChargingForest faulty = phi;
        bool ok = kind == 0 ? faulty.inject_remove_edge(rng) : faulty.inject_cross_bold_edge(rng);
        if (!ok) continue;
        ++injected;
        detected += !faulty.check_invariants().ok();
      }
    }
    failing_runs += run_failed;
  }
  const double rate = injected ? static_cast<double>(detected) / injected : 0.0;
  v.pass = failing_runs == 0 && injected > 0 && rate >= 0.99;
  std::ostringstream d;
  d << corpus.size() << " k-paths (pw 2..5, n <= 60), " << bag_checks << " bag checks, runs with a violation "
    << failing_runs << "; faults detected " << detected << '/' << injected << " (" << std::setprecision(1) << std::fixed
    << 100.0 * rate << "%)";
  if (!first_failure.empty()) d << " [" << first_failure << "]";
  v.detail = d.str();
  v.seconds = t.seconds();
  return v;
}

struct PipelineStats {
  int runs = 0;
  int errors = 0;
  std::string first_error;
  int invariant_failures = 0;
  int scheme_failures = 0;
  int triangle_violation_runs = 0;
  int pseudo_violation_runs = 0;
  int total_violation_runs = 0;
  int lightness_failures = 0;
  std::map<int, int> max_triangles, max_pseudo, max_charge;  // per pw
  std::map<int, Rational> worst_lightness_ratio;              // lightness / bound, per pw
  double seconds = 0;
};

PipelineStats run_pipelines(const std::vector<CorpusInstance>& corpus) {
  Timer t;
  PipelineStats st;
  for (const CorpusInstance& c : corpus)
    for (const Rational& eps : kEpsilons) {
      ++st.runs;
      try {
        ForestPipelineResult r = run_charging_forest(c.inst.graph, c.inst.decomposition, eps, true);
        st.invariant_failures += !r.invariants_ok();
        st.scheme_failures += !(r.report.ok() && r.k == forest_charge_bound(c.pw));
        st.triangle_violation_runs += r.audit.triangle_violations > 0;
        st.pseudo_violation_runs += r.audit.pseudo_violations > 0;
        st.total_violation_runs += r.audit.total_violations > 0;
        st.max_triangles[c.pw] = std::max(st.max_triangles[c.pw], r.audit.max_triangles);
        st.max_pseudo[c.pw] = std::max(st.max_pseudo[c.pw], r.audit.max_pseudo_triangles);
        st.max_charge[c.pw] = std::max(st.max_charge[c.pw], r.report.max_tree_charge);
        const Rational bound = 1 + Rational(forest_charge_bound(c.pw)) / eps;
        const Rational ratio = r.spanner.weight() / mst(c.inst.graph).weight;
        st.lightness_failures += ratio > bound;
        st.worst_lightness_ratio[c.pw] = std::max<Rational>(st.worst_lightness_ratio[c.pw], ratio / bound);
      } catch (const std::exception& e) {
        if (st.errors++ == 0) st.first_error = e.what();
      }
    }
  st.seconds = t.seconds();
  return st;
}

template <class V>
std::string per_pw(const std::map<int, V>& m, const std::function<std::string(const V&)>& show) {
  std::string out;
  for (const auto& [pw, x] : m) out += (out.empty() ? "" : " ") + std::to_string(pw) + ":" + show(x);
  return out;
}

Verdict charging_certificate(const PipelineStats& st) {
  Verdict v{5, "bounded-pathwidth charging scheme and charge audit"};
  auto num = [](const int& x) { return std::to_string(x); };
  v.pass = st.errors == 0 && st.scheme_failures == 0 && st.triangle_violation_runs == 0 && st.pseudo_violation_runs == 0;
  std::ostringstream d;
  d << st.runs << " pipelines; verify_scheme(k = 2(pw-2)+4pw^2) failures " << st.scheme_failures
    << ", invariant failures " << st.invariant_failures << "; audit runs over the pw-2 triangle bound "
    << st.triangle_violation_runs << ", over the 2pw^2 pseudo-triangle bound " << st.pseudo_violation_runs
    << "; max per pw: triangles {" << per_pw<int>(st.max_triangles, num) << "}, pseudo {"
    << per_pw<int>(st.max_pseudo, num) << "}, charges {" << per_pw<int>(st.max_charge, num) << "}";
  if (st.errors) d << "; errors " << st.errors << " [" << st.first_error << "]";
  v.detail = d.str();
  v.seconds = st.seconds;
  return v;
}

Verdict pathwidth_lightness(const PipelineStats& st) {
  Verdict v{6, "lightness within 1 + (2(pw-2)+4pw^2)/eps, eps in {1/4, 1/2, 1}"};
  v.pass = st.errors == 0 && st.lightness_failures == 0;
  std::ostringstream d;
  d << st.runs << " spanners, violations " << st.lightness_failures << "; max lightness/bound per pw {"
    << per_pw<Rational>(st.worst_lightness_ratio, [](const Rational& r) { return to_decimal(r, 4); }) << "}";
  v.detail = d.str();
  return v;
}

Verdict metric_preservation(const std::vector<CorpusInstance>& corpus) {
  Timer t;
  Verdict v{7, "normalized graph preserves MST weight and distances"};
  int instances = 0, mst_bad = 0, dist_checked = 0, dist_bad = 0, edge_bad = 0;
  auto check = [&](const WeightedGraph& g, const SmoothPathDecomposition& d) {
    ++instances;
    NormalizedGraph ng = normalize(g, d);
    mst_bad += mst(ng.graph).weight != mst(g).weight;
    std::vector<int> seen(g.edge_count(), 0);
    for (EdgeId e = 0; e < ng.graph.edge_count(); ++e)
      if (!ng.is_glue(e)) ++seen[ng.original_edge[e]];
    edge_bad += std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; });
    if (g.vertex_count() > 30) return;
    ++dist_checked;
    auto dg = oracle::all_pairs_floyd(g);
    auto dn = all_pairs_distances(ng.graph);
    bool ok = true;
    for (VertexId a = 0; a < ng.graph.vertex_count() && ok; ++a)
      for (VertexId b = 0; b < ng.graph.vertex_count() && ok; ++b)
        ok = dn[a][b] == dg[ng.original_vertex[a]][ng.original_vertex[b]];
    dist_bad += !ok;
  };
  for (const CorpusInstance& c : corpus) check(c.inst.graph, c.inst.decomposition);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 4 + static_cast<int>(seed % 27);
    auto inst = generate_partial_kpath(n, std::min(n - 1, 1 + static_cast<int>(seed % 5)), seed, mixed_weights(seed));
    check(inst.graph, inst.decomposition);
  }
  v.pass = mst_bad == 0 && dist_bad == 0 && edge_bad == 0;
  std::ostringstream d;
  d << instances << " instances, MST weight mismatches " << mst_bad << ", edge multiplicity errors " << edge_bad
    << "; all-pairs check on " << dist_checked << " instances with n <= 30, mismatches " << dist_bad;
  v.detail = d.str();
  v.seconds = t.seconds();
  return v;
}

Verdict oracle_equivalence() {
  Timer t;
  Verdict v{8, "mst() equals exhaustive enumeration on the micro-corpus"};
  std::ifstream in(LIGHTSPAN_MICRO_CORPUS);
  if (!in) {
    v.pass = false;
    v.detail = "cannot open " + std::string(LIGHTSPAN_MICRO_CORPUS);
    return v;
  }
  struct Block {
    std::string expected;
    std::string text;
  };
  std::vector<Block> blocks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("instance ", 0) == 0) {
      std::istringstream head(line.substr(9));
      int id;
      Block b;
      head >> id >> b.expected;
      blocks.push_back(b);
    } else if (!blocks.empty()) {
      blocks.back().text += line + '\n';
    }
  }
  int mismatches = 0, frozen_mismatches = 0;
  int max_n = 0;
  long long trees = 0;
  for (const Block& b : blocks) {
    std::istringstream gs(b.text);
    WeightedGraph g = read_graph(gs);
    max_n = std::max(max_n, g.vertex_count());
    long long seen = 0;
    Rational brute = oracle::min_spanning_weight_exhaustive(g, &seen);
    trees += seen;
    Rational fast = mst(g).weight;
    mismatches += fast != brute;
    frozen_mismatches += fast != parse_rational(b.expected);
  }
  v.pass = blocks.size() == 50 && max_n <= 8 && mismatches == 0 && frozen_mismatches == 0;
  std::ostringstream d;
  d << blocks.size() << " graphs (n <= " << max_n << ", " << trees << " spanning forests enumerated), mismatches vs enumeration "
    << mismatches << ", vs frozen weights " << frozen_mismatches;
  v.detail = d.str();
  v.seconds = t.seconds();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      std::cerr << "usage: " << argv[0] << " [--strict]\n";
      return 2;
    }
  }

  std::vector<Verdict> verdicts;
  try {
    auto run = [&](Verdict v) {
      print(v);
      verdicts.push_back(std::move(v));
    };
    run(stretch_correctness());
    run(hereditary_property());
    run(outerplanar_scheme());
    const auto corpus = kpath_corpus();
    run(forest_invariants(corpus));
    const PipelineStats pipelines = run_pipelines(corpus);
    run(charging_certificate(pipelines));
    run(pathwidth_lightness(pipelines));
    run(metric_preservation(corpus));
    run(oracle_equivalence());
  } catch (const std::exception& e) {
    std::cout << "ERROR: acceptance run aborted after " << verdicts.size() << " criteria: " << e.what() << std::endl;
    return 1;
  }

  int passed = 0;
  for (const Verdict& v : verdicts) passed += v.pass;
  std::cout << passed << '/' << verdicts.size() << " criteria PASS" << std::endl;
  return strict && passed != static_cast<int>(verdicts.size()) ? 1 : 0;
}
