#include "lightspan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "lightspan/charging.hpp"
#include "lightspan/charging_forest.hpp"
#include "lightspan/errors.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/spanner.hpp"

namespace lightspan {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad " + what + " '" + s + "'");
  }
}

template <class T>
std::vector<T> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<T> out;
  for (const std::string& item : split(value, ',')) {
    if (item.empty()) throw InputError("empty item in '" + key + "'");
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<T>(parse_int(item, key)));
      continue;
    }
    std::string hi_part = item.substr(dots + 2);
    long long step = 1;
    if (auto colon = hi_part.find(':'); colon != std::string::npos) {
      step = parse_int(hi_part.substr(colon + 1), key + " step");
      hi_part = hi_part.substr(0, colon);
    }
    long long lo = parse_int(item.substr(0, dots), key), hi = parse_int(hi_part, key);
    if (step <= 0 || hi < lo) throw InputError("bad range '" + item + "' in '" + key + "'");
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<T>(v));
  }
  return out;
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw InputError("'" + key + "' expects true or false, got '" + s + "'");
}

// splitmix64 finaliser; decorrelates generator seeds of neighbouring rows.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t instance_seed(Family f, int n, int pw, std::uint64_t seed) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(n));
  h = mix(h ^ static_cast<std::uint64_t>(pw + 1));
  return mix(h ^ static_cast<std::uint64_t>(f));
}

const char* flag(bool b) { return b ? "yes" : "no"; }

bool read_flag(const std::string& s, int line) {
  if (s == "yes") return true;
  if (s == "no") return false;
  throw InputError("CSV line " + std::to_string(line) + ": expected yes/no, got '" + s + "'");
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::KPath: return "kpath";
    case Family::Outerplanar: return "outerplanar";
    case Family::Random: return "random";
  }
  return "?";
}

Family parse_family(const std::string& text) {
  if (text == "kpath") return Family::KPath;
  if (text == "outerplanar") return Family::Outerplanar;
  if (text == "random") return Family::Random;
  throw InputError("unknown family '" + text + "' (expected kpath, outerplanar or random)");
}

void ExperimentConfig::validate() const {
  if (n.empty()) throw InputError("config: 'n' is empty");
  if (eps.empty()) throw InputError("config: 'eps' is empty");
  if (seeds.empty()) throw InputError("config: 'seeds' is empty");
  if (family != Family::Outerplanar && pw.empty()) throw InputError("config: 'pw' is empty");
  for (const Rational& e : eps)
    if (e <= 0) throw InputError("config: eps must be positive, got " + lightspan::to_string(e));
  for (int v : pw)
    if (v < 1) throw InputError("config: pw must be at least 1");
  for (int v : n) {
    if (family == Family::Outerplanar && v < 3) throw InputError("config: outer-planar instances need n >= 3");
    if (family != Family::Outerplanar)
      for (int w : pw)
        if (v < w + 1)
          throw InputError("config: n = " + std::to_string(v) + " is below pw + 1 = " + std::to_string(w + 1));
  }
  if (keep < 0 || keep > 1) throw InputError("config: keep must lie in [0, 1]");
  if (workers < 0) throw InputError("config: workers must be non-negative");
  if (weights.kind == WeightDistribution::Kind::Uniform ? weights.lo < 1 || weights.hi < weights.lo : weights.lo < 1)
    throw InputError("config: generated weights must be positive integers");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  bool saw_n = false, saw_eps = false, saw_seeds = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      if (key == "family") cfg.family = parse_family(value);
      else if (key == "n") cfg.n = parse_int_list<int>(value, key), saw_n = true;
      else if (key == "pw") cfg.pw = parse_int_list<int>(value, key);
      else if (key == "seeds" || key == "seed") cfg.seeds = parse_int_list<std::uint64_t>(value, key), saw_seeds = true;
      else if (key == "eps") {
        cfg.eps.clear();
        for (const std::string& item : split(value, ',')) cfg.eps.push_back(parse_rational(item));
        saw_eps = true;
      } else if (key == "weights") cfg.weights = WeightDistribution::parse(value);
      else if (key == "output") cfg.output = value;
      else if (key == "workers") cfg.workers = static_cast<int>(parse_int(value, key));
      else if (key == "keep") cfg.keep = std::stod(value);
      else if (key == "check_each_bag") cfg.check_each_bag = parse_bool(value, key);
      else throw InputError("unknown key '" + key + "'");
    } catch (const InputError& ex) {
      throw InputError("config line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const std::logic_error&) {
      throw InputError("config line " + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
  }
  if (!saw_n) throw InputError("config: missing 'n'");
  if (!saw_eps) throw InputError("config: missing 'eps'");
  if (!saw_seeds) throw InputError("config: missing 'seeds'");
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  try {
    return parse_config(in);
  } catch (const InputError& ex) {
    throw InputError(path + ": " + ex.what());
  }
}

bool ResultRow::passed() const {
  return error.empty() && stretch_ok && edge_path_ok && k_simple && acyclic && strong && invariants_ok.value_or(true) &&
         lightness_ok;
}

ResultRow run_instance(const ExperimentConfig& cfg, int n, int pw, std::uint64_t seed, const Rational& eps) {
  ResultRow row;
  row.family = cfg.family;
  row.n = n;
  row.pw = cfg.family == Family::Outerplanar ? -1 : pw;
  row.seed = seed;
  row.eps = eps;
  row.weights = cfg.weights.to_string();
  try {
    const std::uint64_t gen_seed = instance_seed(cfg.family, n, row.pw, seed);
    if (cfg.family == Family::Outerplanar) {
      auto inst = generate_outerplanar(n, gen_seed, cfg.weights, cfg.keep, eps);
      Spanner s = greedy_spanner(inst.graph, eps);
      row.edges = inst.graph.edge_count();
      row.spanner_edges = s.graph.edge_count();
      row.w_mst = mst(inst.graph).weight;
      row.w_spanner = s.weight();
      row.stretch_ok = verify_stretch(inst.graph, s).ok();
      row.edge_path_ok = verify_edge_path_property(s).ok();
      ChargingScheme cs = outerplanar_charging(s.graph, inst.boundary);
      row.k = 1;
      SimplicityReport rep = verify_scheme(s, cs, row.k);
      row.max_tree_charge = rep.max_tree_charge;
      row.k_simple = rep.k_simple;
      row.acyclic = rep.acyclic;
      row.strong = rep.strong;
      row.lightness_bound = 1 + 2 / eps;
      bool certified = rep.ok() && lightness_certificate(s, cs, rep).holds;
      row.lightness_ok = certified && row.w_spanner <= row.lightness_bound * row.w_mst;
      return row;
    }
    KPathInstance inst = cfg.family == Family::KPath ? generate_kpath(n, pw, gen_seed, cfg.weights)
                                                     : generate_partial_kpath(n, pw, gen_seed, cfg.weights, cfg.keep);
    row.edges = inst.graph.edge_count();
    row.w_mst = mst(inst.graph).weight;
    ForestPipelineResult r = run_charging_forest(inst.graph, inst.decomposition, eps, cfg.check_each_bag);
    row.spanner_edges = r.spanner.graph.edge_count();
    row.w_spanner = r.spanner.weight();
    row.stretch_ok = verify_stretch(inst.graph, r.spanner).ok();
    row.edge_path_ok = verify_edge_path_property(r.spanner).ok();
    row.k = r.k;
    row.max_tree_charge = r.report.max_tree_charge;
    row.k_simple = r.report.k_simple;
    row.acyclic = r.report.acyclic;
    row.strong = r.report.strong;
    row.invariants_ok = r.invariants_ok();
    row.max_triangles = r.audit.max_triangles;
    row.max_pseudo_triangles = r.audit.max_pseudo_triangles;
    row.triangle_violations = r.audit.triangle_violations;
    row.pseudo_violations = r.audit.pseudo_violations;
    row.lightness_bound = 1 + Rational(r.k) / eps;
    row.lightness_ok = row.w_spanner <= row.lightness_bound * row.w_mst;
  } catch (const std::exception& ex) {
    row.error = ex.what();
    if (row.error.empty()) row.error = "unknown error";
  }
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Task {
    int n, pw;
    std::uint64_t seed;
    Rational eps;
  };
  std::vector<Task> tasks;
  const std::vector<int> pws = cfg.family == Family::Outerplanar ? std::vector<int>{-1} : cfg.pw;
  for (int n : cfg.n)
    for (int pw : pws)
      for (std::uint64_t seed : cfg.seeds)
        for (const Rational& eps : cfg.eps) tasks.push_back({n, pw, seed, eps});

  std::vector<ResultRow> rows(tasks.size());
  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();)
      rows[t] = run_instance(cfg, tasks[t].n, tasks[t].pw, tasks[t].seed, tasks[t].eps);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return rows;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "family",        "n",           "pw",          "seed",          "eps",
      "weights",       "edges",       "spanner_edges", "w_mst",       "w_spanner",
      "lightness",     "lightness_bound", "k",       "max_tree_charge", "max_triangles",
      "max_pseudo_triangles", "triangle_violations", "pseudo_violations", "stretch_ok", "edge_path_ok",
      "k_simple",      "acyclic",     "strong",      "invariants_ok", "lightness_ok",
      "status",        "error"};
  return cols;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const ResultRow& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    const bool have_weights = r.w_mst > 0;
    out << to_string(r.family) << ',' << r.n << ',' << (r.pw < 0 ? std::string("-") : std::to_string(r.pw)) << ','
        << r.seed << ',' << lightspan::to_string(r.eps) << ',' << r.weights << ',' << r.edges << ',' << r.spanner_edges
        << ',' << lightspan::to_string(r.w_mst) << ',' << lightspan::to_string(r.w_spanner) << ','
        << (have_weights ? to_decimal(r.lightness()) : std::string("-")) << ','
        << lightspan::to_string(r.lightness_bound) << ',' << r.k << ',' << r.max_tree_charge << ','
        << r.max_triangles << ',' << r.max_pseudo_triangles << ',' << r.triangle_violations << ','
        << r.pseudo_violations << ',' << flag(r.stretch_ok) << ',' << flag(r.edge_path_ok) << ','
        << flag(r.k_simple) << ',' << flag(r.acyclic) << ',' << flag(r.strong) << ','
        << (r.invariants_ok ? flag(*r.invariants_ok) : "na") << ',' << flag(r.lightness_ok) << ','
        << (r.passed() ? "OK" : "FAILED") << ',' << err << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  int line_no = 0;
  const auto& cols = csv_columns();
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    auto fail = [&](const std::string& why) { return InputError("CSV line " + std::to_string(line_no) + ": " + why); };
    if (!header) {
      if (f != cols) throw fail("header does not match the expected columns");
      header = true;
      continue;
    }
    if (f.size() != cols.size())
      throw fail("expected " + std::to_string(cols.size()) + " fields, found " + std::to_string(f.size()));
    ResultRow r;
    try {
      r.family = parse_family(f[0]);
      r.n = static_cast<int>(parse_int(f[1], "n"));
      r.pw = f[2] == "-" ? -1 : static_cast<int>(parse_int(f[2], "pw"));
      r.seed = static_cast<std::uint64_t>(parse_int(f[3], "seed"));
      r.eps = parse_rational(f[4]);
      r.weights = f[5];
      r.edges = static_cast<int>(parse_int(f[6], "edges"));
      r.spanner_edges = static_cast<int>(parse_int(f[7], "spanner_edges"));
      r.w_mst = parse_rational(f[8]);
      r.w_spanner = parse_rational(f[9]);
      r.lightness_bound = parse_rational(f[11]);
      r.k = static_cast<int>(parse_int(f[12], "k"));
      r.max_tree_charge = static_cast<int>(parse_int(f[13], "max_tree_charge"));
      r.max_triangles = static_cast<int>(parse_int(f[14], "max_triangles"));
      r.max_pseudo_triangles = static_cast<int>(parse_int(f[15], "max_pseudo_triangles"));
      r.triangle_violations = static_cast<int>(parse_int(f[16], "triangle_violations"));
      r.pseudo_violations = static_cast<int>(parse_int(f[17], "pseudo_violations"));
      r.stretch_ok = read_flag(f[18], line_no);
      r.edge_path_ok = read_flag(f[19], line_no);
      r.k_simple = read_flag(f[20], line_no);
      r.acyclic = read_flag(f[21], line_no);
      r.strong = read_flag(f[22], line_no);
      if (f[23] != "na") r.invariants_ok = read_flag(f[23], line_no);
      r.lightness_ok = read_flag(f[24], line_no);
      r.error = f[26];
      if (f[25] != "OK" && f[25] != "FAILED") throw fail("status must be OK or FAILED");
      if (f[25] == "FAILED" && r.error.empty() && r.passed()) r.error = "flagged FAILED";
    } catch (const InputError& ex) {
      std::string what = ex.what();
      if (what.rfind("CSV line", 0) == 0) throw;
      throw fail(what);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> sweep_report(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::tuple<int, int, std::string>, std::size_t> slot;
  std::vector<Rational> sums;
  for (const ResultRow& r : rows) {
    auto key = std::tuple(static_cast<int>(r.family), r.pw, lightspan::to_string(r.eps));
    auto [it, fresh] = slot.emplace(key, out.size());
    if (fresh) {
      SummaryRow s;
      s.family = r.family;
      s.pw = r.pw;
      s.eps = r.eps;
      s.charge_bound = r.k;
      s.lightness_bound = r.lightness_bound;
      out.push_back(s);
      sums.emplace_back(0);
    }
    SummaryRow& s = out[it->second];
    ++s.rows;
    if (!r.passed()) ++s.failed;
    if (r.w_mst > 0) {
      Rational l = r.lightness();
      if (l > s.max_lightness) s.max_lightness = l;
      sums[it->second] += l;
    }
    s.max_tree_charge = std::max(s.max_tree_charge, r.max_tree_charge);
    s.charge_bound = std::max(s.charge_bound, r.k);
    s.max_triangles = std::max(s.max_triangles, r.max_triangles);
    s.triangle_violations += r.triangle_violations;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].mean_lightness = sums[i] / out[i].rows;
  return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "family,pw,eps,rows,failed,max_lightness,mean_lightness,lightness_bound,max_tree_charge,charge_bound,"
         "max_triangles,triangle_violations\n";
  for (const SummaryRow& s : summary)
    out << to_string(s.family) << ',' << (s.pw < 0 ? std::string("-") : std::to_string(s.pw)) << ','
        << lightspan::to_string(s.eps) << ',' << s.rows << ',' << s.failed << ',' << to_decimal(s.max_lightness) << ','
        << to_decimal(s.mean_lightness) << ',' << to_decimal(s.lightness_bound) << ',' << s.max_tree_charge << ','
        << s.charge_bound << ',' << s.max_triangles << ',' << s.triangle_violations << '\n';
}

}  // namespace lightspan
