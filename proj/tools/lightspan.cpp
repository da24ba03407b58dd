// Command-line front end: spanner construction, path decompositions,
// charging schemes, the charging forest and the experiment harness.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lightspan/charging.hpp"
#include "lightspan/charging_forest.hpp"
#include "lightspan/errors.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/harness.hpp"
#include "lightspan/pathdec.hpp"
#include "lightspan/spanner.hpp"

using namespace lightspan;

namespace {

// Writes to `path`, or to stdout when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
  if (!out) throw InputError("error while writing '" + path + "'");
}

std::vector<VertexId> parse_order(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  std::istringstream in(spaced);
  std::vector<VertexId> order;
  long long v;
  while (in >> v) order.push_back(static_cast<VertexId>(v));
  if (!in.eof()) throw InputError("--order must be a list of vertex ids");
  return order;
}

EdgeKey parse_edge(const std::string& text) {
  auto dash = text.find('-');
  if (dash == std::string::npos) throw InputError("edge must be written u-v, got '" + text + "'");
  try {
    return EdgeKey(std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1)));
  } catch (const std::logic_error&) {
    throw InputError("edge must be written u-v, got '" + text + "'");
  }
}

ChargingScheme load_scheme(const WeightedGraph& s, const std::string& path) {
  ChargingScheme cs;
  cs.pairs = read_scheme_pairs_file(path);
  cs.tree = infer_tree(s, cs.pairs);
  return cs;
}

int print_report(const SimplicityReport& rep, const Spanner& s, const ChargingScheme& cs) {
  std::cout << "pairs " << cs.pairs.size() << ", tree edges " << cs.tree.size() << '\n'
            << "max charge on a tree edge " << rep.max_tree_charge << " (k = " << rep.k << ")\n"
            << "max charge on a non-tree edge " << rep.max_non_tree_charge << '\n'
            << "k-simple " << (rep.k_simple ? "yes" : "no") << ", acyclic " << (rep.acyclic ? "yes" : "no")
            << ", strong " << (rep.strong ? "yes" : "no") << '\n';
  for (const EdgeKey& e : rep.over_charged) std::cout << "  over-charged " << e.u << '-' << e.v << '\n';
  for (const EdgeKey& e : rep.weak_pairs) std::cout << "  weak pair " << e.u << '-' << e.v << '\n';
  if (!rep.ok()) return kExitVerificationFailed;
  auto cert = lightness_certificate(s, cs, rep);
  std::cout << "certificate w(S) = " << to_string(cert.spanner_weight) << " <= (" << to_string(cert.factor)
            << ") * w(T) = " << to_string(cert.factor * cert.tree_weight) << ": " << (cert.holds ? "holds" : "FAILS")
            << '\n';
  return cert.holds ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy spanners, path decompositions and charging schemes"};
  app.require_subcommand(1);
  int status = kExitOk;

  // spanner
  auto* spanner = app.add_subcommand("spanner", "greedy (1+eps)-spanners");
  spanner->require_subcommand(1);
  std::string sp_in, sp_out, sp_eps;
  auto* sp_build = spanner->add_subcommand("build", "build the greedy spanner of a graph");
  sp_build->add_option("--eps", sp_eps, "stretch parameter, p or p/q")->required();
  sp_build->add_option("--in", sp_in, "graph file")->required();
  sp_build->add_option("--out", sp_out, "spanner file (default stdout)");
  sp_build->callback([&] {
    WeightedGraph g = read_graph_file(sp_in);
    Spanner s = greedy_spanner(g, parse_rational(sp_eps));
    emit(sp_out, [&](std::ostream& out) { write_spanner(out, s); });
    if (!sp_out.empty() && sp_out != "-") {
      std::cout << "kept " << s.graph.edge_count() << " of " << g.edge_count() << " edges, weight "
                << to_string(s.weight());
      if (mst(g).weight > 0) std::cout << ", lightness " << to_decimal(lightness(g, s));
      std::cout << '\n';
    }
  });

  // pathdec
  auto* pathdec = app.add_subcommand("pathdec", "path decompositions");
  pathdec->require_subcommand(1);
  std::string pd_graph, pd_dec, pd_out, pd_dec_out, pd_weights = "uniform:1:1000";
  int pd_n = 0, pd_pw = 0;
  std::uint64_t pd_seed = 0;
  double pd_keep = 1.0;
  auto* pd_validate = pathdec->add_subcommand("validate", "check a decomposition against a graph");
  pd_validate->add_option("--graph", pd_graph, "graph file")->required();
  pd_validate->add_option("--dec", pd_dec, "decomposition file")->required();
  pd_validate->callback([&] {
    WeightedGraph g = read_graph_file(pd_graph);
    auto rep = validate(g, read_decomposition_file(pd_dec));
    for (const auto& v : rep.violations) std::cout << v.describe() << '\n';
    std::cout << (rep.ok() ? "valid" : "invalid") << ", width " << rep.width << '\n';
    if (!rep.ok()) status = kExitVerificationFailed;
  });
  auto* pd_smooth = pathdec->add_subcommand("smooth", "convert a decomposition to a smooth one of the same width");
  pd_smooth->add_option("--graph", pd_graph, "graph file")->required();
  pd_smooth->add_option("--dec", pd_dec, "decomposition file")->required();
  pd_smooth->add_option("--out", pd_out, "output decomposition (default stdout)");
  pd_smooth->callback([&] {
    WeightedGraph g = read_graph_file(pd_graph);
    auto sd = smooth(g, read_decomposition_file(pd_dec));
    emit(pd_out, [&](std::ostream& out) { write_decomposition(out, sd.decomposition()); });
  });
  auto* pd_gen = pathdec->add_subcommand("gen", "generate a random k-path and its decomposition");
  pd_gen->add_option("--n", pd_n, "vertex count")->required();
  pd_gen->add_option("--pw", pd_pw, "pathwidth")->required();
  pd_gen->add_option("--seed", pd_seed, "random seed")->required();
  pd_gen->add_option("--weights", pd_weights, "uniform:LO:HI or const:C");
  pd_gen->add_option("--keep", pd_keep, "keep each edge with this probability (connectivity is restored)")
      ->check(CLI::Range(0.0, 1.0));
  pd_gen->add_option("--graph-out", pd_graph, "graph file (default stdout)");
  pd_gen->add_option("--dec-out", pd_dec_out, "decomposition file (default stdout, after the graph)");
  pd_gen->callback([&] {
    auto w = WeightDistribution::parse(pd_weights);
    KPathInstance inst = pd_keep < 1.0 ? generate_partial_kpath(pd_n, pd_pw, pd_seed, w, pd_keep)
                                       : generate_kpath(pd_n, pd_pw, pd_seed, w);
    emit(pd_graph, [&](std::ostream& out) { write_graph(out, inst.graph); });
    emit(pd_dec_out, [&](std::ostream& out) { write_decomposition(out, inst.decomposition.decomposition()); });
  });

  // charge
  auto* charge = app.add_subcommand("charge", "charging schemes");
  charge->require_subcommand(1);
  std::string ch_spanner, ch_scheme, ch_super, ch_out, ch_order, ch_drop;
  int ch_k = 1;
  auto* ch_verify = charge->add_subcommand("verify", "check simplicity, acyclicity and strength of a scheme");
  ch_verify->add_option("--spanner", ch_spanner, "spanner file (with its # eps header)")->required();
  ch_verify->add_option("--scheme", ch_scheme, "scheme file")->required();
  ch_verify->add_option("--k", ch_k, "allowed charges per tree edge")->required();
  ch_verify->callback([&] {
    Spanner s = read_spanner_file(ch_spanner);
    ChargingScheme cs = load_scheme(s.graph, ch_scheme);
    status = print_report(verify_scheme(s, cs, ch_k), s, cs);
  });
  auto* ch_outer = charge->add_subcommand("outerplanar", "1-simple scheme of an outer-planar spanner");
  ch_outer->add_option("--spanner", ch_spanner, "spanner file")->required();
  ch_outer->add_option("--order", ch_order, "outer face vertex order, e.g. \"0,3,1,2\"")->required();
  ch_outer->add_option("--drop", ch_drop, "boundary edge left out of the tree, u-v (default: heaviest)");
  ch_outer->add_option("--out", ch_out, "scheme file (default stdout)");
  ch_outer->callback([&] {
    Spanner s = read_spanner_file(ch_spanner);
    auto order = parse_order(ch_order);
    ChargingScheme cs = ch_drop.empty() ? outerplanar_charging(s.graph, order)
                                        : outerplanar_charging(s.graph, order, parse_edge(ch_drop));
    emit(ch_out, [&](std::ostream& out) { write_scheme(out, cs); });
  });
  auto* ch_strengthen = charge->add_subcommand("strengthen", "splice a weak scheme on a supergraph down to the spanner");
  ch_strengthen->add_option("--spanner", ch_spanner, "spanner file")->required();
  ch_strengthen->add_option("--super", ch_super, "supergraph file")->required();
  ch_strengthen->add_option("--scheme", ch_scheme, "weak scheme on the supergraph")->required();
  ch_strengthen->add_option("--out", ch_out, "scheme file (default stdout)");
  ch_strengthen->callback([&] {
    Spanner s = read_spanner_file(ch_spanner);
    WeightedGraph super = read_graph_file(ch_super);
    ChargingScheme weak = load_scheme(super, ch_scheme);
    ChargingScheme cs = strengthen_weak_scheme(s, super, weak);
    emit(ch_out, [&](std::ostream& out) { write_scheme(out, cs); });
  });

  // forest
  auto* forest = app.add_subcommand("forest", "charging forest for bounded-pathwidth graphs");
  forest->require_subcommand(1);
  std::string fo_graph, fo_dec, fo_eps, fo_out, fo_audit_out;
  bool fo_audit = false;
  auto* fo_build = forest->add_subcommand("build", "spanner, charging forest and extracted scheme");
  fo_build->add_option("--graph", fo_graph, "graph file (connected)")->required();
  fo_build->add_option("--dec", fo_dec, "path decomposition of the graph")->required();
  fo_build->add_option("--eps", fo_eps, "stretch parameter")->required();
  fo_build->add_option("--out", fo_out, "scheme file (default stdout)");
  fo_build->add_flag("--audit", fo_audit, "emit one JSON line per MST edge");
  fo_build->add_option("--audit-out", fo_audit_out, "audit destination (default stdout)");
  fo_build->callback([&] {
    WeightedGraph g = read_graph_file(fo_graph);
    PathDecomposition raw = read_decomposition_file(fo_dec);
    auto rep = validate(g, raw);
    if (!rep.ok()) throw InputError("decomposition: " + rep.violations.front().describe());
    SmoothPathDecomposition d = is_smooth(raw) ? SmoothPathDecomposition(raw) : smooth(g, raw);
    auto r = run_charging_forest(g, d, parse_rational(fo_eps));
    emit(fo_out, [&](std::ostream& out) { write_scheme(out, r.scheme); });
    if (fo_audit) {
      emit(fo_audit_out, [&](std::ostream& out) {
        for (const EdgeAudit& a : r.audit.edges)
          out << nlohmann::ordered_json{{"edge", {a.edge.u, a.edge.v}},
                                {"triangles", a.triangles},
                                {"pseudo_triangles", a.pseudo_triangles},
                                {"total_charges", a.total_charges}}
                     .dump()
              << '\n';
      });
      std::cerr << "audit: max triangles " << r.audit.max_triangles << " (bound " << r.audit.triangle_bound
                << "), max pseudo-triangles " << r.audit.max_pseudo_triangles << " (bound " << r.audit.pseudo_bound
                << "), max charges " << r.audit.max_total << " (bound " << r.audit.total_bound << ")\n";
    }
    for (const auto& f : r.invariant_failures)
      for (const auto& v : f.violations) std::cerr << "bag " << f.bag << ": invariant " << v.invariant << ": " << v.detail << '\n';
    std::cerr << "scheme: k = " << r.k << ", max tree charge " << r.report.max_tree_charge << ", "
              << (r.report.ok() ? "verified" : "verification FAILED") << '\n';
    if (!r.invariants_ok() || !r.report.ok()) status = kExitVerificationFailed;
  });

  // harness
  std::string run_config, report_in;
  auto* run = app.add_subcommand("run", "run an experiment sweep and write the result CSV");
  run->add_option("--config", run_config, "flat key = value config file")->required();
  run->callback([&] {
    ExperimentConfig cfg = parse_config_file(run_config);
    auto rows = run_experiment(cfg);
    emit(cfg.output, [&](std::ostream& out) { write_csv(out, rows); });
    int failed = 0;
    for (const auto& r : rows) failed += !r.passed();
    std::cerr << rows.size() << " rows, " << failed << " FAILED\n";
    if (failed) status = kExitVerificationFailed;
  });
  auto* report = app.add_subcommand("report", "summarise a result CSV per (family, pw, eps)");
  report->add_option("--in", report_in, "result CSV")->required();
  report->callback([&] {
    std::ifstream in(report_in);
    if (!in) throw InputError("cannot open '" + report_in + "'");
    std::vector<ResultRow> rows;
    try {
      rows = read_csv(in);
    } catch (const InputError& ex) {
      throw InputError(report_in + ": " + ex.what());
    }
    write_summary(std::cout, sweep_report(rows));
    for (const auto& r : rows)
      if (!r.passed()) status = kExitVerificationFailed;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "verification error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
  return status;
}
