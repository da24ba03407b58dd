#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lightspan/pathdec.hpp"
#include "lightspan/rational.hpp"

namespace lightspan {

enum class Family { KPath, Outerplanar, Random };

const char* to_string(Family f);
Family parse_family(const std::string& text);

/// Experiment description. The file format is flat "key = value" lines
/// ('#' starts a comment); integer lists accept items "7", "10..20" and
/// "10..40:10" (inclusive range with step).
struct ExperimentConfig {
  Family family = Family::KPath;
  std::vector<int> n;
  std::vector<int> pw;               // ignored for the outer-planar family
  std::vector<Rational> eps;
  std::vector<std::uint64_t> seeds;
  WeightDistribution weights;
  std::string output;                // CSV path; empty means stdout
  int workers = 0;                   // 0: hardware concurrency
  double keep = 0.6;                 // edge keep probability (random family), chord keep (outer-planar)
  bool check_each_bag = true;

  /// Throws InputError on an empty list, eps <= 0, n < pw + 1 for k-paths,
  /// or n < 3 for outer-planar graphs.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// One instance at one epsilon. Exact weights are kept as rationals.
struct ResultRow {
  Family family = Family::KPath;
  int n = 0;
  int pw = -1;              // -1 for outer-planar rows
  std::uint64_t seed = 0;
  Rational eps;
  std::string weights;
  int edges = 0;
  int spanner_edges = 0;
  Rational w_mst;
  Rational w_spanner;
  int k = 0;                // charge bound used for verify_scheme
  int max_tree_charge = 0;
  int max_triangles = 0;
  int max_pseudo_triangles = 0;
  int triangle_violations = 0;
  int pseudo_violations = 0;
  Rational lightness_bound; // 1 + k/eps, or 1 + 2/eps for outer-planar rows
  bool stretch_ok = false;
  bool edge_path_ok = false;
  bool k_simple = false;
  bool acyclic = false;
  bool strong = false;
  std::optional<bool> invariants_ok;  // empty for outer-planar rows
  bool lightness_ok = false;
  std::string error;        // exception text when the pipeline threw

  Rational lightness() const { return w_spanner / w_mst; }
  bool passed() const;
};

/// Runs one row: instance generation, greedy spanner, every verifier.
ResultRow run_instance(const ExperimentConfig& cfg, int n, int pw, std::uint64_t seed, const Rational& eps);

/// All rows in config order (n, then pw, then seed, then eps), computed by
/// a pool of cfg.workers threads.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

/// Fixed column order, documented in docs/formats.md.
const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Throws InputError naming the line on malformed input. Empty input gives
/// no rows.
std::vector<ResultRow> read_csv(std::istream& in);

struct SummaryRow {
  Family family = Family::KPath;
  int pw = -1;
  Rational eps;
  int rows = 0;
  int failed = 0;
  Rational max_lightness;
  Rational mean_lightness;
  Rational lightness_bound;
  int max_tree_charge = 0;
  int charge_bound = 0;
  int max_triangles = 0;
  int triangle_violations = 0;
};

/// Groups by (family, pw, eps) in order of first appearance.
std::vector<SummaryRow> sweep_report(const std::vector<ResultRow>& rows);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary);

/// Process exit codes of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInputError = 2;

}  // namespace lightspan
