// The verification harness: exact audits over enumerated populations and
// Monte Carlo bound tests over sampled presentations. Every run is
// deterministic given (config, seed); the job count only changes scheduling.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgl/enumerate.hpp"
#include "rgl/fulfill.hpp"
#include "rgl/presentation.hpp"

namespace rgl {

struct ExperimentConfig {
  int m = 2;
  std::vector<int> ls;  // the l values to sweep
  Rational d{3, 10};
  Rational epsilon{1, 20};
  int K = 2;
  int L = 0;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = hardware concurrency; never affects results
  int ident_budget = 2;
  bool budget_auto = false;  // prop: budget = smallest violating cancellation
  int path_max_len = 3;
  int alphabet_budget = 1;
  bool dedup = false;  // rotation-canonical codes
  std::uint64_t cap_words = 10'000'000;
  std::uint64_t cap_diagrams = 200'000'000;
  std::uint64_t cap_tuples = 100'000'000;
};

// Rows live in csv_rows (one line per row, preformatted); the JSON form
// carries the config echo and summary only, so huge row sets stay cheap.
struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config_kv;
  std::vector<std::string> columns;
  std::string csv_rows;
  std::vector<std::pair<std::string, std::string>> summary;
  bool pass = true;
  std::string fail_reason;

  std::string to_csv() const;
  std::string to_json() const;
  std::string render(const std::string& format) const;  // "csv" | "json"
};

struct Eq2Result {
  Report report;
  std::uint64_t population = 0;
  std::uint64_t eq_failures = 0;
  std::uint64_t ineq_failures = 0;
};

struct LemmaResult {
  Report report;
  std::uint64_t population = 0;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  Rational max_ratio{0, 1};  // max over checks of p_i (2m-1)^kappa_i / p_{i-1}
};

struct PropResult {
  Report report;
  std::uint64_t diagrams = 0;
  std::uint64_t bound_failures = 0;
};

struct LglRow {
  int l = 0;
  std::uint64_t relators = 0;
  std::uint64_t violating_diagrams = 0;
  McEstimate freq;
  std::uint64_t count_all = 0;
  double max_diagram_bound = 0.0;
  double union_bound = 0.0;
  bool union_vacuous = true;
};

struct LglResult {
  Report report;
  std::vector<LglRow> rows;
  bool trend_ok = true;
};

struct IsoRow {
  int l = 0;
  std::uint64_t relators = 0;
  std::uint64_t diagrams = 0;
  std::uint64_t violating_diagrams = 0;
  std::uint64_t identity_failures = 0;
  std::uint64_t fulfilled_total = 0;
  std::uint64_t violating_fulfilled = 0;
  McEstimate freq;  // violating_fulfilled / fulfilled_total
};

struct IsoResult {
  Report report;
  std::vector<IsoRow> rows;
  std::uint64_t identity_failures = 0;
  bool trend_ok = true;
};

struct GrowthRow {
  int K = 0, L = 0, l = 0;
  std::uint64_t count_labeled = 0;
  std::uint64_t count_canonical = 0;
};

struct GrowthFit {
  double slope = 0.0, intercept = 0.0, rse = 0.0;
  int points = 0;
};

struct GrowthResult {
  Report report;
  std::vector<GrowthRow> rows;
  GrowthFit fit_labeled, fit_canonical;
};

// Exhaustive audit of Cancel + N = sum delta <= sum m_i kappa_i over every
// reduced abstract diagram with K' <= K faces, 2 <= l' <= max(ls), and up to
// L fixed paths. Expected to find zero failures.
Eq2Result run_eq2_audit(const ExperimentConfig& cfg);

// Exact rational check of p_i <= p_{i-1} (2m-1)^(-kappa_i) over every
// reduced diagram with at most two relator classes.
LemmaResult run_lemma_check(const ExperimentConfig& cfg);

// For every enumerated diagram with Cancel + N >= (d+2eps)|Y|l, compares the
// Wilson upper bound of the observed fulfillment frequency against
// (2m-1)^((|Y|ld - Cancel - N)/|Y|), the per-diagram fulfillment bound.
PropResult run_prop_bound(const ExperimentConfig& cfg);

// Frequency, per presentation sample, of some enumerated diagram with
// Cancel + |Fix| > (d+eps)|Y|l being fulfilled; expected to fall along the
// configured l range. Also reports the union bound count * per-diagram bound.
LglResult run_theorem_lgl(const ExperimentConfig& cfg);

// Planar (disc) population: single faces and two faces glued along one
// boundary arc. Checks |bd D| = l|D| - 2 Cancel(D) on every diagram and
// tracks how often fulfilled diagrams violate |bd D| >= l(1-2d-eps)|D|.
IsoResult run_isoperimetric(const ExperimentConfig& cfg);

// Least-squares fit of log(count) against log(l) for the abstract-diagram
// counts; polynomial growth shows up as a stable slope with small residuals.
GrowthResult run_growth_fit(const ExperimentConfig& cfg);

}  // namespace rgl
