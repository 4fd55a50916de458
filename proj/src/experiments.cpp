#include "rgl/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rgl/parallel.hpp"
#include "rgl/version.hpp"

namespace rgl {

namespace {

// ---------------------------------------------------------------------------
// formatting: all cells are rendered once, with shortest-round-trip doubles,
// so reports are byte-stable for a fixed (config, seed) at any job count

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }
std::string fmt_i64(long long v) { return std::to_string(v); }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr - buf);
}

std::string join_ls(const std::vector<int>& ls) {
  std::string out;
  for (size_t i = 0; i < ls.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(ls[i]);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg,
                                                             const std::string& name) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("experiment", name);
  kv.emplace_back("version", std::string(kProjectName) + " " + kProjectVersion);
  kv.emplace_back("m", std::to_string(cfg.m));
  kv.emplace_back("l", join_ls(cfg.ls));
  kv.emplace_back("d", cfg.d.str());
  kv.emplace_back("epsilon", cfg.epsilon.str());
  kv.emplace_back("K", std::to_string(cfg.K));
  kv.emplace_back("L", std::to_string(cfg.L));
  kv.emplace_back("trials", fmt_u64(cfg.trials));
  kv.emplace_back("seed", fmt_u64(cfg.seed));
  kv.emplace_back("budget", cfg.budget_auto ? "auto" : std::to_string(cfg.ident_budget));
  kv.emplace_back("path_max_len", std::to_string(cfg.path_max_len));
  kv.emplace_back("alphabet_budget", std::to_string(cfg.alphabet_budget));
  kv.emplace_back("dedup", cfg.dedup ? "1" : "0");
  kv.emplace_back("cap_words", fmt_u64(cfg.cap_words));
  kv.emplace_back("cap_diagrams", fmt_u64(cfg.cap_diagrams));
  kv.emplace_back("cap_tuples", fmt_u64(cfg.cap_tuples));
  return kv;
}

long long ceil_rational(const Rational& q) {
  long long n = q.num(), d = q.den();
  if (n <= 0) return -((-n) / d);
  return (n + d - 1) / d;
}

long long strict_ceil_rational(const Rational& q) {
  long long n = q.num(), d = q.den();
  long long fl = n >= 0 ? n / d : -((-n + d - 1) / d);
  return fl + 1;  // smallest integer strictly above q
}

// ---------------------------------------------------------------------------
// compiled letter constraints, flat in one arena so millions of diagrams
// stay small and cache-friendly

struct IntraEntry {
  std::int8_t cls, a, b, inverted;
};
struct PinEntry {
  std::int8_t cls, pos;
  Letter letter;
};
struct CrossEntry {
  std::int8_t c1, a, c2, b, inverted;
};

struct ProfileArena {
  std::vector<IntraEntry> intra;
  std::vector<PinEntry> pins;
  std::vector<CrossEntry> cross;
  void clear() {
    intra.clear();
    pins.clear();
    cross.clear();
  }
};

struct DiagramProfile {
  std::uint32_t intra_off = 0, pin_off = 0, cross_off = 0;
  std::uint16_t intra_len = 0, pin_len = 0, cross_len = 0;
  std::int8_t n_classes = 0;
  std::int8_t faces = 0;
  std::int16_t cancel = 0, n_fixed = 0;
  std::int32_t sum_delta = 0, sum_m_kappa = 0;
  std::int32_t boundary = 0;
  std::uint8_t violating = 0;
  std::uint64_t successes = 0;
};

DiagramProfile compile_profile(const DiagramView& view, const BelongsAnalysis& analysis,
                               ProfileArena& arena) {
  DiagramProfile p;
  p.intra_off = (std::uint32_t)arena.intra.size();
  p.pin_off = (std::uint32_t)arena.pins.size();
  p.cross_off = (std::uint32_t)arena.cross.size();
  p.n_classes = (std::int8_t)view.deco.n_classes;
  p.faces = (std::int8_t)view.cx.face_count();
  p.cancel = (std::int16_t)analysis.cancel;
  p.n_fixed = (std::int16_t)analysis.n_fixed;
  p.sum_delta = analysis.sum_delta;
  p.sum_m_kappa = analysis.sum_m_kappa;
  p.boundary = (std::int32_t)boundary_length(view.cx);

  const TwoComplex& cx = view.cx;
  // Sides of an edge are chained in (class, pos) order, so dropping the
  // classes above any prefix keeps the remaining constraints connected.
  std::vector<SlotRef> slots;
  for (int e = 0; e < cx.edge_count(); ++e) {
    const auto& sides = cx.sides_of_edge(e);
    slots.clear();
    for (int s : sides) slots.push_back(slot_of(view, cx.side_at(s)));
    std::sort(slots.begin(), slots.end(), [](const SlotRef& a, const SlotRef& b) {
      if (a.cls != b.cls) return a.cls < b.cls;
      if (a.pos != b.pos) return a.pos < b.pos;
      return a.twist > b.twist;
    });
    for (size_t i = 1; i < slots.size(); ++i) {
      const SlotRef& sa = slots[i - 1];
      const SlotRef& sb = slots[i];
      std::int8_t inv = sa.twist != sb.twist ? 1 : 0;
      if (sa.cls == sb.cls) {
        arena.intra.push_back({(std::int8_t)sa.cls, (std::int8_t)sa.pos, (std::int8_t)sb.pos, inv});
      } else {
        arena.cross.push_back({(std::int8_t)sa.cls, (std::int8_t)sa.pos, (std::int8_t)sb.cls,
                               (std::int8_t)sb.pos, inv});
      }
    }
    if (!view.fixed.edge_fixed.empty() && view.fixed.edge_fixed[e]) {
      Letter intrinsic = view.fixed.edge_pin[e];
      for (int s : sides) {
        SlotRef sr = slot_of(view, cx.side_at(s));
        Letter pinned = sr.twist > 0 ? intrinsic : intrinsic.inverse();
        arena.pins.push_back({(std::int8_t)sr.cls, (std::int8_t)sr.pos, pinned});
      }
    }
  }
  p.intra_len = (std::uint16_t)(arena.intra.size() - p.intra_off);
  p.pin_len = (std::uint16_t)(arena.pins.size() - p.pin_off);
  p.cross_len = (std::uint16_t)(arena.cross.size() - p.cross_off);
  return p;
}

inline bool word_fits(const DiagramProfile& p, const ProfileArena& arena, int cls,
                      const Letter* w) {
  for (std::uint32_t i = p.intra_off; i < p.intra_off + p.intra_len; ++i) {
    const IntraEntry& e = arena.intra[i];
    if (e.cls != cls) continue;
    Letter a = w[e.a - 1], b = w[e.b - 1];
    if (a.value() != (e.inverted ? -b.value() : b.value())) return false;
  }
  for (std::uint32_t i = p.pin_off; i < p.pin_off + p.pin_len; ++i) {
    const PinEntry& e = arena.pins[i];
    if (e.cls != cls) continue;
    if (w[e.pos - 1] != e.letter) return false;
  }
  return true;
}

inline bool pair_compatible(const DiagramProfile& p, const ProfileArena& arena, int cls_new,
                            const Letter* w_new, int cls_old, const Letter* w_old) {
  for (std::uint32_t i = p.cross_off; i < p.cross_off + p.cross_len; ++i) {
    const CrossEntry& e = arena.cross[i];
    const Letter* w1;
    const Letter* w2;
    if (e.c1 == cls_new && e.c2 == cls_old) { w1 = w_new; w2 = w_old; }
    else if (e.c1 == cls_old && e.c2 == cls_new) { w1 = w_old; w2 = w_new; }
    else continue;
    Letter a = w1[e.a - 1], b = w2[e.b - 1];
    if (a.value() != (e.inverted ? -b.value() : b.value())) return false;
  }
  return true;
}

inline bool words_equal(const Letter* a, const Letter* b, int l) {
  for (int i = 0; i < l; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// Does any injective assignment of the trial's relators fulfill the profile?
bool profile_fulfilled(const DiagramProfile& p, const ProfileArena& arena, const Letter* relators,
                       int n_relators, int l) {
  const int n = p.n_classes;
  if (n == 1) {
    for (int i = 0; i < n_relators; ++i)
      if (word_fits(p, arena, 1, relators + (std::size_t)i * l)) return true;
    return false;
  }
  int chosen[8];
  auto rec = [&](auto&& self, int cls) -> bool {
    if (cls > n) return true;
    for (int i = 0; i < n_relators; ++i) {
      const Letter* w = relators + (std::size_t)i * l;
      if (!word_fits(p, arena, cls, w)) continue;
      bool ok = true;
      for (int c2 = 1; c2 < cls && ok; ++c2) {
        const Letter* w2 = relators + (std::size_t)chosen[c2] * l;
        if (chosen[c2] == i || words_equal(w, w2, l)) ok = false;
        else ok = pair_compatible(p, arena, cls, w, c2, w2);
      }
      if (!ok) continue;
      chosen[cls] = i;
      if (self(self, cls + 1)) return true;
    }
    return false;
  };
  return rec(rec, 1);
}

// ---------------------------------------------------------------------------
// presampled presentation pool: trial t holds the relators drawn from
// substream(seed, t), identical to sample_presentation on that stream

struct Pool {
  int n_relators = 0;
  int l = 0;
  std::uint64_t trials = 0;
  std::vector<Letter> letters;  // trials * n_relators * l

  const Letter* trial(std::uint64_t t) const {
    return letters.data() + t * (std::size_t)n_relators * l;
  }
};

Pool build_pool(const ExperimentConfig& cfg, int l) {
  Pool pool;
  pool.n_relators = (int)relator_count(cfg.m, l, cfg.d, cfg.cap_words);
  pool.l = l;
  pool.trials = cfg.trials;
  pool.letters.resize(cfg.trials * (std::size_t)pool.n_relators * l);
  parallel_for(cfg.trials, cfg.jobs, [&](std::uint64_t t) {
    Rng rng = Rng::substream(cfg.seed, t);
    Letter* out = pool.letters.data() + t * (std::size_t)pool.n_relators * l;
    for (int i = 0; i < pool.n_relators; ++i) {
      Word w = sample_reduced_word(cfg.m, l, rng);
      std::copy(w.begin(), w.end(), out + (std::size_t)i * l);
    }
  });
  return pool;
}

std::string render_kv(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += "# " + k + "=" + v + "\n";
  return out;
}

}  // namespace

std::string Report::to_csv() const {
  std::string out = render_kv(config_kv);
  for (const auto& [k, v] : summary) out += "# summary." + k + "=" + v + "\n";
  out += "# pass=" + std::string(pass ? "1" : "0") + "\n";
  if (!fail_reason.empty()) out += "# fail_reason=" + fail_reason + "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out.push_back(',');
    out += columns[i];
  }
  out.push_back('\n');
  out += csv_rows;
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : config_kv) cfg[k] = v;
  j["config"] = std::move(cfg);
  nlohmann::ordered_json sum;
  for (const auto& [k, v] : summary) sum[k] = v;
  j["summary"] = std::move(sum);
  j["pass"] = pass;
  if (!fail_reason.empty()) j["fail_reason"] = fail_reason;
  j["row_count"] = (std::uint64_t)std::count(csv_rows.begin(), csv_rows.end(), '\n');
  j["columns"] = columns;
  return j.dump(2) + "\n";
}

std::string Report::render(const std::string& format) const {
  if (format == "json") return to_json();
  return to_csv();
}

// ---------------------------------------------------------------------------
// eq2: exact audit of the cancellation accounting identity

Eq2Result run_eq2_audit(const ExperimentConfig& cfg) {
  Eq2Result result;
  result.report.experiment = "eq2";
  result.report.config_kv = config_echo(cfg, "eq2");
  result.report.columns = {"K", "l", "paths", "diagrams", "eq_failures", "ineq_failures"};

  int max_l = 2;
  for (int l : cfg.ls) max_l = std::max(max_l, l);
  std::string rows;
  BelongsScratch scratch;
  BelongsAnalysis analysis;

  for (int K = 1; K <= cfg.K; ++K) {
    for (int l = 2; l <= max_l; ++l) {
      for (int phase = 0; phase <= (cfg.L > 0 ? 1 : 0); ++phase) {
        EnumerationFilter filter;
        filter.max_identifications = phase == 0 ? cfg.ident_budget
                                                : std::max(0, cfg.ident_budget - 1);
        filter.min_fixed_paths = phase == 0 ? 0 : 1;
        filter.path_max_len = cfg.path_max_len;
        filter.alphabet_budget = cfg.alphabet_budget;
        filter.cap_diagrams = cfg.cap_diagrams;
        filter.require_reduced = true;
        std::uint64_t diagrams = 0, eqf = 0, ineqf = 0;
        enumerate_abstract(K, phase == 0 ? 0 : cfg.L, l, filter, [&](const DiagramView& view) {
          analyze_belongs(view, scratch, analysis);
          ++diagrams;
          long long lhs = analysis.cancel + analysis.n_fixed;
          if (lhs != analysis.sum_delta) ++eqf;
          if (analysis.sum_delta > analysis.sum_m_kappa) ++ineqf;
        });
        result.population += diagrams;
        result.eq_failures += eqf;
        result.ineq_failures += ineqf;
        rows += fmt_i64(K) + "," + fmt_i64(l) + "," + (phase == 0 ? "0" : "1.." + std::to_string(cfg.L)) +
                "," + fmt_u64(diagrams) + "," + fmt_u64(eqf) + "," + fmt_u64(ineqf) + "\n";
      }
    }
  }
  result.report.csv_rows = rows;
  result.report.summary.emplace_back("population", fmt_u64(result.population));
  result.report.summary.emplace_back("eq_failures", fmt_u64(result.eq_failures));
  result.report.summary.emplace_back("ineq_failures", fmt_u64(result.ineq_failures));
  result.report.pass = result.eq_failures == 0 && result.ineq_failures == 0 && result.population > 0;
  if (!result.report.pass)
    result.report.fail_reason = result.population == 0 ? "empty population" : "audit failures";
  return result;
}

// ---------------------------------------------------------------------------
// lemma: exact rational check of the per-class exposure bound

namespace {

// prefix tuple counts over the enumerated reduced words: counts[i] is the
// number of (w_1..w_i) satisfying every constraint among classes <= i,
// including pairwise distinctness
void prefix_counts(const DiagramProfile& p, const ProfileArena& arena,
                   const std::vector<Letter>& words_flat, int n_words, int l,
                   std::vector<std::uint64_t>& counts) {
  const int n = p.n_classes;
  counts.assign(n + 1, 0);
  counts[0] = 1;
  int chosen[8];
  auto rec = [&](auto&& self, int cls) -> void {
    for (int i = 0; i < n_words; ++i) {
      const Letter* w = words_flat.data() + (std::size_t)i * l;
      if (!word_fits(p, arena, cls, w)) continue;
      bool ok = true;
      for (int c2 = 1; c2 < cls && ok; ++c2) {
        if (chosen[c2] == i) ok = false;  // enumerated words are pairwise distinct
        else
          ok = pair_compatible(p, arena, cls, w, c2,
                               words_flat.data() + (std::size_t)chosen[c2] * l);
      }
      if (!ok) continue;
      ++counts[cls];
      if (cls < n) {
        chosen[cls] = i;
        self(self, cls + 1);
      }
    }
  };
  if (n > 0) rec(rec, 1);
}

}  // namespace

LemmaResult run_lemma_check(const ExperimentConfig& cfg) {
  LemmaResult result;
  result.report.experiment = "lemma";
  result.report.config_kv = config_echo(cfg, "lemma");
  result.report.columns = {"K", "l", "diagrams", "checks", "violations", "max_ratio"};

  int max_l = 2;
  for (int l : cfg.ls) max_l = std::max(max_l, l);
  const long long base = 2LL * cfg.m - 1;
  std::string rows;
  BelongsScratch scratch;
  BelongsAnalysis analysis;

  for (int l = 2; l <= max_l; ++l) {
    std::uint64_t W64 = reduced_word_count(cfg.m, l, cfg.cap_words);
    // the deepest stratum uses W^2 tuples
    if (W64 > cfg.cap_tuples / W64)
      throw CapExceededError("run_lemma_check: W^2 exceeds cap_tuples at l=" + std::to_string(l));
    std::vector<Word> words = enumerate_reduced_words(cfg.m, l, cfg.cap_words);
    const int n_words = (int)words.size();
    std::vector<Letter> words_flat((std::size_t)n_words * l);
    for (int i = 0; i < n_words; ++i)
      std::copy(words[i].begin(), words[i].end(), words_flat.begin() + (std::size_t)i * l);

    for (int K = 1; K <= cfg.K; ++K) {
      EnumerationFilter filter;
      filter.max_identifications = cfg.ident_budget;
      filter.max_classes = 2;
      filter.path_max_len = cfg.path_max_len;
      filter.alphabet_budget = cfg.alphabet_budget;
      filter.cap_diagrams = cfg.cap_diagrams;
      std::uint64_t diagrams = 0, checks = 0, violations = 0;
      Rational stratum_max(0, 1);
      ProfileArena arena;
      std::vector<std::uint64_t> counts;
      enumerate_abstract(K, cfg.L, l, filter, [&](const DiagramView& view) {
        analyze_belongs(view, scratch, analysis);
        ++diagrams;
        arena.clear();
        DiagramProfile prof = compile_profile(view, analysis, arena);
        prefix_counts(prof, arena, words_flat, n_words, l, counts);
        const int n = prof.n_classes;
        for (int i = 1; i <= n; ++i) {
          ++checks;
          // p_i (2m-1)^kappa_i <= p_{i-1}  <=>  c_i (2m-1)^kappa_i <= c_{i-1} W
          __int128 lhs = (__int128)counts[i];
          for (int t = 0; t < analysis.kappa[i - 1]; ++t) lhs *= base;
          __int128 rhs = (__int128)counts[i - 1] * W64;
          if (lhs > rhs) ++violations;
          if (counts[i - 1] > 0 && counts[i] > 0) {
            long long num = counts[i];
            for (int t = 0; t < analysis.kappa[i - 1]; ++t) num *= base;
            Rational ratio(num, (long long)(counts[i - 1] * W64));
            if (ratio > stratum_max) stratum_max = ratio;
          }
        }
      });
      result.population += diagrams;
      result.checks += checks;
      result.violations += violations;
      if (stratum_max > result.max_ratio) result.max_ratio = stratum_max;
      rows += fmt_i64(K) + "," + fmt_i64(l) + "," + fmt_u64(diagrams) + "," + fmt_u64(checks) +
              "," + fmt_u64(violations) + "," + stratum_max.str() + "\n";
    }
  }
  result.report.csv_rows = rows;
  result.report.summary.emplace_back("population", fmt_u64(result.population));
  result.report.summary.emplace_back("checks", fmt_u64(result.checks));
  result.report.summary.emplace_back("violations", fmt_u64(result.violations));
  result.report.summary.emplace_back("max_ratio", result.max_ratio.str());
  result.report.pass = result.violations == 0 && result.population > 0;
  if (!result.report.pass)
    result.report.fail_reason = result.population == 0 ? "empty population" : "ratio violations";
  return result;
}

// ---------------------------------------------------------------------------
// prop: per-diagram fulfillment bound on the violating population

PropResult run_prop_bound(const ExperimentConfig& cfg) {
  PropResult result;
  result.report.experiment = "prop";
  result.report.config_kv = config_echo(cfg, "prop");
  result.report.columns = {"l",       "diagram",  "faces",     "cancel",          "n_fixed",
                           "sum_delta", "sum_m_kappa", "trials",    "successes",
                           "freq",    "wilson_high", "bound_proof", "bound_statement", "pass"};

  const long long base = 2LL * cfg.m - 1;
  const double base_d = (double)base;
  std::string rows;
  BelongsScratch scratch;
  BelongsAnalysis analysis;

  for (int l : cfg.ls) {
    Rational dl_threshold_unit = (cfg.d + cfg.epsilon + cfg.epsilon) * Rational(l, 1);
    // smallest cancellation a violating single-face diagram can have
    long long budget = cfg.budget_auto ? ceil_rational(dl_threshold_unit)
                                       : cfg.ident_budget;

    ProfileArena arena;
    std::vector<DiagramProfile> profiles;
    for (int K = 1; K <= cfg.K; ++K) {
      Rational threshold = dl_threshold_unit * Rational(K, 1);
      long long min_needed = ceil_rational(threshold) -
                             (long long)cfg.L * std::min(cfg.path_max_len, l);
      if (min_needed > budget) continue;  // no diagram of K faces can violate in budget
      EnumerationFilter filter;
      filter.max_identifications = (int)budget;
      filter.min_identifications = (int)std::max(0LL, min_needed);
      filter.rotation_canonical = cfg.dedup;
      filter.path_max_len = cfg.path_max_len;
      filter.alphabet_budget = cfg.alphabet_budget;
      filter.cap_diagrams = cfg.cap_diagrams;
      enumerate_abstract(K, cfg.L, l, filter, [&](const DiagramView& view) {
        analyze_belongs(view, scratch, analysis);
        // violating: Cancel + N >= (d + 2 eps) |Y| l, exactly
        Rational lhs((long long)(analysis.cancel + analysis.n_fixed), 1);
        if (lhs < threshold) return;
        DiagramProfile prof = compile_profile(view, analysis, arena);
        prof.violating = 1;
        profiles.push_back(prof);
      });
    }

    Pool pool = build_pool(cfg, l);
    parallel_for(profiles.size(), cfg.jobs, [&](std::uint64_t i) {
      DiagramProfile& prof = profiles[i];
      std::uint64_t hits = 0;
      for (std::uint64_t t = 0; t < pool.trials; ++t)
        if (profile_fulfilled(prof, arena, pool.trial(t), pool.n_relators, l)) ++hits;
      prof.successes = hits;
    });

    const double bound_statement = std::pow(base_d, -cfg.epsilon.to_double() * l);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const DiagramProfile& prof = profiles[i];
      McEstimate mc = wilson_interval(prof.successes, pool.trials);
      double exponent =
          ((double)prof.faces * l * cfg.d.to_double() - prof.cancel - prof.n_fixed) / prof.faces;
      double bound_proof = std::pow(base_d, exponent);
      bool ok = mc.wilson_high <= bound_proof;
      if (!ok) ++result.bound_failures;
      ++result.diagrams;
      rows += fmt_i64(l) + "," + fmt_u64(i) + "," + fmt_i64(prof.faces) + "," +
              fmt_i64(prof.cancel) + "," + fmt_i64(prof.n_fixed) + "," + fmt_i64(prof.sum_delta) +
              "," + fmt_i64(prof.sum_m_kappa) + "," + fmt_u64(pool.trials) + "," +
              fmt_u64(prof.successes) + "," + fmt_double(mc.p_hat) + "," +
              fmt_double(mc.wilson_high) + "," + fmt_double(bound_proof) + "," +
              fmt_double(bound_statement) + "," + (ok ? "1" : "0") + "\n";
    }
  }
  result.report.csv_rows = rows;
  result.report.summary.emplace_back("diagrams", fmt_u64(result.diagrams));
  result.report.summary.emplace_back("bound_failures", fmt_u64(result.bound_failures));
  result.report.summary.emplace_back("vacuous", result.diagrams == 0 ? "1" : "0");
  result.report.pass = result.bound_failures == 0;
  if (!result.report.pass) result.report.fail_reason = "Wilson upper bound above the proof bound";
  return result;
}

// ---------------------------------------------------------------------------
// lgl: how often a sampled presentation fulfills some high-cancellation
// diagram, against the union bound, across the configured l range

LglResult run_theorem_lgl(const ExperimentConfig& cfg) {
  LglResult result;
  result.report.experiment = "lgl";
  result.report.config_kv = config_echo(cfg, "lgl");
  result.report.columns = {"l",          "relators",   "violating_diagrams",
                           "trials",     "hits",       "freq",
                           "wilson_low", "wilson_high", "count_abstract",
                           "max_diagram_bound", "union_bound", "union_vacuous", "union_ok"};

  const double base_d = 2.0 * cfg.m - 1;
  std::string rows;
  BelongsScratch scratch;
  BelongsAnalysis analysis;

  for (int l : cfg.ls) {
    LglRow row;
    row.l = l;
    row.relators = relator_count(cfg.m, l, cfg.d, cfg.cap_words);

    ProfileArena arena;
    std::vector<DiagramProfile> profiles;
    double max_bound = 0.0;
    for (int K = 1; K <= cfg.K; ++K) {
      Rational threshold = (cfg.d + cfg.epsilon) * Rational((long long)K * l, 1);
      long long min_needed = strict_ceil_rational(threshold) -
                             (long long)cfg.L * std::min(cfg.path_max_len, l);
      if (min_needed > cfg.ident_budget) continue;
      EnumerationFilter filter;
      filter.max_identifications = cfg.ident_budget;
      filter.min_identifications = (int)std::max(0LL, min_needed);
      filter.path_max_len = cfg.path_max_len;
      filter.alphabet_budget = cfg.alphabet_budget;
      filter.cap_diagrams = cfg.cap_diagrams;
      enumerate_abstract(K, cfg.L, l, filter, [&](const DiagramView& view) {
        analyze_belongs(view, scratch, analysis);
        // violating: Cancel + |Fix| > (d + eps) |Y| l, strictly
        Rational lhs((long long)(analysis.cancel + analysis.n_fixed), 1);
        if (!(lhs > threshold)) return;
        DiagramProfile prof = compile_profile(view, analysis, arena);
        double exponent =
            ((double)prof.faces * l * cfg.d.to_double() - prof.cancel - prof.n_fixed) /
            prof.faces;
        max_bound = std::max(max_bound, std::pow(base_d, exponent));
        profiles.push_back(prof);
      });
    }
    row.violating_diagrams = profiles.size();

    // population size for the union bound, same filter but unconstrained
    {
      EnumerationFilter filter;
      filter.max_identifications = cfg.ident_budget;
      filter.path_max_len = cfg.path_max_len;
      filter.alphabet_budget = cfg.alphabet_budget;
      filter.cap_diagrams = cfg.cap_diagrams;
      row.count_all = count_abstract(cfg.K, cfg.L, l, filter);
    }

    Pool pool = build_pool(cfg, l);
    std::vector<std::uint8_t> hit(pool.trials, 0);
    parallel_for(pool.trials, cfg.jobs, [&](std::uint64_t t) {
      const Letter* rel = pool.trial(t);
      for (const auto& prof : profiles)
        if (profile_fulfilled(prof, arena, rel, pool.n_relators, l)) {
          hit[t] = 1;
          return;
        }
    });
    std::uint64_t hits = 0;
    for (auto h : hit) hits += h;
    row.freq = wilson_interval(hits, pool.trials);
    row.max_diagram_bound = max_bound;
    row.union_bound = (double)row.count_all * max_bound;
    row.union_vacuous = profiles.empty() || row.union_bound >= 1.0;
    bool union_ok = row.union_vacuous || row.freq.wilson_low <= row.union_bound;

    rows += fmt_i64(l) + "," + fmt_u64(row.relators) + "," + fmt_u64(row.violating_diagrams) +
            "," + fmt_u64(pool.trials) + "," + fmt_u64(hits) + "," + fmt_double(row.freq.p_hat) +
            "," + fmt_double(row.freq.wilson_low) + "," + fmt_double(row.freq.wilson_high) + "," +
            fmt_u64(row.count_all) + "," + fmt_double(row.max_diagram_bound) + "," +
            fmt_double(row.union_bound) + "," + (row.union_vacuous ? "1" : "0") + "," +
            (union_ok ? "1" : "0") + "\n";
    result.rows.push_back(row);
  }

  // nonincreasing within confidence intervals, endpoints included
  for (size_t i = 0; i + 1 < result.rows.size(); ++i)
    if (result.rows[i + 1].freq.wilson_low > result.rows[i].freq.wilson_high)
      result.trend_ok = false;
  if (!result.rows.empty() &&
      result.rows.back().freq.p_hat > result.rows.front().freq.p_hat)
    result.trend_ok = false;

  result.report.csv_rows = rows;
  bool vacuous = cfg.d + cfg.epsilon >= Rational(1, 1);
  result.report.summary.emplace_back("trend_ok", result.trend_ok ? "1" : "0");
  result.report.summary.emplace_back("vacuous", vacuous ? "1" : "0");
  result.report.pass = result.trend_ok;
  if (!result.report.pass) result.report.fail_reason = "violation frequency increased along l";
  return result;
}

// ---------------------------------------------------------------------------
// isoperimetric: planar (disc) population, boundary identity plus the
// violation-rate trend among fulfilled diagrams

namespace {

// Two l-gons glued along one boundary arc of length j, both faces walked the
// same way around, so the shared edges are traversed oppositely. The face-0
// arc occupies positions 1..j; remaining edges stay free.
PartitionCode arc_glued_code(int l, int j) {
  PartitionCode code;
  code.K = 2;
  code.l = l;
  const int S = 2 * l;
  code.edge_of.assign(S, -1);
  code.dir_of.assign(S, 1);
  for (int i = 0; i < j; ++i) {
    int s0 = i;                    // face 0, position i+1
    int s1 = l + (j - i - 1);      // face 1, position j-i
    code.edge_of[s0] = i;
    code.edge_of[s1] = i;
    code.dir_of[s1] = -1;
  }
  int next = j;
  for (int s = 0; s < S; ++s)
    if (code.edge_of[s] < 0) code.edge_of[s] = next++;
  return code;
}

}  // namespace

IsoResult run_isoperimetric(const ExperimentConfig& cfg) {
  IsoResult result;
  result.report.experiment = "isoperimetric";
  result.report.config_kv = config_echo(cfg, "isoperimetric");
  result.report.columns = {"l",        "relators",         "diagrams",
                           "violating_diagrams", "identity_failures", "trials",
                           "fulfilled_total",    "violating_fulfilled", "freq",
                           "wilson_low", "wilson_high"};

  // violation: |bd D| < l (1 - 2d - eps) |D|
  Rational ratio = Rational(1, 1) - cfg.d - cfg.d - cfg.epsilon;
  std::string rows;
  BelongsScratch scratch;
  BelongsAnalysis analysis;

  for (int l : cfg.ls) {
    IsoRow row;
    row.l = l;
    row.relators = relator_count(cfg.m, l, cfg.d, cfg.cap_words);

    ProfileArena arena;
    std::vector<DiagramProfile> profiles;
    EnumerationFilter filter;

    auto visit = [&](const DiagramView& view) {
      analyze_belongs(view, scratch, analysis);
      if (!analysis.orderable || analysis.has_reduction_pair) return;
      DiagramProfile prof = compile_profile(view, analysis, arena);
      // planar identity |bd D| = l |D| - 2 Cancel(D)
      if (prof.boundary != (std::int32_t)((long long)l * prof.faces - 2 * prof.cancel))
        ++row.identity_failures;
      Rational lhs((long long)prof.boundary, 1);
      Rational rhs = ratio * Rational((long long)l * prof.faces, 1);
      prof.violating = lhs < rhs ? 1 : 0;
      if (prof.violating) ++row.violating_diagrams;
      profiles.push_back(prof);
    };

    // single plain faces
    {
      PartitionCode plain;
      plain.K = 1;
      plain.l = l;
      plain.edge_of.resize(l);
      std::iota(plain.edge_of.begin(), plain.edge_of.end(), 0);
      plain.dir_of.assign(l, 1);
      TwoComplex cx = plain.build();
      FixedInfo fixed;
      fixed.rebuild(cx);
      enumerate_decorations(1, l, filter, [&](const Decoration& deco) {
        visit(DiagramView(cx, fixed, deco));
      });
    }
    // two faces along one arc
    for (int j = 1; j <= l - 1; ++j) {
      TwoComplex cx = arc_glued_code(l, j).build();
      FixedInfo fixed;
      fixed.rebuild(cx);
      enumerate_decorations(2, l, filter, [&](const Decoration& deco) {
        visit(DiagramView(cx, fixed, deco));
      });
    }
    row.diagrams = profiles.size();
    result.identity_failures += row.identity_failures;

    Pool pool = build_pool(cfg, l);
    std::vector<std::uint32_t> fulfilled(pool.trials, 0), violating(pool.trials, 0);
    parallel_for(pool.trials, cfg.jobs, [&](std::uint64_t t) {
      const Letter* rel = pool.trial(t);
      std::uint32_t ful = 0, vio = 0;
      for (const auto& prof : profiles)
        if (profile_fulfilled(prof, arena, rel, pool.n_relators, l)) {
          ++ful;
          if (prof.violating) ++vio;
        }
      fulfilled[t] = ful;
      violating[t] = vio;
    });
    for (std::uint64_t t = 0; t < pool.trials; ++t) {
      row.fulfilled_total += fulfilled[t];
      row.violating_fulfilled += violating[t];
    }
    row.freq = wilson_interval(row.violating_fulfilled, row.fulfilled_total);

    rows += fmt_i64(l) + "," + fmt_u64(row.relators) + "," + fmt_u64(row.diagrams) + "," +
            fmt_u64(row.violating_diagrams) + "," + fmt_u64(row.identity_failures) + "," +
            fmt_u64(pool.trials) + "," + fmt_u64(row.fulfilled_total) + "," +
            fmt_u64(row.violating_fulfilled) + "," + fmt_double(row.freq.p_hat) + "," +
            fmt_double(row.freq.wilson_low) + "," + fmt_double(row.freq.wilson_high) + "\n";
    result.rows.push_back(row);
  }

  for (size_t i = 0; i + 1 < result.rows.size(); ++i)
    if (result.rows[i + 1].freq.wilson_low > result.rows[i].freq.wilson_high)
      result.trend_ok = false;
  if (!result.rows.empty() &&
      result.rows.back().freq.p_hat > result.rows.front().freq.p_hat)
    result.trend_ok = false;

  result.report.csv_rows = rows;
  result.report.summary.emplace_back("identity_failures", fmt_u64(result.identity_failures));
  result.report.summary.emplace_back("trend_ok", result.trend_ok ? "1" : "0");
  result.report.pass = result.identity_failures == 0 && result.trend_ok;
  if (!result.report.pass)
    result.report.fail_reason =
        result.identity_failures ? "boundary identity failed" : "violation rate increased along l";
  return result;
}

// ---------------------------------------------------------------------------
// growth: abstract-diagram counts against l, log-log least squares

namespace {

GrowthFit fit_loglog(const std::vector<std::pair<int, std::uint64_t>>& points) {
  GrowthFit fit;
  std::vector<std::pair<double, double>> xy;
  for (auto [l, c] : points)
    if (c > 0) xy.emplace_back(std::log((double)l), std::log((double)c));
  fit.points = (int)xy.size();
  if (fit.points < 2) return fit;
  double sx = 0, sy = 0;
  for (auto [x, y] : xy) { sx += x; sy += y; }
  double mx = sx / fit.points, my = sy / fit.points;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (auto [x, y] : xy) {
    double r = y - (fit.intercept + fit.slope * x);
    ssr += r * r;
  }
  fit.rse = fit.points > 2 ? std::sqrt(ssr / (fit.points - 2)) : 0.0;
  return fit;
}

}  // namespace

GrowthResult run_growth_fit(const ExperimentConfig& cfg) {
  GrowthResult result;
  result.report.experiment = "growth";
  result.report.config_kv = config_echo(cfg, "growth");
  result.report.columns = {"K", "L", "l", "count_labeled", "count_canonical"};

  std::string rows;
  std::vector<std::pair<int, std::uint64_t>> labeled_points, canonical_points;
  bool exact_2l_applicable = cfg.K == 1 && cfg.ident_budget == 0 && cfg.L == 0;
  bool exact_2l_ok = true;
  for (int l : cfg.ls) {
    EnumerationFilter filter;
    filter.max_identifications = cfg.ident_budget;
    filter.path_max_len = cfg.path_max_len;
    filter.alphabet_budget = cfg.alphabet_budget;
    filter.cap_diagrams = cfg.cap_diagrams;
    std::uint64_t labeled = count_abstract(cfg.K, cfg.L, l, filter);
    filter.rotation_canonical = true;
    std::uint64_t canonical = count_abstract(cfg.K, cfg.L, l, filter);
    labeled_points.emplace_back(l, labeled);
    canonical_points.emplace_back(l, canonical);
    if (exact_2l_applicable && labeled != (std::uint64_t)(2 * l)) exact_2l_ok = false;
    rows += fmt_i64(cfg.K) + "," + fmt_i64(cfg.L) + "," + fmt_i64(l) + "," + fmt_u64(labeled) +
            "," + fmt_u64(canonical) + "\n";
    result.rows.push_back(GrowthRow{cfg.K, cfg.L, l, labeled, canonical});
  }
  result.fit_labeled = fit_loglog(labeled_points);
  result.fit_canonical = fit_loglog(canonical_points);

  result.report.csv_rows = rows;
  result.report.summary.emplace_back("slope", fmt_double(result.fit_labeled.slope));
  result.report.summary.emplace_back("intercept", fmt_double(result.fit_labeled.intercept));
  result.report.summary.emplace_back("rse", fmt_double(result.fit_labeled.rse));
  result.report.summary.emplace_back("slope_canonical", fmt_double(result.fit_canonical.slope));
  result.report.summary.emplace_back("rse_canonical", fmt_double(result.fit_canonical.rse));
  if (exact_2l_applicable)
    result.report.summary.emplace_back("count_is_2l", exact_2l_ok ? "1" : "0");
  result.report.pass = result.fit_labeled.points >= 2 && result.fit_labeled.rse < 0.1 &&
                       (!exact_2l_applicable || exact_2l_ok);
  if (!result.report.pass) result.report.fail_reason = "log-log fit residuals too large";
  return result;
}

}  // namespace rgl
