// Command-line front end: presentation sampling, diagram analysis, the
// experiment harness, and raw enumeration streams.
//
// Exit codes: 0 all checks pass, 1 usage or config error, 2 check failure,
// 3 an enumeration or word cap fired.
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgl/decorate.hpp"
#include "rgl/enumerate.hpp"
#include "rgl/experiments.hpp"
#include "rgl/fulfill.hpp"
#include "rgl/version.hpp"

namespace {

std::vector<int> parse_l_spec(const std::string& spec) {
  std::vector<int> out;
  if (spec.find(':') != std::string::npos) {
    int lo = 0, hi = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    ss >> lo >> c1 >> hi;
    if (ss >> c2 >> step) {
      if (c2 != ':') throw CLI::ValidationError("--l-range", "use lo:hi or lo:hi:step");
    }
    if (c1 != ':' || lo < 2 || hi < lo || step < 1)
      throw CLI::ValidationError("--l-range", "use lo:hi or lo:hi:step with 2 <= lo <= hi");
    for (int l = lo; l <= hi; l += step) out.push_back(l);
  } else {
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      int l = std::stoi(tok);
      if (l < 2) throw CLI::ValidationError("--l-range", "every l must be >= 2");
      out.push_back(l);
    }
  }
  if (out.empty()) throw CLI::ValidationError("--l-range", "no values");
  return out;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd() ^ 0x5bf0'3635'dc24'66a7ULL;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ExperimentDefaults {
  std::vector<int> ls;
  std::string d, epsilon;
  int K, L, budget;
  bool budget_auto, dedup;
};

ExperimentDefaults defaults_for(const std::string& name) {
  if (name == "eq2") return {{5}, "0.3", "0.05", 3, 1, 2, false, false};
  if (name == "lemma") return {{4}, "0.3", "0.05", 3, 0, 2, false, false};
  if (name == "prop") return {{6, 8, 10}, "0.3", "0.05", 2, 0, 2, true, true};
  if (name == "lgl") return {{4, 6, 8, 10}, "0.3", "0.05", 2, 0, 2, false, false};
  if (name == "isoperimetric") return {{4, 6, 8, 10, 12}, "0.25", "0.05", 2, 0, 2, false, false};
  if (name == "growth") return {{2, 3, 4, 5, 6}, "0.3", "0.05", 2, 0, 2, false, false};
  throw CLI::ValidationError("experiment",
                             "unknown name '" + name +
                                 "' (use eq2|lemma|prop|lgl|isoperimetric|growth)");
}

int run_experiment_cmd(const std::string& name, rgl::ExperimentConfig cfg,
                       const std::string& format, const std::string& out_path) {
  rgl::Report report;
  if (name == "eq2") report = rgl::run_eq2_audit(cfg).report;
  else if (name == "lemma") report = rgl::run_lemma_check(cfg).report;
  else if (name == "prop") report = rgl::run_prop_bound(cfg).report;
  else if (name == "lgl") report = rgl::run_theorem_lgl(cfg).report;
  else if (name == "isoperimetric") report = rgl::run_isoperimetric(cfg).report;
  else if (name == "growth") report = rgl::run_growth_fit(cfg).report;

  write_output(out_path, report.render(format));
  if (!out_path.empty() && out_path != "-") {
    std::cout << name << ": " << (report.pass ? "pass" : "FAIL") << " (report: " << out_path
              << ")\n";
    for (const auto& [k, v] : report.summary) std::cout << "  " << k << " = " << v << "\n";
  }
  return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(rgl::kProjectName) + " " + rgl::kProjectVersion +
               " - random-group diagram laboratory"};
  app.require_subcommand(1);

  // ---- sample
  auto* sample = app.add_subcommand("sample", "sample a random presentation at density d");
  int s_m = 2, s_l = 12;
  std::string s_d = "0.25";
  std::uint64_t s_seed = 0;
  bool s_have_seed = false, s_cyclic = false, s_strict = false;
  std::uint64_t s_cap = 10'000'000;
  std::string s_out;
  sample->add_option("--m", s_m, "generator count (>= 2)");
  sample->add_option("--l", s_l, "relator length (>= 2)");
  sample->add_option("--d", s_d, "density in (0,1), decimal or fraction");
  auto* s_seed_opt = sample->add_option("--seed", s_seed, "master seed");
  sample->add_flag("--cyclic", s_cyclic, "resample until relators are cyclically reduced");
  sample->add_flag("--strict", s_strict, "fail when duplicate relators are drawn");
  sample->add_option("--cap-words", s_cap, "max relator count");
  sample->add_option("--out,-o", s_out, "output file (default stdout)");

  // ---- analyze
  auto* analyze = app.add_subcommand("analyze", "print diagram statistics from a JSON file");
  std::string a_file, a_format = "text";
  analyze->add_option("file", a_file, "diagram JSON file")->required();
  analyze->add_option("--format", a_format, "text|json");

  // ---- experiment
  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  std::string e_name;
  exp->add_option("name", e_name, "eq2|lemma|prop|lgl|isoperimetric|growth")->required();
  int e_m = 2, e_K = 0, e_L = -1, e_budget = -1, e_pathmax = 3, e_alpha = 1, e_jobs = 0;
  std::string e_d, e_eps, e_lrange, e_format = "csv", e_out;
  int e_l = 0;
  std::uint64_t e_trials = 10'000, e_seed = 0;
  bool e_dedup = false, e_no_dedup = false;
  std::uint64_t e_cap_words = 10'000'000, e_cap_diagrams = 200'000'000,
                e_cap_tuples = 100'000'000;
  exp->add_option("--m", e_m, "generator count");
  exp->add_option("--l", e_l, "single relator length");
  exp->add_option("--l-range", e_lrange, "lo:hi[:step] or comma list");
  exp->add_option("--d", e_d, "density");
  exp->add_option("--epsilon", e_eps, "epsilon");
  exp->add_option("--K", e_K, "max faces");
  exp->add_option("--L", e_L, "max fixed paths");
  exp->add_option("--trials", e_trials, "Monte Carlo trials");
  auto* e_seed_opt = exp->add_option("--seed", e_seed, "master seed");
  exp->add_option("--jobs", e_jobs, "worker threads (0 = cores); never changes results");
  exp->add_option("--budget", e_budget, "identification budget (prop default: auto)");
  exp->add_option("--path-max", e_pathmax, "max fixed-path length");
  exp->add_option("--alphabet", e_alpha, "letters available to fixed-path prescriptions");
  exp->add_flag("--dedup", e_dedup, "rotation-canonical codes");
  exp->add_flag("--no-dedup", e_no_dedup, "force labeled codes");
  exp->add_option("--cap-words", e_cap_words, "word enumeration cap");
  exp->add_option("--cap-diagrams", e_cap_diagrams, "diagram enumeration cap");
  exp->add_option("--cap-tuples", e_cap_tuples, "exact-probability tuple cap");
  exp->add_option("--format", e_format, "csv|json");
  exp->add_option("--out,-o", e_out, "report file (default stdout)");

  // ---- enumerate
  auto* enumc = app.add_subcommand("enumerate", "stream abstract diagrams as NDJSON");
  int n_K = 1, n_L = 0, n_l = 4, n_budget = 2, n_pathmax = 3, n_alpha = 1;
  bool n_count_only = false, n_dedup = false, n_all = false;
  std::string n_out;
  std::uint64_t n_cap = 1'000'000;
  enumc->add_option("--K", n_K, "face count");
  enumc->add_option("--L", n_L, "max fixed paths");
  enumc->add_option("--l", n_l, "gon size");
  enumc->add_option("--budget", n_budget, "identification budget");
  enumc->add_option("--path-max", n_pathmax, "max fixed-path length");
  enumc->add_option("--alphabet", n_alpha, "prescription letters");
  enumc->add_flag("--dedup", n_dedup, "rotation-canonical codes");
  enumc->add_flag("--count-only", n_count_only, "emit a CSV count row instead of diagrams");
  enumc->add_flag("--include-unreduced", n_all, "keep diagrams with reduction pairs");
  enumc->add_option("--cap-diagrams", n_cap, "diagram cap");
  enumc->add_option("--out,-o", n_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*sample) {
      rgl::Rational d = rgl::Rational::from_decimal(s_d);
      if (!(rgl::Rational(0, 1) < d && d < rgl::Rational(1, 1)))
        throw rgl::ValidationError("--d must lie strictly between 0 and 1");
      s_have_seed = s_seed_opt->count() > 0;
      if (!s_have_seed) {
        s_seed = fresh_seed();
        std::cerr << "seed: " << s_seed << " (generated)\n";
      }
      rgl::Rng rng(s_seed);
      rgl::SampleOptions opts;
      opts.cyclically_reduced = s_cyclic;
      opts.strict = s_strict;
      opts.relator_cap = s_cap;
      rgl::Presentation p = rgl::sample_presentation(s_m, s_l, d, rng, opts);
      for (auto [i, j] : p.duplicate_pairs)
        std::cerr << "warning: relators " << i << " and " << j << " are equal\n";
      for (int i : p.proper_power_indices)
        std::cerr << "warning: relator " << i << " is a proper power\n";
      write_output(s_out, rgl::presentation_to_json(p, s_seed));
      if (!s_out.empty() && s_out != "-")
        std::cout << "wrote " << p.size() << " relators to " << s_out << "\n";
      return 0;
    }

    if (*analyze) {
      rgl::AbstractDiagram A = rgl::diagram_from_json(read_file(a_file));
      rgl::DiagramView view = A.view();
      rgl::BelongsAnalysis ba = rgl::analyze_belongs(view);
      bool rp = ba.has_reduction_pair;
      if (a_format == "json") {
        nlohmann::ordered_json j;
        j["faces"] = A.base.cx.face_count();
        j["gon"] = A.base.cx.gon_size();
        j["edges"] = A.base.cx.edge_count();
        j["vertices"] = A.base.cx.vertex_count();
        j["cancel"] = ba.cancel;
        j["fix_size"] = ba.n_fixed;
        j["boundary_length"] = rgl::boundary_length(A.base.cx);
        j["classes"] = A.deco.n_classes;
        j["multiplicity"] = ba.multiplicity;
        j["orderable"] = ba.orderable;
        j["reduction_pair"] = rp;
        if (ba.orderable) {
          j["delta"] = ba.delta;
          j["kappa"] = ba.kappa;
          j["audit"] = {{"cancel_plus_fix", ba.cancel + ba.n_fixed},
                        {"sum_delta", ba.sum_delta},
                        {"sum_m_kappa", ba.sum_m_kappa}};
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "faces: " << A.base.cx.face_count() << "  gon: " << A.base.cx.gon_size()
                  << "  edges: " << A.base.cx.edge_count()
                  << "  vertices: " << A.base.cx.vertex_count() << "\n";
        std::cout << "cancel: " << ba.cancel << "\n";
        std::cout << "fixed edges: " << ba.n_fixed << "\n";
        std::cout << "boundary length: " << rgl::boundary_length(A.base.cx) << "\n";
        std::cout << "classes: " << A.deco.n_classes << "  multiplicities:";
        for (int mi : ba.multiplicity) std::cout << " " << mi;
        std::cout << "\n";
        std::cout << "reduction pair: " << (rp ? "yes" : "no") << "\n";
        if (!ba.orderable) {
          std::cout << "belongs order: undefined (duplicate (class,pos) on edge "
                    << ba.offending_edge.value_or(-1) << ")\n";
        } else {
          std::cout << "delta per face:";
          for (int dv : ba.delta) std::cout << " " << dv;
          std::cout << "\nkappa per class:";
          for (int kv : ba.kappa) std::cout << " " << kv;
          std::cout << "\naudit: cancel+fix=" << ba.cancel + ba.n_fixed
                    << "  sum_delta=" << ba.sum_delta << "  sum_m_kappa=" << ba.sum_m_kappa
                    << "  (identity " << (ba.cancel + ba.n_fixed == ba.sum_delta ? "ok" : "FAILED")
                    << ", bound " << (ba.sum_delta <= ba.sum_m_kappa ? "ok" : "FAILED") << ")\n";
        }
      }
      return 0;
    }

    if (*exp) {
      ExperimentDefaults def = defaults_for(e_name);
      rgl::ExperimentConfig cfg;
      cfg.m = e_m;
      cfg.ls = !e_lrange.empty() ? parse_l_spec(e_lrange)
                                 : (e_l > 0 ? std::vector<int>{e_l} : def.ls);
      cfg.d = rgl::Rational::from_decimal(e_d.empty() ? def.d : e_d);
      cfg.epsilon = rgl::Rational::from_decimal(e_eps.empty() ? def.epsilon : e_eps);
      if (!(rgl::Rational(0, 1) < cfg.d && cfg.d < rgl::Rational(1, 1)))
        throw rgl::ValidationError("--d must lie strictly between 0 and 1");
      if (!(rgl::Rational(0, 1) < cfg.epsilon))
        throw rgl::ValidationError("--epsilon must be positive");
      cfg.K = e_K > 0 ? e_K : def.K;
      cfg.L = e_L >= 0 ? e_L : def.L;
      cfg.trials = e_trials;
      if (cfg.trials < 1) throw rgl::ValidationError("--trials must be >= 1");
      if (e_seed_opt->count() == 0) {
        e_seed = fresh_seed();
        std::cerr << "seed: " << e_seed << " (generated)\n";
      }
      cfg.seed = e_seed;
      cfg.jobs = e_jobs;
      cfg.budget_auto = def.budget_auto && e_budget < 0;
      cfg.ident_budget = e_budget >= 0 ? e_budget : def.budget;
      cfg.path_max_len = e_pathmax;
      cfg.alphabet_budget = e_alpha;
      cfg.dedup = e_no_dedup ? false : (e_dedup || def.dedup);
      cfg.cap_words = e_cap_words;
      cfg.cap_diagrams = e_cap_diagrams;
      cfg.cap_tuples = e_cap_tuples;
      return run_experiment_cmd(e_name, cfg, e_format, e_out);
    }

    if (*enumc) {
      rgl::EnumerationFilter filter;
      filter.max_identifications = n_budget;
      filter.path_max_len = n_pathmax;
      filter.alphabet_budget = n_alpha;
      filter.rotation_canonical = n_dedup;
      filter.require_reduced = !n_all;
      filter.cap_diagrams = n_cap;
      std::string out;
      if (n_count_only) {
        out = "K,L,l,count\n";
        out += std::to_string(n_K) + "," + std::to_string(n_L) + "," + std::to_string(n_l) + "," +
               std::to_string(rgl::count_abstract(n_K, n_L, n_l, filter)) + "\n";
      } else {
        std::ostringstream ss;
        rgl::enumerate_abstract(n_K, n_L, n_l, filter, [&](const rgl::DiagramView& view) {
          rgl::AbstractDiagram A = rgl::materialize(view);
          ss << nlohmann::json::parse(rgl::diagram_to_json(A)).dump() << "\n";
        });
        out = ss.str();
      }
      write_output(n_out, out);
      return 0;
    }
  } catch (const rgl::CapExceededError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const rgl::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
