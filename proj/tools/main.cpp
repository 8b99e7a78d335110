#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bmospline/config.hpp"
#include "bmospline/corpus.hpp"
#include "bmospline/io.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/nterm.hpp"
#include "bmospline/rng.hpp"
#include "bmospline/util.hpp"

using namespace bmospline;

namespace {

// exit codes: 0 success, 1 assertion failure, 2 usage/config error
constexpr int kExitOk = 0;
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config_path;
  std::vector<double> window;
  int k = 0;
  int L = 0;
  double q = 0.0;
  std::vector<double> alphas;
  std::uint64_t seed = 0;
  std::vector<int> n_grid;
  std::string out_dir;
  std::string partition_kind;
  double jitter = 0.0;

  CLI::Option* o_window = nullptr;
  CLI::Option* o_k = nullptr;
  CLI::Option* o_L = nullptr;
  CLI::Option* o_q = nullptr;
  CLI::Option* o_alphas = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_n_grid = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_kind = nullptr;
  CLI::Option* o_jitter = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path,
                  "JSON config file; explicit flags override its values");
  f.o_window = sub->add_option("--window", f.window, "window endpoints: lo hi")
                   ->expected(2);
  f.o_k = sub->add_option("--k", f.k, "spline order, 2..4");
  f.o_L = sub->add_option("--L", f.L, "finest partition level");
  f.o_q = sub->add_option("--q", f.q, "integral exponent, q >= 1");
  f.o_alphas = sub->add_option("--alphas", f.alphas, "smoothness parameter list");
  f.o_seed = sub->add_option("--seed", f.seed, "base seed for seeded experiments");
  f.o_n_grid = sub->add_option("--n-grid", f.n_grid,
                               "term counts for rate experiments (increasing)");
  f.o_out = sub->add_option("--out", f.out_dir, "output directory");
  f.o_kind = sub->add_option("--partition", f.partition_kind,
                             "partition kind: dyadic or perturbed");
  f.o_jitter = sub->add_option("--jitter", f.jitter,
                               "knot jitter for perturbed partitions, [0, 0.25)");
}

std::uint64_t parse_seed_env(const char* text) {
  char* end = nullptr;
  unsigned long long v = std::strtoull(text, &end, 10);
  if (end == text || *end != '\0')
    throw std::invalid_argument(std::string("BMO_SPLINES_SEED is not an integer: ") + text);
  return static_cast<std::uint64_t>(v);
}

// precedence: defaults < config file < BMO_SPLINES_SEED < explicit flags
Config resolve_config(const CommonFlags& f) {
  Config cfg;
  if (!f.config_path.empty())
    cfg = Config::from_json_string(read_file(f.config_path));
  if (const char* env = std::getenv("BMO_SPLINES_SEED"))
    cfg.seed = parse_seed_env(env);
  if (f.o_window->count()) {
    cfg.window_lo = f.window[0];
    cfg.window_hi = f.window[1];
  }
  if (f.o_k->count()) cfg.k = f.k;
  if (f.o_L->count()) cfg.L = f.L;
  if (f.o_q->count()) cfg.q = f.q;
  if (f.o_alphas->count()) cfg.alphas = f.alphas;
  if (f.o_seed->count()) cfg.seed = f.seed;
  if (f.o_n_grid->count()) cfg.n_grid = f.n_grid;
  if (f.o_out->count()) cfg.out_dir = f.out_dir;
  if (f.o_kind->count()) cfg.partition_kind = f.partition_kind;
  if (f.o_jitter->count()) cfg.jitter = f.jitter;
  cfg.validate();
  return cfg;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
            c == '.' || c == '-')
               ? c
               : '_';
  return out;
}

struct Assertions {
  std::vector<std::pair<std::string, std::string>> failures;  // expected, actual

  void check(bool ok, const std::string& expected, const std::string& actual) {
    if (!ok) failures.emplace_back(expected, actual);
  }
  int report() const {
    if (failures.empty()) return kExitOk;
    std::fprintf(stderr, "assertions failed:\n--- expected\n+++ actual\n");
    for (const auto& [e, a] : failures)
      std::fprintf(stderr, "- %s\n+ %s\n", e.c_str(), a.c_str());
    return kExitAssert;
  }
};

std::string fmt(double v) { return format_double(v); }

int cmd_decompose(const Config& cfg, const std::string& fn_id,
                  const std::string& csv_path, const std::string& route_name) {
  Func f = csv_path.empty() ? corpus_function(fn_id) : load_csv(csv_path);
  MultilevelPartition p = cfg.make_partition();
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  DecomposeRoute route = route_name == "dual" ? DecomposeRoute::dual_functional
                                              : DecomposeRoute::knot_insertion;
  SplineDecomposition dec = decompose(f, p, rule, route, cfg.q);

  std::string partition_file = cfg.out_dir + "/partition.json";
  atomic_write(partition_file, partition_to_json(p));
  std::string dec_file = cfg.out_dir + "/decompose_" + sanitize(f.name()) + ".json";
  atomic_write(dec_file,
               decomposition_to_json(dec, "partition.json", f.name(), cfg.hash()));

  std::printf("config %s\n", cfg.hash().c_str());
  std::printf("base level: %zu coefficients\n", dec.levels[0].size());
  for (int m = 1; m <= dec.max_level(); ++m)
    std::printf("detail level %d: %zu coefficients\n", m, dec.levels[m].size());
  std::printf("total: %zu\n", dec.total_coeffs());
  std::printf("wrote %s and %s\n", dec_file.c_str(), partition_file.c_str());
  return kExitOk;
}

int cmd_reconstruct(const std::string& in_path, bool check) {
  LoadedDecomposition ld = load_decomposition(in_path);
  PiecewisePoly pw = reconstruct(ld.dec);
  nlohmann::ordered_json j;
  j["fn"] = ld.fn_id;
  j["pieces"] = pw.piece_count();
  j["domain"] = {pw.domain().lo, pw.domain().hi};
  if (check) {
    Func f = corpus_function(ld.fn_id);
    QuadratureRule rule = QuadratureRule::for_partition(*ld.partition, 4);
    j["sup_error"] = sup_residual(f, pw, rule);
  }
  j["config"] = ld.config_hash;
  std::printf("%s\n", j.dump(2).c_str());
  return kExitOk;
}

int cmd_norm(const Config& cfg, const std::string& fn_id,
             const std::string& variant, double alpha_flag, bool alpha_given) {
  Func f = corpus_function(fn_id);
  MultilevelPartition p = cfg.make_partition();
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  double alpha = alpha_given ? alpha_flag : cfg.alphas.front();

  std::string out;
  if (variant == "bmo") {
    out = bmo_to_json(bmo_norm(f, p, cfg.q, rule), fn_id, cfg.hash());
  } else if (variant == "bmo-qk") {
    out = bmo_qk_to_json(bmo_qk_norm(f, p, cfg.q, cfg.k, rule), cfg.q, cfg.k,
                         fn_id, cfg.hash());
  } else if (variant == "besov-e") {
    out = besov_to_json(besov_norm_E(f, p, alpha, cfg.k, cfg.q, rule), fn_id,
                        cfg.hash());
  } else if (variant == "besov-q") {
    SplineDecomposition dec =
        decompose(f, p, rule, DecomposeRoute::knot_insertion, cfg.q);
    out = besov_to_json(besov_norm_Q(dec, alpha), fn_id, cfg.hash());
  } else if (variant == "besov-mod") {
    if (1.0 / alpha < 1.0) {
      std::fprintf(stderr,
                   "besov-mod needs tau = 1/alpha >= 1, i.e. alpha <= 1 "
                   "(got alpha = %s)\n",
                   fmt(alpha).c_str());
      return kExitUsage;
    }
    out = besov_to_json(besov_norm_modulus(f, p, alpha, cfg.k, rule), fn_id,
                        cfg.hash());
  } else {
    std::fprintf(stderr,
                 "unknown variant '%s'; pick one of bmo, bmo-qk, besov-e, "
                 "besov-q, besov-mod\n",
                 variant.c_str());
    return kExitUsage;
  }
  std::fputs(out.c_str(), stdout);
  return kExitOk;
}

int cmd_rates(const Config& cfg, const std::string& fn_id, double alpha_flag,
              bool alpha_given) {
  struct Target {
    std::string id;
    double alpha;
  };
  std::vector<Target> targets;
  if (!fn_id.empty()) {
    double alpha = alpha_flag;
    if (!alpha_given) {
      alpha = 0.0;
      for (const auto& entry : corpus_catalog())
        if (entry.id == fn_id) alpha = entry.alpha_hint;
      if (alpha <= 0.0) {
        std::fprintf(stderr,
                     "no smoothness hint for '%s'; pass --alpha explicitly\n",
                     fn_id.c_str());
        return kExitUsage;
      }
    }
    targets.push_back({fn_id, alpha});
  } else {
    targets.push_back({"cusp05", 0.5});
    targets.push_back({"sawtooth_2", 1.0});
  }

  MultilevelPartition p = cfg.make_partition();
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Assertions asserts;
  for (const auto& t : targets) {
    Func f = corpus_function(t.id);
    RateReport rep = jackson_rate_experiment(f, p, t.alpha, cfg.k, cfg.q,
                                             cfg.n_grid, rule);
    rep.config_hash = cfg.hash();
    std::string stem = cfg.out_dir + "/rates_" + sanitize(t.id);
    atomic_write(stem + ".csv", rate_rows_csv(rep));
    atomic_write(stem + ".json", rate_report_json(rep));
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rep.rows)
      pts.emplace_back(static_cast<double>(row.n), row.error);
    atomic_write(stem + ".svg",
                 svg_loglog("greedy error vs n: " + t.id, pts, cfg.hash()));
    std::printf("rates %s: slope=%s r2=%s besov=%s -> %s.{csv,json,svg}\n",
                t.id.c_str(), fmt(rep.slope).c_str(), fmt(rep.r2).c_str(),
                fmt(rep.besov_value).c_str(), stem.c_str());

    double limit = -t.alpha + 0.15;
    if (rep.slope_defined)
      asserts.check(rep.slope <= limit,
                    "slope(" + t.id + ") <= " + fmt(limit),
                    "slope(" + t.id + ") = " + fmt(rep.slope));
  }
  return asserts.report();
}

int cmd_bernstein(const Config& cfg, int trials, double alpha,
                  const std::vector<int>& n_grid_flag) {
  std::vector<int> grid =
      n_grid_flag.empty() ? std::vector<int>{1, 2, 4, 8, 16, 32, 64}
                          : n_grid_flag;
  MultilevelPartition p = cfg.make_partition();
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  BernsteinReport rep =
      bernstein_experiment(p, alpha, trials, grid, cfg.seed, rule);
  rep.config_hash = cfg.hash();

  std::string stem = cfg.out_dir + "/bernstein";
  atomic_write(stem + ".csv", bernstein_rows_csv(rep));
  atomic_write(stem + ".json", bernstein_report_json(rep));
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rep.rows)
    pts.emplace_back(static_cast<double>(row.n), row.random_max);
  atomic_write(stem + ".svg",
               svg_loglog("max besov/(n^a bmo) vs n", pts, cfg.hash()));
  std::printf(
      "bernstein: random tail slope=%s witness tail slope=%s -> "
      "%s.{csv,json,svg}\n",
      fmt(rep.random_slope).c_str(), fmt(rep.witness_slope).c_str(),
      stem.c_str());

  Assertions asserts;
  if (rep.slopes_defined) {
    asserts.check(rep.random_slope <= 0.15, "random tail slope <= 0.15",
                  "random tail slope = " + fmt(rep.random_slope));
    asserts.check(std::abs(rep.witness_slope) <= 0.15,
                  "|witness tail slope| <= 0.15",
                  "witness tail slope = " + fmt(rep.witness_slope));
  }
  return asserts.report();
}

int cmd_counterexample(const Config& cfg, const std::vector<double>& eps_flag) {
  if (cfg.k != 2) {
    std::fprintf(stderr, "counterexample is defined for k = 2 (got k = %d)\n",
                 cfg.k);
    return kExitUsage;
  }
  std::vector<double> eps = eps_flag;
  if (eps.empty())
    for (int e = 3; e <= 9; ++e) eps.push_back(std::pow(2.0, -e));

  MultilevelPartition p = cfg.make_partition();
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  GrowthReport rep = counterexample_growth(p, eps, rule);

  std::string stem = cfg.out_dir + "/counterexample";
  atomic_write(stem + ".csv", growth_rows_csv(rep, cfg.hash()));
  atomic_write(stem + ".json", growth_report_json(rep, cfg.hash()));
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rep.rows) pts.emplace_back(1.0 / row.eps, row.value);
  atomic_write(stem + ".svg",
               svg_loglog("smoothed-step norm vs 1/eps", pts, cfg.hash()));
  std::printf("counterexample: slope=%s r2=%s -> %s.{csv,json,svg}\n",
              fmt(rep.slope).c_str(), fmt(rep.r2).c_str(), stem.c_str());

  Assertions asserts;
  asserts.check(rep.slope > 0.0, "growth slope > 0", "slope = " + fmt(rep.slope));
  asserts.check(rep.r2 >= 0.9, "growth r2 >= 0.9", "r2 = " + fmt(rep.r2));
  bool increasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].value <= rep.rows[i - 1].value) increasing = false;
  asserts.check(increasing, "values strictly increasing with 1/eps",
                "a later value did not increase");
  return asserts.report();
}

int cmd_gq_bench(const Config& cfg, int depth, int trials) {
  if (depth < 1 || depth > 16) {
    std::fprintf(stderr, "depth must be in 1..16\n");
    return kExitUsage;
  }
  NestedStructure st = NestedStructure::dyadic_tree(depth);
  bool with_oracle = st.size() <= 20;
  std::vector<int> ns;
  for (int n : {1, 2, 3, 5, 8, 12})
    if (n <= st.size()) ns.push_back(n);

  std::vector<double> best(ns.size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    CoeffSequence h{&st, std::vector<double>(static_cast<std::size_t>(st.size()))};
    for (double& v : h.values) v = rng.normal();
    double l1 = ltau_norm(h, 1.0);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      double greedy = sigma_n_gq_greedy(h, ns[i], 1.0).residual;
      if (with_oracle) {
        double oracle = sigma_n_gq_oracle(h, ns[i], 1.0);
        if (oracle > 1e-13)
          best[i] = std::max(best[i], greedy / oracle);
      } else if (l1 > 1e-13) {
        best[i] = std::max(best[i], greedy * ns[i] / l1);
      }
    }
  }
  double overall = 0.0;
  for (double v : best) overall = std::max(overall, v);

  const char* col = with_oracle ? "max_greedy_over_oracle" : "max_cj_tau1";
  std::string csv = "# config " + cfg.hash() + "\n";
  csv += std::string("n,") + col + "\n";
  std::printf("%6s  %s\n", "n", col);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    csv += std::to_string(ns[i]) + "," + fmt(best[i]) + "\n";
    std::printf("%6d  %s\n", ns[i], fmt(best[i]).c_str());
  }
  std::printf("max: %s\n", fmt(overall).c_str());

  nlohmann::ordered_json j;
  j["depth"] = depth;
  j["trials"] = trials;
  j["seed"] = cfg.seed;
  j["mode"] = with_oracle ? "greedy_over_oracle" : "cj_tau1";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    nlohmann::ordered_json e;
    e["n"] = ns[i];
    e["value"] = best[i];
    rows.push_back(e);
  }
  j["rows"] = rows;
  j["max"] = overall;
  j["config"] = cfg.hash();
  atomic_write(cfg.out_dir + "/gq_bench.csv", csv);
  atomic_write(cfg.out_dir + "/gq_bench.json", j.dump(2) + "\n");

  Assertions asserts;
  if (with_oracle)
    asserts.check(overall <= 8.0, "max greedy/oracle <= 8",
                  "max = " + fmt(overall));
  return asserts.report();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-term B-spline approximation in BMO: decompositions, norms, "
               "and rate experiments"};
  app.require_subcommand(1);

  CommonFlags cf_dec, cf_norm, cf_rates, cf_bern, cf_counter, cf_gq;

  auto* dec = app.add_subcommand("decompose",
                                 "multiscale decomposition of a target function");
  add_common(dec, cf_dec);
  std::string dec_fn, dec_csv, dec_route = "insertion";
  auto* dec_fn_opt = dec->add_option("--fn", dec_fn, "builtin function id");
  dec->add_option("--csv", dec_csv, "two-column x,value sample file")
      ->excludes(dec_fn_opt);
  dec->add_option("--route", dec_route, "detail extraction: insertion or dual")
      ->check(CLI::IsMember({"insertion", "dual"}));

  auto* rec = app.add_subcommand("reconstruct",
                                 "rebuild a function from a decomposition file");
  std::string rec_in;
  bool rec_check = false;
  rec->add_option("--in", rec_in, "decomposition JSON written by decompose")
      ->required();
  rec->add_flag("--check", rec_check,
                "compare against the builtin target and report the sup error");

  auto* nrm = app.add_subcommand("norm", "norm estimate as JSON on stdout");
  add_common(nrm, cf_norm);
  std::string nrm_fn, nrm_variant;
  double nrm_alpha = 0.0;
  nrm->add_option("--fn", nrm_fn, "builtin function id")->required();
  nrm->add_option("--variant", nrm_variant,
                  "bmo | bmo-qk | besov-e | besov-q | besov-mod")
      ->required();
  auto* nrm_alpha_opt =
      nrm->add_option("--alpha", nrm_alpha, "smoothness parameter");

  auto* rat = app.add_subcommand("rates", "greedy n-term error decay");
  add_common(rat, cf_rates);
  std::string rat_fn;
  double rat_alpha = 0.0;
  rat->add_option("--fn", rat_fn, "builtin function id (default: cusp05 and "
                                  "sawtooth_2)");
  auto* rat_alpha_opt =
      rat->add_option("--alpha", rat_alpha, "expected decay exponent");

  auto* ber = app.add_subcommand("bernstein",
                                 "inverse-estimate ratio over random sparse splines");
  add_common(ber, cf_bern);
  int ber_trials = 20;
  double ber_alpha = 1.0;
  std::vector<int> ber_grid;
  ber->add_option("--trials", ber_trials, "trials per term count")
      ->check(CLI::PositiveNumber);
  ber->add_option("--alpha", ber_alpha, "smoothness parameter");
  ber->add_option("--bernstein-n-grid", ber_grid,
                  "term counts (default 1 2 4 8 16 32 64)");

  auto* cnt = app.add_subcommand("counterexample",
                                 "norm growth of the smoothed step vs 1/eps");
  add_common(cnt, cf_counter);
  std::vector<double> cnt_eps;
  cnt->add_option("--eps", cnt_eps, "ramp widths (default 2^-3 .. 2^-9)");

  auto* gqb = app.add_subcommand("gq-bench",
                                 "greedy vs oracle thresholding on dyadic trees");
  add_common(gqb, cf_gq);
  int gq_depth = 4, gq_trials = 100;
  gqb->add_option("--depth", gq_depth, "tree depth (oracle mode up to 20 nodes)");
  gqb->add_option("--trials", gq_trials, "random sequences")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (dec->parsed()) {
      if (dec_fn.empty() && dec_csv.empty()) {
        std::fprintf(stderr, "decompose needs --fn or --csv\n");
        return kExitUsage;
      }
      return cmd_decompose(resolve_config(cf_dec), dec_fn, dec_csv, dec_route);
    }
    if (rec->parsed()) return cmd_reconstruct(rec_in, rec_check);
    if (nrm->parsed())
      return cmd_norm(resolve_config(cf_norm), nrm_fn, nrm_variant, nrm_alpha,
                      nrm_alpha_opt->count() > 0);
    if (rat->parsed())
      return cmd_rates(resolve_config(cf_rates), rat_fn, rat_alpha,
                       rat_alpha_opt->count() > 0);
    if (ber->parsed())
      return cmd_bernstein(resolve_config(cf_bern), ber_trials, ber_alpha,
                           ber_grid);
    if (cnt->parsed()) return cmd_counterexample(resolve_config(cf_counter), cnt_eps);
    if (gqb->parsed())
      return cmd_gq_bench(resolve_config(cf_gq), gq_depth, gq_trials);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
