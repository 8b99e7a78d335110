#include "bmospline/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bmospline/corpus.hpp"
#include "bmospline/localpoly.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/rng.hpp"
#include "bmospline/util.hpp"

namespace bmospline {

namespace {

// measurement window shared by every protocol
Interval cal_window() { return {-1.0, 2.0}; }

constexpr double kDenFloor = 1e-13;

// Functions whose E-form vanishes (polynomials of order < k) leave only
// quadrature rounding in the denominator; their form ratios are 0/0 noise,
// so the besov stage treats anything this small as degenerate.  Corpus
// functions are O(1), which makes an absolute floor meaningful.
constexpr double kBesovDenFloor = 1e-9;

Interval draw_interval(Rng& rng) {
  double lo = rng.uniform(-0.25, 0.75);
  double len = rng.uniform(0.1, 0.75);
  return {lo, lo + len};
}

std::vector<double> breaks_inside(const Func& f, Interval J) {
  std::vector<double> out;
  if (const PiecewisePoly* pw = f.exact()) {
    for (double b : pw->breakpoints())
      if (b > J.lo && b < J.hi) out.push_back(b);
  }
  return out;
}

// same reduction as the E-form norm, starting from precomputed cell errors
double e_form_value(const std::vector<std::vector<double>>& errors, double alpha) {
  const double tau = 1.0 / alpha;
  std::vector<double> powers;
  for (const auto& level : errors)
    for (double v : level) powers.push_back(std::pow(v, tau));
  return std::pow(pairwise_sum(powers), alpha);
}

}  // namespace

void RatioRange::add(double r) {
  if (cases == 0) {
    lo = hi = r;
  } else {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  ++cases;
}

WhitneyReport measure_whitney() {
  WhitneyReport rep;
  auto catalog = corpus_catalog();
  MultilevelPartition p = MultilevelPartition::build_dyadic(cal_window(), 6, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  for (std::size_t fi = 0; fi < catalog.size(); ++fi) {
    const Func& f = catalog[fi].fn;
    for (int k = 2; k <= 3; ++k) {
      Rng rng(derive_seed(0xCA11, fi, static_cast<std::uint64_t>(k)));
      for (int t = 0; t < 10; ++t) {
        Interval J = draw_interval(rng);
        for (double q : {1.0, 2.0}) {
          double om = modulus(f, J, k, q, rule, 64);
          double err = best_poly_error_oracle(f, J, k, q, rule).value;
          rep.worst_excess =
              std::max(rep.worst_excess, om - std::pow(2.0, k) * err);
          if (om > 1e-12)
            rep.max_e_over_omega = std::max(rep.max_e_over_omega, err / om);
          ++rep.cases;
        }
      }
    }
  }
  return rep;
}

NearBestReport measure_near_best() {
  NearBestReport rep;
  auto catalog = corpus_catalog();
  MultilevelPartition p = MultilevelPartition::build_dyadic(cal_window(), 6, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  for (std::size_t fi = 0; fi < catalog.size(); ++fi) {
    const Func& f = catalog[fi].fn;
    for (int k = 2; k <= 4; ++k) {
      Rng rng(derive_seed(0xAB37, fi, static_cast<std::uint64_t>(k)));
      for (int t = 0; t < 5; ++t) {
        Interval J = draw_interval(rng);
        for (double q : {1.0, 2.0}) {
          double proj = near_best_poly(f, J, k, q, rule).err;
          double oracle = best_poly_error_oracle(f, J, k, q, rule).value;
          if (oracle > kDenFloor)
            rep.max_ratio = std::max(rep.max_ratio, proj / oracle);
          ++rep.cases;
        }
      }
    }
  }
  return rep;
}

double measure_quasi_interp_c() {
  const char* ids[] = {"bump", "step", "cusp05", "sawtooth_2"};
  double worst = 0.0;
  for (const char* id : ids) {
    Func f = corpus_function(id);
    for (int k = 2; k <= 3; ++k) {
      MultilevelPartition p =
          MultilevelPartition::build_dyadic(cal_window(), 3, k);
      QuadratureRule rule = QuadratureRule::for_partition(p, 4);
      for (double q : {1.0, 2.0}) {
        for (int m = 0; m <= p.max_level(); ++m) {
          auto coeffs = quasi_interp(f, p, m, rule);
          PiecewisePoly t = spline_to_pw(p, m, coeffs);
          for (int i = 0; i < p.cell_count(m); ++i) {
            Interval cell = p.cell(m, i);
            auto breaks = breaks_inside(f, cell);
            double num = std::pow(
                rule.integrate_fn(
                    [&](double x) {
                      return std::pow(std::abs(f(x) - t.evaluate(x)), q);
                    },
                    cell, breaks),
                1.0 / q);
            double den =
                best_poly_error_oracle(f, p.omega(m, i, k), k, q, rule).value;
            if (den > kDenFloor) worst = std::max(worst, num / den);
          }
        }
      }
    }
  }
  return worst;
}

double measure_jn_ratio() {
  MultilevelPartition p = MultilevelPartition::build_dyadic(cal_window(), 6, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  double worst = 0.0;
  for (const auto& entry : corpus_catalog()) {
    double b1 = bmo_norm(entry.fn, p, 1.0, rule).value;
    if (b1 <= kDenFloor) continue;
    double b2 = bmo_norm(entry.fn, p, 2.0, rule).value;
    worst = std::max(worst, b2 / b1);
  }
  return worst;
}

double measure_poly_pq_equiv() {
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(derive_seed(0x70E9, static_cast<std::uint64_t>(t)));
    int k = 2 + t % 3;
    double lo = rng.uniform(-1.0, 1.0);
    Interval J{lo, lo + rng.uniform(0.1, 2.0)};
    Poly poly;
    poly.J = J;
    poly.c.resize(static_cast<std::size_t>(k));
    for (double& c : poly.c) c = rng.normal();

    std::vector<double> knots(65);
    for (int i = 0; i <= 64; ++i)
      knots[static_cast<std::size_t>(i)] = J.lo + J.length() * i / 64.0;
    QuadratureRule fine = QuadratureRule::from_knots(knots, 8);

    double scale[3];
    for (int pi = 0; pi < 2; ++pi) {
      double pn = pi == 0 ? 1.0 : 2.0;
      double integral = fine.integrate_fn(
          [&](double x) { return std::pow(std::abs(poly.eval(x)), pn); }, J, {});
      scale[pi] = std::pow(integral / J.length(), 1.0 / pn);
    }
    double sup = 0.0;
    for (int s = 0; s <= 2048; ++s)
      sup = std::max(sup,
                     std::abs(poly.eval(J.lo + J.length() * s / 2048.0)));
    scale[2] = sup;

    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        if (scale[a] <= kDenFloor || scale[b] <= kDenFloor) continue;
        double r = scale[b] / scale[a];
        worst = std::max(worst, std::max(r, 1.0 / r));
      }
  }
  return worst;
}

BesovRatioReport measure_besov_ratios() {
  BesovRatioReport rep;
  auto catalog = corpus_catalog();
  const double alphas[] = {0.5, 1.0};
  const double qs[] = {1.0, 2.0};
  const int levels[] = {8, 10};

  // ratios[fi][ai][qi][li], -1 when degenerate
  std::vector qe_ratio(catalog.size(),
                       std::vector(2, std::vector(2, std::vector(2, -1.0))));
  auto mode_ratio = qe_ratio;

  for (int li = 0; li < 2; ++li) {
    MultilevelPartition p =
        MultilevelPartition::build_dyadic(cal_window(), levels[li], 2);
    QuadratureRule rule = QuadratureRule::for_partition(p, 4);
    for (std::size_t fi = 0; fi < catalog.size(); ++fi) {
      const Func& f = catalog[fi].fn;
      double mod_value[2];
      for (int ai = 0; ai < 2; ++ai)
        mod_value[ai] =
            besov_norm_modulus(f, p, alphas[ai], 2, rule, 16).value;
      for (int qi = 0; qi < 2; ++qi) {
        auto errors = scaled_cell_errors(f, p, 2, qs[qi], rule);
        SplineDecomposition dec =
            decompose(f, p, rule, DecomposeRoute::knot_insertion, qs[qi]);
        for (int ai = 0; ai < 2; ++ai) {
          double e = e_form_value(errors, alphas[ai]);
          BesovRatioRow row;
          row.fn = catalog[fi].id;
          row.alpha = alphas[ai];
          row.q = qs[qi];
          row.L = levels[li];
          if (e > kBesovDenFloor) {
            row.ratio_qe = besov_norm_Q(dec, alphas[ai]).value / e;
            row.ratio_mode = mod_value[ai] / e;
            rep.qe.add(row.ratio_qe);
            rep.mode.add(row.ratio_mode);
            qe_ratio[fi][ai][qi][li] = row.ratio_qe;
            mode_ratio[fi][ai][qi][li] = row.ratio_mode;
          }
          rep.rows.push_back(std::move(row));
        }
      }
    }
  }

  for (std::size_t fi = 0; fi < catalog.size(); ++fi)
    for (int ai = 0; ai < 2; ++ai)
      for (int qi = 0; qi < 2; ++qi) {
        for (const auto& grid : {qe_ratio, mode_ratio}) {
          double r8 = grid[fi][ai][qi][0];
          double r10 = grid[fi][ai][qi][1];
          if (r8 > 0.0 && r10 > 0.0)
            rep.max_drift = std::max(rep.max_drift, std::abs(r10 / r8 - 1.0));
        }
      }
  return rep;
}

EmbeddingReport measure_embeddings() {
  EmbeddingReport rep;
  MultilevelPartition p = MultilevelPartition::build_dyadic(cal_window(), 5, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  NestedStructure st = NestedStructure::from_partition(p);

  std::vector<SupportIndex> pool;
  for (int m = 0; m <= p.max_level(); ++m) {
    auto level = p.supports(m);
    pool.insert(pool.end(), level.begin(), level.end());
  }

  for (int t = 0; t < 100; ++t) {
    Rng rng(derive_seed(0xE8BED, static_cast<std::uint64_t>(t)));
    int n = 1 + rng.uniform_int(30);
    std::vector<SupportIndex> picked;
    for (int i : rng.sample_without_replacement(static_cast<int>(pool.size()), n))
      picked.push_back(pool[static_cast<std::size_t>(i)]);
    std::vector<double> coeffs(picked.size());
    for (double& c : coeffs) c = rng.normal();

    PiecewisePoly pw = synth_spline(p, picked, coeffs);
    Func g = Func::from_pw("sparse_trial", pw);
    double bmo = bmo_norm(g, p, 1.0, rule).value;

    CoeffSequence h{&st, std::vector<double>(static_cast<std::size_t>(st.size()), 0.0)};
    for (std::size_t i = 0; i < picked.size(); ++i)
      h.values[static_cast<std::size_t>(
          st.flat_index(picked[i].level, picked[i].j))] = coeffs[i];

    for (double tau : {0.5, 1.0, 2.0}) {
      double lt = ltau_norm(h, tau);
      if (lt > kDenFloor)
        rep.max_ltau_ratio = std::max(rep.max_ltau_ratio, bmo / lt);
    }
    double g1 = gq_norm(h, 1.0);
    if (g1 > kDenFloor)
      rep.max_g1_ratio = std::max(rep.max_g1_ratio, bmo / g1);
    ++rep.cases;
  }
  return rep;
}

SeqJacksonReport measure_seq_jackson() {
  SeqJacksonReport rep;

  NestedStructure deep = NestedStructure::dyadic_tree(6);
  const double taus[] = {0.5, 1.0};
  const int n_grid[] = {1, 2, 4, 8, 16, 32};
  for (int ti = 0; ti < 2; ++ti) {
    double tau = taus[ti];
    for (int t = 0; t < 100; ++t) {
      Rng rng(derive_seed(0x5E0A, static_cast<std::uint64_t>(ti),
                          static_cast<std::uint64_t>(t)));
      CoeffSequence h{&deep,
                      std::vector<double>(static_cast<std::size_t>(deep.size()))};
      for (double& v : h.values) v = rng.normal();
      double lt = ltau_norm(h, tau);
      if (lt <= kDenFloor) continue;
      rep.max_gq_over_ltau =
          std::max(rep.max_gq_over_ltau, gq_norm(h, 1.0) / lt);
      for (int n : n_grid) {
        double sigma = sigma_n_gq_greedy(h, n, 1.0).residual;
        rep.max_cj =
            std::max(rep.max_cj, sigma * std::pow(n, 1.0 / tau) / lt);
        ++rep.cases_cj;
      }
    }
  }

  NestedStructure small = NestedStructure::dyadic_tree(4);
  const int oracle_grid[] = {1, 2, 3, 5, 8, 12};
  for (int t = 0; t < 100; ++t) {
    Rng rng(derive_seed(0x09AC, static_cast<std::uint64_t>(t)));
    CoeffSequence h{&small,
                    std::vector<double>(static_cast<std::size_t>(small.size()))};
    for (double& v : h.values) v = rng.normal();
    for (int n : oracle_grid) {
      double greedy = sigma_n_gq_greedy(h, n, 1.0).residual;
      double oracle = sigma_n_gq_oracle(h, n, 1.0);
      if (oracle > kDenFloor) {
        rep.max_greedy_over_oracle =
            std::max(rep.max_greedy_over_oracle, greedy / oracle);
        ++rep.cases_oracle;
      }
    }
  }
  return rep;
}

StableBasisRanges measure_stable_basis() {
  StableBasisRanges rep;
  for (int k = 2; k <= 4; ++k) {
    MultilevelPartition p = MultilevelPartition::build_dyadic(cal_window(), 3, k);
    QuadratureRule rule = QuadratureRule::for_partition(p, 4);
    for (int m = 0; m <= p.max_level(); ++m) {
      int sc = p.support_count(m);
      const int picks[] = {0, sc / 2, sc - 1};
      for (int j : picks) {
        std::vector<double> coeffs(static_cast<std::size_t>(sc), 0.0);
        coeffs[static_cast<std::size_t>(j)] = 1.0;
        auto check = stable_basis_check(p, m, coeffs, 2.0, 2.0, rule);
        if (!check.degenerate) rep.single.add(check.ratio);
      }
    }
    Rng rng(derive_seed(0x57AB, static_cast<std::uint64_t>(k)));
    int sc = p.support_count(2);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> coeffs(static_cast<std::size_t>(sc));
      for (double& c : coeffs) c = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      auto check = stable_basis_check(p, 2, coeffs, 2.0, 2.0, rule);
      if (!check.degenerate) rep.random.add(check.ratio);
    }
  }
  return rep;
}

JacksonRatePair measure_jackson_rates() {
  MultilevelPartition p = MultilevelPartition::build_dyadic(cal_window(), 10, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  const int n_grid[] = {8, 16, 32, 64, 128, 256};
  JacksonRatePair out;
  out.cusp = jackson_rate_experiment(corpus_function("cusp05"), p, 0.5, 2, 2.0,
                                     n_grid, rule);
  out.saw = jackson_rate_experiment(corpus_function("sawtooth_2"), p, 1.0, 2,
                                    2.0, n_grid, rule);
  for (const auto* rep : {&out.cusp, &out.saw})
    for (const auto& row : rep->rows)
      out.max_normalized = std::max(out.max_normalized, row.normalized);
  return out;
}

Baselines measure_baselines() {
  Baselines out;
  MultilevelPartition p6 = MultilevelPartition::build_dyadic(cal_window(), 6, 2);
  QuadratureRule rule6 = QuadratureRule::for_partition(p6, 4);

  SupportIndex mid{2, p6.support_count(2) / 2};
  double one = 1.0;
  PiecewisePoly phi = synth_spline(p6, {&mid, 1}, {&one, 1});
  out.besov_e_phi =
      besov_norm_E(Func::from_pw("phi_single", phi), p6, 1.0, 2, 2.0, rule6)
          .value;

  out.besov_mod_bump =
      besov_norm_modulus(corpus_function("bump"), p6, 1.0, 2, rule6, 16).value;

  MultilevelPartition p8 = MultilevelPartition::build_dyadic(cal_window(), 8, 2);
  QuadratureRule rule8 = QuadratureRule::for_partition(p8, 4);
  out.counterexample =
      besov_norm_E(smoothed_step(0.5), p8, 1.0, 2, 1.0, rule8).value;
  return out;
}

FrozenConstants measure_all() {
  FrozenConstants c;
  c.version = 1;
  c.corpus = "v1";

  c.near_best_A = measure_near_best().max_ratio;
  c.quasi_interp_c = measure_quasi_interp_c();
  c.whitney_cw = measure_whitney().max_e_over_omega;
  c.poly_pq_equiv_c = measure_poly_pq_equiv();
  c.jn_ratio = measure_jn_ratio();

  BesovRatioReport br = measure_besov_ratios();
  c.besov_qe_lo = br.qe.lo;
  c.besov_qe_hi = br.qe.hi;
  c.besov_mode_lo = br.mode.lo;
  c.besov_mode_hi = br.mode.hi;

  EmbeddingReport emb = measure_embeddings();
  c.embed_ltau_ce = emb.max_ltau_ratio;
  c.embed_g1_cg = emb.max_g1_ratio;

  StableBasisRanges sb = measure_stable_basis();
  c.stable_single_lo = sb.single.lo;
  c.stable_single_hi = sb.single.hi;
  c.stable_rand_lo = sb.random.lo;
  c.stable_rand_hi = sb.random.hi;

  c.jackson_normalized = measure_jackson_rates().max_normalized;

  SeqJacksonReport sj = measure_seq_jackson();
  c.jackson_seq_cj = sj.max_cj;
  c.greedy_oracle_factor = sj.max_greedy_over_oracle;
  c.gq_vs_ltau_c = sj.max_gq_over_ltau;

  Baselines base = measure_baselines();
  c.baseline_besov_e_phi = base.besov_e_phi;
  c.baseline_besov_mod_bump = base.besov_mod_bump;
  c.baseline_counterexample = base.counterexample;
  return c;
}

}  // namespace bmospline
