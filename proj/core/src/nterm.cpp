#include "bmospline/nterm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bmospline/corpus.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/rng.hpp"
#include "bmospline/util.hpp"

namespace bmospline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool larger(double a_abs, SupportIndex a, double b_abs, SupportIndex b) {
  if (a_abs != b_abs) return a_abs > b_abs;
  if (a.level != b.level) return a.level < b.level;
  return a.j < b.j;
}

// slope of log error vs log n over rows[1..]; undefined when any fitted
// error sits at the numerical floor
void fit_rate(RateReport& rep) {
  std::vector<double> lx, ly;
  bool ok = rep.rows.size() >= 3;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].error <= 1e-12) {
      ok = false;
      break;
    }
    lx.push_back(std::log(static_cast<double>(rep.rows[i].n)));
    ly.push_back(std::log(rep.rows[i].error));
  }
  rep.slope_defined = ok;
  if (ok) {
    LinearFit fit = fit_line(lx, ly);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.r2 = fit.r2;
  }
}

}  // namespace

std::vector<SupportIndex> greedy_select(const SplineDecomposition& dec, int n) {
  require(n >= 0, "selection size must be nonnegative");
  std::vector<SupportIndex> order = dec.indices();
  std::sort(order.begin(), order.end(), [&](SupportIndex a, SupportIndex b) {
    return larger(std::abs(dec.coeff(a)), a, std::abs(dec.coeff(b)), b);
  });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(n)));
  return order;
}

NTermApproximant greedy_nterm(const SplineDecomposition& dec, int n,
                              const Func& f, double q,
                              const QuadratureRule& rule) {
  require(n >= 1, "n must be positive");
  NTermApproximant out;
  out.exhausted = static_cast<std::size_t>(n) > dec.total_coeffs();
  out.selected = greedy_select(dec, n);
  out.coeffs.reserve(out.selected.size());
  for (auto s : out.selected) out.coeffs.push_back(dec.coeff(s));
  out.spline = reconstruct_terms(dec, out.selected);
  out.residual_norm = bmo_residual(f, out.spline, *dec.partition, q, rule);
  return out;
}

NTermApproximant linf_nterm(const SplineDecomposition& dec, int n, const Func& f,
                            const QuadratureRule& rule) {
  require(n >= 1, "n must be positive");
  NTermApproximant out;
  out.exhausted = static_cast<std::size_t>(n) > dec.total_coeffs();
  out.selected = greedy_select(dec, n);
  out.coeffs.reserve(out.selected.size());
  for (auto s : out.selected) out.coeffs.push_back(dec.coeff(s));
  out.spline = reconstruct_terms(dec, out.selected);
  out.residual_norm = sup_residual(f, out.spline, rule);
  return out;
}

double sup_residual(const Func& f, const PiecewisePoly& g,
                    const QuadratureRule& rule) {
  auto knots = rule.finest_knots();
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int s = 0; s < 8; ++s) {
      double x = knots[i] + (knots[i + 1] - knots[i]) * ((s + 0.5) / 8.0);
      best = std::max(best, std::abs(f(x) - g.evaluate(x)));
    }
  }
  return best;
}

double bmo_residual(const Func& f, const PiecewisePoly& g,
                    const MultilevelPartition& p, double q,
                    const QuadratureRule& rule) {
  Func residual = [&] {
    if (const PiecewisePoly* pw = f.exact())
      return Func::from_pw("residual", pw->combine(g, -1.0));
    Interval support = f.support();
    Interval dom = g.domain();
    support.lo = std::min(support.lo, dom.lo);
    support.hi = std::max(support.hi, dom.hi);
    return Func::from_callable("residual", support, [f, g](double x) {
      return f(x) - g.evaluate(x);
    });
  }();
  return bmo_norm(residual, p, q, rule).value;
}

GqSigma sigma_n_gq_greedy(const CoeffSequence& h, int n, double q) {
  require(h.structure != nullptr, "sequence needs a structure");
  require(n >= 0, "n must be nonnegative");
  std::vector<int> order(h.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double va = std::abs(h.values[a]), vb = std::abs(h.values[b]);
    if (va != vb) return va > vb;
    return a < b;
  });
  GqSigma out;
  const int take = std::min<int>(n, static_cast<int>(order.size()));
  out.selected.assign(order.begin(), order.begin() + take);
  CoeffSequence rest{h.structure, h.values};
  for (int i : out.selected) rest.values[i] = 0.0;
  out.residual = gq_norm(rest, q);
  return out;
}

double sigma_n_gq_oracle(const CoeffSequence& h, int n, double q) {
  require(h.structure != nullptr, "sequence needs a structure");
  require(h.structure->size() <= 20, "oracle enumeration capped at 20 nodes");
  require(n >= 0, "n must be nonnegative");
  std::vector<int> nz;
  for (std::size_t i = 0; i < h.values.size(); ++i)
    if (h.values[i] != 0.0) nz.push_back(static_cast<int>(i));
  const int m = std::min<int>(n, static_cast<int>(nz.size()));
  if (m == 0) return gq_norm(h, q);

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(m);
  CoeffSequence rest{h.structure, {}};
  // lexicographic enumeration of all m-subsets of nz
  for (int i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    rest.values = h.values;
    for (int i : pick) rest.values[nz[i]] = 0.0;
    best = std::min(best, gq_norm(rest, q));
    int pos = m - 1;
    while (pos >= 0 && pick[pos] == static_cast<int>(nz.size()) - m + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int i = pos + 1; i < m; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

RateReport jackson_rate_experiment(const Func& f, const MultilevelPartition& p,
                                   double alpha, int k, double q,
                                   std::span<const int> n_grid,
                                   const QuadratureRule& rule, bool sup_norm) {
  require(alpha > 0.0, "alpha must be positive");
  require(!n_grid.empty(), "n grid must be nonempty");
  require(k == p.k(), "rate experiment runs at the partition's spline order");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    require(n_grid[i] < n_grid[i + 1], "n grid must be strictly increasing");

  RateReport rep;
  rep.fn_id = f.name();
  rep.alpha = alpha;
  rep.besov_value = besov_norm_E(f, p, alpha, k, q, rule).value;
  SplineDecomposition dec = decompose(f, p, rule, DecomposeRoute::knot_insertion, q);
  for (int n : n_grid) {
    NTermApproximant a = sup_norm ? linf_nterm(dec, n, f, rule)
                                  : greedy_nterm(dec, n, f, q, rule);
    RateRow row;
    row.n = n;
    row.error = a.residual_norm;
    row.normalized = rep.besov_value > 0.0
                         ? row.error * std::pow(n, alpha) / rep.besov_value
                         : 0.0;
    rep.rows.push_back(row);
  }
  fit_rate(rep);
  return rep;
}

namespace {

// bounded witness family: w teeth over the window, ramps a quarter period wide
Func trapezoid_wave(Interval W, int teeth) {
  double period = W.length() / teeth;
  std::vector<double> xs{W.lo}, ys{0.0};
  for (int i = 0; i < teeth; ++i) {
    double x0 = W.lo + i * period;
    xs.push_back(x0 + 0.25 * period);
    ys.push_back(1.0);
    xs.push_back(x0 + 0.50 * period);
    ys.push_back(1.0);
    xs.push_back(x0 + 0.75 * period);
    ys.push_back(0.0);
    xs.push_back(x0 + period);
    ys.push_back(0.0);
  }
  return Func::from_pw("wave", PiecewisePoly::linear_interpolant(xs, ys));
}

}  // namespace

BernsteinReport bernstein_experiment(const MultilevelPartition& p, double alpha,
                                     int trials, std::span<const int> n_grid,
                                     std::uint64_t seed,
                                     const QuadratureRule& rule) {
  require(alpha > 0.0, "alpha must be positive");
  require(trials >= 1, "need at least one trial");
  require(!n_grid.empty(), "n grid must be nonempty");
  std::vector<SupportIndex> pool;
  for (int m = 0; m <= p.max_level(); ++m)
    for (auto s : p.supports(m)) pool.push_back(s);

  BernsteinReport rep;
  rep.alpha = alpha;
  rep.trials = trials;
  for (int n : n_grid) {
    require(n >= 1 && n <= static_cast<int>(pool.size()),
            "n exceeds the available supports");
    BernsteinRow row;
    row.n = n;
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t),
                          static_cast<std::uint64_t>(n)));
      auto pick = rng.sample_without_replacement(static_cast<int>(pool.size()), n);
      std::vector<SupportIndex> sel;
      std::vector<double> coeffs;
      sel.reserve(pick.size());
      for (int i : pick) {
        sel.push_back(pool[i]);
        coeffs.push_back(rng.normal());
      }
      Func g = Func::from_pw("sparse_trial", synth_spline(p, sel, coeffs));
      double bes = besov_norm_E(g, p, alpha, p.k(), 2.0, rule).value;
      double bmo = bmo_norm(g, p, 2.0, rule).value;
      if (bmo > 0.0)
        row.random_max =
            std::max(row.random_max, bes / (std::pow(n, alpha) * bmo));
    }
    Func f = trapezoid_wave(p.window(), std::max(1, n / 4));
    SplineDecomposition dec = decompose(f, p, rule);
    std::vector<SupportIndex> sel = greedy_select(dec, n);
    std::vector<double> coeffs;
    coeffs.reserve(sel.size());
    for (auto s : sel) coeffs.push_back(dec.coeff(s));
    Func g = Func::from_pw("witness", synth_spline(p, sel, coeffs));
    double bes = besov_norm_E(g, p, alpha, p.k(), 2.0, rule).value;
    double bmo = bmo_norm(g, p, 2.0, rule).value;
    if (bmo > 0.0) row.witness = bes / (std::pow(n, alpha) * bmo);
    rep.rows.push_back(row);
  }

  rep.tail_start = rep.rows.size() / 2;
  std::vector<double> lx, lr, lw;
  bool ok = rep.rows.size() - rep.tail_start >= 2;
  for (std::size_t i = rep.tail_start; ok && i < rep.rows.size(); ++i) {
    if (rep.rows[i].random_max <= 1e-12 || rep.rows[i].witness <= 1e-12) {
      ok = false;
      break;
    }
    lx.push_back(std::log(static_cast<double>(rep.rows[i].n)));
    lr.push_back(std::log(rep.rows[i].random_max));
    lw.push_back(std::log(rep.rows[i].witness));
  }
  rep.slopes_defined = ok;
  if (ok) {
    rep.random_slope = fit_line(lx, lr).slope;
    rep.witness_slope = fit_line(lx, lw).slope;
  }
  return rep;
}

GrowthReport counterexample_growth(const MultilevelPartition& p,
                                   std::span<const double> eps_grid,
                                   const QuadratureRule& rule) {
  require(p.k() == 2, "the growth experiment is an order-2 construction");
  require(!eps_grid.empty(), "eps grid must be nonempty");
  double finest = std::numeric_limits<double>::infinity();
  const int L = p.max_level();
  for (int j = 0; j < p.cell_count(L); ++j)
    finest = std::min(finest, p.cell(L, j).length());

  GrowthReport rep;
  std::vector<double> lx, ly;
  for (double eps : eps_grid) {
    require(eps >= finest, "eps below the finest cell of the partition");
    Func f = smoothed_step(eps);
    double value = besov_norm_E(f, p, 1.0, 2, 1.0, rule).value;
    rep.rows.push_back(GrowthRow{eps, value});
    lx.push_back(std::log(1.0 / eps));
    ly.push_back(value);
  }
  if (rep.rows.size() >= 2) {
    LinearFit fit = fit_line(lx, ly);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.r2 = fit.r2;
  }
  return rep;
}

}  // namespace bmospline
