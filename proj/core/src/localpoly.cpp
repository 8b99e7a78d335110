#include "bmospline/localpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bmospline/frozen_constants.hpp"
#include "bmospline/util.hpp"

namespace bmospline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Legendre polynomials on [-1, 1] as u-monomial coefficients
const std::vector<std::vector<double>>& legendre_table() {
  static const std::vector<std::vector<double>> tab = {
      {1.0},
      {0.0, 1.0},
      {-0.5, 0.0, 1.5},
      {0.0, -1.5, 0.0, 2.5},
  };
  return tab;
}

double eval_legendre(int n, double u) {
  switch (n) {
    case 0: return 1.0;
    case 1: return u;
    case 2: return 1.5 * u * u - 0.5;
    case 3: return u * (2.5 * u * u - 1.5);
    default: throw std::invalid_argument("legendre order out of range");
  }
}

std::vector<double> breakpoints_of(const Func& f) {
  std::vector<double> out;
  if (const PiecewisePoly* pw = f.exact()) {
    auto bp = pw->breakpoints();
    out.assign(bp.begin(), bp.end());
  }
  return out;
}

// dense evaluation grid over J: refined panels, order-8 Gauss points
struct Grid {
  std::vector<double> x;
  std::vector<double> w;
};

Grid make_grid(const Func& f, Interval J, const QuadratureRule& rule, int refine) {
  auto breaks = breakpoints_of(f);
  Interval hull = rule.hull();
  Interval Jc{std::max(J.lo, hull.lo), std::min(J.hi, hull.hi)};
  require(Jc.hi > Jc.lo, "evaluation interval lies outside the quadrature hull");
  auto edges = rule.panel_edges(Jc, breaks);
  const double g8n[] = {-0.96028985649753623168, -0.79666647741362673959,
                        -0.52553240991632898582, -0.18343464249564980494,
                        0.18343464249564980494,  0.52553240991632898582,
                        0.79666647741362673959,  0.96028985649753623168};
  const double g8w[] = {0.10122853629037625915, 0.22238103445337447054,
                        0.31370664587788728734, 0.36268378337836198297,
                        0.36268378337836198297, 0.31370664587788728734,
                        0.22238103445337447054, 0.10122853629037625915};
  Grid g;
  int sub = std::max(1, refine);
  g.x.reserve((edges.size() - 1) * sub * 8);
  g.w.reserve(g.x.capacity());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    for (int s = 0; s < sub; ++s) {
      double a = edges[i] + (edges[i + 1] - edges[i]) * (static_cast<double>(s) / sub);
      double b =
          edges[i] + (edges[i + 1] - edges[i]) * (static_cast<double>(s + 1) / sub);
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int n = 0; n < 8; ++n) {
        g.x.push_back(mid + half * g8n[n]);
        g.w.push_back(half * g8w[n]);
      }
    }
  }
  return g;
}

// solve the k x k system A c = b (partial pivoting)
std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    require(A[col][col] != 0.0, "singular normal equations");
    for (int r = col + 1; r < n; ++r) {
      double m = A[r][col] / A[col][col];
      for (int c2 = col; c2 < n; ++c2) A[r][c2] -= m * A[col][c2];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c2 = r + 1; c2 < n; ++c2) s -= A[r][c2] * x[c2];
    x[r] = s / A[r][r];
  }
  return x;
}

// weighted least squares fit of degree < k in the Legendre basis on (x, w)
std::vector<double> wls_fit(const Grid& g, const std::vector<double>& fx,
                            const std::vector<double>& wt, Interval J, int k) {
  std::vector<std::vector<double>> A(k, std::vector<double>(k, 0.0));
  std::vector<double> b(k, 0.0);
  const double mid = J.mid(), half = 0.5 * J.length();
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    double u = (g.x[i] - mid) / half;
    double ww = g.w[i] * wt[i];
    double P[4];
    for (int n = 0; n < k; ++n) P[n] = eval_legendre(n, u);
    for (int r = 0; r < k; ++r) {
      for (int c = r; c < k; ++c) A[r][c] += ww * P[r] * P[c];
      b[r] += ww * P[r] * fx[i];
    }
  }
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < r; ++c) A[r][c] = A[c][r];
  return solve_dense(std::move(A), std::move(b));
}

Poly legendre_to_poly(Interval J, const std::vector<double>& a) {
  const auto& tab = legendre_table();
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n)
    for (std::size_t j = 0; j < tab[n].size(); ++j) c[j] += a[n] * tab[n][j];
  return Poly{J, std::move(c)};
}

}  // namespace

Poly l2_projection(const Func& f, Interval J, int k, const QuadratureRule& rule) {
  require(k >= 1 && k <= 4, "polynomial order must be in [1, 4]");
  require(J.hi > J.lo, "projection interval must be nondegenerate");
  auto breaks = breakpoints_of(f);
  const double mid = J.mid(), half = 0.5 * J.length();
  std::vector<double> a(k, 0.0);
  for (int n = 0; n < k; ++n) {
    auto g = [&](double x) { return f(x) * eval_legendre(n, (x - mid) / half); };
    double In = rule.integrate_fn(g, J, breaks);
    a[n] = (2.0 * n + 1.0) / J.length() * In;
  }
  return legendre_to_poly(J, a);
}

PolyApprox near_best_poly(const Func& f, Interval J, int k, double q,
                          const QuadratureRule& rule) {
  require(q >= 1.0, "near_best_poly requires q >= 1");
  PolyApprox out;
  out.J = J;
  out.k = k;
  out.q = q;
  out.poly = l2_projection(f, J, k, rule);
  auto breaks = breakpoints_of(f);
  const Poly& p = out.poly;
  auto g = [&](double x) { return std::pow(std::abs(f(x) - p.eval(x)), q); };
  double v = rule.integrate_fn(g, J, breaks);
  out.err = std::pow(std::max(0.0, v), 1.0 / q);
  out.near_best_constant = frozen_constants().near_best_A;
  return out;
}

OracleError best_poly_error_oracle(const Func& f, Interval J, int k, double q,
                                   const QuadratureRule& rule, int refine) {
  require(k >= 1 && k <= 4, "polynomial order must be in [1, 4]");
  require(q >= 1.0 && std::isfinite(q), "oracle requires finite q >= 1");
  Grid g = make_grid(f, J, rule, refine);
  std::vector<double> fx(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) fx[i] = f(g.x[i]);

  auto grid_error = [&](const std::vector<double>& a, std::vector<double>& e) {
    Poly p = legendre_to_poly(J, a);
    e.resize(g.x.size());
    double err = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      e[i] = fx[i] - p.eval(g.x[i]);
      err += g.w[i] * std::pow(std::abs(e[i]), q);
    }
    return std::pow(err, 1.0 / q);
  };

  std::vector<double> wt(g.x.size(), 1.0);
  std::vector<double> a0 = wls_fit(g, fx, wt, J, k);  // L2 solution
  std::vector<double> e;
  double best = grid_error(a0, e);
  if (q == 2.0) return {best, true};

  double maxe = 0.0, fscale = 0.0;
  for (double v : e) maxe = std::max(maxe, std::abs(v));
  for (double v : fx) fscale = std::max(fscale, std::abs(v));
  // residuals at rounding level: IRLS weights would span ~30 orders of
  // magnitude and the weighted Gram matrix degenerates, so stop here
  if (maxe <= 1e-13 * std::max(fscale, 1.0)) return {best, true};

  auto run_irls = [&](double delta0, double& out_err) {
    std::vector<double> a = a0;
    std::vector<double> ev = e;
    double delta = delta0;
    double prev = -1.0;
    out_err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
      for (std::size_t i = 0; i < ev.size(); ++i)
        wt[i] = std::pow(ev[i] * ev[i] + delta * delta, 0.5 * q - 1.0);
      a = wls_fit(g, fx, wt, J, k);
      double err = grid_error(a, ev);
      if (!std::isfinite(err)) return false;
      out_err = std::min(out_err, err);
      if (prev >= 0.0 && std::abs(err - prev) <= 1e-12 * std::max(err, 1e-300))
        return true;
      prev = err;
      delta = std::max(0.5 * delta, 1e-14 * maxe);
    }
    return true;
  };

  double irls_err = 0.0;
  bool ok = run_irls(1e-6 * maxe, irls_err);
  if (!ok || irls_err > best * (1.0 + 1e-9)) {
    // restart from the L2 solution with gentler smoothing
    double retry_err = 0.0;
    bool ok2 = run_irls(1e-3 * maxe, retry_err);
    ok = ok || ok2;
    irls_err = std::min(irls_err, retry_err);
  }
  return {std::min(best, irls_err), ok};
}

double modulus(const Func& f, Interval J, int k, double q,
               const QuadratureRule& rule, int h_samples, double step_cap) {
  require(k >= 1, "difference order must be positive");
  require(q >= 1.0, "modulus requires q >= 1");
  require(h_samples >= 16, "modulus needs at least 16 h samples");
  require(J.hi > J.lo, "modulus interval must be nondegenerate");
  require(step_cap > 0.0, "step cap must be positive");

  std::vector<double> binom(k + 1);
  binom[0] = 1.0;
  for (int i = 1; i <= k; ++i)
    binom[i] = binom[i - 1] * static_cast<double>(k - i + 1) / static_cast<double>(i);

  auto base_breaks = breakpoints_of(f);
  const double h_max = std::min(step_cap, J.length() / k);
  // geometric grid spanning three decades below h_max
  const double ratio = std::pow(1e-3, 1.0 / (h_samples - 1));

  double best = 0.0;
  double h = h_max;
  for (int s = 0; s < h_samples; ++s, h *= ratio) {
    Interval X{J.lo, J.hi - k * h};
    if (!(X.hi > X.lo)) continue;
    auto g = [&](double x) {
      double d = 0.0;
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      for (int i = 0; i <= k; ++i) {
        d += sign * binom[i] * f(x + i * h);
        sign = -sign;
      }
      return std::pow(std::abs(d), q);
    };
    std::vector<double> breaks;
    breaks.reserve(base_breaks.size() * (k + 1));
    for (int i = 0; i <= k; ++i)
      for (double b : base_breaks) breaks.push_back(b - i * h);
    std::sort(breaks.begin(), breaks.end());
    double v = rule.integrate_fn(g, X, breaks);
    best = std::max(best, std::pow(std::max(0.0, v), 1.0 / q));
  }
  return best;
}

PiecewisePoly piecewise_projector(const Func& f, const MultilevelPartition& p,
                                  int m, const QuadratureRule& rule) {
  require(m >= 0 && m <= p.max_level(), "level out of range");
  auto knots = p.knots(m);
  std::vector<double> breaks(knots.begin(), knots.end());
  std::vector<std::vector<double>> coef;
  coef.reserve(p.cell_count(m));
  for (int j = 0; j < p.cell_count(m); ++j) {
    Poly pj = l2_projection(f, p.cell(m, j), p.k(), rule);
    coef.push_back(std::move(pj.c));
  }
  return PiecewisePoly(std::move(breaks), std::move(coef));
}

}  // namespace bmospline
