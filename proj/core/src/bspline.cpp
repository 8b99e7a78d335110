#include "bmospline/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bmospline/localpoly.hpp"

namespace bmospline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// multiply a u-monomial polynomial by (a0 + a1 u)
std::vector<double> mul_linear(const std::vector<double>& c, double a0, double a1) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] += a0 * c[i];
    out[i + 1] += a1 * c[i];
  }
  return out;
}

}  // namespace

int central_cell(int j, int k) {
  return j + (k % 2 == 0 ? k / 2 : (k - 1) / 2);
}

DualFunctional dual_functional(const MultilevelPartition& p, int m, int j) {
  const int k = p.k();
  require(m >= 0 && m <= p.max_level(), "level out of range");
  require(j >= 0 && j < p.support_count(m), "support index out of range");
  auto knots = p.knots(m);
  const int cc = central_cell(j, k);
  const double xi = 0.5 * (knots[cc] + knots[cc + 1]);

  // product over the support's interior knots, in powers of (x - xi)
  std::vector<double> c{1.0};
  for (int nu = 1; nu <= k - 1; ++nu) c = mul_linear(c, xi - knots[j + nu], 1.0);
  double fact = 1.0;
  for (int i = 2; i <= k - 1; ++i) fact *= static_cast<double>(i);

  static const double rfact[4] = {1.0, 1.0, 2.0, 6.0};
  DualFunctional d;
  d.xi = xi;
  d.w.resize(k);
  for (int nu = 0; nu < k; ++nu) {
    int r = k - nu - 1;
    double varpi_r = rfact[r] * c[r] / fact;
    d.w[nu] = ((nu % 2 == 0) ? 1.0 : -1.0) * varpi_r;
  }
  return d;
}

double apply_dual(const DualFunctional& d, const Poly& S) {
  double a = 0.0;
  for (std::size_t nu = 0; nu < d.w.size(); ++nu)
    a += d.w[nu] * S.derivative_at(d.xi, static_cast<int>(nu));
  return a;
}

double apply_dual(const DualFunctional& d, const PiecewisePoly& S) {
  int i = S.piece_index(d.xi);
  require(i >= 0, "dual functional point lies outside the function's domain");
  return apply_dual(d, S.piece(i));
}

double deboor_fix(const MultilevelPartition& p, int m, int j,
                  const PiecewisePoly& S) {
  return apply_dual(dual_functional(p, m, j), S);
}

double bspline_eval_order(const MultilevelPartition& p, int m, int j, int r,
                          double x) {
  require(r >= 1, "spline order must be positive");
  const int cells = p.cell_count(m);
  require(j >= 0 && j + r <= cells, "spline index out of range");
  const int ic = p.find_cell(m, x);
  if (ic < j || ic > j + r - 1) return 0.0;
  auto X = p.knots(m);
  std::vector<double> N(r, 0.0);
  for (int t = 0; t < r; ++t) N[t] = (ic == j + t) ? 1.0 : 0.0;
  for (int ord = 2; ord <= r; ++ord) {
    for (int t = 0; t + ord <= r; ++t) {
      double left = (x - X[j + t]) / (X[j + t + ord - 1] - X[j + t]);
      double right = (X[j + t + ord] - x) / (X[j + t + ord] - X[j + t + 1]);
      N[t] = left * N[t] + right * N[t + 1];
    }
    // the entry with t + ord == r + 1 keeps its lower-order value; unused
  }
  return N[0];
}

double bspline_eval(const MultilevelPartition& p, int m, int j, double x) {
  return bspline_eval_order(p, m, j, p.k(), x);
}

double bspline_derivative(const MultilevelPartition& p, int m, int j, double x,
                          int order) {
  require(order >= 0, "derivative order must be nonnegative");
  if (order == 0) return bspline_eval(p, m, j, x);
  auto X = p.knots(m);
  // knot-difference recursion, applied `order` times
  struct Rec {
    const MultilevelPartition& p;
    std::span<const double> X;
    int m;
    double x;
    double run(int j, int r, int d) {
      if (d == 0) return bspline_eval_order(p, m, j, r, x);
      if (r == 1) return 0.0;
      double left = run(j, r - 1, d - 1) / (X[j + r - 1] - X[j]);
      double right = run(j + 1, r - 1, d - 1) / (X[j + r] - X[j + 1]);
      return static_cast<double>(r - 1) * (left - right);
    }
  } rec{p, X, m, x};
  return rec.run(j, p.k(), order);
}

std::vector<double> bspline_cell_coeffs(const MultilevelPartition& p, int m,
                                        int j, int i) {
  const int k = p.k();
  require(j >= 0 && j < p.support_count(m), "support index out of range");
  require(i >= 0 && i < p.cell_count(m), "cell index out of range");
  if (i < j || i > j + k - 1) return {0.0};
  auto X = p.knots(m);
  Interval cell = p.cell(m, i);
  const double mid = cell.mid(), h = 0.5 * cell.length();
  std::vector<std::vector<double>> polys(k);
  for (int t = 0; t < k; ++t) polys[t] = {(j + t == i) ? 1.0 : 0.0};
  for (int ord = 2; ord <= k; ++ord) {
    for (int t = 0; t + ord <= k; ++t) {
      double den1 = X[j + t + ord - 1] - X[j + t];
      double den2 = X[j + t + ord] - X[j + t + 1];
      auto a = mul_linear(polys[t], (mid - X[j + t]) / den1, h / den1);
      auto b = mul_linear(polys[t + 1], (X[j + t + ord] - mid) / den2, -h / den2);
      for (std::size_t s = 0; s < a.size(); ++s) a[s] += b[s];
      polys[t] = std::move(a);
    }
  }
  return polys[0];
}

PiecewisePoly spline_to_pw(const MultilevelPartition& p, int m,
                           std::span<const double> coeffs) {
  const int k = p.k();
  const int sc = p.support_count(m);
  require(static_cast<int>(coeffs.size()) == sc,
          "coefficient count must match the level's spline count");
  auto knots = p.knots(m);
  std::vector<double> breaks(knots.begin(), knots.end());
  std::vector<std::vector<double>> coef;
  coef.reserve(p.cell_count(m));
  for (int i = 0; i < p.cell_count(m); ++i) {
    std::vector<double> cv(k, 0.0);
    int jlo = std::max(0, i - k + 1);
    int jhi = std::min(i, sc - 1);
    for (int j = jlo; j <= jhi; ++j) {
      if (coeffs[j] == 0.0) continue;
      auto bc = bspline_cell_coeffs(p, m, j, i);
      for (std::size_t s = 0; s < bc.size(); ++s) cv[s] += coeffs[j] * bc[s];
    }
    coef.push_back(std::move(cv));
  }
  return PiecewisePoly(std::move(breaks), std::move(coef));
}

std::vector<double> quasi_interp_coeffs(const PiecewisePoly& g,
                                        const MultilevelPartition& p, int m) {
  const int sc = p.support_count(m);
  std::vector<double> out(sc);
  for (int j = 0; j < sc; ++j) out[j] = deboor_fix(p, m, j, g);
  return out;
}

std::vector<double> quasi_interp(const Func& f, const MultilevelPartition& p,
                                 int m, const QuadratureRule& rule) {
  PiecewisePoly g = piecewise_projector(f, p, m, rule);
  return quasi_interp_coeffs(g, p, m);
}

std::vector<double> refine_coeffs(const MultilevelPartition& p, int from_level,
                                  std::span<const double> coeffs) {
  const int k = p.k();
  const int m = from_level;
  require(m >= 0 && m < p.max_level(), "refinement needs a finer level");
  require(static_cast<int>(coeffs.size()) == p.support_count(m),
          "coefficient count must match the level's spline count");
  auto cm = p.knots(m);
  auto cf = p.knots(m + 1);
  const double W = p.window().length();

  // pad with k-1 phantom knots per side; phantom coefficients are zero, so
  // the padded curve matches the window spline inside the window and the
  // phantom spacing never matters
  std::vector<double> E;
  E.reserve(cm.size() + 2 * (k - 1));
  for (int i = k - 1; i >= 1; --i) E.push_back(cm.front() - W * i);
  E.insert(E.end(), cm.begin(), cm.end());
  for (int i = 1; i <= k - 1; ++i) E.push_back(cm.back() + W * i);
  std::vector<double> c(E.size() - k, 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) c[k - 1 + j] = coeffs[j];

  // knots present at the finer level only (nesting is exact)
  std::vector<double> newk;
  newk.reserve(cf.size() - cm.size());
  std::size_t a = 0;
  for (double u : cf) {
    if (a < cm.size() && cm[a] == u) {
      ++a;
    } else {
      newk.push_back(u);
    }
  }
  require(a == cm.size(), "coarse knots not contained in fine knots");

  for (double u : newk) {
    auto it = std::upper_bound(E.begin(), E.end(), u);
    int ell = static_cast<int>(it - E.begin()) - 1;
    std::vector<double> d(c.size() + 1);
    for (int jj = 0; jj < static_cast<int>(d.size()); ++jj) {
      if (jj <= ell - k + 1) {
        d[jj] = c[jj];
      } else if (jj >= ell + 1) {
        d[jj] = c[jj - 1];
      } else {
        double alpha = (u - E[jj]) / (E[jj + k - 1] - E[jj]);
        d[jj] = (1.0 - alpha) * c[jj - 1] + alpha * c[jj];
      }
    }
    c = std::move(d);
    E.insert(E.begin() + ell + 1, u);
  }

  double scale = 1.0;
  for (double v : coeffs) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < k - 1; ++i) {
    require(std::abs(c[i]) <= 1e-9 * scale &&
                std::abs(c[c.size() - 1 - i]) <= 1e-9 * scale,
            "refinement leaked outside the window");
  }
  std::vector<double> out(c.begin() + (k - 1), c.end() - (k - 1));
  require(static_cast<int>(out.size()) == p.support_count(m + 1),
          "refined coefficient count mismatch");
  return out;
}

std::size_t SplineDecomposition::total_coeffs() const {
  std::size_t n = 0;
  for (const auto& lv : levels) n += lv.size();
  return n;
}

std::vector<SupportIndex> SplineDecomposition::indices() const {
  std::vector<SupportIndex> out;
  out.reserve(total_coeffs());
  for (int m = 0; m < static_cast<int>(levels.size()); ++m)
    for (int j = 0; j < static_cast<int>(levels[m].size()); ++j)
      out.push_back({m, j});
  return out;
}

SplineDecomposition decompose(const Func& f, const MultilevelPartition& p,
                              const QuadratureRule& rule, DecomposeRoute route,
                              double q) {
  const int L = p.max_level();
  SplineDecomposition dec;
  dec.partition = &p;
  dec.k = p.k();
  dec.q = q;
  dec.levels.resize(L + 1);
  std::vector<double> prev = quasi_interp(f, p, 0, rule);
  dec.levels[0] = prev;
  for (int m = 1; m <= L; ++m) {
    std::vector<double> cur = quasi_interp(f, p, m, rule);
    std::vector<double> rep;
    if (route == DecomposeRoute::knot_insertion) {
      rep = refine_coeffs(p, m - 1, prev);
    } else {
      PiecewisePoly prev_pw = spline_to_pw(p, m - 1, prev);
      rep.resize(cur.size());
      for (int j = 0; j < static_cast<int>(rep.size()); ++j)
        rep[j] = deboor_fix(p, m, j, prev_pw);
    }
    std::vector<double> det(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) det[i] = cur[i] - rep[i];
    dec.levels[m] = std::move(det);
    prev = std::move(cur);
  }
  return dec;
}

PiecewisePoly reconstruct(const SplineDecomposition& dec) {
  const auto& p = *dec.partition;
  std::vector<double> acc = dec.levels[0];
  for (int m = 1; m <= dec.max_level(); ++m) {
    acc = refine_coeffs(p, m - 1, acc);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += dec.levels[m][i];
  }
  return spline_to_pw(p, dec.max_level(), acc);
}

PiecewisePoly reconstruct_terms(const SplineDecomposition& dec,
                                std::span<const SupportIndex> terms) {
  const auto& p = *dec.partition;
  const int L = dec.max_level();
  std::vector<std::vector<double>> lv(L + 1);
  for (int m = 0; m <= L; ++m) lv[m].assign(dec.levels[m].size(), 0.0);
  for (auto s : terms) {
    require(s.level >= 0 && s.level <= L && s.j >= 0 &&
                s.j < static_cast<int>(lv[s.level].size()),
            "term index out of range");
    lv[s.level][s.j] = dec.levels[s.level][s.j];
  }
  std::vector<double> acc = std::move(lv[0]);
  for (int m = 1; m <= L; ++m) {
    acc = refine_coeffs(p, m - 1, acc);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += lv[m][i];
  }
  return spline_to_pw(p, L, acc);
}

PiecewisePoly synth_spline(const MultilevelPartition& p,
                           std::span<const SupportIndex> indices,
                           std::span<const double> coeffs) {
  require(indices.size() == coeffs.size(), "index/coefficient size mismatch");
  const int L = p.max_level();
  std::vector<std::vector<double>> lv(L + 1);
  for (int m = 0; m <= L; ++m) lv[m].assign(p.support_count(m), 0.0);
  int top = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    SupportIndex s = indices[i];
    require(s.level >= 0 && s.level <= L && s.j >= 0 &&
                s.j < p.support_count(s.level),
            "spline index out of range");
    lv[s.level][s.j] += coeffs[i];
    top = std::max(top, s.level);
  }
  std::vector<double> acc = std::move(lv[0]);
  for (int m = 1; m <= top; ++m) {
    acc = refine_coeffs(p, m - 1, acc);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += lv[m][i];
  }
  return spline_to_pw(p, top, acc);
}

BasisCheck basis_sanity_check(const MultilevelPartition& p, int m,
                              int samples_per_cell) {
  const int k = p.k();
  const int cells = p.cell_count(m);
  const int sc = p.support_count(m);
  require(samples_per_cell >= 1, "need at least one sample per cell");
  BasisCheck out;
  // cells overlapped by a full set of k splines
  for (int i = k - 1; i <= cells - k; ++i) {
    Interval cell = p.cell(m, i);
    for (int s = 0; s < samples_per_cell; ++s) {
      double x = cell.lo + cell.length() * ((s + 0.5) / samples_per_cell);
      double sum = 0.0;
      for (int j = std::max(0, i - k + 1); j <= std::min(i, sc - 1); ++j)
        sum += bspline_eval(p, m, j, x);
      out.pou_residual = std::max(out.pou_residual, std::abs(sum - 1.0));
    }
  }
  out.min_central_peak = sc > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  for (int j = 0; j < sc; ++j) {
    Interval cell = p.cell(m, central_cell(j, k));
    double peak = 0.0;
    for (int s = 0; s < samples_per_cell; ++s) {
      double x = cell.lo + cell.length() * ((s + 0.5) / samples_per_cell);
      peak = std::max(peak, bspline_eval(p, m, j, x));
    }
    out.min_central_peak = std::min(out.min_central_peak, peak);
  }
  return out;
}

namespace {

// max |poly| over I; exact for degree <= 3 (critical points of the
// derivative), sampled fallback above that
double poly_abs_max(const Poly& q, Interval I) {
  double best = std::max(std::abs(q.eval(I.lo)), std::abs(q.eval(I.hi)));
  const auto& c = q.c;
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i)
    d.push_back(static_cast<double>(i) * c[i]);
  while (!d.empty() && d.back() == 0.0) d.pop_back();
  const double half = 0.5 * q.J.length(), mid = q.J.mid();
  auto consider_u = [&](double u) {
    double x = mid + half * u;
    if (x > I.lo && x < I.hi) best = std::max(best, std::abs(q.eval(x)));
  };
  if (d.size() <= 1) {
    // constant or empty derivative: endpoints suffice
  } else if (d.size() == 2) {
    consider_u(-d[0] / d[1]);
  } else if (d.size() == 3) {
    double disc = d[1] * d[1] - 4.0 * d[2] * d[0];
    if (disc >= 0.0) {
      double r = std::sqrt(disc);
      consider_u((-d[1] + r) / (2.0 * d[2]));
      consider_u((-d[1] - r) / (2.0 * d[2]));
    }
  } else {
    for (int s = 1; s < 128; ++s) {
      double x = I.lo + (I.hi - I.lo) * (static_cast<double>(s) / 128.0);
      best = std::max(best, std::abs(q.eval(x)));
    }
  }
  return best;
}

// L^p norm of a single polynomial over I (finite p via quadrature panels)
double poly_lp(const Poly& q, Interval I, double pnorm,
               const QuadratureRule& rule) {
  if (std::isinf(pnorm)) return poly_abs_max(q, I);
  auto g = [&](double x) { return std::pow(std::abs(q.eval(x)), pnorm); };
  double v = rule.integrate_fn(g, I, {});
  return std::pow(std::max(0.0, v), 1.0 / pnorm);
}

}  // namespace

StableBasisReport stable_basis_check(const MultilevelPartition& p, int m,
                                     std::span<const double> coeffs,
                                     double pnorm, double tau,
                                     const QuadratureRule& rule) {
  require(m >= 0 && m <= p.max_level(), "level out of range");
  require(static_cast<int>(coeffs.size()) == p.support_count(m),
          "coefficient count must match the level's spline count");
  require(pnorm >= 1.0, "p must be at least 1");
  require(tau > 0.0, "tau must be positive");
  const bool tmax = std::isinf(tau);

  PiecewisePoly S = spline_to_pw(p, m, coeffs);
  double lhs_acc = 0.0;
  for (int i = 0; i < p.cell_count(m); ++i) {
    double v = poly_lp(S.piece(i), p.cell(m, i), pnorm, rule);
    lhs_acc = tmax ? std::max(lhs_acc, v) : lhs_acc + std::pow(v, tau);
  }
  double rhs_acc = 0.0;
  for (int j = 0; j < p.support_count(m); ++j) {
    if (coeffs[j] == 0.0) continue;
    double phi = 0.0;  // ||phi_j||_p over its k support cells
    for (int i = j; i < j + p.k(); ++i) {
      Poly piece{p.cell(m, i), bspline_cell_coeffs(p, m, j, i)};
      double v = poly_lp(piece, piece.J, pnorm, rule);
      phi = std::isinf(pnorm) ? std::max(phi, v)
                              : phi + std::pow(v, pnorm);
    }
    if (!std::isinf(pnorm)) phi = std::pow(phi, 1.0 / pnorm);
    double w = std::abs(coeffs[j]) * phi;
    rhs_acc = tmax ? std::max(rhs_acc, w) : rhs_acc + std::pow(w, tau);
  }
  StableBasisReport out;
  out.lhs = tmax ? lhs_acc : std::pow(lhs_acc, 1.0 / tau);
  out.rhs = tmax ? rhs_acc : std::pow(rhs_acc, 1.0 / tau);
  if (out.rhs == 0.0) {
    out.degenerate = true;
    out.ratio = 0.0;
  } else {
    out.ratio = out.lhs / out.rhs;
  }
  return out;
}

}  // namespace bmospline
