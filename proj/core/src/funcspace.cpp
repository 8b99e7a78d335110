#include "bmospline/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <utility>

#include "bmospline/util.hpp"

namespace bmospline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// pinned Gauss-Legendre tables on [-1, 1]
constexpr double kG2Nodes[] = {-0.57735026918962576451, 0.57735026918962576451};
constexpr double kG2Weights[] = {1.0, 1.0};

constexpr double kG4Nodes[] = {-0.86113631159405257522, -0.33998104358485626480,
                               0.33998104358485626480, 0.86113631159405257522};
constexpr double kG4Weights[] = {0.34785484513745385737, 0.65214515486254614263,
                                 0.65214515486254614263, 0.34785484513745385737};

constexpr double kG8Nodes[] = {
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
    -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
    0.79666647741362673959,  0.96028985649753623168};
constexpr double kG8Weights[] = {
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
    0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

std::span<const double> gauss_nodes_for(int order) {
  switch (order) {
    case 2: return {kG2Nodes, 2};
    case 4: return {kG4Nodes, 4};
    case 8: return {kG8Nodes, 8};
    default: throw std::invalid_argument("quadrature order must be 2, 4, or 8");
  }
}

std::span<const double> gauss_weights_for(int order) {
  switch (order) {
    case 2: return {kG2Weights, 2};
    case 4: return {kG4Weights, 4};
    case 8: return {kG8Weights, 8};
    default: throw std::invalid_argument("quadrature order must be 2, 4, or 8");
  }
}

double gauss_panel(const std::function<double(double)>& g, double a, double b,
                   std::span<const double> nodes, std::span<const double> weights) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s += weights[i] * g(mid + half * nodes[i]);
  return half * s;
}

double integrate_over_edges(const std::function<double(double)>& g,
                            std::span<const double> edges,
                            std::span<const double> nodes,
                            std::span<const double> weights) {
  if (edges.size() < 2) return 0.0;
  std::vector<double> parts;
  parts.reserve(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    parts.push_back(gauss_panel(g, edges[i], edges[i + 1], nodes, weights));
  return pairwise_sum(parts);
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

double Poly::eval_u(double u) const {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
  return v;
}

double Poly::eval(double x) const {
  const double h = 0.5 * J.length();
  return eval_u((x - J.mid()) / h);
}

double Poly::derivative_at(double x, int order) const {
  require(order >= 0, "derivative order must be nonnegative");
  const double h = 0.5 * J.length();
  const double u = (x - J.mid()) / h;
  // Horner on the coefficients c_i * i!/(i-order)!
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(order);) {
    double fac = 1.0;
    for (int m = 0; m < order; ++m) fac *= static_cast<double>(i - m);
    v = v * u + fac * c[i];
  }
  return v / std::pow(h, order);
}

double Poly::integral(Interval seg) const {
  const double h = 0.5 * J.length();
  const double u0 = (seg.lo - J.mid()) / h;
  const double u1 = (seg.hi - J.mid()) / h;
  double s = 0.0;
  double p0 = u0, p1 = u1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s += c[i] * (p1 - p0) / static_cast<double>(i + 1);
    p0 *= u0;
    p1 *= u1;
  }
  return h * s;
}

std::vector<double> Poly::coeffs_on(Interval other) const {
  // same polynomial with u taken relative to `other`:
  // u_old = s + t * u_new
  const double h_old = 0.5 * J.length();
  const double h_new = 0.5 * other.length();
  const double s = (other.mid() - J.mid()) / h_old;
  const double t = h_new / h_old;
  const std::size_t n = c.size();
  std::vector<double> out(n, 0.0);
  // binomial expansion of c_i (s + t u)^i; degrees stay small
  for (std::size_t i = 0; i < n; ++i) {
    double cij = 1.0;  // C(i, j)
    double tpow = 1.0;
    for (std::size_t j = 0; j <= i; ++j) {
      if (j > 0) {
        cij = cij * static_cast<double>(i - j + 1) / static_cast<double>(j);
        tpow *= t;
      }
      double spow = (i == j) ? 1.0 : std::pow(s, static_cast<double>(i - j));
      out[j] += c[i] * cij * spow * tpow;
    }
  }
  return out;
}

PiecewisePoly::PiecewisePoly(std::vector<double> breaks,
                             std::vector<std::vector<double>> coef)
    : breaks_(std::move(breaks)), coef_(std::move(coef)) {
  require(breaks_.size() >= 2, "piecewise polynomial needs at least one piece");
  require(coef_.size() + 1 == breaks_.size(),
          "piece count must match breakpoint count");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    require(breaks_[i] < breaks_[i + 1], "breakpoints must be strictly increasing");
  for (auto& cv : coef_)
    if (cv.empty()) cv.push_back(0.0);
}

PiecewisePoly PiecewisePoly::constant(Interval J, double value) {
  return PiecewisePoly({J.lo, J.hi}, {{value}});
}

PiecewisePoly PiecewisePoly::linear_interpolant(std::span<const double> xs,
                                                std::span<const double> ys) {
  require(xs.size() == ys.size(), "interpolant needs matching x/y counts");
  require(xs.size() >= 2, "interpolant needs at least two points");
  std::vector<double> breaks(xs.begin(), xs.end());
  std::vector<std::vector<double>> coef;
  coef.reserve(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    require(xs[i] < xs[i + 1], "interpolant abscissae must be strictly increasing");
    coef.push_back({0.5 * (ys[i] + ys[i + 1]), 0.5 * (ys[i + 1] - ys[i])});
  }
  return PiecewisePoly(std::move(breaks), std::move(coef));
}

int PiecewisePoly::piece_index(double x) const {
  if (x < breaks_.front() || x > breaks_.back()) return -1;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  int idx = static_cast<int>(it - breaks_.begin()) - 1;
  if (idx >= piece_count()) idx = piece_count() - 1;  // x == right endpoint
  if (idx < 0) idx = 0;
  return idx;
}

double PiecewisePoly::evaluate(double x) const {
  int i = piece_index(x);
  if (i < 0) return 0.0;
  return piece(i).eval(x);
}

double PiecewisePoly::derivative_at(double x, int order) const {
  int i = piece_index(x);
  if (i < 0) return 0.0;
  return piece(i).derivative_at(x, order);
}

Poly PiecewisePoly::piece(int i) const {
  require(i >= 0 && i < piece_count(), "piece index out of range");
  return Poly{{breaks_[i], breaks_[i + 1]}, coef_[i]};
}

int PiecewisePoly::max_degree() const {
  int d = 0;
  for (const auto& cv : coef_) d = std::max(d, static_cast<int>(cv.size()) - 1);
  return d;
}

double PiecewisePoly::integral(Interval seg) const {
  double lo = std::max(seg.lo, breaks_.front());
  double hi = std::min(seg.hi, breaks_.back());
  if (lo >= hi) return 0.0;
  auto first = std::upper_bound(breaks_.begin(), breaks_.end(), lo);
  int i = std::max(0, static_cast<int>(first - breaks_.begin()) - 1);
  std::vector<double> parts;
  for (; i < piece_count() && breaks_[i] < hi; ++i) {
    double a = std::max(lo, breaks_[i]);
    double b = std::min(hi, breaks_[i + 1]);
    if (a < b) parts.push_back(piece(i).integral({a, b}));
  }
  return pairwise_sum(parts);
}

PiecewisePoly PiecewisePoly::scaled(double a) const {
  auto coef = coef_;
  for (auto& cv : coef)
    for (auto& v : cv) v *= a;
  return PiecewisePoly(breaks_, std::move(coef));
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<std::vector<double>> coef;
  coef.reserve(coef_.size());
  for (int i = 0; i < piece_count(); ++i) {
    const auto& cv = coef_[i];
    const double h = 0.5 * (breaks_[i + 1] - breaks_[i]);
    std::vector<double> dv;
    if (cv.size() <= 1) {
      dv.push_back(0.0);
    } else {
      dv.resize(cv.size() - 1);
      for (std::size_t j = 1; j < cv.size(); ++j)
        dv[j - 1] = cv[j] * static_cast<double>(j) / h;
    }
    coef.push_back(std::move(dv));
  }
  return PiecewisePoly(breaks_, std::move(coef));
}

PiecewisePoly PiecewisePoly::combine(const PiecewisePoly& other, double s) const {
  std::vector<double> merged;
  merged.reserve(breaks_.size() + other.breaks_.size());
  std::merge(breaks_.begin(), breaks_.end(), other.breaks_.begin(),
             other.breaks_.end(), std::back_inserter(merged));
  const double scale = std::max(1.0, merged.back() - merged.front());
  merged.erase(std::unique(merged.begin(), merged.end(),
                           [scale](double a, double b) {
                             return std::abs(b - a) <= 1e-15 * scale;
                           }),
               merged.end());
  std::vector<std::vector<double>> coef;
  coef.reserve(merged.size() - 1);
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    Interval cell{merged[i], merged[i + 1]};
    double xm = cell.mid();
    std::vector<double> cv;
    int ia = piece_index(xm);
    if (ia >= 0) cv = piece(ia).coeffs_on(cell);
    int ib = other.piece_index(xm);
    if (ib >= 0) {
      auto cb = other.piece(ib).coeffs_on(cell);
      if (cb.size() > cv.size()) cv.resize(cb.size(), 0.0);
      for (std::size_t j = 0; j < cb.size(); ++j) cv[j] += s * cb[j];
    }
    if (cv.empty()) cv.push_back(0.0);
    coef.push_back(std::move(cv));
  }
  return PiecewisePoly(std::move(merged), std::move(coef));
}

Func Func::from_callable(std::string name, Interval support,
                         std::function<double(double)> f) {
  Func out;
  out.name_ = std::move(name);
  out.support_ = support;
  out.eval_ = std::move(f);
  return out;
}

Func Func::from_pw(std::string name, PiecewisePoly pw, bool inexact_data) {
  Func out;
  out.name_ = std::move(name);
  out.support_ = pw.domain();
  auto shared = std::make_shared<const PiecewisePoly>(std::move(pw));
  out.pw_ = shared;
  out.eval_ = [shared](double x) { return shared->evaluate(x); };
  out.inexact_data_ = inexact_data;
  return out;
}

double Func::operator()(double x) const { return eval_(x); }

Func load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file");
  ++lineno;
  if (trimmed(line) != "x,value")
    throw std::runtime_error(path + ":1: expected header \"x,value\", got \"" +
                             trimmed(line) + "\"");
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trimmed(line);
    if (t.empty()) continue;
    auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected \"x,value\" pair");
    double x, y;
    try {
      x = std::stod(t.substr(0, comma));
      y = std::stod(t.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed number in \"" + t + "\"");
    }
    if (!std::isfinite(x) || !std::isfinite(y))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": non-finite value");
    if (!xs.empty() && x <= xs.back())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": x values must be strictly increasing");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2)
    throw std::runtime_error(path + ": need at least two data rows");
  std::string name = path;
  auto slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  if (name.size() > 4 && name.substr(name.size() - 4) == ".csv")
    name = name.substr(0, name.size() - 4);
  return Func::from_pw(name, PiecewisePoly::linear_interpolant(xs, ys), true);
}

QuadratureRule QuadratureRule::from_knots(std::span<const double> finest_knots,
                                          int order) {
  gauss_nodes_for(order);  // validates order
  require(finest_knots.size() >= 2, "quadrature needs at least one cell");
  QuadratureRule r;
  r.order_ = order;
  r.knots_.assign(finest_knots.begin(), finest_knots.end());
  r.min_cell_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < r.knots_.size(); ++i) {
    require(r.knots_[i] < r.knots_[i + 1], "quadrature knots must increase");
    r.min_cell_ = std::min(r.min_cell_, r.knots_[i + 1] - r.knots_[i]);
  }
  return r;
}

QuadratureRule QuadratureRule::for_partition(const MultilevelPartition& p, int order) {
  return from_knots(p.knots(p.max_level()), order);
}

std::span<const double> QuadratureRule::gauss_nodes() const {
  return gauss_nodes_for(order_);
}

std::span<const double> QuadratureRule::gauss_weights() const {
  return gauss_weights_for(order_);
}

std::vector<double> QuadratureRule::panel_edges(Interval J,
                                                std::span<const double> extra) const {
  const double scale = std::max(1.0, knots_.back() - knots_.front());
  std::vector<double> edges;
  edges.push_back(J.lo);
  auto lo_it = std::upper_bound(knots_.begin(), knots_.end(), J.lo);
  auto hi_it = std::lower_bound(knots_.begin(), knots_.end(), J.hi);
  edges.insert(edges.end(), lo_it, hi_it);
  for (double b : extra)
    if (b > J.lo && b < J.hi) edges.push_back(b);
  edges.push_back(J.hi);
  std::sort(edges.begin(), edges.end());
  std::vector<double> out;
  out.reserve(edges.size());
  out.push_back(edges.front());
  for (double e : edges)
    if (e - out.back() > 1e-15 * scale) out.push_back(e);
  if (out.size() < 2) out.push_back(J.hi);
  return out;
}

double QuadratureRule::integrate(const Func& f, Interval J) const {
  if (!(J.hi > J.lo)) return 0.0;
  const double tol = 1e-9 * std::max(1.0, knots_.back() - knots_.front());
  require(J.lo >= knots_.front() - tol && J.hi <= knots_.back() + tol,
          "integration interval extends past the quadrature hull");
  Interval Jc{std::max(J.lo, knots_.front()), std::min(J.hi, knots_.back())};
  if (!(Jc.hi > Jc.lo)) return 0.0;
  std::vector<double> extra;
  if (const PiecewisePoly* pw = f.exact()) {
    auto bp = pw->breakpoints();
    extra.assign(bp.begin(), bp.end());
  }
  auto edges = panel_edges(Jc, extra);
  auto g = [&f](double x) { return f(x); };
  return integrate_over_edges(g, edges, gauss_nodes(), gauss_weights());
}

double QuadratureRule::integrate_fn(const std::function<double(double)>& g,
                                    Interval J,
                                    std::span<const double> interior_breaks) const {
  if (!(J.hi > J.lo)) return 0.0;
  const double hull_lo = knots_.front();
  const double hull_hi = knots_.back();
  std::vector<double> parts;
  auto nodes = gauss_nodes();
  auto weights = gauss_weights();

  auto uniform_part = [&](double a, double b) {
    if (!(b > a)) return;
    int n = std::max(1, static_cast<int>(std::ceil((b - a) / min_cell_)));
    std::vector<double> edges(n + 1);
    for (int i = 0; i <= n; ++i)
      edges[i] = a + (b - a) * (static_cast<double>(i) / n);
    parts.push_back(integrate_over_edges(g, edges, nodes, weights));
  };

  uniform_part(J.lo, std::min(J.hi, hull_lo));
  double mid_lo = std::max(J.lo, hull_lo);
  double mid_hi = std::min(J.hi, hull_hi);
  if (mid_hi > mid_lo) {
    auto edges = panel_edges({mid_lo, mid_hi}, interior_breaks);
    parts.push_back(integrate_over_edges(g, edges, nodes, weights));
  }
  uniform_part(std::max(J.lo, hull_hi), J.hi);
  return pairwise_sum(parts);
}

double QuadratureRule::integrate_capped(const std::function<double(double)>& g,
                                        Interval J, int panels) const {
  if (!(J.hi > J.lo)) return 0.0;
  int n = std::max(1, panels);
  std::vector<double> edges(n + 1);
  for (int i = 0; i <= n; ++i)
    edges[i] = J.lo + (J.hi - J.lo) * (static_cast<double>(i) / n);
  return integrate_over_edges(g, edges, gauss_nodes(), gauss_weights());
}

double integrate(const Func& f, Interval J, const QuadratureRule& rule) {
  return rule.integrate(f, J);
}

double lq_norm(const Func& f, Interval J, double q, const QuadratureRule& rule) {
  require(q >= 1.0, "lq_norm requires q >= 1");
  std::vector<double> extra;
  if (const PiecewisePoly* pw = f.exact()) {
    auto bp = pw->breakpoints();
    extra.assign(bp.begin(), bp.end());
  }
  auto g = [&](double x) { return std::pow(std::abs(f(x)), q); };
  double v = rule.integrate_fn(g, J, extra);
  return std::pow(std::max(0.0, v), 1.0 / q);
}

double average(const Func& f, Interval J, const QuadratureRule& rule) {
  require(J.hi > J.lo, "average needs a nondegenerate interval");
  return rule.integrate(f, J) / J.length();
}

}  // namespace bmospline
