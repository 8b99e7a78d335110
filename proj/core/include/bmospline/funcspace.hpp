#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bmospline/interval.hpp"
#include "bmospline/partition.hpp"

namespace bmospline {

// Polynomial on an interval, coefficients in the scaled local variable
// u = (x - mid)/halfwidth, so u runs over [-1, 1].
struct Poly {
  Interval J;
  std::vector<double> c;

  double eval_u(double u) const;
  double eval(double x) const;
  double derivative_at(double x, int order) const;
  double integral(Interval seg) const;  // exact antiderivative evaluation
  int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }

  // coefficients of the same polynomial re-centered on another interval
  std::vector<double> coeffs_on(Interval other) const;
};

// Piecewise polynomial with right-continuous pieces tiling [breaks.front(),
// breaks.back()]; identically zero outside.  Closed under addition,
// subtraction, scaling and differentiation; integration is exact.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coef);

  static PiecewisePoly constant(Interval J, double value);
  static PiecewisePoly linear_interpolant(std::span<const double> xs,
                                          std::span<const double> ys);

  double evaluate(double x) const;
  double derivative_at(double x, int order) const;

  int piece_count() const { return static_cast<int>(coef_.size()); }
  int piece_index(double x) const;  // -1 outside the domain
  Poly piece(int i) const;
  std::span<const double> breakpoints() const { return breaks_; }
  Interval domain() const { return {breaks_.front(), breaks_.back()}; }
  int max_degree() const;

  double integral(Interval seg) const;

  PiecewisePoly scaled(double a) const;
  PiecewisePoly derivative() const;

  // this + s * other over the merged breakpoint set (zero-extension outside
  // either domain)
  PiecewisePoly combine(const PiecewisePoly& other, double s) const;

 private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coef_;  // per piece, u-monomials
};

// Evaluable function with optional exact piecewise-polynomial form.  The
// inexact_data flag marks functions reconstructed from samples; their exact()
// form is the interpolant, not ground truth.
class Func {
 public:
  static Func from_callable(std::string name, Interval support,
                            std::function<double(double)> f);
  static Func from_pw(std::string name, PiecewisePoly pw, bool inexact_data = false);

  double operator()(double x) const;
  const std::string& name() const { return name_; }
  Interval support() const { return support_; }
  const PiecewisePoly* exact() const { return pw_ ? pw_.get() : nullptr; }
  bool inexact_data() const { return inexact_data_; }

 private:
  std::string name_;
  Interval support_{0.0, 1.0};
  std::function<double(double)> eval_;
  std::shared_ptr<const PiecewisePoly> pw_;
  bool inexact_data_ = false;
};

// Reads a two-column CSV with header "x,value" (strictly increasing x) and
// wraps the linear interpolant; flagged inexact.  Errors cite line numbers.
Func load_csv(const std::string& path);

// Composite Gauss-Legendre rule over the finest-level cells of a partition.
// Fixed order per panel (default 4: exact through degree 7); intervals that
// do not align with the panel grid are handled by sub-splitting edge cells,
// and functions carrying an exact piecewise form are additionally split at
// their breakpoints, which keeps all piecewise-polynomial integrals exact.
class QuadratureRule {
 public:
  static QuadratureRule from_knots(std::span<const double> finest_knots, int order = 4);
  static QuadratureRule for_partition(const MultilevelPartition& p, int order = 4);

  int order() const { return order_; }
  std::span<const double> finest_knots() const { return knots_; }
  Interval hull() const { return {knots_.front(), knots_.back()}; }
  double min_cell_length() const { return min_cell_; }

  std::span<const double> gauss_nodes() const;    // on [-1, 1]
  std::span<const double> gauss_weights() const;  // sum to 2

  double integrate(const Func& f, Interval J) const;

  // integral of g over J, panels split at the finest knots and the supplied
  // interior breakpoints; J may extend past the hull (uniform panels there)
  double integrate_fn(const std::function<double(double)>& g, Interval J,
                      std::span<const double> interior_breaks) const;

  // capped uniform panels, for estimator integrands with unknown kinks
  double integrate_capped(const std::function<double(double)>& g, Interval J,
                          int panels) const;

  // panel edges used for J (finest knots plus extra interior breakpoints)
  std::vector<double> panel_edges(Interval J, std::span<const double> extra) const;

 private:
  int order_ = 4;
  double min_cell_ = 0.0;
  std::vector<double> knots_;
};

double integrate(const Func& f, Interval J, const QuadratureRule& rule);
// L^q norm over J; requires q >= 1
double lq_norm(const Func& f, Interval J, double q, const QuadratureRule& rule);
double average(const Func& f, Interval J, const QuadratureRule& rule);

}  // namespace bmospline
