#pragma once

#include <span>
#include <vector>

#include "bmospline/funcspace.hpp"
#include "bmospline/interval.hpp"
#include "bmospline/partition.hpp"

namespace bmospline {

// index of the central cell (within [j, j+k-1]) of the support of spline j
int central_cell(int j, int k);

// Dual functional for one B-spline: a(S) = sum_nu w[nu] S^(nu)(xi), exact on
// splines of the level's space.  xi is the midpoint of the central cell.
struct DualFunctional {
  double xi = 0.0;
  std::vector<double> w;
};

DualFunctional dual_functional(const MultilevelPartition& p, int m, int j);

double apply_dual(const DualFunctional& d, const Poly& S);
double apply_dual(const DualFunctional& d, const PiecewisePoly& S);

// coefficient functional of spline (m, j) applied to a piecewise polynomial
// that is a single polynomial on the central cell
double deboor_fix(const MultilevelPartition& p, int m, int j,
                  const PiecewisePoly& S);

// normalized B-spline N_{m,j} of order r (default: the partition's k) on the
// level-m knots; partition of unity holds where every overlapping spline is
// present
double bspline_eval(const MultilevelPartition& p, int m, int j, double x);
double bspline_eval_order(const MultilevelPartition& p, int m, int j, int r,
                          double x);
// derivative via the knot-difference recursion
double bspline_derivative(const MultilevelPartition& p, int m, int j, double x,
                          int order);

// exact u-monomial coefficients of N_{m,j} restricted to cell i of level m
std::vector<double> bspline_cell_coeffs(const MultilevelPartition& p, int m,
                                        int j, int i);

// spline with the given coefficients as an exact piecewise polynomial
PiecewisePoly spline_to_pw(const MultilevelPartition& p, int m,
                           std::span<const double> coeffs);

// quasi-interpolant coefficients: dual functionals applied to a piecewise
// polynomial (typically the per-cell projection of f at level m)
std::vector<double> quasi_interp_coeffs(const PiecewisePoly& g,
                                        const MultilevelPartition& p, int m);
// convenience: project f per cell at level m, then take coefficients
std::vector<double> quasi_interp(const Func& f, const MultilevelPartition& p,
                                 int m, const QuadratureRule& rule);

// coefficients of the same spline one level finer (knot insertion, exact up
// to rounding); from_level must be below the finest level
std::vector<double> refine_coeffs(const MultilevelPartition& p, int from_level,
                                  std::span<const double> coeffs);

enum class DecomposeRoute { knot_insertion, dual_functional };

// Multiscale decomposition: levels[0] holds the coarse quasi-interpolant
// coefficients, levels[m] the detail coefficients of T_m f - T_{m-1} f in the
// level-m spline space.  q is recorded for provenance; the coefficients do
// not depend on it because the local projector is the L2 one at every q.
struct SplineDecomposition {
  const MultilevelPartition* partition = nullptr;
  int k = 0;
  double q = 2.0;
  std::vector<std::vector<double>> levels;

  int max_level() const { return static_cast<int>(levels.size()) - 1; }
  double coeff(SupportIndex s) const { return levels[s.level][s.j]; }
  std::size_t total_coeffs() const;
  std::vector<SupportIndex> indices() const;  // level-major enumeration
};

SplineDecomposition decompose(const Func& f, const MultilevelPartition& p,
                              const QuadratureRule& rule,
                              DecomposeRoute route = DecomposeRoute::knot_insertion,
                              double q = 2.0);

// sum of all levels, telescoped to the finest level
PiecewisePoly reconstruct(const SplineDecomposition& dec);
// sum of only the selected terms (indices into dec.levels)
PiecewisePoly reconstruct_terms(const SplineDecomposition& dec,
                                std::span<const SupportIndex> terms);

// spline built from a sparse multi-level coefficient set, telescoped to a
// single piecewise polynomial
PiecewisePoly synth_spline(const MultilevelPartition& p,
                           std::span<const SupportIndex> indices,
                           std::span<const double> coeffs);

struct BasisCheck {
  double pou_residual = 0.0;     // max |sum_j N_j(x) - 1| over covered interior
  double min_central_peak = 0.0; // min over j of max N_j on its central cell
};

BasisCheck basis_sanity_check(const MultilevelPartition& p, int m,
                              int samples_per_cell = 8);

// Norm equivalence for one level: compares the cellwise spline norm
// (sum_I ||S||_{L^p(I)}^tau)^{1/tau} against the coefficient side
// (sum_Q ||b_Q phi_Q||_p^tau)^{1/tau}; tau = infinity takes maxima instead.
struct StableBasisReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs, 0 when degenerate
  bool degenerate = false;
};

StableBasisReport stable_basis_check(const MultilevelPartition& p, int m,
                                     std::span<const double> coeffs,
                                     double pnorm, double tau,
                                     const QuadratureRule& rule);

}  // namespace bmospline
