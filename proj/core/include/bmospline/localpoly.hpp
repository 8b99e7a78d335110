#pragma once

#include <limits>

#include "bmospline/funcspace.hpp"
#include "bmospline/interval.hpp"
#include "bmospline/partition.hpp"

namespace bmospline {

// Local polynomial approximation of f on J by degree < k.  The polynomial is
// always the L2(J)-orthogonal projection, which is near-best in every L^q up
// to a fixed constant, so one linear projector serves all exponents.
struct PolyApprox {
  Interval J{0.0, 1.0};
  int k = 1;
  double q = 2.0;
  Poly poly;
  double err = 0.0;                 // ||f - poly||_{L^q(J)}
  double near_best_constant = 0.0;  // declared corpus bound on err / E_k(f,J)_q
};

PolyApprox near_best_poly(const Func& f, Interval J, int k, double q,
                          const QuadratureRule& rule);

// projection only, without the error integral
Poly l2_projection(const Func& f, Interval J, int k, const QuadratureRule& rule);

// Numerical minimization of ||f - P||_{L^q(J)} over P of degree < k: direct
// projection at q = 2, otherwise smoothed iteratively reweighted least squares
// (50 iterations, restart from the L2 solution on stagnation).  The result is
// an upper bound for the true best error within solver tolerance.
struct OracleError {
  double value = 0.0;
  bool converged = true;
};

OracleError best_poly_error_oracle(const Func& f, Interval J, int k, double q,
                                   const QuadratureRule& rule, int refine = 8);

// k-th modulus of smoothness on J: sup over a geometric h-grid in
// (0, min(step_cap, |J|/k)] of ||diff_h^k f||_{L^q} with x restricted to
// [J.lo, J.hi - k h].  A sampled sup, hence a lower bound of the true value.
double modulus(const Func& f, Interval J, int k, double q,
               const QuadratureRule& rule, int h_samples = 64,
               double step_cap = std::numeric_limits<double>::infinity());

// per-cell projection onto degree < p.k() over level m of the partition
PiecewisePoly piecewise_projector(const Func& f, const MultilevelPartition& p,
                                  int m, const QuadratureRule& rule);

}  // namespace bmospline
