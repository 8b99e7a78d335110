#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bmospline/bspline.hpp"
#include "bmospline/funcspace.hpp"
#include "bmospline/partition.hpp"

namespace bmospline {

struct NTermApproximant {
  std::vector<SupportIndex> selected;  // at most n terms, base and details pooled
  std::vector<double> coeffs;          // aligned with selected
  PiecewisePoly spline;                // sum of the selected terms
  double residual_norm = 0.0;
  bool exhausted = false;  // n exceeded the total coefficient count
};

// the first n indices in the fixed total order |b| desc, level asc, j asc;
// prefixes of one ordering, so selections are nested in n
std::vector<SupportIndex> greedy_select(const SplineDecomposition& dec, int n);

// greedy n-term approximant with the residual measured as the mean-oscillation
// estimate of f - g over the partition's interval family
NTermApproximant greedy_nterm(const SplineDecomposition& dec, int n,
                              const Func& f, double q,
                              const QuadratureRule& rule);

// same selection, residual measured as a grid sup norm instead
NTermApproximant linf_nterm(const SplineDecomposition& dec, int n, const Func& f,
                            const QuadratureRule& rule);

// residual helpers shared by the experiments
double sup_residual(const Func& f, const PiecewisePoly& g,
                    const QuadratureRule& rule);
double bmo_residual(const Func& f, const PiecewisePoly& g,
                    const MultilevelPartition& p, double q,
                    const QuadratureRule& rule);

// sequence-space n-term thresholding
struct GqSigma {
  std::vector<int> selected;  // flat node indices, largest |h| first
  double residual = 0.0;      // g^q norm of h with the selected entries zeroed
};

GqSigma sigma_n_gq_greedy(const CoeffSequence& h, int n, double q);

// exact minimum residual over all keep-sets of size <= n; exhaustive, so the
// structure must have at most 20 nodes
double sigma_n_gq_oracle(const CoeffSequence& h, int n, double q);

struct RateRow {
  int n = 0;
  double error = 0.0;
  double normalized = 0.0;  // error * n^alpha / besov_value
};

struct RateReport {
  std::string fn_id;
  double alpha = 0.0;
  std::vector<RateRow> rows;
  double slope = 0.0;  // log error vs log n, first row discarded as pre-asymptotic
  double intercept = 0.0;
  double r2 = 0.0;
  bool slope_defined = false;  // false when fitted errors vanish
  double besov_value = 0.0;
  std::string config_hash;
};

inline constexpr int kDefaultNGrid[] = {4, 8, 16, 32, 64, 128, 256};

// greedy error curve over n_grid for a fixed target function
RateReport jackson_rate_experiment(const Func& f, const MultilevelPartition& p,
                                   double alpha, int k, double q,
                                   std::span<const int> n_grid,
                                   const QuadratureRule& rule,
                                   bool sup_norm = false);

struct BernsteinRow {
  int n = 0;
  double random_max = 0.0;  // max over random trials of besov_E/(n^alpha bmo)
  double witness = 0.0;     // same ratio for the deterministic wave witness
};

struct BernsteinReport {
  double alpha = 0.0;
  int trials = 0;
  std::vector<BernsteinRow> rows;
  double random_slope = 0.0;   // log-log tail fit of random_max
  double witness_slope = 0.0;  // log-log tail fit of witness
  std::size_t tail_start = 0;  // first row used by the tail fits
  bool slopes_defined = false;
  std::string config_hash;
};

// inverse-estimate probe. Per n: max of besov_E(g) / (n^alpha * bmo(g)) over
// random n-term splines (supports uniform over the pool, standard normal
// coefficients), plus the same ratio for a deterministic witness: a trapezoid
// wave with ~n/4 teeth truncated to its n largest coefficients. Slopes are
// fitted on the second half of the grid; small budgets are dominated by
// single atoms whose ratio falls like n^{-alpha} by normalization alone.
// random_slope <= 0.15 checks that no sample beats the n^alpha envelope;
// witness_slope near 0 checks the envelope is attained by bounded functions.
BernsteinReport bernstein_experiment(const MultilevelPartition& p, double alpha,
                                     int trials, std::span<const int> n_grid,
                                     std::uint64_t seed,
                                     const QuadratureRule& rule);

struct GrowthRow {
  double eps = 0.0;
  double value = 0.0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double slope = 0.0;  // value vs ln(1/eps)
  double intercept = 0.0;
  double r2 = 0.0;
};

// growth of the alpha=1, k=2, q=1 norm of the smoothed step against
// ln(1/eps); eps below the finest cell of the partition is rejected
GrowthReport counterexample_growth(const MultilevelPartition& p,
                                   std::span<const double> eps_grid,
                                   const QuadratureRule& rule);

}  // namespace bmospline
