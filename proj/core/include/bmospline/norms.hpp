#pragma once

#include <cstddef>
#include <vector>

#include "bmospline/bspline.hpp"
#include "bmospline/funcspace.hpp"
#include "bmospline/interval.hpp"
#include "bmospline/partition.hpp"

namespace bmospline {

// Mean-oscillation estimate: a max over a finite interval family, hence a
// lower bound of the supremum over all intervals.
struct BmoEstimate {
  double value = 0.0;
  Interval argmax{0.0, 0.0};
  std::size_t family_size = 0;
  double q = 1.0;
};

// family = every cell at levels 0..L plus, per cell, a copy shifted right by
// half its own length (clipped at the window's right edge, dropped when the
// clip leaves nothing)
BmoEstimate bmo_norm(const Func& f, const MultilevelPartition& p, double q,
                     const QuadratureRule& rule);

// scaled local approximation errors, level-major:
// e[m][i] = |I|^{-1/q} * ||f - P f||_{L^q(Omega_I)} for cell I = (m, i), with
// P the local projection of order k on the (2k-1)-cell neighborhood Omega_I
std::vector<std::vector<double>> scaled_cell_errors(
    const Func& f, const MultilevelPartition& p, int k, double q,
    const QuadratureRule& rule);

// max of the scaled cell errors
double bmo_qk_norm(const Func& f, const MultilevelPartition& p, double q, int k,
                   const QuadratureRule& rule);

enum class BesovVariant { E, Q, modulus };

struct BesovNorm {
  double alpha = 1.0;
  double tau = 1.0;  // always 1/alpha
  int k = 2;
  double q = 2.0;
  BesovVariant variant = BesovVariant::E;
  double value = 0.0;
};

// tau-sum of the scaled cell errors over all levels, tau = 1/alpha
BesovNorm besov_norm_E(const Func& f, const MultilevelPartition& p, double alpha,
                       int k, double q, const QuadratureRule& rule);

// plain l^tau norm of all decomposition coefficients (base and details
// pooled), tau = 1/alpha; upper-bounds the representation-infimum norm
BesovNorm besov_norm_Q(const SplineDecomposition& dec, double alpha);

// discrete dyadic modulus form: (sum_nu (2^{alpha nu} omega_k(f, 2^-nu)_tau)^tau)^{1/tau}
// with nu running over the window's scale range down to the finest cell;
// defined for tau = 1/alpha >= 1 only and uses q = tau throughout
BesovNorm besov_norm_modulus(const Func& f, const MultilevelPartition& p,
                             double alpha, int k, const QuadratureRule& rule,
                             int h_samples = 16);

// (sum |h|^tau)^{1/tau}, tau > 0
double ltau_norm(const CoeffSequence& h, double tau);

// sup over nodes xi of ((1/|U_xi|) sum over the subtree of |h|^q |U|)^{1/q};
// q = infinity degenerates to sup |h|
double gq_norm(const CoeffSequence& h, double q);

}  // namespace bmospline
