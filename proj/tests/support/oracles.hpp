#pragma once

// Independent slow reference implementations used only by tests.  Everything
// here recomputes a quantity the library provides, by a different route, so
// agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bmospline/funcspace.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/partition.hpp"

namespace testsupport {

// high-order rule on a uniformly refined copy of the finest knots; the
// refine-and-compare reference for quadrature accuracy checks
inline bmospline::QuadratureRule refined_rule(const bmospline::MultilevelPartition& p,
                                              int split = 4, int order = 8) {
  auto base = p.knots(p.max_level());
  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    for (int s = 0; s < split; ++s)
      fine.push_back(base[i] + (base[i + 1] - base[i]) * s / split);
  }
  fine.push_back(base.back());
  return bmospline::QuadratureRule::from_knots(fine, order);
}

// best constant approximation error in L^1(J) by golden-section search over
// the constant; the objective is convex in c
inline double best_const_l1(const bmospline::Func& f, bmospline::Interval J,
                            const bmospline::QuadratureRule& rule) {
  auto err = [&](double c) {
    return rule.integrate_capped([&](double x) { return std::abs(f(x) - c); },
                                 J, 2048);
  };
  double lo = f(J.lo), hi = lo;
  for (int i = 0; i <= 64; ++i) {
    double v = f(J.lo + J.length() * i / 64.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = err(c1), f2 = err(c2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = err(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = err(c1);
    }
  }
  return std::min(f1, f2);
}

// k-th difference with step h at x
inline double kth_difference(const bmospline::Func& f, double x, double h, int k) {
  double sum = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= k; ++i) {
    double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * f(x + i * h);
    binom = binom * (k - i) / (i + 1);
  }
  return sum;
}

// averaged modulus ((1/t) int_0^t ||D_h^k f||_q^q dh)^{1/q}, trapezoid in h;
// cross-check companion to the sup-over-h modulus
inline double averaged_modulus(const bmospline::Func& f, bmospline::Interval J,
                               int k, double q, double t,
                               const bmospline::QuadratureRule& rule,
                               int h_samples = 16) {
  double acc = 0.0;
  double prev = 0.0;
  double prev_h = 0.0;
  for (int s = 1; s <= h_samples; ++s) {
    double h = t * s / h_samples;
    double val = 0.0;
    if (J.length() - k * h > 1e-14) {
      bmospline::Interval base{J.lo, J.hi - k * h};
      val = rule.integrate_capped(
          [&](double x) { return std::pow(std::abs(kth_difference(f, x, h, k)), q); },
          base, 512);
    }
    acc += 0.5 * (prev + val) * (h - prev_h);
    prev = val;
    prev_h = h;
  }
  return std::pow(acc / t, 1.0 / q);
}

// exact sigma_n in g^q by enumating every subset of nonzero entries of size
// <= n as the kept set (residual zeroes it); independent of the library's
// oracle, which enumerates combinations recursively
inline double exhaustive_gq_sigma(const bmospline::CoeffSequence& h, int n,
                                  double q) {
  std::vector<int> nz;
  for (int i = 0; i < static_cast<int>(h.values.size()); ++i)
    if (h.values[i] != 0.0) nz.push_back(i);
  int sz = static_cast<int>(nz.size());
  double best = bmospline::gq_norm(h, q);
  for (std::uint64_t mask = 1; mask < (1ULL << sz); ++mask) {
    if (static_cast<int>(__builtin_popcountll(mask)) > n) continue;
    bmospline::CoeffSequence r = h;
    for (int b = 0; b < sz; ++b)
      if (mask & (1ULL << b)) r.values[nz[b]] = 0.0;
    best = std::min(best, bmospline::gq_norm(r, q));
  }
  return best;
}

// sampled sup distance over J
inline double sup_diff(const std::function<double(double)>& a,
                       const std::function<double(double)>& b,
                       bmospline::Interval J, int samples = 2000) {
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double x = J.lo + J.length() * i / samples;
    worst = std::max(worst, std::abs(a(x) - b(x)));
  }
  return worst;
}

}  // namespace testsupport
