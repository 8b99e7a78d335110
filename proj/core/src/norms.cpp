#include "bmospline/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bmospline/localpoly.hpp"
#include "bmospline/util.hpp"

namespace bmospline {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// mean oscillation ((1/|J|) int_J |f - avg|^q)^{1/q}
double oscillation(const Func& f, Interval J, double q,
                   const QuadratureRule& rule,
                   const std::vector<double>& breaks) {
  const double len = J.length();
  double avg = rule.integrate_fn([&](double x) { return f(x); }, J, breaks) / len;
  auto g = [&](double x) { return std::pow(std::abs(f(x) - avg), q); };
  double v = rule.integrate_fn(g, J, breaks) / len;
  return std::pow(std::max(0.0, v), 1.0 / q);
}

std::vector<double> func_breaks(const Func& f) {
  if (const PiecewisePoly* pw = f.exact()) {
    auto bp = pw->breakpoints();
    return {bp.begin(), bp.end()};
  }
  return {};
}

}  // namespace

BmoEstimate bmo_norm(const Func& f, const MultilevelPartition& p, double q,
                     const QuadratureRule& rule) {
  require(q >= 1.0, "bmo_norm requires q >= 1");
  const auto breaks = func_breaks(f);
  const double right = p.window().hi;
  BmoEstimate out;
  out.q = q;
  for (int m = 0; m <= p.max_level(); ++m) {
    for (int j = 0; j < p.cell_count(m); ++j) {
      Interval cell = p.cell(m, j);
      Interval shifted{cell.lo + 0.5 * cell.length(),
                       std::min(right, cell.hi + 0.5 * cell.length())};
      for (Interval J : {cell, shifted}) {
        if (!(J.hi > J.lo)) continue;
        ++out.family_size;
        double v = oscillation(f, J, q, rule, breaks);
        if (v > out.value) {
          out.value = v;
          out.argmax = J;
        }
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> scaled_cell_errors(
    const Func& f, const MultilevelPartition& p, int k, double q,
    const QuadratureRule& rule) {
  require(k >= 1 && k <= 4, "order must be in [1, 4]");
  require(q >= 1.0, "scaled cell errors require q >= 1");
  std::vector<std::vector<double>> out(p.num_levels());
  for (int m = 0; m <= p.max_level(); ++m) {
    out[m].resize(p.cell_count(m));
    for (int j = 0; j < p.cell_count(m); ++j) {
      Interval omega = p.omega(m, j, k);
      double err = near_best_poly(f, omega, k, q, rule).err;
      out[m][j] = std::pow(p.cell(m, j).length(), -1.0 / q) * err;
    }
  }
  return out;
}

double bmo_qk_norm(const Func& f, const MultilevelPartition& p, double q, int k,
                   const QuadratureRule& rule) {
  auto e = scaled_cell_errors(f, p, k, q, rule);
  double best = 0.0;
  for (const auto& level : e)
    for (double v : level) best = std::max(best, v);
  return best;
}

BesovNorm besov_norm_E(const Func& f, const MultilevelPartition& p, double alpha,
                       int k, double q, const QuadratureRule& rule) {
  require(alpha > 0.0, "alpha must be positive");
  const double tau = 1.0 / alpha;
  auto e = scaled_cell_errors(f, p, k, q, rule);
  std::vector<double> powers;
  for (const auto& level : e)
    for (double v : level) powers.push_back(std::pow(v, tau));
  BesovNorm out;
  out.alpha = alpha;
  out.tau = tau;
  out.k = k;
  out.q = q;
  out.variant = BesovVariant::E;
  out.value = std::pow(pairwise_sum(powers), alpha);
  return out;
}

BesovNorm besov_norm_Q(const SplineDecomposition& dec, double alpha) {
  require(alpha > 0.0, "alpha must be positive");
  const double tau = 1.0 / alpha;
  std::vector<double> powers;
  powers.reserve(dec.total_coeffs());
  for (const auto& level : dec.levels)
    for (double b : level) powers.push_back(std::pow(std::abs(b), tau));
  BesovNorm out;
  out.alpha = alpha;
  out.tau = tau;
  out.k = dec.k;
  out.q = dec.q;
  out.variant = BesovVariant::Q;
  out.value = std::pow(pairwise_sum(powers), alpha);
  return out;
}

BesovNorm besov_norm_modulus(const Func& f, const MultilevelPartition& p,
                             double alpha, int k, const QuadratureRule& rule,
                             int h_samples) {
  require(alpha > 0.0, "alpha must be positive");
  const double tau = 1.0 / alpha;
  require(tau >= 1.0, "the modulus form needs tau = 1/alpha >= 1");
  const Interval w = p.window();
  double finest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < p.cell_count(p.max_level()); ++j)
    finest = std::min(finest, p.cell(p.max_level(), j).length());
  const int nu_lo = static_cast<int>(std::ceil(std::log2(1.0 / w.length())));
  const int nu_hi = static_cast<int>(std::floor(std::log2(1.0 / finest)));
  std::vector<double> terms;
  for (int nu = nu_lo; nu <= nu_hi; ++nu) {
    double t = std::pow(2.0, -nu);
    double om = modulus(f, w, k, tau, rule, h_samples, t);
    terms.push_back(std::pow(std::pow(2.0, alpha * nu) * om, tau));
  }
  BesovNorm out;
  out.alpha = alpha;
  out.tau = tau;
  out.k = k;
  out.q = tau;
  out.variant = BesovVariant::modulus;
  out.value = std::pow(pairwise_sum(terms), alpha);
  return out;
}

double ltau_norm(const CoeffSequence& h, double tau) {
  require(tau > 0.0 && std::isfinite(tau), "tau must be positive and finite");
  std::vector<double> powers;
  powers.reserve(h.values.size());
  for (double v : h.values) powers.push_back(std::pow(std::abs(v), tau));
  return std::pow(pairwise_sum(powers), 1.0 / tau);
}

double gq_norm(const CoeffSequence& h, double q) {
  require(h.structure != nullptr, "sequence needs a structure");
  require(q > 0.0, "q must be positive");
  const NestedStructure& st = *h.structure;
  require(static_cast<int>(h.values.size()) == st.size(),
          "value count must match the structure");
  if (std::isinf(q)) {
    double best = 0.0;
    for (double v : h.values) best = std::max(best, std::abs(v));
    return best;
  }
  // children carry larger flat indices, so one reverse pass accumulates
  // whole subtrees
  std::vector<double> sub(h.values.size(), 0.0);
  double best = 0.0;
  for (int i = st.size() - 1; i >= 0; --i) {
    sub[i] += std::pow(std::abs(h.values[i]), q) * st.node(i).u.length();
    best = std::max(best, sub[i] / st.node(i).u.length());
    if (st.node(i).parent >= 0) sub[st.node(i).parent] += sub[i];
  }
  return std::pow(best, 1.0 / q);
}

}  // namespace bmospline
