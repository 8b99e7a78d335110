#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bmospline/bspline.hpp"
#include "bmospline/corpus.hpp"
#include "bmospline/funcspace.hpp"
#include "bmospline/localpoly.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/partition.hpp"
#include "bmospline/rng.hpp"
#include "support/oracles.hpp"

using namespace bmospline;

namespace {

// three-node tree: root [0,1] with children [0,1/2], [1/2,1]
CoeffSequence tiny_tree_seq(const NestedStructure& tree, double root, double left,
                            double right) {
  CoeffSequence h;
  h.structure = &tree;
  h.values = {root, left, right};
  return h;
}

}  // namespace

TEST_SUITE("norms") {

TEST_CASE("mean oscillation of the unit step") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 6, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func step = corpus_function("step");

  BmoEstimate est = bmo_norm(step, p, 1.0, rule);
  // [0.2, 0.8] splits evenly across the jump at 1/2: oscillation 2t(1-t) = 1/2
  CHECK(est.value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(est.argmax.lo == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(est.argmax.hi == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(est.q == 1.0);
  // family: every cell of every level plus the surviving half-shifted copies
  std::size_t cells = 0;
  for (int m = 0; m <= p.max_level(); ++m) cells += p.cell_count(m);
  CHECK(est.family_size >= cells);
  CHECK(est.family_size <= 2 * cells);

  // homogeneity with an exact piecewise form, negative scale folds in
  Func scaled = Func::from_pw("step_scaled", step.exact()->scaled(-2.5));
  CHECK(bmo_norm(scaled, p, 1.0, rule).value ==
        doctest::Approx(2.5 * est.value).epsilon(1e-12));

  Func one = corpus_function("const1");
  CHECK(bmo_norm(one, p, 1.0, rule).value < 1e-12);
  CHECK(bmo_norm(one, p, 2.0, rule).value < 1e-12);
}

TEST_CASE("oscillation exponents are ordered") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 5, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  for (const char* id : {"step", "bump", "cusp05", "sawtooth_2", "smoothstep_0.125"}) {
    Func f = corpus_function(id);
    double b1 = bmo_norm(f, p, 1.0, rule).value;
    double b2 = bmo_norm(f, p, 2.0, rule).value;
    CHECK(b2 >= b1 * (1.0 - 1e-12));  // Hoelder
    if (b1 > 0.0) CHECK(b2 / b1 < 10.0);
  }
}

TEST_CASE("oscillation bounded by twice the sup") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 5, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  // functions with sup known by construction
  struct Item { const char* id; double sup; };
  for (auto [id, sup] : {Item{"step", 1.0}, Item{"smoothstep_0.125", 1.0},
                         Item{"sawtooth_2", 0.125}}) {
    Func f = corpus_function(id);
    for (double q : {1.0, 2.0})
      CHECK(bmo_norm(f, p, q, rule).value <= 2.0 * sup + 1e-12);
  }
}

TEST_CASE("scaled cell errors recomputed directly") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 4, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func bump = corpus_function("bump");
  const int k = 2;
  const double q = 2.0;
  std::vector<std::vector<double>> e = scaled_cell_errors(bump, p, k, q, rule);
  REQUIRE(static_cast<int>(e.size()) == p.num_levels());
  double emax = 0.0;
  for (int m = 0; m <= p.max_level(); ++m) {
    REQUIRE(static_cast<int>(e[m].size()) == p.cell_count(m));
    for (double v : e[m]) emax = std::max(emax, v);
  }
  CHECK(bmo_qk_norm(bump, p, q, k, rule) == doctest::Approx(emax).epsilon(1e-12));

  for (auto [m, i] : {std::pair{1, 2}, std::pair{3, 7}, std::pair{4, 0}}) {
    Interval I = p.cell(m, i);
    Interval om = p.omega(m, i, k);
    Poly proj = l2_projection(bump, om, k, rule);
    Func diff = Func::from_callable("diff", om, [&](double x) {
      return bump(x) - proj.eval(x);
    });
    double direct = std::pow(I.length(), -1.0 / q) * lq_norm(diff, om, q, rule);
    CHECK(e[m][i] == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("order-k oscillation vanishes on low-degree polynomials") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 4, 3);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func quad = Func::from_callable("quad", {-1.0, 2.0},
                                  [](double x) { return 1.0 + x - 0.7 * x * x; });
  CHECK(bmo_qk_norm(quad, p, 2.0, 3, rule) < 1e-10);

  MultilevelPartition p2 = MultilevelPartition::build_dyadic({-1.0, 2.0}, 4, 2);
  QuadratureRule rule2 = QuadratureRule::for_partition(p2, 4);
  Func lin = Func::from_callable("lin", {-1.0, 2.0},
                                 [](double x) { return 2.0 * x - 0.3; });
  CHECK(bmo_qk_norm(lin, p2, 1.0, 2, rule2) < 1e-10);
}

TEST_CASE("jump oscillation is stable across depth") {
  Func step = corpus_function("step");
  std::vector<double> vals;
  for (int L : {6, 8, 10}) {
    MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, L, 2);
    QuadratureRule rule = QuadratureRule::for_partition(p, 4);
    vals.push_back(bmo_qk_norm(step, p, 1.0, 2, rule));
  }
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  CHECK(lo > 0.0);
  CHECK(hi / lo < 1.5);
}

TEST_CASE("tau pooling of scaled errors") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 4, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func f = corpus_function("cusp05");
  const double alpha = 0.5, q = 2.0;
  BesovNorm bn = besov_norm_E(f, p, alpha, 2, q, rule);
  CHECK(bn.alpha == alpha);
  CHECK(bn.tau == doctest::Approx(1.0 / alpha).epsilon(1e-15));
  CHECK(bn.k == 2);
  CHECK(bn.q == q);
  CHECK(bn.variant == BesovVariant::E);

  std::vector<std::vector<double>> e = scaled_cell_errors(f, p, 2, q, rule);
  double tau = 1.0 / alpha, acc = 0.0;
  for (const auto& lvl : e)
    for (double v : lvl) acc += std::pow(v, tau);
  CHECK(bn.value == doctest::Approx(std::pow(acc, 1.0 / tau)).epsilon(1e-12));
}

TEST_CASE("coefficient-side norm pools every level") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 4, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  SplineDecomposition dec = decompose(corpus_function("bump"), p, rule);
  const double alpha = 1.0, tau = 1.0;
  BesovNorm bn = besov_norm_Q(dec, alpha);
  CHECK(bn.variant == BesovVariant::Q);
  double acc = 0.0;
  for (const auto& lvl : dec.levels)
    for (double v : lvl) acc += std::pow(std::abs(v), tau);
  CHECK(bn.value == doctest::Approx(std::pow(acc, 1.0 / tau)).epsilon(1e-12));

  // a single unit coefficient has norm one for every alpha
  SplineDecomposition unit;
  unit.partition = &p;
  unit.k = 2;
  unit.levels.resize(p.num_levels());
  for (int m = 0; m <= p.max_level(); ++m)
    unit.levels[m].assign(p.support_count(m), 0.0);
  unit.levels[1][2] = 1.0;
  CHECK(besov_norm_Q(unit, 0.5).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(besov_norm_Q(unit, 1.0).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("modulus form bounds and guards") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 5, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  Func bump = corpus_function("bump");
  BesovNorm bm = besov_norm_modulus(bump, p, 1.0, 2, rule);
  CHECK(bm.variant == BesovVariant::modulus);
  CHECK(bm.value > 0.0);
  CHECK(std::isfinite(bm.value));
  // tau = 1/alpha < 1 is outside the averaged-modulus regime
  CHECK_THROWS_AS(besov_norm_modulus(bump, p, 1.25, 2, rule), std::invalid_argument);
}

TEST_CASE("sequence norms on a tiny tree") {
  NestedStructure tree = NestedStructure::dyadic_tree(2);
  REQUIRE(tree.size() == 3);

  CoeffSequence h34 = tiny_tree_seq(tree, 3.0, 4.0, 0.0);
  CHECK(ltau_norm(h34, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(ltau_norm(h34, 1.0) == doctest::Approx(7.0).epsilon(1e-15));
  CoeffSequence perm = tiny_tree_seq(tree, 0.0, 4.0, 3.0);
  CHECK(ltau_norm(perm, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  double t = 0.5;
  CHECK(ltau_norm(h34, t) ==
        doctest::Approx(std::pow(std::pow(3.0, t) + std::pow(4.0, t), 1.0 / t))
            .epsilon(1e-13));

  // root and one child carrying 1: the root window sees mass 1*1 + 1*(1/2)
  CoeffSequence g = tiny_tree_seq(tree, 1.0, 1.0, 0.0);
  CHECK(gq_norm(g, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CoeffSequence root_only = tiny_tree_seq(tree, 1.0, 0.0, 0.0);
  CHECK(gq_norm(root_only, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

  // homogeneity and entrywise monotonicity
  CoeffSequence g3 = tiny_tree_seq(tree, 3.0, 3.0, 0.0);
  CHECK(gq_norm(g3, 1.0) == doctest::Approx(3.0 * 1.5).epsilon(1e-13));
  CoeffSequence bigger = tiny_tree_seq(tree, 1.0, 1.0, 0.7);
  CHECK(gq_norm(bigger, 1.0) >= gq_norm(g, 1.0));

  double inf = std::numeric_limits<double>::infinity();
  CoeffSequence mixed = tiny_tree_seq(tree, 0.25, -2.0, 0.5);
  CHECK(gq_norm(mixed, inf) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("sequence norms on a partition forest") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, 2);
  NestedStructure forest = NestedStructure::from_partition(p);
  forest.validate();
  CHECK(forest.size() == p.total_supports());
  CHECK(forest.level_count() == p.num_levels());

  // flat order is level-major and consistent with (level, pos) lookup
  for (int m = 0; m < forest.level_count(); ++m) {
    auto [b, e] = forest.level_range(m);
    CHECK(e - b == p.support_count(m));
    for (int i = b; i < e; ++i) {
      const NestedStructure::Node& nd = forest.node(i);
      CHECK(nd.level == m);
      CHECK(forest.flat_index(nd.level, nd.pos) == i);
      Interval u = p.cell(m, nd.pos);  // U of a support is its first cell
      CHECK(nd.u.lo == doctest::Approx(u.lo).epsilon(1e-15));
      CHECK(nd.u.hi == doctest::Approx(u.hi).epsilon(1e-15));
    }
  }

  CoeffSequence h;
  h.structure = &forest;
  h.values.assign(forest.size(), 0.0);
  h.values[forest.flat_index(2, 3)] = 2.0;
  CHECK(gq_norm(h, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ltau_norm(h, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

}  // TEST_SUITE
