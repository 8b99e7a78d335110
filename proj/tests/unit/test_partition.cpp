#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bmospline/partition.hpp"

using namespace bmospline;

TEST_SUITE("partition") {

TEST_CASE("dyadic construction counts") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, 2);
  CHECK(p.num_levels() == 4);
  CHECK(p.cell_count(0) == 5);
  for (int j = 0; j < 5; ++j)
    CHECK(p.cell(0, j).length() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(p.cell_count(3) == 40);

  MultilevelPartition tiny = MultilevelPartition::build_dyadic({0.0, 1.0}, 0, 2);
  CHECK(tiny.num_levels() == 1);
  CHECK(tiny.cell_count(0) == 5);

  MultilevelPartition k3 = MultilevelPartition::build_dyadic({-1.0, 2.0}, 8, 3);
  CHECK(k3.cell_count(0) == 7);
  CHECK(k3.cell_count(8) == 1792);
  CHECK(k3.cell(8, 911).length() == doctest::Approx(3.0 / 1792).epsilon(1e-13));
}

TEST_CASE("support counts") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, 2);
  CHECK(p.support_count(0) == 4);  // 5 cells, k = 2
  CHECK(p.supports(0).size() == 4);
  CHECK(p.support_count(1) == 9);

  MultilevelPartition k3 = MultilevelPartition::build_dyadic({-1.0, 2.0}, 2, 3);
  CHECK(k3.support_count(0) == 5);  // 7 cells, k = 3

  CHECK_THROWS_AS((void)p.supports(4), std::exception);

  int total = 0;
  for (int m = 0; m <= p.max_level(); ++m) total += p.support_count(m);
  CHECK(total == p.total_supports());
}

TEST_CASE("support intervals cover k cells") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 2, 3);
  for (auto s : p.supports(1)) {
    Interval q = p.support_interval(s);
    CHECK(q.lo == doctest::Approx(p.cell(1, s.j).lo));
    CHECK(q.hi == doctest::Approx(p.cell(1, s.j + 2).hi));
  }
}

TEST_CASE("omega neighborhoods") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, 2);
  // interior cell: 2k-1 = 3 cells centered on it
  Interval om = p.omega(1, 4);
  CHECK(om.lo == doctest::Approx(p.cell(1, 3).lo));
  CHECK(om.hi == doctest::Approx(p.cell(1, 5).hi));
  // leftmost cell: clipped at the window
  CHECK(p.omega(1, 0).lo == doctest::Approx(-1.0));

  MultilevelPartition k3 = MultilevelPartition::build_dyadic({-1.0, 2.0}, 2, 3);
  Interval om5 = k3.omega(1, 6);
  CHECK(om5.lo == doctest::Approx(k3.cell(1, 4).lo));
  CHECK(om5.hi == doctest::Approx(k3.cell(1, 8).hi));

  // |omega| / |I| within [1, (2k-1) lambda]
  for (const auto& part : {p, k3}) {
    int k = part.k();
    for (int m = 0; m <= part.max_level(); ++m)
      for (int j = 0; j < part.cell_count(m); ++j) {
        double ratio = part.omega(m, j).length() / part.cell(m, j).length();
        CHECK(ratio >= 1.0 - 1e-12);
        CHECK(ratio <= (2 * k - 1) * part.lambda() + 1e-12);
      }
  }
}

TEST_CASE("nesting and within-level regularity") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 4, 2);
  for (int m = 0; m < p.max_level(); ++m) {
    auto coarse = p.knots(m);
    auto fine = p.knots(m + 1);
    for (double x : coarse) {
      bool found = false;
      for (double y : fine) found = found || y == x;
      CHECK(found);
    }
  }
  for (int m = 0; m <= p.max_level(); ++m) {
    double len = p.cell(m, 0).length();
    for (int j = 1; j < p.cell_count(m); ++j)
      CHECK(p.cell(m, j).length() == doctest::Approx(len).epsilon(1e-12));
  }
  CHECK(p.lambda() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("child to parent length ratios") {
  // binary refinement with lambda ~ 1: ratios confined near 1/2
  MultilevelPartition p =
      MultilevelPartition::build_perturbed({-1.0, 2.0}, 4, 2, 0.2, 42);
  double lam = p.lambda();
  double rho = lam / (lam + 1.0);
  double r = 1.0 / (2.0 * lam - lam + 1.0);
  for (int m = 0; m < p.max_level(); ++m) {
    for (int j = 0; j < p.cell_count(m); ++j) {
      Interval parent = p.cell(m, j);
      for (int jj = 0; jj < p.cell_count(m + 1); ++jj) {
        Interval child = p.cell(m + 1, jj);
        if (child.lo >= parent.lo - 1e-14 && child.hi <= parent.hi + 1e-14) {
          double ratio = child.length() / parent.length();
          CHECK(ratio >= r - 1e-12);
          CHECK(ratio <= rho + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("perturbed builder") {
  MultilevelPartition zero =
      MultilevelPartition::build_perturbed({-1.0, 2.0}, 3, 2, 0.0, 7);
  MultilevelPartition dyadic = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, 2);
  for (int m = 0; m <= 3; ++m) {
    auto a = zero.knots(m);
    auto b = dyadic.knots(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }

  MultilevelPartition j1 =
      MultilevelPartition::build_perturbed({-1.0, 2.0}, 4, 2, 0.2, 42);
  MultilevelPartition j2 =
      MultilevelPartition::build_perturbed({-1.0, 2.0}, 4, 2, 0.2, 42);
  CHECK_NOTHROW(j1.validate());
  for (int m = 0; m <= 4; ++m) {
    auto a = j1.knots(m);
    auto b = j2.knots(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }

  CHECK_THROWS_AS(MultilevelPartition::build_perturbed({-1.0, 2.0}, 3, 2, 0.4, 1),
                  std::invalid_argument);
}

TEST_CASE("validator rejects tampered hierarchies") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({0.0, 1.0}, 2, 2);
  std::vector<std::vector<double>> levels;
  for (int m = 0; m <= 2; ++m) {
    auto ks = p.knots(m);
    levels.emplace_back(ks.begin(), ks.end());
  }
  CHECK_NOTHROW(MultilevelPartition::from_levels({0.0, 1.0}, 2, levels));

  auto broken = levels;
  broken[1][3] += 0.011;  // breaks nesting into level 2
  CHECK_THROWS_AS(MultilevelPartition::from_levels({0.0, 1.0}, 2, broken),
                  std::invalid_argument);

  auto nonmono = levels;
  std::swap(nonmono[2][4], nonmono[2][5]);
  CHECK_THROWS_AS(MultilevelPartition::from_levels({0.0, 1.0}, 2, nonmono),
                  std::invalid_argument);

  CHECK_THROWS_AS(MultilevelPartition::from_levels({0.0, 2.0}, 2, levels),
                  std::invalid_argument);
}

TEST_CASE("interval_level") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 6, 2);
  CHECK(p.interval_level(p.window()) == 0);
  CHECK(p.interval_level(p.cell(6, 17)) == 6);

  // brute force: the largest level with at most one knot strictly inside
  Interval J{0.0, 0.31};
  int expect = 0;
  for (int m = 0; m <= p.max_level(); ++m) {
    int inside = 0;
    for (double x : p.knots(m))
      if (x > J.lo && x < J.hi) ++inside;
    if (inside <= 1) expect = m;
  }
  CHECK(p.interval_level(J) == expect);
}

TEST_CASE("nested structure from partition") {
  for (int k : {2, 3}) {
    MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, k);
    NestedStructure st = NestedStructure::from_partition(p);
    CHECK_NOTHROW(st.validate());
    CHECK(st.size() == p.total_supports());
    CHECK(st.level_count() == p.num_levels());

    // U of a node is the first cell of its support
    for (int m = 0; m <= p.max_level(); ++m) {
      auto [b, e] = st.level_range(m);
      CHECK(e - b == p.support_count(m));
      for (int i = b; i < e; ++i) {
        const auto& nd = st.node(i);
        CHECK(nd.level == m);
        CHECK(nd.u.lo == doctest::Approx(p.cell(m, nd.pos).lo));
        CHECK(nd.u.hi == doctest::Approx(p.cell(m, nd.pos).hi));
        CHECK(st.flat_index(nd.level, nd.pos) == i);
      }
    }

    // children tile the parent
    for (int i = 0; i < st.size(); ++i) {
      const auto& nd = st.node(i);
      if (nd.children.empty()) continue;
      double sum = 0.0;
      for (int c : nd.children) {
        CHECK(st.node(c).parent == i);
        sum += st.node(c).u.length();
      }
      CHECK(sum == doctest::Approx(nd.u.length()).epsilon(1e-12));
    }

    // level-m U intervals sum to |window| - (k-1) cells
    for (int m = 0; m <= p.max_level(); ++m) {
      auto [b, e] = st.level_range(m);
      double sum = 0.0;
      for (int i = b; i < e; ++i) sum += st.node(i).u.length();
      double expect =
          p.window().length() - (k - 1) * p.cell(m, 0).length();
      CHECK(sum == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("dyadic tree") {
  NestedStructure st = NestedStructure::dyadic_tree(4);
  CHECK(st.size() == 15);
  CHECK(st.level_count() == 4);
  CHECK_NOTHROW(st.validate());
  CHECK(st.node(0).u.length() == doctest::Approx(1.0));
  auto [b, e] = st.level_range(3);
  CHECK(e - b == 8);
  for (int i = b; i < e; ++i)
    CHECK(st.node(i).u.length() == doctest::Approx(0.125));
}

}  // TEST_SUITE
