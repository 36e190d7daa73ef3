#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wsnow/metric_space.hpp"
#include "wsnow/samplers.hpp"

using namespace wsnow;

TEST_CASE("validate_metric accepts the smallest metric") {
  auto X = validate_metric({{0, 1}, {1, 0}}, 0.0);
  CHECK(X.size() == 2);
  CHECK(X(0, 1) == 1.0);
}

TEST_CASE("validate_metric reports the first violated axiom with indices") {
  SUBCASE("triangle violation") {
    try {
      validate_metric({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, 0.0);
      FAIL("expected TriangleViolation");
    } catch (const validation_error& e) {
      CHECK(e.code == "TriangleViolation");
      CHECK(e.index[0] == 0);
      CHECK(e.index[1] == 2);
      CHECK(e.index[2] == 1);
    }
  }
  SUBCASE("asymmetry") {
    try {
      validate_metric({{0, 1}, {2, 0}}, 0.0);
      FAIL("expected Asymmetric");
    } catch (const validation_error& e) {
      CHECK(e.code == "Asymmetric");
      CHECK(e.index[0] == 0);
      CHECK(e.index[1] == 1);
    }
  }
  SUBCASE("nonzero diagonal") {
    try {
      validate_metric({{1.0, 1}, {1, 0}}, 0.0);
      FAIL("expected NonzeroDiagonal");
    } catch (const validation_error& e) {
      CHECK(e.code == "NonzeroDiagonal");
      CHECK(e.index[0] == 0);
    }
  }
  SUBCASE("zero off-diagonal") {
    try {
      validate_metric({{0, 0}, {0, 0}}, 0.0);
      FAIL("expected NegativeOrZeroOffDiagonal");
    } catch (const validation_error& e) {
      CHECK(e.code == "NegativeOrZeroOffDiagonal");
    }
  }
}

TEST_CASE("symmetrize averages and reports the deviation") {
  auto r = symmetrize({{0, 1}, {2, 0}});
  CHECK(r.d[0][1] == doctest::Approx(1.5));
  CHECK(r.d[1][0] == doctest::Approx(1.5));
  CHECK(r.max_deviation == doctest::Approx(1.0));
}

TEST_CASE("snowflake") {
  SUBCASE("square root of a 2-point space") {
    auto X = validate_metric({{0, 4}, {4, 0}}, 0.0);
    auto Y = snowflake(X, 0.5);
    CHECK(Y(0, 1) == doctest::Approx(2.0));
  }
  SUBCASE("alpha = 1 is the identity") {
    auto X = validate_metric({{0, 2}, {2, 0}}, 0.0);
    auto Y = snowflake(X, 1.0);
    CHECK(Y(0, 1) == 2.0);
  }
  SUBCASE("collinear points, alpha = 1/2") {
    auto X = path_metric(3);
    auto Y = snowflake(X, 0.5);
    CHECK(Y(0, 1) == doctest::Approx(1.0));
    CHECK(Y(1, 2) == doctest::Approx(1.0));
    CHECK(Y(0, 2) == doctest::Approx(std::sqrt(2.0)));
    // output passes validation with zero tolerance up to rounding
    std::vector<std::vector<double>> rows(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rows[i][j] = Y(i, j);
    CHECK_NOTHROW(validate_metric(rows, 1e-12 * Y.diameter()));
  }
  SUBCASE("alpha out of range") {
    auto X = path_metric(2);
    CHECK_THROWS_AS(snowflake(X, 0.0), validation_error);
    CHECK_THROWS_AS(snowflake(X, 1.5), validation_error);
  }
}

TEST_CASE("snowflake composition: (X^a)^b = X^(ab) to 1e-12 relative") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    auto X = samplers::graph_metric(6, rng);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    double a = u(rng), b = u(rng);
    auto Y = snowflake(snowflake(X, a), b);
    auto Z = snowflake(X, a * b);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        CHECK(Y(i, j) == doctest::Approx(Z(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("snowflake output validates at 1e-12 diam tolerance") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    auto X = samplers::graph_metric(5, rng);
    auto Y = snowflake(X, std::uniform_real_distribution<double>(0.1, 1.0)(rng));
    std::vector<std::vector<double>> rows(5, std::vector<double>(5));
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) rows[i][j] = Y(i, j);
    CHECK_NOTHROW(validate_metric(rows, 1e-12 * Y.diameter()));
  }
}

TEST_CASE("aspect ratio") {
  SUBCASE("all distances equal") {
    auto X = validate_metric({{0, 3, 3}, {3, 0, 3}, {3, 3, 0}}, 0.0);
    CHECK(aspect_ratio(X) == doctest::Approx(1.0));
  }
  SUBCASE("line 1,2,3") {
    CHECK(aspect_ratio(path_metric(3)) == doctest::Approx(2.0));
  }
  SUBCASE("bound is sqrt(aspect) for p = 2") {
    auto X = validate_metric({{0, 1, 4}, {1, 0, 4}, {4, 4, 0}}, 0.0);
    CHECK(aspect_ratio(X) == doctest::Approx(4.0));
    CHECK(aspect_distortion_bound(X) == doctest::Approx(2.0));
  }
  SUBCASE("single point") {
    FiniteMetricSpace X(unchecked, 1, {0.0});
    CHECK_THROWS_AS(aspect_ratio(X), validation_error);
  }
}

TEST_CASE("hamming cube") {
  SUBCASE("k = 1") {
    auto X = hamming_cube(1);
    CHECK(X.size() == 2);
    CHECK(X(0, 1) == 1.0);
  }
  SUBCASE("k = 2 opposite corners") {
    auto X = hamming_cube(2);
    CHECK(X(0, 3) == 2.0);
  }
  SUBCASE("diameter is k") {
    for (int k = 1; k <= 6; ++k) CHECK(hamming_cube(k).diameter() == k);
  }
  SUBCASE("unit-distance pair count is k 2^{k-1}") {
    for (int k = 1; k <= 6; ++k) {
      auto X = hamming_cube(k);
      long count = 0;
      for (int i = 0; i < X.size(); ++i)
        for (int j = i + 1; j < X.size(); ++j)
          if (X(i, j) == 1.0) ++count;
      CHECK(count == static_cast<long>(k) * (1 << (k - 1)));
    }
  }
  SUBCASE("size cap") { CHECK_THROWS_AS(hamming_cube(13), validation_error); }
}

TEST_CASE("path metric") {
  auto X = path_metric(3);
  CHECK(X(0, 0) == 0.0);
  CHECK(X(0, 1) == 1.0);
  CHECK(X(0, 2) == 2.0);
  CHECK(path_metric(2)(0, 1) == 1.0);
  CHECK(aspect_ratio(path_metric(7)) == doctest::Approx(6.0));
}

TEST_CASE("random metric samplers produce valid metrics") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    for (auto& X : {samplers::graph_metric(7, rng), samplers::tree_metric(7, rng),
                    samplers::metric_in_interval(7, 1.0, 2.0, rng)}) {
      std::vector<std::vector<double>> rows(7, std::vector<double>(7));
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) rows[i][j] = X(i, j);
      CHECK_NOTHROW(validate_metric(rows));
    }
  }
}
