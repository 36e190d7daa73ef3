#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "wsnow/samplers.hpp"
#include "wsnow/transport.hpp"

using namespace wsnow;

namespace {

// Brute-force oracle: minimum over all assignments between equal-size
// uniform supports. Independent of the production solver.
double brute_force_uniform_wp(const std::vector<std::vector<double>>& xs,
                              const std::vector<std::vector<double>>& ys, double p) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
      double sq = 0.0;
      for (size_t c = 0; c < xs[i].size(); ++c) {
        double t = xs[i][c] - ys[perm[i]][c];
        sq += t * t;
      }
      obj += pow_from_sq(sq, p) / n;
    }
    best = std::min(best, obj);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best, 1.0 / p);
}

DiscreteMeasure uniform_on(const std::vector<std::vector<double>>& pts) {
  std::vector<double> flat;
  for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
  return DiscreteMeasure::uniform(static_cast<int>(pts[0].size()), std::move(flat));
}

}  // namespace

TEST_CASE("measure construction merges bitwise-equal atoms") {
  DiscreteMeasure mu(1, {1.0, 1.0, 2.0}, {0.25, 0.25, 0.5});
  CHECK(mu.size() == 2);
  CHECK(mu.weight(0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(DiscreteMeasure(1, {0.0, 1.0}, {0.6, 0.6}), validation_error);
  CHECK_THROWS_AS(DiscreteMeasure(1, {0.0, 1.0}, {-0.1, 1.1}), validation_error);
}

TEST_CASE("wasserstein on point masses and identical measures") {
  auto a = DiscreteMeasure::dirac({0.0, 0.0, 0.0});
  auto b = DiscreteMeasure::dirac({3.0, 4.0, 0.0});
  for (double p : {1.0, 1.5, 2.0, 3.0})
    CHECK(wasserstein(a, b, p).cost == doctest::Approx(5.0));
  auto mu = uniform_on({{0.0}, {1.0}});
  CHECK(wasserstein(mu, mu, 2.0).cost == doctest::Approx(0.0));
}

TEST_CASE("wasserstein two-atom example: keep 0, send 1 to 3") {
  auto mu = uniform_on({{0.0}, {1.0}});
  auto nu = uniform_on({{0.0}, {3.0}});
  // brute force over both assignments: 1/2*4 = 2 beats 1/2*9 + 1/2*1 = 5
  CHECK(wasserstein(mu, nu, 2.0).cost == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("wasserstein dimension mismatch") {
  CHECK_THROWS_AS(wasserstein(DiscreteMeasure::dirac({0.0}),
                              DiscreteMeasure::dirac({0.0, 0.0}), 2.0),
                  validation_error);
}

TEST_CASE("generic solver matches the brute-force assignment oracle") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 5);  // up to 6! = 720 assignments
    const int dim = 1 + static_cast<int>(rng() % 3);
    auto xs = samplers::gaussian_points(n, dim, rng);
    auto ys = samplers::gaussian_points(n, dim, rng);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      double expected = brute_force_uniform_wp(xs, ys, p);
      double got = wasserstein(uniform_on(xs), uniform_on(ys), p).cost;
      CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("plan marginals are exact and cost matches the objective") {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    auto mu = samplers::discrete_measure(2, 6, rng);
    auto nu = samplers::discrete_measure(2, 6, rng);
    auto sol = wasserstein(mu, nu, 2.0);
    auto rep_m = validate_coupling(sol.plan, mu, nu);
    CHECK(rep_m.row_defect <= 1e-10);
    CHECK(rep_m.col_defect <= 1e-10);
    CHECK(coupling_cost(sol.plan, mu, nu, 2.0) == doctest::Approx(sol.cost).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms of W_p on random measures") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 15; ++rep) {
    auto a = samplers::discrete_measure(2, 5, rng);
    auto b = samplers::discrete_measure(2, 5, rng);
    auto c = samplers::discrete_measure(2, 5, rng);
    for (double p : {1.0, 2.0, 3.0}) {
      double ab = wasserstein(a, b, p).cost;
      double ba = wasserstein(b, a, p).cost;
      CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
      double ac = wasserstein(a, c, p).cost;
      double cb = wasserstein(c, b, p).cost;
      CHECK(ab <= ac + cb + 1e-9);
    }
  }
}

TEST_CASE("identity of indiscernibles") {
  std::mt19937_64 rng(24);
  for (int rep = 0; rep < 10; ++rep) {
    auto a = samplers::discrete_measure(3, 5, rng);
    CHECK(wasserstein(a, a, 2.0).cost == doctest::Approx(0.0));
    auto b = samplers::discrete_measure(3, 5, rng);
    if (!a.same_support(b)) CHECK(wasserstein(a, b, 2.0).cost > 0.0);
  }
}

TEST_CASE("line solver: quantile matching equals the generic solver") {
  SUBCASE("frozen two-atom example, p = 1") {
    auto mu = uniform_on({{0.0}, {1.0}});
    auto nu = uniform_on({{2.0}, {5.0}});
    // both assignments cost 3: (2+4)/2 = (5+1)/2
    CHECK(wasserstein_line(mu, nu, 1.0) == doctest::Approx(3.0));
  }
  SUBCASE("mu = nu") {
    auto mu = uniform_on({{0.0}, {1.0}, {4.0}});
    CHECK(wasserstein_line(mu, mu, 2.0) == doctest::Approx(0.0));
  }
  SUBCASE("random instances, all listed exponents") {
    std::mt19937_64 rng(25);
    for (int rep = 0; rep < 25; ++rep) {
      auto mu = samplers::discrete_measure(1, 7, rng);
      auto nu = samplers::discrete_measure(1, 7, rng);
      for (double p : {1.0, 1.5, 2.0, 3.0})
        CHECK(wasserstein_line(mu, nu, p) ==
              doctest::Approx(wasserstein(mu, nu, p).cost).epsilon(1e-10));
    }
  }
  SUBCASE("dimension check") {
    CHECK_THROWS_AS(wasserstein_line(DiscreteMeasure::dirac({0.0, 1.0}),
                                     DiscreteMeasure::dirac({0.0, 1.0}), 2.0),
                    validation_error);
  }
}

TEST_CASE("one-atom swap: frozen examples") {
  SUBCASE("empty shared set is the single edge") {
    auto r = wasserstein_one_atom_swap({}, {0.0, 0.0, 0.0}, {3.0, 4.0, 0.0}, 2.0, 1);
    CHECK(r.cost == doctest::Approx(5.0));
    CHECK(r.path.size() == 2);
  }
  SUBCASE("relay through the middle beats the direct hop") {
    // W_2^2 = (1/2) min(4, 1+1) = 1
    auto r = wasserstein_one_atom_swap({{1.0}}, {0.0}, {2.0}, 2.0, 2);
    CHECK(r.cost == doctest::Approx(1.0));
    CHECK(r.path.size() == 3);  // 0 -> 1 -> 2
  }
  SUBCASE("endpoint in shared rejected") {
    CHECK_THROWS_AS(wasserstein_one_atom_swap({{0.0}}, {0.0}, {2.0}, 2.0, 2),
                    validation_error);
    CHECK_THROWS_AS(wasserstein_one_atom_swap({{1.0}}, {0.0}, {2.0}, 2.0, 3),
                    validation_error);
  }
}

TEST_CASE("one-atom swap equals the generic solver (load-bearing invariant)") {
  std::mt19937_64 rng(26);
  for (int rep = 0; rep < 60; ++rep) {
    const int shared_n = static_cast<int>(rng() % 13);
    const int dim = 1 + static_cast<int>(rng() % 3);
    auto shared = samplers::gaussian_points(shared_n, dim, rng);
    auto ab = samplers::gaussian_points(2, dim, rng);
    auto with = [&](const std::vector<double>& extra) {
      auto pts = shared;
      pts.push_back(extra);
      return uniform_on(pts);
    };
    for (double p : {1.5, 2.0, 3.0}) {
      auto swap = wasserstein_one_atom_swap(shared, ab[0], ab[1], p, shared_n + 1);
      double generic = wasserstein(with(ab[0]), with(ab[1]), p).cost;
      CHECK(swap.cost == doctest::Approx(generic).epsilon(1e-10));
    }
  }
}

TEST_CASE("coupling helpers") {
  auto mu = uniform_on({{0.0}, {1.0}});
  SUBCASE("product coupling has zero marginal defect") {
    auto pi = product_coupling(mu, mu);
    auto rep = validate_coupling(pi, mu, mu);
    CHECK(rep.row_defect == doctest::Approx(0.0));
    CHECK(rep.col_defect == doctest::Approx(0.0));
    // direct sum over the 4 cells: (2 * 1/4 * 1)^(1/2)
    CHECK(coupling_cost(pi, mu, mu, 2.0) == doctest::Approx(std::sqrt(0.5)));
  }
  SUBCASE("diagonal plan for mu = mu costs zero") {
    Coupling diag;
    diag.mu_size = diag.nu_size = 2;
    diag.entries = {{0, 0, 0.5}, {1, 1, 0.5}};
    CHECK(coupling_cost(diag, mu, mu, 2.0) == doctest::Approx(0.0));
    auto rep = validate_coupling(diag, mu, mu);
    CHECK(rep.row_defect == doctest::Approx(0.0));
  }
  SUBCASE("an off-marginal plan reports its defect") {
    Coupling bad;
    bad.mu_size = bad.nu_size = 2;
    bad.entries = {{0, 0, 0.4}, {1, 1, 0.5}};
    auto rep = validate_coupling(bad, mu, mu);
    CHECK(rep.row_defect == doctest::Approx(0.1));
  }
  SUBCASE("any coupling costs at least the optimum") {
    std::mt19937_64 rng(27);
    for (int rep = 0; rep < 10; ++rep) {
      auto a = samplers::discrete_measure(2, 4, rng);
      auto b = samplers::discrete_measure(2, 4, rng);
      double opt = wasserstein(a, b, 2.0).cost;
      CHECK(coupling_cost(product_coupling(a, b), a, b, 2.0) >= opt - 1e-9);
    }
  }
}
