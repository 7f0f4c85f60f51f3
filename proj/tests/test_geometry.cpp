#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "multcount/geometry.hpp"
#include "support/oracles.hpp"

using namespace multcount;

TEST_CASE("unit box volume: closed form") {
  CHECK(unit_box_product_volume(1, 1.0) == 1.0);
  CHECK(unit_box_product_volume(5, 3.7) == 1.0);
  CHECK(unit_box_product_volume(1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(unit_box_product_volume(2, 0.5) ==
        doctest::Approx(0.5 * (1.0 + std::log(2.0))).epsilon(1e-15));
  CHECK_THROWS_AS(unit_box_product_volume(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(unit_box_product_volume(2, -1.0), std::domain_error);
  CHECK_THROWS_AS(unit_box_product_volume(0, 0.5), std::domain_error);
  // stable for deep dimensions and tiny lambda
  double v = unit_box_product_volume(50, 1e-12);
  CHECK(v > 0.0);
  CHECK(v <= 1.0);
}

TEST_CASE("half box volume and scaling identity") {
  CHECK(half_box_product_volume(1, 0.5) == 0.5);
  CHECK(half_box_product_volume(2, 0.125) ==
        doctest::Approx(0.25 * 0.5 * (1.0 + std::log(2.0))).epsilon(1e-15));
  CHECK(half_box_product_volume(3, 0.2) == doctest::Approx(0.125));  // saturated: 0.2 >= 2^-3
  // exact floating identity, same code path
  for (int k = 1; k <= 6; ++k) {
    for (double lambda : {0.9, 0.5, 0.1, 0.01, 1e-6}) {
      CHECK(std::ldexp(half_box_product_volume(k, lambda), k) ==
            unit_box_product_volume(k, std::ldexp(lambda, k)));
    }
  }
}

TEST_CASE("monotonicity in lambda and k") {
  for (int k = 1; k <= 4; ++k) {
    double prev = 0.0;
    for (double lambda : {0.001, 0.01, 0.1, 0.3, 0.7, 1.0}) {
      double v = unit_box_product_volume(k, lambda);
      CHECK(v >= prev);
      prev = v;
    }
  }
  // each extra unit-interval factor can only shrink the product, so the
  // region grows with k
  for (double lambda : {0.9, 0.5, 0.1}) {
    for (int k = 1; k < 6; ++k) {
      CHECK(unit_box_product_volume(k + 1, lambda) >= unit_box_product_volume(k, lambda));
    }
  }
}

TEST_CASE("induction identity by quadrature") {
  // volume_k(lambda) = lambda + integral_lambda^1 volume_{k-1}(lambda/x) dx
  for (int k : {2, 3, 4}) {
    for (double lambda : {0.9, 0.5, 0.1, 0.01}) {
      double integral = oracles::integrate(
          [&](double x) { return unit_box_product_volume(k - 1, lambda / x); }, lambda, 1.0);
      CHECK(std::fabs(unit_box_product_volume(k, lambda) - (lambda + integral)) < 1e-8);
    }
  }
}

TEST_CASE("nearest product measure") {
  CHECK(nearest_product_measure(1, 0.25) == doctest::Approx(0.5));
  CHECK(nearest_product_measure(2, 0.0) == 0.0);
  CHECK(nearest_product_measure(1, 0.5) == 1.0);
  CHECK(nearest_product_measure(2, 0.5) == 1.0);
}

TEST_CASE("monte carlo: saturated region is exact") {
  auto mc = monte_carlo_volume({3, 1.0, Box::Unit}, 1000, 42);
  CHECK(mc.estimate == 1.0);
  CHECK(mc.std_error == 0.0);
  CHECK(mc.hits == 1000);
}

TEST_CASE("monte carlo agrees with the closed form") {
  auto mc = monte_carlo_volume({2, 0.5, Box::Unit}, 1000000, 4242);
  double exact = unit_box_product_volume(2, 0.5);
  CHECK(std::fabs(mc.estimate - exact) <= 4.0 * mc.std_error);
  auto mh = monte_carlo_volume({2, 0.125, Box::Half}, 1000000, 4242);
  double exact_h = half_box_product_volume(2, 0.125);
  CHECK(std::fabs(mh.estimate - exact_h) <= 4.0 * mh.std_error);
}

TEST_CASE("monte carlo determinism and thread independence") {
  auto a = monte_carlo_volume({3, 0.2, Box::Unit}, 500000, 777, 1);
  auto b = monte_carlo_volume({3, 0.2, Box::Unit}, 500000, 777, 1);
  CHECK(a.estimate == b.estimate);
  CHECK(a.hits == b.hits);
  auto c = monte_carlo_volume({3, 0.2, Box::Unit}, 500000, 777, 4);
  CHECK(a.hits == c.hits);
  CHECK(a.estimate == c.estimate);
  // different seed moves the estimate
  auto d = monte_carlo_volume({3, 0.2, Box::Unit}, 500000, 778, 1);
  CHECK(a.hits != d.hits);
}
