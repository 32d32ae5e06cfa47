#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "support.hpp"

using namespace roughir;
using Catch::Approx;

TEST_CASE("SampledPath validates its samples", "[increments]") {
  CHECK_THROWS_AS(SampledPath(std::vector<double>{1.0}), size_error);
  CHECK_THROWS_AS(SampledPath(std::vector<double>{0.0, std::nan(""), 1.0}), domain_error);
  CHECK_THROWS_AS(SampledPath(std::vector<double>{0.0, std::numeric_limits<double>::infinity()}), domain_error);
  const SampledPath p(std::vector<double>{0.0, 1.0, 3.0});
  CHECK(p.n() == 2);
  CHECK(p.size() == 3);
  CHECK(p.time(1) == 0.5);
}

TEST_CASE("p_increment on polynomial grids", "[increments]") {
  const auto lin = test::from_function(10, [](double t) { return t; });
  const auto quad = test::from_function(10, [](double t) { return t * t; });
  CHECK(p_increment(lin, 1, 3) == Approx(0.1).margin(1e-15));
  CHECK(std::fabs(p_increment(lin, 2, 3)) < 1e-15);
  for (std::size_t j = 0; j + 2 <= 10; ++j) CHECK(p_increment(quad, 2, j) == Approx(0.02).margin(1e-15));
  CHECK_THROWS_AS(p_increment(lin, 2, 9), range_error);
  CHECK_THROWS_AS(p_increment(lin, 0, 0), domain_error);
}

TEST_CASE("binomial filters", "[increments]") {
  auto coeffs = [](unsigned p) {
    const auto f = make_binomial_filter(p);
    return std::vector<double>(f.coeffs().begin(), f.coeffs().end());
  };
  CHECK(coeffs(1) == std::vector<double>{-1, 1});
  CHECK(coeffs(2) == std::vector<double>{1, -2, 1});
  CHECK(coeffs(3) == std::vector<double>{-1, 3, -3, 1});
  CHECK(make_binomial_filter(3).order() == 3);
}

TEST_CASE("filtered_increment examples", "[increments]") {
  Rng rng = make_rng(11);
  const auto x = test::random_walk(50, rng);
  const Filter d1({-1.0, 1.0}, 1);
  const Filter d2({1.0, -2.0, 1.0}, 2);
  for (std::size_t j = 0; j + 2 <= 50; ++j) {
    CHECK(filtered_increment(x, d1, j) == p_increment(x, 1, j));
    CHECK(filtered_increment(x, d2, j) == p_increment(x, 2, j));
  }
  const Filter d3({1.0, -3.0, 3.0, -1.0}, 3);
  const auto quad = test::from_function(40, [](double t) { return 3.0 * t * t - t + 2.0; });
  for (std::size_t j = 0; j + 3 <= 40; ++j) CHECK(std::fabs(filtered_increment(quad, d3, j)) < 1e-12);
}

TEST_CASE("Filter validation", "[increments]") {
  CHECK_THROWS_AS(Filter({1.0, 1.0}, 1), domain_error);          // moment 0 is not zero
  CHECK_THROWS_AS(Filter({1.0, -2.0, 1.0}, 1), domain_error);    // true order is 2
  CHECK_THROWS_AS(Filter({1.0, -2.0, 1.0}, 3), domain_error);    // order above q
  CHECK_THROWS_AS(Filter({1.0}, 1), domain_error);
  CHECK(Filter::with_detected_order({1.0, -2.0, 1.0}).order() == 2);
  CHECK(Filter::with_detected_order({1.0, -1.0, -1.0, 1.0}).order() == 2);
  CHECK_THROWS_AS(Filter::with_detected_order({1.0, 2.0}), domain_error);
}

// A filter with exactly p vanishing moments: the p-th difference convolved with random taps.
static Filter random_filter(unsigned p, Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> taps(1 + rng() % 3);
  for (auto& t : taps) t = u(rng);  // positive taps: their sum cannot vanish
  const auto b = detail::binomial_coefficients(p);
  std::vector<double> c(b.size() + taps.size() - 1, 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t k = 0; k < taps.size(); ++k) c[i + k] += b[i] * taps[k];
  }
  return Filter(std::move(c), p);
}

TEST_CASE("filters of order p annihilate polynomials of degree < p", "[increments][property]") {
  Rng rng = make_rng(12);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned p = 1 + static_cast<unsigned>(trial % 4);
    const Filter a = random_filter(p, rng);
    std::vector<double> poly(p);
    for (auto& c : poly) c = normal(rng);
    const auto path = test::from_function(64, [&](double t) {
      double v = 0.0;
      for (std::size_t i = poly.size(); i-- > 0;) v = v * t + poly[i];
      return v;
    });
    double scale = 0.0;
    for (double v : path.values()) scale = std::max(scale, std::fabs(v));
    double sum_abs = 0.0;
    for (double c : a.coeffs()) sum_abs += std::fabs(c);
    for (std::size_t j = 0; j + a.q() <= 64; ++j) {
      REQUIRE(std::fabs(filtered_increment(path, a, j)) <= 1e-12 * scale * sum_abs);
    }
  }
}

TEST_CASE("binomial filter matches p_increment bit for bit", "[increments][property]") {
  Rng rng = make_rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = test::random_walk(100, rng);
    for (unsigned p = 1; p <= 4; ++p) {
      const Filter a = make_binomial_filter(p);
      const auto all = filtered_increments(x, a);
      REQUIRE(all.size() == 100 - p + 1);
      for (std::size_t j = 0; j + p <= 100; ++j) {
        REQUIRE(filtered_increment(x, a, j) == p_increment(x, p, j));
        REQUIRE(all[j] == p_increment(x, p, j));
      }
    }
  }
}

TEST_CASE("filtered increments are linear in the path", "[increments][property]") {
  Rng rng = make_rng(14);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = test::random_walk(80, rng);
    const auto y = test::random_walk(80, rng);
    const double al = normal(rng), be = normal(rng);
    std::vector<double> z(81);
    for (std::size_t j = 0; j <= 80; ++j) z[j] = al * x[j] + be * y[j];
    const SampledPath zp(std::move(z));
    const Filter a = random_filter(2, rng);
    for (std::size_t j = 0; j + a.q() <= 80; ++j) {
      const double lhs = filtered_increment(zp, a, j);
      const double rhs = al * filtered_increment(x, a, j) + be * filtered_increment(y, a, j);
      const double scale = std::fabs(al * filtered_increment(x, a, j)) + std::fabs(be * filtered_increment(y, a, j));
      REQUIRE(std::fabs(lhs - rhs) <= 1e-12 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("compensated summation recovers cancelled digits", "[increments]") {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 1000000; ++i) s += 1e-16;
  s += -1.0;
  CHECK(s.value() == Approx(1e-10).epsilon(1e-9));
}
