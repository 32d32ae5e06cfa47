#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support.hpp"

using namespace roughir;
using Catch::Approx;

TEST_CASE("psi and psi0 examples", "[ir]") {
  CHECK(psi(1, 1) == 1.0);
  CHECK(psi(1, -1) == 0.0);
  CHECK(psi(0, 0) == 1.0);
  CHECK(psi(3, -1) == Approx(0.5));
  CHECK(psi0(2, 3) == 1.0);
  CHECK(psi0(2, -3) == 0.0);
  CHECK(psi0(0, -5) == 1.0);
}

TEST_CASE("r_pn examples", "[ir]") {
  const auto mono = test::from_function(100, [](double t) { return std::exp(t) + t; });
  CHECK(r_pn(mono, 1).value == 1.0);
  CHECK(r_pn(mono, 1).terms == 99);

  std::vector<double> zig(101);
  for (std::size_t j = 0; j < zig.size(); ++j) zig[j] = (j % 2 == 0) ? 0.0 : 1.0;
  const SampledPath alternating(zig);
  CHECK(r_pn(alternating, 1).value == 0.0);
  CHECK(r0_pn(alternating, 1).value == 0.0);

  const SampledPath constant(std::vector<double>(50, 3.5));
  for (unsigned p = 1; p <= 3; ++p) {
    const auto s = r_pn(constant, p);
    CHECK(s.value == 1.0);
    CHECK(s.zero_over_zero == s.terms);
    CHECK(s.terms == 49 - p);
    CHECK(s.degenerate());
  }
  CHECK_THROWS_AS(r_pn(SampledPath(std::vector<double>{0, 1, 2}), 2), size_error);
}

TEST_CASE("r_an examples", "[ir]") {
  Rng rng = make_rng(21);
  const auto x = test::random_walk(500, rng);
  const auto a1 = r_an(x, make_binomial_filter(1));
  const auto p1 = r_pn(x, 1);
  CHECK(a1.value == p1.value);
  CHECK(a1.terms == p1.terms);

  const auto quad = test::from_function(100, [](double t) { return t * t; });
  const auto s = r_an(quad, Filter({1.0, -2.0, 1.0}, 2));
  CHECK(s.value == 1.0);
  CHECK(s.zero_over_zero == 0);

  // Cubic filter on X + quadratic trend.
  const Filter d3({1.0, -3.0, 3.0, -1.0}, 3);
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = x[j] + 0.75 * x.time(j) * x.time(j) - 0.25 * x.time(j);
  CHECK(r_an(SampledPath(z), d3).value == Approx(r_an(x, d3).value).epsilon(1e-9));
}

TEST_CASE("r0_pn terms are indicators", "[ir]") {
  const auto mono = test::from_function(100, [](double t) { return t * t * t + t; });
  CHECK(r0_pn(mono, 1).value == 1.0);
  Rng rng = make_rng(22);
  const auto x = test::random_walk(1001, rng);
  const auto s = r0_pn(x, 1);
  // Each term is 0 or 1, so the sum is an integer.
  const double sum = s.value * static_cast<double>(s.terms);
  CHECK(std::fabs(sum - std::round(sum)) < 1e-9);
}

TEST_CASE("r_local", "[ir]") {
  Rng rng = make_rng(23);
  const auto x = test::random_walk(100, rng);
  // 100^0.99 exceeds the half-length, so the window is the whole index range.
  const auto full = r_local(x, 0.5, 0.99);
  const auto global = r_pn(x, 2);
  CHECK(full.terms == global.terms);
  CHECK(full.value == global.value);

  const SampledPath constant(std::vector<double>(200, 1.0));
  CHECK(r_local(constant, 0.3, 0.5).value == 1.0);

  const auto x2 = test::random_walk(1000, rng);
  const auto edge = r_local(x2, 0.01, 0.5);  // window clipped at 0
  CHECK(edge.terms == static_cast<std::size_t>(std::floor(10 + std::sqrt(1000.0))) + 1);
  CHECK_THROWS_AS(r_local(x2, 0.0, 0.5), domain_error);
  CHECK_THROWS_AS(r_local(x2, 0.5, 1.0), domain_error);
}

TEST_CASE("r_local inverts to the simulated H", "[ir][mc]") {
  // 200 fBm paths, n = 2^14, t0 = 0.5, w = 0.6.
  const std::size_t n = 1 << 14;
  for (const double h : {0.3, 0.7}) {
    const sim::FbmSampler sampler(n, h);
    std::vector<double> est;
    int clamped = 0;
    for (std::uint64_t r = 0; r < 200; ++r) {
      Rng rng = make_rng(2300 + r, stream::kPath);
      const double v = r_local(sampler.sample(rng), 0.5, 0.6).value;
      try {
        est.push_back(invert_Lambda2(v));
      } catch (const range_error& e) {
        // About n^0.6 terms: a few windows fall outside the range of Lambda_2. Clamp, as a caller would.
        ++clamped;
        est.push_back(e.boundary());
      }
    }
    const auto m = test::mean_se(est);
    INFO("H=" << h << " mean=" << m.mean << " se=" << m.se << " clamped=" << clamped);
    CHECK(std::fabs(m.mean - h) < 0.15);
    CHECK(clamped < 10);
  }
}

TEST_CASE("r_tilde_2n examples", "[ir]") {
  const auto convex = test::from_function(64, [](double t) { return std::exp(3.0 * t); });
  CHECK(r_tilde_2n(convex).value == 1.0);
  CHECK(r_tilde_2n(convex).terms == 31);

  // Second differences +c, *, -c, *, +c, ... at even indices.
  const std::size_t n = 64;
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t j = 0; j + 2 <= n; ++j) {
    const double d = (j % 2 == 1) ? 0.3 : ((j / 2) % 2 == 0 ? 1.0 : -1.0);
    x[j + 2] = 2.0 * x[j + 1] - x[j] + d;
  }
  CHECK(r_tilde_2n(SampledPath(x)).value == 0.0);

  // Odd n drops the last sample.
  const auto odd = test::from_function(65, [](double t) { return std::sin(9.0 * t); });
  std::vector<double> trimmed(odd.values().begin(), odd.values().end() - 1);
  CHECK(r_tilde_2n(odd).value == r_tilde_2n(SampledPath(trimmed)).value);
}

TEST_CASE("r_tilde_2n of Brownian motion is near 0.72", "[ir][mc]") {
  std::vector<double> v;
  for (std::uint64_t r = 0; r < 500; ++r) v.push_back(r_tilde_2n(sim::sim_brownian(1 << 14, 2400 + r)).value);
  const auto m = test::mean_se(v);
  INFO("mean=" << m.mean << " se=" << m.se);
  CHECK(std::fabs(m.mean - lambda(0.0)) <= 3.0 * m.se);
  CHECK(std::round(m.mean * 100.0) / 100.0 == 0.72);
}

// Every statistic under test, as a list of callables.
static std::vector<IRSummary> all_statistics(const SampledPath& x) {
  return {r_pn(x, 1), r_pn(x, 2), r_pn(x, 3),         r0_pn(x, 1),       r0_pn(x, 2),
          r_an(x, Filter({1.0, -1.0, -1.0, 1.0}, 2)), r_local(x, 0.4, 0.7), r_tilde_2n(x), r0_tilde_2n(x)};
}

TEST_CASE("scale and sign invariance", "[ir][property]") {
  Rng rng = make_rng(25);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = test::random_walk(64 + trial % 64, rng, trial % 3 == 0 ? 0.2 : 0.0);
    const auto base = all_statistics(x);
    // Powers of two scale every increment exactly; the statistics must match bit for bit.
    const double c2 = std::ldexp(1.0, static_cast<int>(rng() % 40) - 20);
    for (const double c : {c2, -c2, -1.0}) {
      std::vector<double> y(x.size());
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = c * x[j];
      const auto scaled = all_statistics(SampledPath(y));
      for (std::size_t k = 0; k < base.size(); ++k) REQUIRE(scaled[k].value == base[k].value);
    }
    // Any other factor: rounding of c x_j can move a value by an ulp.
    const double c = u(rng);
    if (c == 0.0) continue;
    std::vector<double> y(x.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = c * x[j];
    const auto scaled = all_statistics(SampledPath(y));
    for (std::size_t k = 0; k < base.size(); ++k) {
      REQUIRE(std::fabs(scaled[k].value - base[k].value) <= 1e-12 * std::max(base[k].value, 1e-3));
    }
  }
}

TEST_CASE("polynomial trend invariance", "[ir][property]") {
  Rng rng = make_rng(26);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = test::random_walk(128, rng);
    for (unsigned p = 1; p <= 3; ++p) {
      std::vector<double> coef(p);
      for (auto& c : coef) c = normal(rng);
      std::vector<double> z(x.size());
      for (std::size_t j = 0; j < z.size(); ++j) {
        double v = 0.0;
        for (std::size_t i = coef.size(); i-- > 0;) v = v * x.time(j) + coef[i];
        z[j] = x[j] + v;
      }
      const double a = r_pn(x, p).value;
      const double b = r_pn(SampledPath(z), p).value;
      REQUIRE(std::fabs(a - b) <= 1e-9 * std::fabs(a));
    }
  }
}

TEST_CASE("statistics stay in [0,1] with consistent counts", "[ir][property]") {
  Rng rng = make_rng(27);
  for (int trial = 0; trial < 1000; ++trial) {
    const double zero_prob = (trial % 4) * 0.3;
    const auto x = test::random_walk(16 + trial % 200, rng, zero_prob);
    for (const auto& s : all_statistics(x)) {
      REQUIRE(s.value >= 0.0);
      REQUIRE(s.value <= 1.0);
      REQUIRE(s.zero_over_zero <= s.terms);
    }
  }
}

TEST_CASE("smooth-function limit", "[ir]") {
  std::vector<double> r;
  for (const std::size_t n : {1000, 10000, 100000}) {
    r.push_back(r_pn(test::from_function(n, [](double t) { return std::sin(4.0 * std::numbers::pi * t); }), 1).value);
  }
  CHECK(r[1] >= 0.99);
  CHECK(r[1] >= r[0] - 1e-3);
  CHECK(r[2] >= r[1] - 1e-3);
  for (const std::size_t n : {10, 1000, 100000}) {
    CHECK(r_pn(test::from_function(n, [](double t) { return t + t * t * t; }), 1).value == 1.0);
  }
}

TEST_CASE("degenerate flag", "[ir]") {
  // Quantised walk: most increments are exactly zero.
  Rng rng = make_rng(28);
  const auto x = test::random_walk(1000, rng, 0.9);
  CHECK(r_pn(x, 1).degenerate());
  const auto y = test::random_walk(1000, rng, 0.1);
  CHECK_FALSE(r_pn(y, 1).degenerate());
}
