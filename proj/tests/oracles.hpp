#ifndef ROUGHIR_TEST_ORACLES_HPP
#define ROUGHIR_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace roughir::test {

// E psi(U1, U2) for standard normals with correlation r. psi is 0-homogeneous, so the radial
// part of the 2-D Gaussian integral is 1 and only the angle remains:
// E psi = (1/2pi) int psi(cos th, r cos th + s sin th) dth, s = sqrt(1 - r^2).
// The integrand has kinks where either argument or their sum vanishes; integrate piecewise.
inline double lambda_by_quadrature(double r) {
  const double s = std::sqrt(1.0 - r * r);
  auto f = [&](double th) {
    const double x = std::cos(th);
    const double y = r * x + s * std::sin(th);
    const double den = std::fabs(x) + std::fabs(y);
    return den == 0.0 ? 1.0 : std::fabs(x + y) / den;
  };
  const double pi = std::numbers::pi;
  std::vector<double> cuts{0.0, 2.0 * pi};
  auto add_zeros = [&](double a, double b) {  // zeros of a cos th + b sin th
    double th = std::atan2(-a, b);
    for (int k = -2; k <= 2; ++k) {
      const double t = th + k * pi;
      if (t > 0.0 && t < 2.0 * pi) cuts.push_back(t);
    }
  };
  add_zeros(1.0, 0.0);        // x = 0
  add_zeros(r, s);            // y = 0
  add_zeros(1.0 + r, s);      // x + y = 0
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-15) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-14);
  }
  return total / (2.0 * pi);
}

}  // namespace roughir::test

#endif
