#ifndef ROUGHIR_GAUSSIAN_LIMITS_HPP
#define ROUGHIR_GAUSSIAN_LIMITS_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "roughir/errors.hpp"

namespace roughir {

// Closed-form limits of the IR statistics for Gaussian tangent processes.

/// lambda(r) = E psi(U1, U2) for standard normals with correlation r:
/// (1/pi) arccos(-r) + (1/pi) sqrt((1+r)/(1-r)) log(2/(1+r)).
inline double lambda(double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw domain_error("lambda: r must lie in [-1,1]");
  if (r == -1.0) return 0.0;
  if (r == 1.0) return 1.0;
  const double log_term = -std::log1p(0.5 * (r - 1.0));  // log(2/(1+r))
  return (std::acos(-r) + std::sqrt((1.0 + r) / (1.0 - r)) * log_term) / std::numbers::pi;
}

/// d lambda / dr = log(2/(1+r)) / (pi (1-r) sqrt(1-r^2)), for |r| < 1.
inline double lambda_derivative(double r) {
  if (!(r > -1.0 && r < 1.0)) throw domain_error("lambda_derivative: r must lie in (-1,1)");
  const double log_term = -std::log1p(0.5 * (r - 1.0));
  return log_term / (std::numbers::pi * (1.0 - r) * std::sqrt(1.0 - r * r));
}

/// Zero-crossing limit (1/pi) arccos(-r).
inline double lambda0(double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw domain_error("lambda0: r must lie in [-1,1]");
  return std::acos(-r) / std::numbers::pi;
}

namespace detail {
inline void check_order_and_hurst(unsigned p, double h, const char* who) {
  if (p != 1 && p != 2) throw domain_error(std::string(who) + ": p must be 1 or 2");
  if (!(h > 0.0 && h < 1.0)) throw domain_error(std::string(who) + ": H must lie in (0,1)");
}
}  // namespace detail

/// Correlation of consecutive unit-grid p-th increments of fBm.
inline double rho_p(unsigned p, double h) {
  detail::check_order_and_hurst(p, h, "rho_p");
  if (p == 1) return std::exp2(2.0 * h - 1.0) - 1.0;
  const double four_h = std::exp2(2.0 * h);
  return (-std::pow(3.0, 2.0 * h) + 4.0 * four_h - 7.0) / (8.0 - 2.0 * four_h);
}

inline double rho_p_derivative(unsigned p, double h) {
  detail::check_order_and_hurst(p, h, "rho_p_derivative");
  const double ln2 = std::numbers::ln2;
  if (p == 1) return 2.0 * ln2 * std::exp2(2.0 * h - 1.0);
  const double four_h = std::exp2(2.0 * h);
  const double nine_h = std::pow(3.0, 2.0 * h);
  const double num = -nine_h + 4.0 * four_h - 7.0;
  const double den = 8.0 - 2.0 * four_h;
  const double dnum = -2.0 * std::log(3.0) * nine_h + 8.0 * ln2 * four_h;
  const double dden = -4.0 * ln2 * four_h;
  return (dnum * den - num * dden) / (den * den);
}

/// Lambda_p(H) = lambda(rho_p(H)): almost-sure limit of R^{p,n} for fBm.
inline double Lambda_p(unsigned p, double h) { return lambda(rho_p(p, h)); }

inline double Lambda_p_derivative(unsigned p, double h) {
  return lambda_derivative(rho_p(p, h)) * rho_p_derivative(p, h);
}

/// Open range of Lambda_2 over H in (0,1): (lambda(-2/3), lambda(0)).
inline double Lambda2_lower() { return lambda(-2.0 / 3.0); }
inline double Lambda2_upper() { return lambda(0.0); }

/// Open range of Lambda_1 over H in (0,1): (lambda(-1/2), lambda(1)).
inline double Lambda1_lower() { return lambda(-0.5); }
inline double Lambda1_upper() { return 1.0; }

/// Inverse of Lambda_p on (0,1) by bisection (absolute tolerance well below 1e-10 in H).
inline double invert_Lambda_p(unsigned p, double v) {
  if (p != 1 && p != 2) throw domain_error("invert_Lambda_p: p must be 1 or 2");
  const double lower = (p == 1) ? Lambda1_lower() : Lambda2_lower();
  const double upper = (p == 1) ? Lambda1_upper() : Lambda2_upper();
  if (!(v > lower && v < upper)) {
    const double boundary = (v <= lower) ? 0.0 : 1.0;
    throw range_error("statistic " + std::to_string(v) + " outside the attainable range (" +
                          std::to_string(lower) + ", " + std::to_string(upper) + ") of Lambda_" +
                          std::to_string(p),
                      boundary, lower, upper);
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (Lambda_p(p, mid) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double invert_Lambda2(double v) { return invert_Lambda_p(2, v); }

/// Covariance of unit-grid p-th increments of standard fBm at lag j.
inline double fbm_increment_cov(unsigned p, double h, std::int64_t j) {
  detail::check_order_and_hurst(p, h, "fbm_increment_cov");
  const double jj = static_cast<double>(std::llabs(j));
  const double two_h = 2.0 * h;
  auto pw = [two_h](double x) { return x == 0.0 ? 0.0 : std::pow(std::fabs(x), two_h); };
  if (p == 1) return 0.5 * (pw(jj + 1.0) + pw(jj - 1.0) - 2.0 * pw(jj));
  return 0.5 * (-pw(jj + 2.0) + 4.0 * pw(jj + 1.0) - 6.0 * pw(jj) + 4.0 * pw(jj - 1.0) -
                pw(jj - 2.0));
}

/// Squared Delta-method factor [d/dx Lambda_2^{-1}(Lambda_2(H))]^2 in the closed form
/// built from rho_2(H), logarithms and powers of 2, 3 and 6.
inline double s2_prefactor(double h) {
  detail::check_order_and_hurst(2, h, "s2_prefactor");
  const double r = rho_p(2, h);
  const double ln2 = std::numbers::ln2;
  const double ln3 = std::log(3.0);
  const double d = 8.0 - std::exp2(2.0 * h + 1.0);
  const double num = std::numbers::pi * d * d * (1.0 - r) * std::sqrt(1.0 - r * r);
  const double den = (ln2 - std::log1p(r)) *
                     (std::exp2(2.0 * h + 2.0) * 9.0 * ln2 - std::pow(3.0, 2.0 * h) * 16.0 * ln3 +
                      std::pow(6.0, 2.0 * h) * 4.0 * std::log(1.5));
  const double f = num / den;
  return f * f;
}

/// Asymptotic variance s_2^2(H) of sqrt(n)(H_hat - H) given Sigma_2(H).
inline double s2_sq(double h, double sigma2) {
  if (!(sigma2 >= 0.0)) throw domain_error("s2_sq: Sigma_2 must be >= 0");
  return s2_prefactor(h) * sigma2;
}

/// Delta-method factor 1 / Lambda_p'(H)^2 for either order.
inline double delta_prefactor(unsigned p, double h) {
  if (p == 2) return s2_prefactor(h);
  const double d = Lambda_p_derivative(p, h);
  return 1.0 / (d * d);
}

/// Two-sided normal quantile z with P(|N(0,1)| <= z) = conf.
inline double normal_quantile_two_sided(double conf) {
  if (!(conf > 0.0 && conf < 1.0)) throw domain_error("confidence level must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * conf);
}

}  // namespace roughir

#endif  // ROUGHIR_GAUSSIAN_LIMITS_HPP
