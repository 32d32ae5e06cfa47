#ifndef ROUGHIR_INCREMENTS_HPP
#define ROUGHIR_INCREMENTS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/sampled_path.hpp"

namespace roughir {

/// Absolute tolerance for the vanishing-moment conditions of a Filter.
inline constexpr double kFilterMomentTolerance = 1e-12;

namespace detail {

inline double filter_moment(std::span<const double> coeffs, unsigned power) {
  double s = 0.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    s += std::pow(static_cast<double>(l), static_cast<double>(power)) * coeffs[l];
  }
  return s;
}

// Shared by p_increment and filtered_increment so both round identically.
inline double apply_filter(std::span<const double> values, std::span<const double> coeffs,
                           std::size_t j) {
  double s = 0.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    s += coeffs[l] * values[j + l];
  }
  return s;
}

inline std::vector<double> binomial_coefficients(unsigned p) {
  // (-1)^(p-l) C(p,l), built by the multiplicative recurrence in exact integer arithmetic.
  std::vector<double> c(p + 1);
  long double binom = 1.0L;
  for (unsigned l = 0; l <= p; ++l) {
    if (l > 0) binom = binom * static_cast<long double>(p - l + 1) / static_cast<long double>(l);
    const double sign = ((p - l) % 2 == 0) ? 1.0 : -1.0;
    c[l] = sign * static_cast<double>(std::llround(binom));
  }
  return c;
}

}  // namespace detail

/// Coefficient vector a_0..a_q with vanishing moments of order p:
/// sum_l l^i a_l = 0 for i < p and sum_l l^p a_l != 0.
class Filter {
 public:
  Filter(std::vector<double> coeffs, unsigned order) : coeffs_(std::move(coeffs)), order_(order) {
    if (coeffs_.size() < 2) throw domain_error("Filter needs at least two coefficients");
    if (order_ == 0) throw domain_error("Filter order must be >= 1");
    if (order_ > q()) throw domain_error("Filter order exceeds q");
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw domain_error("Filter coefficient is not finite");
    }
    for (unsigned i = 0; i < order_; ++i) {
      const double m = detail::filter_moment(coeffs_, i);
      if (std::fabs(m) > kFilterMomentTolerance) {
        throw domain_error("Filter moment " + std::to_string(i) + " is " + std::to_string(m) +
                           ", expected 0");
      }
    }
    if (std::fabs(detail::filter_moment(coeffs_, order_)) <= kFilterMomentTolerance) {
      throw domain_error("Filter moment of order p vanishes; true order is higher than " +
                         std::to_string(order_));
    }
  }

  /// Builds a filter whose order is the first non-vanishing moment.
  static Filter with_detected_order(std::vector<double> coeffs) {
    if (coeffs.size() < 2) throw domain_error("Filter needs at least two coefficients");
    const unsigned q = static_cast<unsigned>(coeffs.size() - 1);
    for (unsigned i = 0; i <= q; ++i) {
      if (std::fabs(detail::filter_moment(coeffs, i)) > kFilterMomentTolerance) {
        if (i == 0) throw domain_error("Filter coefficients do not sum to zero");
        return Filter(std::move(coeffs), i);
      }
    }
    throw domain_error("Filter has no non-vanishing moment up to order q");
  }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t q() const noexcept { return coeffs_.size() - 1; }
  unsigned order() const noexcept { return order_; }

 private:
  std::vector<double> coeffs_;
  unsigned order_;
};

/// (-1)^(p-l) C(p,l), l = 0..p: the p-th order difference as a Filter in A(p,p).
inline Filter make_binomial_filter(unsigned p) {
  if (p == 0) throw domain_error("make_binomial_filter: p must be >= 1");
  return Filter(detail::binomial_coefficients(p), p);
}

/// p-th order increment at j/n: sum_i (-1)^(p-i) C(p,i) f((j+i)/n).
inline double p_increment(const SampledPath& path, unsigned p, std::size_t j) {
  if (p == 0) throw domain_error("p_increment: p must be >= 1");
  if (p >= path.n()) {
    throw size_error("p_increment: order " + std::to_string(p) + " needs n > p, n = " +
                     std::to_string(path.n()));
  }
  if (j > path.n() - p) {
    throw range_error("p_increment: index " + std::to_string(j) + " outside [0, " +
                      std::to_string(path.n() - p) + "]");
  }
  const auto c = detail::binomial_coefficients(p);
  return detail::apply_filter(path.values(), c, j);
}

/// sum_l a_l f((j+l)/n), valid for 0 <= j <= n - q.
inline double filtered_increment(const SampledPath& path, const Filter& a, std::size_t j) {
  if (a.q() > path.n() || j > path.n() - a.q()) {
    throw range_error("filtered_increment: index " + std::to_string(j) + " outside the valid range");
  }
  return detail::apply_filter(path.values(), a.coeffs(), j);
}

/// All filtered increments j = 0..n-q in one pass.
inline std::vector<double> filtered_increments(const SampledPath& path, const Filter& a) {
  if (a.q() > path.n()) throw size_error("filtered_increments: filter longer than path");
  std::vector<double> d(path.n() - a.q() + 1);
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = detail::apply_filter(path.values(), a.coeffs(), j);
  return d;
}

}  // namespace roughir

#endif  // ROUGHIR_INCREMENTS_HPP
