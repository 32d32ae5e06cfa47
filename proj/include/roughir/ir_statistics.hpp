#ifndef ROUGHIR_IR_STATISTICS_HPP
#define ROUGHIR_IR_STATISTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "roughir/compensated_sum.hpp"
#include "roughir/errors.hpp"
#include "roughir/increments.hpp"
#include "roughir/sampled_path.hpp"

namespace roughir {

/// Value of an increment-ratio statistic with its bookkeeping.
struct IRSummary {
  double value = 1.0;
  std::size_t terms = 0;
  /// Summands whose two increments were both exactly zero (0/0 := 1 applied).
  std::size_t zero_over_zero = 0;

  /// More than half of the summands hit the 0/0 convention: constant or quantised input.
  bool degenerate() const noexcept { return 2 * zero_over_zero > terms; }
};

/// |x + y| / (|x| + |y|), with 0/0 := 1.
inline double psi(double x, double y) noexcept {
  const double den = std::fabs(x) + std::fabs(y);
  if (den == 0.0) return 1.0;
  return std::fabs(x + y) / den;
}

/// Sign-persistence indicator 1(x*y >= 0).
inline double psi0(double x, double y) noexcept {
  // Compare signs rather than the product, which can underflow to 0 for tiny opposite values.
  if (x == 0.0 || y == 0.0) return 1.0;
  return (std::signbit(x) == std::signbit(y)) ? 1.0 : 0.0;
}

struct PsiKernel {
  double operator()(double x, double y) const noexcept { return psi(x, y); }
};
struct Psi0Kernel {
  double operator()(double x, double y) const noexcept { return psi0(x, y); }
};

namespace detail {

// Average of kernel(d[k], d[k + lag]) for k = first, first + stride, ..., last (inclusive).
template <class Kernel>
IRSummary ratio_average(std::span<const double> d, std::size_t first, std::size_t last,
                        std::size_t stride, std::size_t lag, Kernel kernel) {
  IRSummary out;
  CompensatedSum acc;
  for (std::size_t k = first; k <= last; k += stride) {
    const double x = d[k];
    const double y = d[k + lag];
    if (x == 0.0 && y == 0.0) ++out.zero_over_zero;
    acc += kernel(x, y);
    ++out.terms;
  }
  out.value = acc.value() / static_cast<double>(out.terms);
  // Compensated rounding can leave the mean a few ulps outside [0,1].
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

template <class Kernel>
IRSummary consecutive_statistic(const SampledPath& path, const Filter& a, Kernel kernel) {
  if (path.n() < a.q() + 2) {
    throw size_error("statistic needs n >= q + 2 (q = " + std::to_string(a.q()) +
                     "), got n = " + std::to_string(path.n()));
  }
  const auto d = filtered_increments(path, a);
  // n - q summands, k = 0..n-q-1, each pairing increments k and k+1.
  return ratio_average(std::span<const double>(d), 0, d.size() - 2, 1, 1, kernel);
}

template <class Kernel>
IRSummary even_pair_statistic(const SampledPath& path, Kernel kernel) {
  std::size_t n = path.n();
  if (n < 6) throw size_error("R-tilde statistic needs n >= 6, got n = " + std::to_string(n));
  if (n % 2 == 1) --n;  // drop the final sample
  std::vector<double> d(n - 1);
  const auto v = path.values();
  const auto c = binomial_coefficients(2);
  for (std::size_t j = 0; j + 2 <= n; ++j) d[j] = apply_filter(v, c, j);
  // k = 0..(n-4)/2 pairs second differences at 2k and 2k+2: n/2 - 1 summands.
  return ratio_average(std::span<const double>(d), 0, n - 4, 2, 2, kernel);
}

}  // namespace detail

/// Generalised-variation IR statistic R^{a,n}: mean of psi over consecutive filtered increments.
inline IRSummary r_an(const SampledPath& path, const Filter& a) {
  return detail::consecutive_statistic(path, a, PsiKernel{});
}

/// R^{p,n}: the IR statistic on p-th order increments, normalised by n - p.
inline IRSummary r_pn(const SampledPath& path, unsigned p) {
  return r_an(path, make_binomial_filter(p));
}

/// Zero-crossing variant of R^{p,n} (psi replaced by psi0).
inline IRSummary r0_pn(const SampledPath& path, unsigned p) {
  return detail::consecutive_statistic(path, make_binomial_filter(p), Psi0Kernel{});
}

/// Localised second-order statistic around t0 with window half-width n^w.
///
/// Terms k in [floor(n t0 - n^w), floor(n t0 + n^w)] clipped to [0, n-3]; the average is taken
/// over the terms actually present.
inline IRSummary r_local(const SampledPath& path, double t0, double w) {
  if (!(t0 > 0.0 && t0 < 1.0)) throw domain_error("r_local: t0 must lie in (0,1)");
  if (!(w > 0.0 && w < 1.0)) throw domain_error("r_local: window exponent must lie in (0,1)");
  const std::size_t n = path.n();
  if (n < 4) throw size_error("r_local needs n >= 4");
  const double nd = static_cast<double>(n);
  const double half = std::pow(nd, w);
  const double lo = std::floor(nd * t0 - half);
  const double hi = std::floor(nd * t0 + half);
  const double last_valid = static_cast<double>(n - 3);
  const double first = std::max(lo, 0.0);
  const double last = std::min(hi, last_valid);
  if (first > last) throw size_error("r_local: window is empty after clipping");
  const auto d = filtered_increments(path, make_binomial_filter(2));
  return detail::ratio_average(std::span<const double>(d), static_cast<std::size_t>(first),
                               static_cast<std::size_t>(last), 1, 1, PsiKernel{});
}

/// R-tilde: psi over disjoint even-indexed second differences (2k, 2k+2), k = 0..(n-4)/2.
/// Odd n drops the last sample.
inline IRSummary r_tilde_2n(const SampledPath& path) {
  return detail::even_pair_statistic(path, PsiKernel{});
}

/// R-tilde with the zero-crossing indicator psi0.
inline IRSummary r0_tilde_2n(const SampledPath& path) {
  return detail::even_pair_statistic(path, Psi0Kernel{});
}

}  // namespace roughir

#endif  // ROUGHIR_IR_STATISTICS_HPP
