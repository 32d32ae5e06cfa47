#ifndef ROUGHIR_STABLE_SAMPLING_HPP
#define ROUGHIR_STABLE_SAMPLING_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "roughir/errors.hpp"
#include "roughir/random.hpp"

namespace roughir {

/// Uniform angle and unit exponential feeding the Chambers-Mallows-Stuck construction.
/// Keeping them explicit lets a table reuse the same draws for every alpha.
struct StableUniforms {
  double angle;        // uniform on (-pi/2, pi/2)
  double exponential;  // Exp(1)
};

inline StableUniforms draw_stable_uniforms(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u;
  do {
    u = unit(rng);
  } while (u == 0.0);
  std::exponential_distribution<double> expo(1.0);
  double w;
  do {
    w = expo(rng);
  } while (w == 0.0);
  return {std::numbers::pi * (u - 0.5), w};
}

/// Signed log-magnitude of a symmetric stable draw; stays finite where the value itself would
/// overflow (small alpha).
struct LogMagnitude {
  bool negative;
  double log_abs;  // -inf encodes an exact zero
};

inline void check_stable_index(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw domain_error("stable index alpha must lie in (0,2]");
}

/// Chambers-Mallows-Stuck draw with characteristic function exp(-|theta|^alpha), in log form.
inline LogMagnitude symmetric_stable_log(double alpha, const StableUniforms& u) {
  const double v = u.angle;
  const double s = std::sin(alpha * v);
  if (s == 0.0) return {false, -INFINITY};
  const double log_abs = std::log(std::fabs(s)) - std::log(std::cos(v)) / alpha +
                         ((1.0 - alpha) / alpha) *
                             (std::log(std::cos((1.0 - alpha) * v)) - std::log(u.exponential));
  return {s < 0.0, log_abs};
}

inline double symmetric_stable(double alpha, const StableUniforms& u) {
  if (alpha == 1.0) return std::tan(u.angle);
  const LogMagnitude z = symmetric_stable_log(alpha, u);
  const double mag = std::exp(z.log_abs);
  return z.negative ? -mag : mag;
}

/// One draw of a standard symmetric alpha-stable variable, E exp(i theta Z) = exp(-|theta|^alpha).
/// At alpha = 2 this is N(0, 2); at alpha = 1 standard Cauchy.
inline double sample_sym_stable(double alpha, Rng& rng) {
  check_stable_index(alpha);
  return symmetric_stable(alpha, draw_stable_uniforms(rng));
}

/// psi(x, y) evaluated from signed log-magnitudes.
inline double psi_from_logs(const LogMagnitude& x, const LogMagnitude& y) {
  if (x.log_abs == -INFINITY && y.log_abs == -INFINITY) return 1.0;
  if (x.negative == y.negative || x.log_abs == -INFINITY || y.log_abs == -INFINITY) return 1.0;
  // |(|x| - |y|)| / (|x| + |y|) = |1 - r| / (1 + r), r = min/max ratio.
  const double r = std::exp(-std::fabs(x.log_abs - y.log_abs));
  return (1.0 - r) / (1.0 + r);
}

}  // namespace roughir

#endif  // ROUGHIR_STABLE_SAMPLING_HPP
