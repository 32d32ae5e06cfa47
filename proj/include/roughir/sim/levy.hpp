#ifndef ROUGHIR_SIM_LEVY_HPP
#define ROUGHIR_SIM_LEVY_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/random.hpp"
#include "roughir/sampled_path.hpp"
#include "roughir/stable_sampling.hpp"

namespace roughir::sim {

/// Symmetric alpha-stable Levy motion: partial sums of iid scale * n^{-1/alpha} * Z_alpha.
inline SampledPath sim_levy_stable(std::size_t n, double alpha, double scale, std::uint64_t seed) {
  check_stable_index(alpha);
  if (!(scale > 0.0)) throw domain_error("levy_stable: scale must be > 0");
  if (n < 1) throw size_error("levy_stable: n must be >= 1");
  Rng rng = make_rng(seed, stream::kPath);
  const double step_scale = scale * std::pow(static_cast<double>(n), -1.0 / alpha);
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    x[j + 1] = x[j] + step_scale * sample_sym_stable(alpha, rng);
    if (!std::isfinite(x[j + 1])) {
      throw simulation_error("levy_stable: increment overflowed (alpha too small)", j);
    }
  }
  return SampledPath(std::move(x));
}

/// Levy process a * B + compound Poisson + small-jump stable-like part.
///
/// The small-jump part has Levy measure (c alpha / 2) |u|^{-1-alpha} on 0 < |u| < cutoff, so its
/// tail K(u) = c (u^{-alpha} - cutoff^{-alpha}) behaves like c / u^alpha at the origin. Per grid
/// step, jumps with |u| >= delta are drawn exactly (delta is chosen so that on average
/// jumps_per_step of them fall in one step) and the sum of jumps below delta is replaced by a
/// Gaussian with the same variance.
struct CompoundSpec {
  double brownian_weight = 0.0;
  double jump_rate = 0.0;   // big jumps per unit time
  double jump_scale = 1.0;  // big jumps ~ N(0, jump_scale^2)
  double small_alpha = 0.0;  // 0 disables the small-jump part
  double small_c = 1.0;
  double small_cutoff = 1.0;
  double jumps_per_step = 64.0;
};

inline void validate(const CompoundSpec& s) {
  if (!(s.brownian_weight >= 0.0)) throw domain_error("levy_compound: Brownian weight must be >= 0");
  if (!(s.jump_rate >= 0.0)) throw domain_error("levy_compound: jump rate must be >= 0");
  if (!(s.jump_scale > 0.0)) throw domain_error("levy_compound: jump scale must be > 0");
  if (s.small_alpha != 0.0) {
    if (!(s.small_alpha > 0.0 && s.small_alpha < 2.0)) {
      throw domain_error("levy_compound: small-jump index must lie in (0,2)");
    }
    if (!(s.small_c > 0.0)) throw domain_error("levy_compound: small-jump intensity must be > 0");
    if (!(s.small_cutoff > 0.0)) throw domain_error("levy_compound: cutoff must be > 0");
    if (!(s.jumps_per_step >= 1.0)) throw domain_error("levy_compound: jumps_per_step must be >= 1");
  }
}

inline SampledPath sim_levy_compound(std::size_t n, const CompoundSpec& spec, std::uint64_t seed) {
  validate(spec);
  if (n < 1) throw size_error("levy_compound: n must be >= 1");
  const double dt = 1.0 / static_cast<double>(n);
  std::vector<double> inc(n, 0.0);

  if (spec.brownian_weight > 0.0) {
    Rng rng = make_rng(seed, stream::kBrownianPart);
    std::normal_distribution<double> normal;
    const double sd = spec.brownian_weight * std::sqrt(dt);
    for (auto& v : inc) v += sd * normal(rng);
  }

  if (spec.jump_rate > 0.0) {
    Rng rng = make_rng(seed, stream::kBigJumps);
    std::poisson_distribution<long> count(spec.jump_rate * dt);
    std::normal_distribution<double> jump(0.0, spec.jump_scale);
    for (auto& v : inc) {
      for (long k = count(rng); k > 0; --k) v += jump(rng);
    }
  }

  if (spec.small_alpha > 0.0) {
    Rng rng = make_rng(seed, stream::kSmallJumps);
    const double a = spec.small_alpha;
    const double eps_pow = std::pow(spec.small_cutoff, -a);
    const double delta_pow = spec.jumps_per_step / (spec.small_c * dt) + eps_pow;  // delta^{-a}
    const double delta = std::pow(delta_pow, -1.0 / a);
    const double residual_sd = std::sqrt(dt * spec.small_c * a * std::pow(delta, 2.0 - a) / (2.0 - a));
    const double mean_jumps = spec.small_c * dt * (delta_pow - eps_pow);
    std::poisson_distribution<long> count(mean_jumps);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& v : inc) {
      double s = residual_sd * normal(rng);
      for (long k = count(rng); k > 0; --k) {
        const double u = unit(rng);
        const double mag = std::pow(delta_pow - u * (delta_pow - eps_pow), -1.0 / a);
        s += (unit(rng) < 0.5) ? -mag : mag;
      }
      v += s;
    }
  }

  std::vector<double> x(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[j + 1] = x[j] + inc[j];
  return SampledPath(std::move(x));
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_LEVY_HPP
