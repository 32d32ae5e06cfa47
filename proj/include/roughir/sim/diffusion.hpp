#ifndef ROUGHIR_SIM_DIFFUSION_HPP
#define ROUGHIR_SIM_DIFFUSION_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/random.hpp"
#include "roughir/sampled_path.hpp"

namespace roughir::sim {

inline constexpr std::size_t kDefaultEulerRefinement = 64;

/// Euler-Maruyama path of dX = a(X) dB + b(X) dt on [0,1], run at step 1/(n * refine) and
/// recorded on j/n. The caller guarantees |a| bounded away from 0 on the visited range.
inline SampledPath sim_diffusion(std::size_t n, const std::function<double(double)>& a,
                                 const std::function<double(double)>& b, double x0,
                                 std::size_t refine, std::uint64_t seed) {
  if (n < 1) throw size_error("diffusion: n must be >= 1");
  if (refine < 16) throw domain_error("diffusion: refinement factor must be >= 16");
  if (!std::isfinite(x0)) throw domain_error("diffusion: x0 must be finite");
  Rng rng = make_rng(seed, stream::kPath);
  std::normal_distribution<double> normal;
  const double dt = 1.0 / (static_cast<double>(n) * static_cast<double>(refine));
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> path(n + 1);
  path[0] = x0;
  double x = x0;
  std::size_t step = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t r = 0; r < refine; ++r, ++step) {
      const double diff = a(x);
      const double drift = b(x);
      if (!std::isfinite(diff) || !std::isfinite(drift)) {
        throw simulation_error("diffusion: non-finite coefficient at x = " + std::to_string(x),
                               step);
      }
      x += diff * sqrt_dt * normal(rng) + drift * dt;
      if (!std::isfinite(x)) throw simulation_error("diffusion: state diverged", step);
    }
    path[j] = x;
  }
  return SampledPath(std::move(path));
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_DIFFUSION_HPP
