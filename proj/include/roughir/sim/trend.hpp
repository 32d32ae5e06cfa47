#ifndef ROUGHIR_SIM_TREND_HPP
#define ROUGHIR_SIM_TREND_HPP

#include <functional>
#include <string>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/sampled_path.hpp"

namespace roughir::sim {

/// Z_{j/n} = alpha(j/n) X_{j/n} + beta(j/n). alpha must be positive on the grid.
inline SampledPath apply_trend(const SampledPath& path, const std::function<double(double)>& alpha,
                               const std::function<double(double)>& beta) {
  std::vector<double> z(path.size());
  for (std::size_t j = 0; j < path.size(); ++j) {
    const double t = path.time(j);
    const double a = alpha(t);
    if (!(a > 0.0)) {
      throw domain_error("apply_trend: multiplicative trend must be > 0, got " + std::to_string(a) +
                         " at t = " + std::to_string(t));
    }
    z[j] = a * path[j] + beta(t);
  }
  return SampledPath(std::move(z));
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_TREND_HPP
