#ifndef ROUGHIR_SAMPLED_PATH_HPP
#define ROUGHIR_SAMPLED_PATH_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughir/errors.hpp"

namespace roughir {

/// Equispaced sample (f(0/n), f(1/n), ..., f(n/n)) of one path on [0,1].
///
/// Immutable once built. Construction rejects fewer than two samples and any non-finite entry.
class SampledPath {
 public:
  explicit SampledPath(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
      throw size_error("SampledPath needs at least 2 samples (n >= 1), got " +
                       std::to_string(values_.size()));
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!std::isfinite(values_[j])) {
        throw domain_error("SampledPath: non-finite value at index " + std::to_string(j));
      }
    }
  }

  /// Grid size: the path holds n + 1 samples.
  std::size_t n() const noexcept { return values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double time(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(n());
  }

  friend bool operator==(const SampledPath&, const SampledPath&) = default;

 private:
  std::vector<double> values_;
};

}  // namespace roughir

#endif  // ROUGHIR_SAMPLED_PATH_HPP
