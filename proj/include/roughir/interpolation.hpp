#ifndef ROUGHIR_INTERPOLATION_HPP
#define ROUGHIR_INTERPOLATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roughir/errors.hpp"

namespace roughir {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes (shape preserving:
/// monotone data give a monotone interpolant). Evaluation outside [x_front, x_back] throws.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t m = x_.size();
    if (m < 2 || y_.size() != m) throw domain_error("MonotoneCubic needs >= 2 matching points");
    for (std::size_t i = 1; i < m; ++i) {
      if (!(x_[i] > x_[i - 1])) throw domain_error("MonotoneCubic: abscissae must increase");
    }
    std::vector<double> delta(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    slope_.assign(m, 0.0);
    slope_[0] = delta[0];
    slope_[m - 1] = delta[m - 2];
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slope_[i] = 0.0;
      } else {
        // Weighted harmonic mean (Fritsch-Butland), which satisfies the monotonicity bound.
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double w1 = 2.0 * h1 + h0;
        const double w2 = h1 + 2.0 * h0;
        slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (delta[i] == 0.0) {
        slope_[i] = 0.0;
        slope_[i + 1] = 0.0;
      }
    }
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }

  bool covers(double t) const { return !x_.empty() && t >= x_.front() && t <= x_.back(); }

  double operator()(double t) const {
    if (!covers(t)) {
      throw interpolation_error("interpolation at " + std::to_string(t) + " outside the grid [" +
                                std::to_string(x_.front()) + ", " + std::to_string(x_.back()) +
                                "]");
    }
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

/// Weighted isotonic regression (pool-adjacent-violators). Returns the nonincreasing
/// (decreasing = true) or nondecreasing least-squares fit.
inline std::vector<double> isotonic_regression(std::span<const double> y, std::span<const double> w,
                                               bool decreasing) {
  const std::size_t m = y.size();
  if (w.size() != m) throw domain_error("isotonic_regression: weight size mismatch");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(m);
  const double sign = decreasing ? -1.0 : 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(w[i] > 0.0)) throw domain_error("isotonic_regression: weights must be positive");
    blocks.push_back({sign * y[i], w[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double tw = a.weight + b.weight;
      a.mean = (a.mean * a.weight + b.mean * b.weight) / tw;
      a.weight = tw;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(m);
  for (const Block& b : blocks) out.insert(out.end(), b.count, sign * b.mean);
  return out;
}

}  // namespace roughir

#endif  // ROUGHIR_INTERPOLATION_HPP
