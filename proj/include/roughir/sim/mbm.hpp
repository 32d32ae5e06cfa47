#ifndef ROUGHIR_SIM_MBM_HPP
#define ROUGHIR_SIM_MBM_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "roughir/errors.hpp"
#include "roughir/random.hpp"
#include "roughir/sampled_path.hpp"
#include "roughir/sim/fbm.hpp"

namespace roughir::sim {

/// V(h) = int_R |e^{i x} - 1|^2 |x|^{-2h-1} dx = pi / (h Gamma(2h) sin(pi h)).
inline double harmonizable_constant(double h) {
  return std::numbers::pi / (h * std::tgamma(2.0 * h) * std::sin(std::numbers::pi * h));
}

/// Covariance of harmonizable multifractional Brownian motion, normalised so that
/// E X_t^2 = t^{2H(t)} (the fBm convention). With hs == ht it reduces to the fBm covariance.
inline double mbm_covariance(double s, double t, double hs, double ht) {
  const double sum = hs + ht;
  const double cross = harmonizable_constant(0.5 * sum) /
                       std::sqrt(harmonizable_constant(hs) * harmonizable_constant(ht));
  auto pw = [sum](double x) { return x == 0.0 ? 0.0 : std::pow(std::fabs(x), sum); };
  return cross * 0.5 * (pw(s) + pw(t) - pw(t - s));
}

/// Dense-factorisation sampler of mBm on j/n for a fixed H(.): the increment covariance is
/// factorised once (O(n^3)) and each path costs one triangular matrix-vector product.
class MbmSampler {
 public:
  MbmSampler(std::size_t n, const std::function<double(double)>& hurst,
             std::size_t max_n = kMaxDenseSize)
      : n_(n) {
    if (n < 1) throw size_error("mBm: n must be >= 1");
    if (n > max_n) {
      throw size_error("mBm: n = " + std::to_string(n) + " exceeds the dense-synthesis limit " +
                       std::to_string(max_n));
    }
    h_.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(n);
      h_[j] = hurst(t);
      if (!(h_[j] > 0.0 && h_[j] < 1.0)) {
        throw domain_error("mBm: H(t) must lie in (0,1); H(" + std::to_string(t) +
                           ") = " + std::to_string(h_[j]));
      }
    }
    factorize();
  }

  std::size_t n() const noexcept { return n_; }
  /// Diagonal jitter that was needed for a successful factorisation (0 if none).
  double jitter() const noexcept { return jitter_; }

  SampledPath sample(Rng& rng) const {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(static_cast<Eigen::Index>(n_));
    for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
    const Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>() * z;
    std::vector<double> x(n_ + 1, 0.0);
    for (std::size_t j = 0; j < n_; ++j) x[j + 1] = x[j] + y[static_cast<Eigen::Index>(j)];
    return SampledPath(std::move(x));
  }

 private:
  void fill(double jitter) {
    const auto n = static_cast<Eigen::Index>(n_);
    const double nd = static_cast<double>(n_);
    chol_.resize(n, n);
    // Rolling rows of C(t_r, t_c); row 0 is identically zero because X_0 = 0.
    std::vector<double> prev(n_ + 1, 0.0), cur(n_ + 1, 0.0);
    for (std::size_t r = 1; r <= n_; ++r) {
      const double tr = static_cast<double>(r) / nd;
      for (std::size_t c = 0; c <= r; ++c) {
        cur[c] = (c == 0) ? 0.0 : covariance(r, c, tr, static_cast<double>(c) / nd);
      }
      // Increment covariance row i = r-1: Cov(dX_i, dX_j) for j <= i.
      const std::size_t i = r - 1;
      for (std::size_t j = 0; j <= i; ++j) {
        // C(t_i, t_{i+1}) is not in the previous row; use symmetry.
        const double prev_j1 = (j < i) ? prev[j + 1] : cur[i];
        chol_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            cur[j + 1] - cur[j] - prev_j1 + prev[j];
      }
      chol_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += jitter;
      std::swap(prev, cur);
    }
  }

  double covariance(std::size_t r, std::size_t c, double tr, double tc) const {
    const double sum = h_[r] + h_[c];
    const double cross = (h_[r] == h_[c])
                             ? 1.0
                             : harmonizable_constant(0.5 * sum) * inv_sqrt_v_[r] * inv_sqrt_v_[c];
    auto pw = [sum](double x) { return x == 0.0 ? 0.0 : std::pow(std::fabs(x), sum); };
    return cross * 0.5 * (pw(tr) + pw(tc) - pw(tc - tr));
  }

  void factorize() {
    inv_sqrt_v_.resize(h_.size());
    for (std::size_t j = 0; j < h_.size(); ++j) {
      inv_sqrt_v_[j] = 1.0 / std::sqrt(harmonizable_constant(h_[j]));
    }
    double jitter = 0.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
      fill(jitter);
      Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(chol_);
      if (llt.info() == Eigen::Success) {
        jitter_ = jitter;
        chol_.triangularView<Eigen::StrictlyUpper>().setZero();
        return;
      }
      const double scale = std::pow(static_cast<double>(n_), -2.0 * h_[n_ / 2]);
      jitter = (jitter == 0.0) ? 1e-12 * scale : jitter * 100.0;
    }
    throw factorization_error("mBm: increment covariance not positive definite after jitter retries "
                              "(last jitter " + std::to_string(jitter) + ")");
  }

  std::size_t n_;
  std::vector<double> h_;
  std::vector<double> inv_sqrt_v_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

inline SampledPath sim_mbm(std::size_t n, const std::function<double(double)>& hurst,
                           std::uint64_t seed) {
  Rng rng = make_rng(seed, stream::kPath);
  return MbmSampler(n, hurst).sample(rng);
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_MBM_HPP
