#ifndef ROUGHIR_SIM_FBM_HPP
#define ROUGHIR_SIM_FBM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "roughir/errors.hpp"
#include "roughir/gaussian_limits.hpp"
#include "roughir/random.hpp"
#include "roughir/sampled_path.hpp"

namespace roughir::sim {

/// Largest grid for which the dense Cholesky fallback is attempted.
inline constexpr std::size_t kMaxDenseSize = std::size_t{1} << 13;

/// E B_H(s) B_H(t) for standard fBm.
inline double fbm_covariance(double s, double t, double h) {
  auto pw = [h](double x) { return x == 0.0 ? 0.0 : std::pow(std::fabs(x), 2.0 * h); };
  return 0.5 * (pw(s) + pw(t) - pw(t - s));
}

namespace detail {

inline std::size_t next_pow2(std::size_t x) {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

inline Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

inline SampledPath cumulative_path(const std::vector<double>& increments, double scale) {
  std::vector<double> x(increments.size() + 1, 0.0);
  for (std::size_t j = 0; j < increments.size(); ++j) x[j + 1] = x[j] + scale * increments[j];
  return SampledPath(std::move(x));
}

}  // namespace detail

/// Exact sampler of fBm on the grid j/n, j = 0..n, with X_0 = 0.
///
/// Fractional Gaussian noise is drawn by circulant embedding (one complex FFT of size
/// M = 2^ceil(log2(2n)) per path). If the embedding has a negative eigenvalue the sampler
/// falls back to a dense Cholesky factor of the Toeplitz increment covariance.
class FbmSampler {
 public:
  FbmSampler(std::size_t n, double h) : n_(n), h_(h) {
    if (!(h > 0.0 && h < 1.0)) throw domain_error("fBm: H must lie in (0,1)");
    if (n < 1) throw size_error("fBm: n must be >= 1");
    const std::size_t m = detail::next_pow2(2 * n);
    std::vector<std::complex<double>> c(m), eig;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t lag = std::min(k, m - k);
      c[k] = fbm_increment_cov(1, h, static_cast<std::int64_t>(lag));
    }
    detail::thread_fft().fwd(eig, c);
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (const auto& e : eig) {
      max_eig = std::max(max_eig, e.real());
      min_eig = std::min(min_eig, e.real());
    }
    if (min_eig < -1e-10 * max_eig) {
      build_cholesky();
      return;
    }
    sqrt_eig_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      sqrt_eig_[k] = std::sqrt(std::max(eig[k].real(), 0.0) / static_cast<double>(m));
    }
  }

  std::size_t n() const noexcept { return n_; }
  double hurst() const noexcept { return h_; }
  bool uses_circulant() const noexcept { return !sqrt_eig_.empty(); }

  /// Unit-lag fractional Gaussian noise of length n (variance 1 per increment).
  std::vector<double> sample_noise(Rng& rng) const {
    std::normal_distribution<double> normal;
    std::vector<double> out(n_);
    if (uses_circulant()) {
      const std::size_t m = sqrt_eig_.size();
      std::vector<std::complex<double>> z(m), y;
      for (std::size_t k = 0; k < m; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        z[k] = {sqrt_eig_[k] * re, sqrt_eig_[k] * im};
      }
      detail::thread_fft().fwd(y, z);
      for (std::size_t j = 0; j < n_; ++j) out[j] = y[j].real();
    } else {
      Eigen::VectorXd z(static_cast<Eigen::Index>(n_));
      for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
      const Eigen::VectorXd y = chol_.triangularView<Eigen::Lower>() * z;
      for (std::size_t j = 0; j < n_; ++j) out[j] = y[static_cast<Eigen::Index>(j)];
    }
    return out;
  }

  /// Two independent noise vectors from one circulant FFT (real and imaginary parts).
  /// Falls back to two sequential draws when the dense factor is in use.
  std::pair<std::vector<double>, std::vector<double>> sample_noise_pair(Rng& rng) const {
    if (!uses_circulant()) {
      auto first = sample_noise(rng);
      return {std::move(first), sample_noise(rng)};
    }
    std::normal_distribution<double> normal;
    const std::size_t m = sqrt_eig_.size();
    std::vector<std::complex<double>> z(m), y;
    for (std::size_t k = 0; k < m; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      z[k] = {sqrt_eig_[k] * re, sqrt_eig_[k] * im};
    }
    detail::thread_fft().fwd(y, z);
    std::pair<std::vector<double>, std::vector<double>> out{std::vector<double>(n_),
                                                            std::vector<double>(n_)};
    for (std::size_t j = 0; j < n_; ++j) {
      out.first[j] = y[j].real();
      out.second[j] = y[j].imag();
    }
    return out;
  }

  SampledPath sample(Rng& rng) const {
    return detail::cumulative_path(sample_noise(rng), std::pow(static_cast<double>(n_), -h_));
  }

 private:
  void build_cholesky() {
    if (n_ > kMaxDenseSize) {
      throw factorization_error("fBm: circulant embedding not nonnegative and n = " +
                                std::to_string(n_) + " exceeds the dense fallback limit");
    }
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) cov(i, j) = fbm_increment_cov(1, h_, i - j);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw factorization_error("fBm: Cholesky fallback failed");
    chol_ = llt.matrixL();
  }

  std::size_t n_;
  double h_;
  std::vector<double> sqrt_eig_;
  Eigen::MatrixXd chol_;
};

inline SampledPath sim_fbm(std::size_t n, double h, std::uint64_t seed) {
  Rng rng = make_rng(seed, stream::kPath);
  return FbmSampler(n, h).sample(rng);
}

/// Standard Brownian motion on j/n.
inline SampledPath sim_brownian(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw size_error("brownian: n must be >= 1");
  Rng rng = make_rng(seed, stream::kPath);
  std::normal_distribution<double> normal;
  std::vector<double> inc(n);
  for (auto& v : inc) v = normal(rng);
  return detail::cumulative_path(inc, 1.0 / std::sqrt(static_cast<double>(n)));
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_FBM_HPP
