#ifndef ROUGHIR_SIM_MULTISCALE_FBM_HPP
#define ROUGHIR_SIM_MULTISCALE_FBM_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/random.hpp"
#include "roughir/sampled_path.hpp"
#include "roughir/sim/fbm.hpp"

namespace roughir::sim {

/// One band of a piecewise power-law spectral density:
/// f(xi) = sigma^2 / |xi|^(2H+1) for omega_lo <= |xi| < next band's omega_lo.
struct SpectralBand {
  double omega_lo;
  double sigma;
  double hurst;
};

/// Frequency discretisation: cutoff = cutoff_factor * n * pi, grid_points midpoint cells.
struct SpectralGrid {
  unsigned cutoff_factor = 64;
  std::size_t grid_points = std::size_t{1} << 20;
};

inline void validate_bands(const std::vector<SpectralBand>& bands) {
  if (bands.empty()) throw domain_error("multiscale fBm: at least one band required");
  if (bands.front().omega_lo != 0.0) throw domain_error("multiscale fBm: first band must start at 0");
  for (std::size_t j = 0; j < bands.size(); ++j) {
    if (!(bands[j].sigma > 0.0)) throw domain_error("multiscale fBm: sigma_j must be > 0");
    if (!std::isfinite(bands[j].hurst)) throw domain_error("multiscale fBm: H_j must be finite");
    if (j > 0 && !(bands[j].omega_lo > bands[j - 1].omega_lo)) {
      throw domain_error("multiscale fBm: band frequencies must increase");
    }
  }
  if (!(bands.front().hurst < 1.0)) throw domain_error("multiscale fBm: H_0 must be < 1");
  if (!(bands.back().hurst > 0.0)) throw domain_error("multiscale fBm: H_l must be > 0");
}

/// Piecewise spectral density f(xi).
inline double multiscale_density(const std::vector<SpectralBand>& bands, double xi) {
  const double a = std::fabs(xi);
  std::size_t j = 0;
  while (j + 1 < bands.size() && a >= bands[j + 1].omega_lo) ++j;
  return bands[j].sigma * bands[j].sigma / std::pow(a, 2.0 * bands[j].hurst + 1.0);
}

/// Spectral constant c_H with int_R |e^{i t xi} - 1|^2 c_H |xi|^{-2H-1} d xi = |t|^{2H}.
inline double fbm_spectral_constant(double h) {
  return std::tgamma(2.0 * h + 1.0) * std::sin(std::numbers::pi * h) / (2.0 * std::numbers::pi);
}

/// Stationary-increment Gaussian process with a multiscale spectral density, synthesised from
/// X_t = int (e^{i t xi} - 1) f^{1/2}(xi) W(d xi) by a midpoint Riemann sum on (0, cutoff).
/// The sum over frequencies is evaluated on the time grid with one FFT of size grid_points.
class MultiscaleFbmSampler {
 public:
  MultiscaleFbmSampler(std::size_t n, std::vector<SpectralBand> bands, SpectralGrid grid = {})
      : n_(n), bands_(std::move(bands)), grid_(grid) {
    validate_bands(bands_);
    if (n < 1) throw size_error("multiscale fBm: n must be >= 1");
    if (grid_.cutoff_factor < 2 || grid_.cutoff_factor % 2 != 0) {
      throw resolution_error("multiscale fBm: cutoff factor must be an even integer >= 2");
    }
    const double nd = static_cast<double>(n);
    cutoff_ = grid_.cutoff_factor * nd * std::numbers::pi;
    if (!(cutoff_ > bands_.back().omega_lo)) {
      throw resolution_error("multiscale fBm: cutoff " + std::to_string(cutoff_) +
                             " does not reach the highest band");
    }
    step_ = cutoff_ / static_cast<double>(grid_.grid_points);
    // The synthesised path is 2 pi / step periodic in t; it must not repeat inside [0,1].
    if (!(step_ < 2.0 * std::numbers::pi)) {
      throw resolution_error("multiscale fBm: frequency step " + std::to_string(step_) +
                             " too coarse for n = " + std::to_string(n) + "; raise grid_points");
    }
    stride_ = grid_.cutoff_factor / 2;
    amplitude_.resize(grid_.grid_points);
    for (std::size_t k = 0; k < grid_.grid_points; ++k) {
      amplitude_[k] = std::sqrt(multiscale_density(bands_, frequency(k)) * step_);
    }
  }

  double frequency(std::size_t k) const { return (static_cast<double>(k) + 0.5) * step_; }
  double frequency_step() const { return step_; }
  double cutoff() const { return cutoff_; }

  /// Variogram E(X_{s+tau} - X_s)^2 of the discretised model (exact for the synthesised law).
  double model_variogram(double tau) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < amplitude_.size(); ++k) {
      acc += 4.0 * (1.0 - std::cos(frequency(k) * tau)) * amplitude_[k] * amplitude_[k];
    }
    return acc;
  }

  SampledPath sample(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const std::size_t m = amplitude_.size();
    std::vector<std::complex<double>> z(m), y;
    for (std::size_t k = 0; k < m; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      z[k] = {amplitude_[k] * re, amplitude_[k] * im};
    }
    detail::thread_fft().fwd(y, z);
    // S(t_j) = exp(-i step t_j / 2) * y[(j * stride) mod m];  X_t = 2 Re(S(t) - S(0)).
    std::vector<double> x(n_ + 1, 0.0);
    const double nd = static_cast<double>(n_);
    const std::complex<double> s0 = y[0];
    for (std::size_t j = 1; j <= n_; ++j) {
      const double t = static_cast<double>(j) / nd;
      const std::complex<double> phase = std::polar(1.0, -0.5 * step_ * t);
      const std::complex<double> s = phase * y[(j * stride_) % m];
      x[j] = 2.0 * (s - s0).real();
    }
    return SampledPath(std::move(x));
  }

 private:
  std::size_t n_;
  std::vector<SpectralBand> bands_;
  SpectralGrid grid_;
  double cutoff_ = 0.0;
  double step_ = 0.0;
  std::size_t stride_ = 1;
  std::vector<double> amplitude_;
};

inline SampledPath sim_multiscale_fbm(std::size_t n, const std::vector<SpectralBand>& bands,
                                      std::uint64_t seed, SpectralGrid grid = {}) {
  Rng rng = make_rng(seed, stream::kPath);
  return MultiscaleFbmSampler(n, bands, grid).sample(rng);
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_MULTISCALE_FBM_HPP
