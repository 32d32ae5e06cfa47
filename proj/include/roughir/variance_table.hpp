#ifndef ROUGHIR_VARIANCE_TABLE_HPP
#define ROUGHIR_VARIANCE_TABLE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/gaussian_limits.hpp"
#include "roughir/interpolation.hpp"
#include "roughir/io.hpp"
#include "roughir/ir_statistics.hpp"
#include "roughir/parallel.hpp"
#include "roughir/random.hpp"
#include "roughir/sampled_path.hpp"
#include "roughir/sim/fbm.hpp"

namespace roughir {

/// Monte Carlo estimate with its standard error.
struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sigma_p(H) by two routes from the same replications:
/// `nvar` is n var(R^{p,n}) across paths, `lagsum` the per-path truncated sum of empirical
/// autocovariances of the psi terms (centred at the exact Lambda_p(H)), averaged over paths.
struct SigmaSample {
  McEstimate nvar;
  McEstimate lagsum;
  std::vector<double> statistics;  // R^{p,n} of every replication
};

inline constexpr std::size_t kDefaultLagTruncation = 50;

namespace detail {

inline void check_sigma_domain(unsigned p, double h) {
  check_order_and_hurst(p, h, "Sigma_p");
  if (p == 1 && h >= 0.75) {
    throw domain_error("Sigma_1(H) diverges for H >= 3/4; the p = 1 central limit holds only on (0, 3/4)");
  }
}

// psi terms of consecutive p-th increments computed from unit-lag noise (increments of the path).
inline void psi_terms_from_noise(const std::vector<double>& noise, unsigned p, std::vector<double>& out) {
  std::vector<double> d(noise);
  for (unsigned r = 1; r < p; ++r) {
    for (std::size_t k = 0; k + 1 < d.size(); ++k) d[k] = d[k + 1] - d[k];
    d.pop_back();
  }
  out.resize(d.size() - 1);
  for (std::size_t k = 0; k + 1 < d.size(); ++k) out[k] = psi(d[k], d[k + 1]);
}

inline double truncated_lag_sum(const std::vector<double>& xi, double centre, std::size_t lags) {
  const std::size_t m = xi.size();
  std::vector<double> c(m);
  for (std::size_t k = 0; k < m; ++k) c[k] = xi[k] - centre;
  double total = 0.0;
  for (std::size_t j = 0; j <= lags && j < m; ++j) {
    double g = 0.0;
    for (std::size_t k = 0; k + j < m; ++k) g += c[k] * c[k + j];
    g /= static_cast<double>(m);
    total += (j == 0) ? g : 2.0 * g;
  }
  return total;
}

// Sample variance and the standard error of that variance (fourth-moment formula).
inline McEstimate variance_with_error(const std::vector<double>& x) {
  const double r = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= r;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double s2 = m2 / (r - 1.0);
  m4 /= r;
  const double var_s2 = std::max(0.0, (m4 - s2 * s2 * (r - 3.0) / (r - 1.0)) / r);
  return {s2, std::sqrt(var_s2)};
}

inline McEstimate mean_with_error(const std::vector<double>& x) {
  const double r = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= r;
  double m2 = 0.0;
  for (double v : x) m2 += (v - mean) * (v - mean);
  return {mean, std::sqrt(m2 / (r - 1.0) / r)};
}

}  // namespace detail

/// Simulates `reps` fBm paths of grid size `path_len` and returns both Sigma_p estimators.
/// Replication i draws from stream (seed, gaussian-table, i / 2); pairs share one circulant FFT.
inline SigmaSample sigma_p_sample(unsigned p, double h, std::size_t reps, std::size_t path_len,
                                  std::uint64_t seed, std::size_t lag_truncation = kDefaultLagTruncation,
                                  unsigned threads = 0) {
  detail::check_sigma_domain(p, h);
  if (reps < 100) throw domain_error("sigma_p_mc needs at least 100 replications");
  if (path_len < p + 16) throw size_error("sigma_p_mc: path too short");
  const sim::FbmSampler sampler(path_len, h);
  const double centre = Lambda_p(p, h);
  std::vector<double> stat(reps);
  std::vector<double> lag(reps);
  const std::size_t pairs = (reps + 1) / 2;
  parallel_for(
      pairs,
      [&](std::size_t i) {
        Rng rng = make_rng(seed, stream::kGaussianTable, i);
        auto noise = sampler.sample_noise_pair(rng);
        std::vector<double> xi;
        for (std::size_t half = 0; half < 2; ++half) {
          const std::size_t rep = 2 * i + half;
          if (rep >= reps) break;
          detail::psi_terms_from_noise(half == 0 ? noise.first : noise.second, p, xi);
          CompensatedSum acc;
          for (double v : xi) acc += v;
          stat[rep] = acc.value() / static_cast<double>(xi.size());
          lag[rep] = detail::truncated_lag_sum(xi, centre, lag_truncation);
        }
      },
      threads);
  SigmaSample out;
  const McEstimate v = detail::variance_with_error(stat);
  const double n = static_cast<double>(path_len);
  out.nvar = {n * v.estimate, n * v.std_error};
  out.lagsum = detail::mean_with_error(lag);
  out.statistics = std::move(stat);
  return out;
}

/// n var(R^{p,n}) on simulated fBm: Monte Carlo estimate of Sigma_p(H).
inline McEstimate sigma_p_mc(unsigned p, double h, std::size_t reps, std::size_t path_len,
                             std::uint64_t seed, unsigned threads = 0) {
  return sigma_p_sample(p, h, reps, path_len, seed, kDefaultLagTruncation, threads).nvar;
}

/// Truncated lag-sum estimate of Sigma_p(H).
inline McEstimate sigma_p_lagsum(unsigned p, double h, std::size_t reps, std::size_t path_len,
                                 std::uint64_t seed, std::size_t lag_truncation = kDefaultLagTruncation,
                                 unsigned threads = 0) {
  return sigma_p_sample(p, h, reps, path_len, seed, lag_truncation, threads).lagsum;
}

struct VarianceRow {
  unsigned p = 2;
  double hurst = 0.5;
  double sigma = 0.0;
  double mc_stderr = 0.0;
  double sigma_lagsum = 0.0;
  double lagsum_stderr = 0.0;
  std::size_t reps = 0;
  std::size_t path_len = 0;
  std::uint64_t seed = 0;
};

struct VarianceTableConfig {
  std::vector<double> grid;  // empty: 0.05, 0.10, ..., 0.95
  double p1_max_hurst = 0.70;
  std::size_t reps = 4000;
  std::size_t path_len = 4096;
  std::size_t lag_truncation = kDefaultLagTruncation;
  std::uint64_t seed = 20080101;
};

inline std::vector<double> default_hurst_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

/// Tabulated Sigma_1(H) and Sigma_2(H) with Monte Carlo errors. Lookups interpolate with a
/// monotone cubic over the grid and never extrapolate.
class VarianceTable {
 public:
  VarianceTable() = default;
  VarianceTable(std::vector<VarianceRow> rows, std::size_t lag_truncation, std::uint64_t root_seed)
      : rows_(std::move(rows)), lag_truncation_(lag_truncation), root_seed_(root_seed) {
    for (unsigned p : {1u, 2u}) {
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& r : rows_) {
        if (r.p != p) continue;
        if (!(r.sigma >= 0.0)) throw domain_error("variance table: negative Sigma entry");
        x.push_back(r.hurst);
        y.push_back(r.sigma);
      }
      if (x.size() >= 2) interp_[p] = MonotoneCubic(std::move(x), std::move(y));
    }
    if (interp_.count(2) == 0) throw domain_error("variance table needs at least two p = 2 rows");
  }

  /// Row seed for (p, grid index) under a root seed.
  static std::uint64_t row_seed(std::uint64_t root, unsigned p, std::size_t index) {
    return derive_seed(root, stream::kGaussianTable, (std::uint64_t{p} << 32) | index);
  }

  static VarianceTable build(const VarianceTableConfig& cfg, unsigned threads = 0) {
    const std::vector<double> grid = cfg.grid.empty() ? default_hurst_grid() : cfg.grid;
    std::vector<VarianceRow> rows;
    for (unsigned p : {1u, 2u}) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double h = grid[i];
        if (p == 1 && h > cfg.p1_max_hurst + 1e-12) continue;
        const std::uint64_t seed = row_seed(cfg.seed, p, i);
        const SigmaSample s =
            sigma_p_sample(p, h, cfg.reps, cfg.path_len, seed, cfg.lag_truncation, threads);
        rows.push_back({p, h, s.nvar.estimate, s.nvar.std_error, s.lagsum.estimate,
                        s.lagsum.std_error, cfg.reps, cfg.path_len, seed});
      }
    }
    return VarianceTable(std::move(rows), cfg.lag_truncation, cfg.seed);
  }

  const std::vector<VarianceRow>& rows() const noexcept { return rows_; }
  std::size_t lag_truncation() const noexcept { return lag_truncation_; }
  std::uint64_t root_seed() const noexcept { return root_seed_; }

  std::size_t min_reps() const {
    std::size_t m = rows_.empty() ? 0 : rows_.front().reps;
    for (const auto& r : rows_) m = std::min(m, r.reps);
    return m;
  }

  bool covers(unsigned p, double h) const {
    const auto it = interp_.find(p);
    return it != interp_.end() && it->second.covers(h);
  }

  /// Interpolated Sigma_p(H); interpolation_error outside the tabulated H range.
  double sigma(unsigned p, double h) const {
    const auto it = interp_.find(p);
    if (it == interp_.end()) throw interpolation_error("variance table has no p = " + std::to_string(p) + " rows");
    return std::max(0.0, it->second(h));
  }

  /// Row at an exact grid value, or nullptr.
  const VarianceRow* find(unsigned p, double h) const {
    for (const auto& r : rows_) {
      if (r.p == p && std::fabs(r.hurst - h) < 1e-9) return &r;
    }
    return nullptr;
  }

  io::DelimitedTable to_delimited() const {
    io::DelimitedTable t;
    t.meta["kind"] = "gaussian";
    t.meta["lag_truncation"] = std::to_string(lag_truncation_);
    t.meta["root_seed"] = std::to_string(root_seed_);
    t.meta["reps"] = std::to_string(min_reps());
    if (!rows_.empty()) t.meta["path_len"] = std::to_string(rows_.front().path_len);
    t.columns = {"H", "p", "Sigma", "mc_stderr", "Sigma_lagsum", "lagsum_stderr", "reps", "path_len", "seed"};
    for (const auto& r : rows_) {
      t.add_row({io::format_double(r.hurst), std::to_string(r.p), io::format_double(r.sigma),
                 io::format_double(r.mc_stderr), io::format_double(r.sigma_lagsum),
                 io::format_double(r.lagsum_stderr), std::to_string(r.reps),
                 std::to_string(r.path_len), std::to_string(r.seed)});
    }
    return t;
  }

  static VarianceTable from_delimited(const io::DelimitedTable& t) {
    if (t.require_meta("kind") != "gaussian") throw parse_error("not a gaussian variance table", 1);
    const std::size_t ch = t.column("H"), cp = t.column("p"), cs = t.column("Sigma"),
                      ce = t.column("mc_stderr"), cl = t.column("Sigma_lagsum"),
                      cle = t.column("lagsum_stderr"), cr = t.column("reps"),
                      cn = t.column("path_len"), cseed = t.column("seed");
    std::vector<VarianceRow> rows;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      VarianceRow r;
      r.hurst = t.number(i, ch);
      r.p = static_cast<unsigned>(t.integer(i, cp));
      r.sigma = t.number(i, cs);
      r.mc_stderr = t.number(i, ce);
      r.sigma_lagsum = t.number(i, cl);
      r.lagsum_stderr = t.number(i, cle);
      r.reps = static_cast<std::size_t>(t.integer(i, cr));
      r.path_len = static_cast<std::size_t>(t.integer(i, cn));
      r.seed = t.integer(i, cseed);
      if (r.p != 1 && r.p != 2) throw parse_error("p must be 1 or 2", t.line_of(i));
      if (r.sigma < 0.0) throw parse_error("negative Sigma entry", t.line_of(i));
      rows.push_back(r);
    }
    std::size_t lags = kDefaultLagTruncation;
    if (auto it = t.meta.find("lag_truncation"); it != t.meta.end()) lags = std::stoul(it->second);
    std::uint64_t root = 0;
    if (auto it = t.meta.find("root_seed"); it != t.meta.end()) root = std::stoull(it->second);
    return VarianceTable(std::move(rows), lags, root);
  }

 private:
  std::vector<VarianceRow> rows_;
  std::map<unsigned, MonotoneCubic> interp_;
  std::size_t lag_truncation_ = kDefaultLagTruncation;
  std::uint64_t root_seed_ = 0;
};

struct HurstEstimate {
  double h_hat = 0.0;
  double std_error = 0.0;  // s_p(H_hat) / sqrt(n)
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.95;
  double sigma = 0.0;  // interpolated Sigma_p(H_hat)
  unsigned p = 2;
  IRSummary statistic;
  std::size_t n = 0;
};

/// H_hat = Lambda_p^{-1}(R^{p,n}) with a Delta-method normal interval.
inline HurstEstimate estimate_H(const SampledPath& path, const VarianceTable& table,
                                double conf = 0.95, unsigned p = 2) {
  if (path.n() < 16) throw size_error("estimate_H needs n >= 16, got n = " + std::to_string(path.n()));
  if (p != 1 && p != 2) throw domain_error("estimate_H: p must be 1 or 2");
  const double z = normal_quantile_two_sided(conf);
  HurstEstimate est;
  est.p = p;
  est.n = path.n();
  est.confidence = conf;
  est.statistic = r_pn(path, p);
  if (est.statistic.degenerate()) {
    const double lo = p == 1 ? Lambda1_lower() : Lambda2_lower();
    const double hi = p == 1 ? Lambda1_upper() : Lambda2_upper();
    throw range_error("R^{" + std::to_string(p) + ",n} is dominated by 0/0 terms (" +
                          std::to_string(est.statistic.zero_over_zero) + " of " +
                          std::to_string(est.statistic.terms) +
                          "): constant or quantised input",
                      1.0, lo, hi);
  }
  est.h_hat = invert_Lambda_p(p, est.statistic.value);
  est.sigma = table.sigma(p, est.h_hat);
  const double s_sq = delta_prefactor(p, est.h_hat) * est.sigma;
  est.std_error = std::sqrt(s_sq / static_cast<double>(est.n));
  est.ci_low = est.h_hat - z * est.std_error;
  est.ci_high = est.h_hat + z * est.std_error;
  return est;
}

}  // namespace roughir

#endif  // ROUGHIR_VARIANCE_TABLE_HPP
