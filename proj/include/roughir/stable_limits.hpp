#ifndef ROUGHIR_STABLE_LIMITS_HPP
#define ROUGHIR_STABLE_LIMITS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
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
#include "roughir/stable_sampling.hpp"
#include "roughir/variance_table.hpp"

namespace roughir {

/// Monte Carlo moments of psi over iid symmetric stable triples (Z1, Z2, Z3) at one alpha.
struct StablePsiMoments {
  double alpha = 2.0;
  McEstimate lambda;    // E psi(Z1, Z2)
  McEstimate sigma_sq;  // 2 var psi(Z1,Z2) + 4 cov(psi(Z1,Z2), psi(Z2,Z3))
};

inline constexpr std::size_t kDefaultStableBlocks = 100;

/// Evaluates the moments at every alpha from the same uniforms (common random numbers).
/// `reps` triples are split into `blocks` batches; block b draws from stream
/// (seed, stable-table, b), and standard errors are batch-means errors across blocks.
inline std::vector<StablePsiMoments> stable_psi_moments(std::span<const double> alphas,
                                                        std::size_t reps, std::uint64_t seed,
                                                        std::size_t blocks = kDefaultStableBlocks,
                                                        unsigned threads = 0) {
  for (double a : alphas) check_stable_index(a);
  if (blocks < 2) throw domain_error("stable moments need at least 2 blocks");
  if (reps < blocks) throw domain_error("stable moments: reps must be >= blocks");
  const std::size_t na = alphas.size();
  const std::size_t per_block = reps / blocks;
  // [block][alpha] -> (lambda, sigma_sq)
  std::vector<std::vector<std::pair<double, double>>> part(blocks, std::vector<std::pair<double, double>>(na));
  parallel_for(
      blocks,
      [&](std::size_t b) {
        Rng rng = make_rng(seed, stream::kStableTable, b);
        std::vector<StableUniforms> u(3 * per_block);
        for (auto& x : u) x = draw_stable_uniforms(rng);
        for (std::size_t ia = 0; ia < na; ++ia) {
          const double a = alphas[ia];
          double s = 0.0, q = 0.0, c = 0.0;
          for (std::size_t t = 0; t < per_block; ++t) {
            const LogMagnitude z1 = symmetric_stable_log(a, u[3 * t]);
            const LogMagnitude z2 = symmetric_stable_log(a, u[3 * t + 1]);
            const LogMagnitude z3 = symmetric_stable_log(a, u[3 * t + 2]);
            const double p12 = psi_from_logs(z1, z2);
            const double p23 = psi_from_logs(z2, z3);
            s += 0.5 * (p12 + p23);
            q += 0.5 * (p12 * p12 + p23 * p23);
            c += p12 * p23;
          }
          const double m = static_cast<double>(per_block);
          const double mean = s / m;
          const double var = q / m - mean * mean;
          const double cov = c / m - mean * mean;
          part[b][ia] = {mean, 2.0 * var + 4.0 * cov};
        }
      },
      threads);
  std::vector<StablePsiMoments> out(na);
  for (std::size_t ia = 0; ia < na; ++ia) {
    std::vector<double> l(blocks), v(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      l[b] = part[b][ia].first;
      v[b] = part[b][ia].second;
    }
    out[ia].alpha = alphas[ia];
    out[ia].lambda = detail::mean_with_error(l);
    out[ia].sigma_sq = detail::mean_with_error(v);
  }
  return out;
}

/// Lambda-tilde(alpha) = E psi(Z1, Z2) for iid standard symmetric alpha-stable Z.
inline McEstimate lambda_tilde(double alpha, std::size_t reps, std::uint64_t seed) {
  if (reps < 10000) throw domain_error("lambda_tilde needs at least 1e4 replications");
  const double a[1] = {alpha};
  return stable_psi_moments(a, reps, seed).front().lambda;
}

/// sigma-tilde^2(alpha) = 2 var psi(Z1,Z2) + 4 cov(psi(Z1,Z2), psi(Z2,Z3)).
inline McEstimate sigma_tilde_sq(double alpha, std::size_t reps, std::uint64_t seed) {
  if (reps < 10000) throw domain_error("sigma_tilde_sq needs at least 1e4 replications");
  const double a[1] = {alpha};
  return stable_psi_moments(a, reps, seed).front().sigma_sq;
}

struct LambdaTildeRow {
  double alpha = 2.0;
  double lambda = 0.0;  // isotonic-smoothed
  double lambda_raw = 0.0;
  double lambda_stderr = 0.0;
  double sigma_sq = 0.0;
  double sigma_sq_stderr = 0.0;
  double dlambda_dalpha = 0.0;
};

struct LambdaTildeTableConfig {
  double alpha_step = 0.05;
  double alpha_max = 2.0;
  std::size_t reps = 1000000;
  std::size_t blocks = kDefaultStableBlocks;
  std::uint64_t seed = 20080102;
};

/// Tabulated Lambda-tilde, sigma-tilde^2 and d Lambda-tilde / d alpha on an alpha grid.
/// The lambda column is the isotonic (nonincreasing) fit of the raw Monte Carlo means.
class LambdaTildeTable {
 public:
  LambdaTildeTable() = default;
  LambdaTildeTable(std::vector<LambdaTildeRow> rows, std::size_t reps, std::uint64_t seed)
      : rows_(std::move(rows)), reps_(reps), seed_(seed) {
    if (rows_.size() < 3) throw domain_error("stable table needs at least 3 alpha values");
    std::vector<double> a, l, s, d;
    for (const auto& r : rows_) {
      if (!(r.lambda >= 0.5 - 1e-12 && r.lambda <= 1.0 + 1e-12)) {
        throw domain_error("stable table: Lambda-tilde entry outside [1/2, 1]");
      }
      a.push_back(r.alpha);
      l.push_back(r.lambda);
      s.push_back(std::max(0.0, r.sigma_sq));
      d.push_back(r.dlambda_dalpha);
    }
    lambda_ = MonotoneCubic(a, l);
    sigma_ = MonotoneCubic(a, s);
    deriv_ = MonotoneCubic(a, d);
  }

  static LambdaTildeTable build(const LambdaTildeTableConfig& cfg, unsigned threads = 0) {
    if (!(cfg.alpha_step > 0.0)) throw domain_error("alpha_step must be positive");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::llround(cfg.alpha_max / cfg.alpha_step));
    for (std::size_t i = 1; i <= count; ++i) grid.push_back(cfg.alpha_step * static_cast<double>(i));
    const auto m = stable_psi_moments(grid, cfg.reps, cfg.seed, cfg.blocks, threads);
    std::vector<double> raw(m.size()), w(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      raw[i] = m[i].lambda.estimate;
      const double se = std::max(m[i].lambda.std_error, 1e-12);
      w[i] = 1.0 / (se * se);
    }
    const auto smooth = isotonic_regression(raw, w, /*decreasing=*/true);
    std::vector<LambdaTildeRow> rows(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      rows[i].alpha = grid[i];
      rows[i].lambda_raw = raw[i];
      rows[i].lambda = std::clamp(smooth[i], 0.5, 1.0);
      rows[i].lambda_stderr = m[i].lambda.std_error;
      rows[i].sigma_sq = m[i].sigma_sq.estimate;
      rows[i].sigma_sq_stderr = m[i].sigma_sq.std_error;
    }
    fill_derivative(rows);
    return LambdaTildeTable(std::move(rows), cfg.reps, cfg.seed);
  }

  /// Centred differences of the smoothed column; one-sided at the two ends.
  static void fill_derivative(std::vector<LambdaTildeRow>& rows) {
    const std::size_t m = rows.size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t lo = (i == 0) ? 0 : i - 1;
      const std::size_t hi = (i + 1 == m) ? i : i + 1;
      rows[i].dlambda_dalpha = (rows[hi].lambda - rows[lo].lambda) / (rows[hi].alpha - rows[lo].alpha);
    }
  }

  const std::vector<LambdaTildeRow>& rows() const noexcept { return rows_; }
  std::size_t reps() const noexcept { return reps_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double alpha_min() const { return rows_.front().alpha; }
  double alpha_max() const { return rows_.back().alpha; }
  /// Statistic range covered by the table: [Lambda-tilde(alpha_max), Lambda-tilde(alpha_min)].
  double lambda_low() const { return rows_.back().lambda; }
  double lambda_high() const { return rows_.front().lambda; }

  double lambda(double alpha) const { return lambda_(alpha); }
  double sigma_sq(double alpha) const { return std::max(0.0, sigma_(alpha)); }
  double derivative(double alpha) const { return deriv_(alpha); }

  /// Raw rows whose Monte Carlo means increase by more than 3 standard errors between
  /// neighbouring alphas; nonzero means the smoothing absorbed a real violation.
  std::size_t monotonicity_violations() const {
    std::size_t v = 0;
    for (std::size_t i = 1; i < rows_.size(); ++i) {
      const double se = std::hypot(rows_[i].lambda_stderr, rows_[i - 1].lambda_stderr);
      if (rows_[i].lambda_raw - rows_[i - 1].lambda_raw > 3.0 * se) ++v;
    }
    return v;
  }

  const LambdaTildeRow* find(double alpha) const {
    for (const auto& r : rows_) {
      if (std::fabs(r.alpha - alpha) < 1e-9) return &r;
    }
    return nullptr;
  }

  io::DelimitedTable to_delimited() const {
    io::DelimitedTable t;
    t.meta["kind"] = "stable";
    t.meta["reps"] = std::to_string(reps_);
    t.meta["seed"] = std::to_string(seed_);
    t.columns = {"alpha", "lambda", "lambda_raw", "lambda_stderr", "sigma_sq", "sigma_sq_stderr",
                 "dlambda_dalpha", "reps", "seed"};
    for (const auto& r : rows_) {
      t.add_row({io::format_double(r.alpha), io::format_double(r.lambda), io::format_double(r.lambda_raw),
                 io::format_double(r.lambda_stderr), io::format_double(r.sigma_sq),
                 io::format_double(r.sigma_sq_stderr), io::format_double(r.dlambda_dalpha),
                 std::to_string(reps_), std::to_string(seed_)});
    }
    return t;
  }

  static LambdaTildeTable from_delimited(const io::DelimitedTable& t) {
    if (t.require_meta("kind") != "stable") throw parse_error("not a stable limit table", 1);
    const std::size_t ca = t.column("alpha"), cl = t.column("lambda"), cr = t.column("lambda_raw"),
                      cle = t.column("lambda_stderr"), cs = t.column("sigma_sq"),
                      cse = t.column("sigma_sq_stderr"), cd = t.column("dlambda_dalpha"),
                      creps = t.column("reps"), cseed = t.column("seed");
    std::vector<LambdaTildeRow> rows;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      LambdaTildeRow r;
      r.alpha = t.number(i, ca);
      r.lambda = t.number(i, cl);
      r.lambda_raw = t.number(i, cr);
      r.lambda_stderr = t.number(i, cle);
      r.sigma_sq = t.number(i, cs);
      r.sigma_sq_stderr = t.number(i, cse);
      r.dlambda_dalpha = t.number(i, cd);
      reps = static_cast<std::size_t>(t.integer(i, creps));
      seed = t.integer(i, cseed);
      if (!rows.empty() && !(r.alpha > rows.back().alpha)) {
        throw parse_error("alpha column must increase", t.line_of(i));
      }
      if (!rows.empty() && r.lambda > rows.back().lambda) {
        throw parse_error("smoothed lambda column must be nonincreasing", t.line_of(i));
      }
      rows.push_back(r);
    }
    return LambdaTildeTable(std::move(rows), reps, seed);
  }

 private:
  std::vector<LambdaTildeRow> rows_;
  std::size_t reps_ = 0;
  std::uint64_t seed_ = 0;
  MonotoneCubic lambda_;
  MonotoneCubic sigma_;
  MonotoneCubic deriv_;
};

/// alpha with table.lambda(alpha) = v, by bisection on the monotone interpolant.
/// range_error (boundary = nearest alpha endpoint) when v is outside the tabulated range.
inline double invert_lambda_tilde(double v, const LambdaTildeTable& table) {
  const double lo_v = table.lambda_low();
  const double hi_v = table.lambda_high();
  if (!(v >= lo_v && v <= hi_v)) {
    const double boundary = (v < lo_v) ? table.alpha_max() : table.alpha_min();
    throw range_error("statistic " + std::to_string(v) + " outside the tabulated Lambda-tilde range [" +
                          std::to_string(lo_v) + ", " + std::to_string(hi_v) + "]",
                      boundary, lo_v, hi_v);
  }
  double lo = table.alpha_min();
  double hi = table.alpha_max();
  // Lambda-tilde is nonincreasing: values above v lie to the left.
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (table.lambda(mid) > v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct AlphaEstimate {
  double alpha_hat = 2.0;
  double std_error = 0.0;  // s-tilde(alpha_hat) / sqrt(n)
  double ci_low = 0.0;
  double ci_high = 0.0;
  double confidence = 0.95;
  /// The statistic fell outside the tabulated range and alpha_hat was set to `boundary`.
  bool clamped = false;
  double boundary = 0.0;
  IRSummary statistic;
  std::size_t n = 0;
};

/// alpha_hat = Lambda-tilde^{-1}(R-tilde^{2,n}) with a Delta-method interval.
/// Statistics beyond the table ends clamp to the nearest tabulated alpha and set `clamped`.
inline AlphaEstimate estimate_alpha(const SampledPath& path, const LambdaTildeTable& table,
                                    double conf = 0.95) {
  if (path.n() < 16) throw size_error("estimate_alpha needs n >= 16, got n = " + std::to_string(path.n()));
  const double z = normal_quantile_two_sided(conf);
  AlphaEstimate est;
  est.n = path.n();
  est.confidence = conf;
  est.statistic = r_tilde_2n(path);
  if (est.statistic.degenerate()) {
    throw range_error("R-tilde is dominated by 0/0 terms (" + std::to_string(est.statistic.zero_over_zero) +
                          " of " + std::to_string(est.statistic.terms) + "): constant or quantised input",
                      table.alpha_min(), table.lambda_low(), table.lambda_high());
  }
  try {
    est.alpha_hat = invert_lambda_tilde(est.statistic.value, table);
  } catch (const range_error& e) {
    est.clamped = true;
    est.boundary = e.boundary();
    est.alpha_hat = e.boundary();
  }
  const double d = table.derivative(est.alpha_hat);
  const double s_sq = (d != 0.0) ? table.sigma_sq(est.alpha_hat) / (d * d) : INFINITY;
  est.std_error = std::sqrt(s_sq / static_cast<double>(est.n));
  est.ci_low = est.alpha_hat - z * est.std_error;
  est.ci_high = est.alpha_hat + z * est.std_error;
  return est;
}

}  // namespace roughir

#endif  // ROUGHIR_STABLE_LIMITS_HPP
