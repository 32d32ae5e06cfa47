#ifndef ROUGHIR_EXPERIMENTS_HPP
#define ROUGHIR_EXPERIMENTS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/gaussian_limits.hpp"
#include "roughir/ir_statistics.hpp"
#include "roughir/parallel.hpp"
#include "roughir/process_sim.hpp"
#include "roughir/random.hpp"
#include "roughir/report.hpp"
#include "roughir/stable_limits.hpp"
#include "roughir/variance_table.hpp"

namespace roughir {

/// Tables and resources an experiment may draw on. `*_info` is echoed into the report config.
struct ExperimentContext {
  const VarianceTable* gaussian = nullptr;
  const LambdaTildeTable* stable = nullptr;
  json gaussian_info;
  json stable_info;
  unsigned threads = 0;
};

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Summary {
  double mean = kNaN;
  double se = kNaN;
  double var = kNaN;
  std::size_t count = 0;
};

// Mean, standard error of the mean and sample variance over the finite entries.
inline Summary summarize(const std::vector<double>& x) {
  Summary s;
  double sum = 0.0;
  for (double v : x) {
    if (std::isfinite(v)) {
      sum += v;
      ++s.count;
    }
  }
  if (s.count == 0) return s;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count < 2) return s;
  double m2 = 0.0;
  for (double v : x) {
    if (std::isfinite(v)) m2 += (v - s.mean) * (v - s.mean);
  }
  s.var = m2 / static_cast<double>(s.count - 1);
  s.se = std::sqrt(s.var / static_cast<double>(s.count));
  return s;
}

inline std::uint64_t rep_seed(std::uint64_t root, std::uint64_t group, std::uint64_t rep) {
  return derive_seed(root, stream::kExperiment, (group << 32) | rep);
}

inline std::string label(const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", key, v);
  return buf;
}

// Runs body(rep) for every replication; an exception marks only that replication as failed.
template <class Body>
void run_replications(std::size_t reps, const std::string& group, ExperimentReport& report,
                      unsigned threads, Body&& body) {
  std::vector<std::string> errors(reps);
  parallel_for(
      reps,
      [&](std::size_t r) {
        try {
          body(r);
        } catch (const std::exception& e) {
          errors[r] = e.what();
          if (errors[r].empty()) errors[r] = "unknown error";
        }
      },
      threads);
  for (std::size_t r = 0; r < reps; ++r) {
    if (!errors[r].empty()) report.failures.push_back({group, r, errors[r]});
  }
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

inline double zscore(double value, double target, double se) {
  return (se > 0.0) ? (value - target) / se : (value == target ? 0.0 : kNaN);
}

}  // namespace detail

/// fBm central limit: mean and n var of R^{p,n} against Lambda_p(H) and the variance table,
/// and coverage of the Delta-method interval for H.
inline void experiment_clt_fbm(Params& prm, const ExperimentContext& ctx, ExperimentReport& rep) {
  const auto hs = prm.list("hurst", {0.3, 0.5, 0.7});
  const auto p = static_cast<unsigned>(prm.count("p", 2));
  const std::size_t n = prm.count("n", 4096);
  const std::size_t reps = prm.count("reps", 500);
  const double conf = prm.num("confidence", 0.95);
  const double z_tol = prm.num("z_tolerance", 3.0);
  const double var_tol = prm.num("variance_rel_tolerance", 0.20);
  const double cov_lo = prm.num("coverage_low", 0.92);
  const double cov_hi = prm.num("coverage_high", 0.98);
  const std::uint64_t seed = prm.seed("seed", 1);
  if (!ctx.gaussian) throw domain_error("clt-fbm needs a gaussian variance table");
  prm.note("gaussian_table", ctx.gaussian_info);

  rep.record_columns = {"H", "rep", "R", "h_hat", "std_error", "covered"};
  for (std::size_t g = 0; g < hs.size(); ++g) {
    const double h = hs[g];
    const std::string group = detail::label("H", h);
    const sim::FbmSampler sampler(n, h);
    std::vector<double> r_val(reps, detail::kNaN), h_hat(reps, detail::kNaN), se(reps, detail::kNaN),
        covered(reps, 0.0);
    detail::run_replications(reps, group, rep, ctx.threads, [&](std::size_t r) {
      Rng rng = make_rng(detail::rep_seed(seed, g, r), stream::kPath);
      const SampledPath path = sampler.sample(rng);
      r_val[r] = r_pn(path, p).value;
      const HurstEstimate e = estimate_H(path, *ctx.gaussian, conf, p);
      h_hat[r] = e.h_hat;
      se[r] = e.std_error;
      covered[r] = (e.ci_low <= h && h <= e.ci_high) ? 1.0 : 0.0;
    });
    for (std::size_t r = 0; r < reps; ++r) {
      rep.records.push_back({h, static_cast<double>(r), r_val[r], h_hat[r], se[r], covered[r]});
    }
    const auto sr = detail::summarize(r_val);
    const double target = Lambda_p(p, h);
    const double nvar = static_cast<double>(n) * sr.var;
    const double sigma_tab = ctx.gaussian->sigma(p, h);
    double cov_count = 0.0;
    for (double c : covered) cov_count += c;
    const double coverage = cov_count / static_cast<double>(reps);  // failures count as misses
    rep.aggregates[group] = {{"mean_R", sr.mean},        {"se_mean_R", sr.se},
                             {"Lambda_p", target},      {"n_var_R", nvar},
                             {"Sigma_table", sigma_tab}, {"coverage", coverage},
                             {"mean_h_hat", detail::summarize(h_hat).mean}};
    rep.verdicts.push_back(make_verdict(group + "/mean_R", detail::zscore(sr.mean, target, sr.se), -z_tol,
                                        z_tol, "(mean R - Lambda_p(H)) / se within +-z"));
    rep.verdicts.push_back(make_verdict(group + "/n_var_R_over_Sigma", nvar / sigma_tab, 1.0 - var_tol,
                                        1.0 + var_tol, "n var(R) / Sigma_p(H) within 1 +- tolerance"));
    rep.verdicts.push_back(make_verdict(group + "/ci_coverage", coverage, cov_lo, cov_hi,
                                        "fraction of intervals containing H"));
  }
}

/// Convergence of R^{1,n} and R^{2,n} on an Ito diffusion with a(x), b(x) polynomial.
inline void experiment_diffusion_rate(Params& prm, const ExperimentContext& ctx, ExperimentReport& rep) {
  const auto ns = prm.list("n", {1024, 4096, 16384});
  const std::size_t reps = prm.count("reps", 200);
  const std::size_t refine = prm.count("refine", sim::kDefaultEulerRefinement);
  const sim::Polynomial a{prm.list("a_poly", {1.0, 0.0, 1.0})};
  const sim::Polynomial b{prm.list("b_poly", {0.0, -1.0})};
  const double x0 = prm.num("x0", 0.0);
  const double slope_max = prm.num("slope_max", -0.2);
  const double z_tol = prm.num("z_tolerance", 3.0);
  const double anchor = prm.num("lambda1_anchor", 0.7206);
  const std::uint64_t seed = prm.seed("seed", 2);
  const double lam1 = lambda(0.0);
  const double lam2 = lambda(-0.5);

  rep.record_columns = {"n", "rep", "R1", "R2"};
  std::vector<double> path_err, literal_err, nd;
  for (std::size_t g = 0; g < ns.size(); ++g) {
    const auto n = static_cast<std::size_t>(ns[g]);
    const std::string group = detail::label("n", ns[g]);
    std::vector<double> r1(reps, detail::kNaN), r2(reps, detail::kNaN), err(reps, detail::kNaN);
    detail::run_replications(reps, group, rep, ctx.threads, [&](std::size_t r) {
      const SampledPath path = sim::sim_diffusion(n, a, b, x0, refine, detail::rep_seed(seed, g, r));
      r1[r] = r_pn(path, 1).value;
      r2[r] = r_pn(path, 2).value;
      err[r] = std::fabs(r1[r] - lam1);
    });
    for (std::size_t r = 0; r < reps; ++r) rep.records.push_back({ns[g], static_cast<double>(r), r1[r], r2[r]});
    const auto s1 = detail::summarize(r1);
    const auto s2 = detail::summarize(r2);
    const auto se = detail::summarize(err);
    nd.push_back(ns[g]);
    path_err.push_back(se.mean);
    literal_err.push_back(std::fabs(s1.mean - anchor));
    rep.aggregates[group] = {{"mean_R1", s1.mean},
                             {"se_mean_R1", s1.se},
                             {"mean_abs_R1_minus_Lambda1", se.mean},
                             {"se_mean_abs_R1_minus_Lambda1", se.se},
                             {"abs_mean_R1_minus_anchor", literal_err.back()},
                             {"mean_R2", s2.mean},
                             {"se_mean_R2", s2.se}};
    rep.verdicts.push_back(make_verdict(group + "/mean_R2", detail::zscore(s2.mean, lam2, s2.se), -z_tol, z_tol,
                                        "(mean R2 - Lambda_2(1/2)) / se within +-z"));
  }
  double worst_ratio = 0.0;
  bool literal_decreasing = true;
  for (std::size_t i = 1; i < path_err.size(); ++i) {
    worst_ratio = std::max(worst_ratio, path_err[i] / path_err[i - 1]);
    literal_decreasing = literal_decreasing && literal_err[i] < literal_err[i - 1];
  }
  rep.verdicts.push_back(make_verdict("R1_error_decreasing", worst_ratio, 0.0, std::nextafter(1.0, 0.0),
                                      "largest ratio of consecutive mean |R1 - Lambda_1(1/2)| is < 1"));
  rep.verdicts.push_back(make_verdict("R1_error_loglog_slope", detail::loglog_slope(nd, path_err),
                                      -std::numeric_limits<double>::infinity(), slope_max,
                                      "least-squares slope of log mean |R1 - Lambda_1(1/2)| on log n"));
  rep.diagnostics["abs_mean_R1_minus_anchor"] = literal_err;
  rep.diagnostics["abs_mean_R1_minus_anchor_decreasing"] = literal_decreasing;
  rep.diagnostics["abs_mean_R1_minus_anchor_slope"] = detail::loglog_slope(nd, literal_err);
  rep.diagnostics["note"] =
      "abs(mean R1 - anchor) is dominated by Monte Carlo noise of the mean; the verdicts use the "
      "per-path error mean |R1 - Lambda_1(1/2)|.";
}

/// Paired estimates of H on X and on alpha(t) X + beta(t).
inline void experiment_trend_robustness(Params& prm, const ExperimentContext& ctx, ExperimentReport& rep) {
  const double h = prm.num("hurst", 0.6);
  const std::size_t n = prm.count("n", 8192);
  const std::size_t pairs = prm.count("reps", 200);
  sim::TrendSpec trend;
  trend.mult = sim::Polynomial{prm.list("trend_mult", {2.0})};
  trend.mult_sin = prm.num("trend_mult_sin", 1.0);
  trend.add = sim::Polynomial{prm.list("trend_add", {0.0, 0.0, 1.0})};
  const double tol = prm.num("tolerance", 0.02);
  const std::uint64_t seed = prm.seed("seed", 3);

  rep.record_columns = {"rep", "R_X", "R_Z", "h_X", "h_Z", "abs_diff"};
  const sim::FbmSampler sampler(n, h);
  std::vector<double> rx(pairs, detail::kNaN), rz(pairs, detail::kNaN), hx(pairs, detail::kNaN),
      hz(pairs, detail::kNaN), diff(pairs, detail::kNaN), signed_diff(pairs, detail::kNaN);
  detail::run_replications(pairs, "pairs", rep, ctx.threads, [&](std::size_t r) {
    Rng rng = make_rng(detail::rep_seed(seed, 0, r), stream::kTrendPair);
    const SampledPath x = sampler.sample(rng);
    const SampledPath z = sim::apply_trend(
        x, [&](double t) { return trend.alpha(t); }, [&](double t) { return trend.beta(t); });
    rx[r] = r_pn(x, 2).value;
    rz[r] = r_pn(z, 2).value;
    hx[r] = invert_Lambda2(rx[r]);
    hz[r] = invert_Lambda2(rz[r]);
    signed_diff[r] = hz[r] - hx[r];
    diff[r] = std::fabs(signed_diff[r]);
  });
  for (std::size_t r = 0; r < pairs; ++r) {
    rep.records.push_back({static_cast<double>(r), rx[r], rz[r], hx[r], hz[r], diff[r]});
  }
  const auto sd = detail::summarize(diff);
  const auto ss = detail::summarize(signed_diff);
  double max_diff = 0.0;
  for (double d : diff) {
    if (std::isfinite(d)) max_diff = std::max(max_diff, d);
  }
  rep.aggregates["pairs"] = {{"mean_abs_diff", sd.mean}, {"se_mean_abs_diff", sd.se}, {"max_abs_diff", max_diff},
                             {"mean_signed_diff", ss.mean}, {"mean_h_X", detail::summarize(hx).mean},
                             {"mean_h_Z", detail::summarize(hz).mean}};
  rep.verdicts.push_back(make_verdict("mean_abs_h_shift", sd.mean, 0.0, tol,
                                      "mean |H_hat(alpha X + beta) - H_hat(X)| over paired seeds"));
  if (!rep.failures.empty()) {
    rep.verdicts.push_back(make_verdict("failed_pairs", static_cast<double>(rep.failures.size()), 0.0, 0.0,
                                        "every pair must produce both estimates"));
  }
}

/// Stable Levy paths: alpha_hat, n var(R-tilde) against the table, the zero-crossing contrast,
/// and the alpha = 2 anchor.
inline void experiment_levy_clt(Params& prm, const ExperimentContext& ctx, ExperimentReport& rep) {
  const auto alphas = prm.list("alpha", {0.8, 1.2, 1.8, 2.0});
  const std::size_t n = prm.count("n", 8192);
  const std::size_t reps = prm.count("reps", 500);
  const double conf = prm.num("confidence", 0.95);
  const double z_tol = prm.num("z_tolerance", 3.0);
  const double var_tol = prm.num("variance_rel_tolerance", 0.25);
  const std::uint64_t seed = prm.seed("seed", 4);
  if (!ctx.stable) throw domain_error("levy-clt needs a stable limit table");
  prm.note("stable_table", ctx.stable_info);
  const LambdaTildeTable& table = *ctx.stable;
  const double lam_gauss = lambda(0.0);

  auto nearest_row = [&](double a) {
    const LambdaTildeRow* best = &table.rows().front();
    for (const auto& r : table.rows()) {
      if (std::fabs(r.alpha - a) < std::fabs(best->alpha - a)) best = &r;
    }
    return best;
  };

  rep.record_columns = {"alpha", "rep", "R_tilde", "R0_tilde", "alpha_hat", "clamped"};
  for (std::size_t g = 0; g < alphas.size(); ++g) {
    const double alpha = alphas[g];
    const std::string group = detail::label("alpha", alpha);
    std::vector<double> rt(reps, detail::kNaN), r0(reps, detail::kNaN), ah(reps, detail::kNaN),
        cl(reps, detail::kNaN);
    detail::run_replications(reps, group, rep, ctx.threads, [&](std::size_t r) {
      const SampledPath path = sim::sim_levy_stable(n, alpha, 1.0, detail::rep_seed(seed, g, r));
      rt[r] = r_tilde_2n(path).value;
      r0[r] = r0_tilde_2n(path).value;
      const AlphaEstimate e = estimate_alpha(path, table, conf);
      ah[r] = e.alpha_hat;
      cl[r] = e.clamped ? 1.0 : 0.0;
    });
    for (std::size_t r = 0; r < reps; ++r) {
      rep.records.push_back({alpha, static_cast<double>(r), rt[r], r0[r], ah[r], cl[r]});
    }
    const auto st = detail::summarize(rt);
    const auto s0 = detail::summarize(r0);
    const auto sa = detail::summarize(ah);
    const auto sc = detail::summarize(cl);
    const double nvar = static_cast<double>(n) * st.var;
    const double sig_tab = table.sigma_sq(alpha);
    const double deriv = table.derivative(alpha);
    const double table_se = nearest_row(alpha)->lambda_stderr;
    const double joint_se = std::sqrt(sa.se * sa.se + std::pow(table_se / std::fabs(deriv), 2.0));
    const bool at_boundary = alpha >= table.alpha_max() - 1e-9;
    rep.aggregates[group] = {{"mean_R_tilde", st.mean},     {"se_mean_R_tilde", st.se},
                             {"n_var_R_tilde", nvar},       {"sigma_sq_table", sig_tab},
                             {"Lambda_tilde_table", table.lambda(alpha)},
                             {"mean_alpha_hat", sa.mean},   {"sd_alpha_hat", std::sqrt(sa.var)},
                             {"joint_se_mean_alpha_hat", joint_se},
                             {"clamped_fraction", sc.mean}, {"mean_R0_tilde", s0.mean},
                             {"se_mean_R0_tilde", s0.se}};
    if (at_boundary) {
      // alpha_hat is clamped at the table end in about half the paths, so its mean is biased
      // low by construction; the statistic itself is checked instead.
      rep.verdicts.push_back(make_verdict(group + "/mean_R_tilde", detail::zscore(st.mean, lam_gauss, st.se),
                                          -z_tol, z_tol, "(mean R-tilde - lambda(0)) / se within +-z"));
    } else {
      rep.verdicts.push_back(make_verdict(group + "/mean_alpha_hat", detail::zscore(sa.mean, alpha, joint_se),
                                          -z_tol, z_tol,
                                          "(mean alpha_hat - alpha) / joint se (paths and table) within +-z"));
    }
    rep.verdicts.push_back(make_verdict(group + "/n_var_R_tilde_over_sigma_sq", nvar / sig_tab, 1.0 - var_tol,
                                        1.0 + var_tol, "n var(R-tilde) / sigma-tilde^2(alpha) within 1 +- tolerance"));
    rep.verdicts.push_back(make_verdict(group + "/mean_R0_tilde", detail::zscore(s0.mean, 0.5, s0.se), -z_tol,
                                        z_tol, "(mean zero-crossing R-tilde - 1/2) / se within +-z"));
  }
  if (const LambdaTildeRow* top = table.find(2.0)) {
    rep.aggregates["table_alpha=2"] = {{"lambda", top->lambda}, {"lambda_stderr", top->lambda_stderr},
                                       {"lambda_gaussian", lam_gauss}};
    rep.verdicts.push_back(make_verdict("table/Lambda_tilde(2)", detail::zscore(top->lambda, lam_gauss, top->lambda_stderr),
                                        -z_tol, z_tol, "(table Lambda-tilde(2) - lambda(0)) / table se within +-z"));
    rep.verdicts.push_back(make_verdict("table/Lambda_tilde(2)_two_decimals", std::round(top->lambda * 100.0) / 100.0,
                                        0.72, 0.72, "table Lambda-tilde(2) rounds to 0.72"));
  }
}

/// R^{1,n} of a smooth non-monotone function and of a monotone function.
inline void experiment_smooth_limit(Params& prm, const ExperimentContext&, ExperimentReport& rep) {
  const auto ns = prm.list("n", {1000, 10000, 100000});
  const double freq = prm.num("frequency", 2.0);
  const double threshold = prm.num("threshold", 0.99);
  const double at_n = prm.num("threshold_n", 10000);
  const double slack = prm.num("monotone_slack", 1e-3);

  rep.record_columns = {"n", "R1_sin", "R2_sin", "R1_monotone"};
  std::vector<double> r_sin;
  double r_at = detail::kNaN;
  double min_mono = 1.0;
  for (double nv : ns) {
    const auto n = static_cast<std::size_t>(nv);
    std::vector<double> s(n + 1), m(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(n);
      s[j] = std::sin(2.0 * std::numbers::pi * freq * t);
      m[j] = t + t * t * t;
    }
    const SampledPath ps(std::move(s)), pm(std::move(m));
    const double r1 = r_pn(ps, 1).value;
    const double r2 = r_pn(ps, 2).value;
    const double rm = r_pn(pm, 1).value;
    rep.records.push_back({nv, r1, r2, rm});
    r_sin.push_back(r1);
    min_mono = std::min(min_mono, rm);
    if (nv == at_n) r_at = r1;
  }
  double worst_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < r_sin.size(); ++i) worst_step = std::min(worst_step, r_sin[i] - r_sin[i - 1]);
  rep.aggregates["R1_sin"] = r_sin;
  rep.verdicts.push_back(make_verdict(detail::label("R1_sin_at_n", at_n), r_at, threshold, 1.0,
                                      "R^{1,n}(sin) at the threshold n"));
  if (r_sin.size() > 1) {
    rep.verdicts.push_back(make_verdict("R1_sin_nondecreasing", worst_step, -slack,
                                        std::numeric_limits<double>::infinity(),
                                        "smallest step of R^{1,n}(sin) along the n grid, minus slack"));
  }
  rep.verdicts.push_back(make_verdict("R1_monotone_exactly_one", min_mono, 1.0, 1.0,
                                      "R^{1,n} of t + t^3 equals 1 at every n"));
}

/// mBm with linear H(t): integrated limit via the linear approximation of Lambda_2, and the
/// ordering of localised statistics.
inline void experiment_local_mbm(Params& prm, const ExperimentContext& ctx, ExperimentReport& rep) {
  const double h0 = prm.num("h_start", 0.3);
  const double h1 = prm.num("h_end", 0.7);
  const std::size_t n = prm.count("n", 8192);
  const std::size_t reps = prm.count("reps", 200);
  const auto t0s = prm.list("t0", {0.2, 0.8});
  const double w = prm.num("window_exponent", 0.7);
  const auto diag_ws = prm.list("diagnostic_window_exponents", {0.6});
  const double order_min = prm.num("ordering_min_fraction", 0.95);
  const double mean_tol = prm.num("mean_exponent_tolerance", 0.05);
  const double slope = prm.num("linear_slope", 0.1468);
  const double intercept = prm.num("linear_intercept", 0.5174);
  const std::uint64_t seed = prm.seed("seed", 5);
  if (t0s.size() != 2) throw domain_error("local-mbm needs exactly two t0 values");
  auto hurst = [h0, h1](double t) { return h0 + (h1 - h0) * t; };
  const double h_bar = 0.5 * (h0 + h1);
  const double expected_sign = (hurst(t0s[1]) > hurst(t0s[0])) ? 1.0 : -1.0;

  const sim::MbmSampler sampler(n, hurst);
  if (sampler.jitter() > 0.0) {
    rep.warnings.push_back("mBm covariance needed diagonal jitter " + std::to_string(sampler.jitter()));
  }
  std::vector<double> ws{w};
  ws.insert(ws.end(), diag_ws.begin(), diag_ws.end());
  rep.record_columns = {"rep", "R2", "exponent", "R_local_a", "R_local_b", "ordered"};
  std::vector<double> r2(reps, detail::kNaN), expo(reps, detail::kNaN);
  std::vector<std::vector<double>> la(ws.size(), std::vector<double>(reps, detail::kNaN)),
      lb = la, ordered = la;
  detail::run_replications(reps, "paths", rep, ctx.threads, [&](std::size_t r) {
    Rng rng = make_rng(detail::rep_seed(seed, 0, r), stream::kPath);
    const SampledPath path = sampler.sample(rng);
    r2[r] = r_pn(path, 2).value;
    expo[r] = (r2[r] - intercept) / slope;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      la[k][r] = r_local(path, t0s[0], ws[k]).value;
      lb[k][r] = r_local(path, t0s[1], ws[k]).value;
      ordered[k][r] = (expected_sign * (lb[k][r] - la[k][r]) > 0.0) ? 1.0 : 0.0;
    }
  });
  for (std::size_t r = 0; r < reps; ++r) {
    rep.records.push_back({static_cast<double>(r), r2[r], expo[r], la[0][r], lb[0][r], ordered[0][r]});
  }
  // Exact limit of R2 for mBm: integral of Lambda_2(H(t)) by the midpoint rule.
  double integral = 0.0;
  const int m = 4000;
  for (int i = 0; i < m; ++i) integral += Lambda_p(2, hurst((i + 0.5) / m));
  integral /= m;
  const auto sr = detail::summarize(r2);
  const auto se = detail::summarize(expo);
  auto fraction = [&](const std::vector<double>& v) {
    double c = 0.0;
    for (double x : v) c += x;
    return c / static_cast<double>(reps);
  };
  rep.aggregates["paths"] = {{"mean_R2", sr.mean},
                             {"se_mean_R2", sr.se},
                             {"integral_Lambda2_H", integral},
                             {"mean_exponent", se.mean},
                             {"mean_H", h_bar},
                             {"ordering_fraction", fraction(ordered[0])},
                             {"mean_R_local_a", detail::summarize(la[0]).mean},
                             {"mean_R_local_b", detail::summarize(lb[0]).mean}};
  for (std::size_t k = 1; k < ws.size(); ++k) {
    rep.diagnostics[detail::label("ordering_fraction_w", ws[k])] = fraction(ordered[k]);
  }
  rep.verdicts.push_back(make_verdict("mean_exponent_error", std::fabs(se.mean - h_bar), 0.0, mean_tol,
                                      "|mean (R2 - intercept)/slope - mean of H(t)|"));
  rep.verdicts.push_back(make_verdict("local_ordering_fraction", fraction(ordered[0]), order_min, 1.0,
                                      "fraction of paths with R_local ordered as H(t0)"));
}

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"clt-fbm",     "diffusion-rate", "trend-robustness",
                                              "levy-clt",    "smooth-limit",   "local-mbm"};
  return names;
}

inline bool experiment_needs_gaussian_table(const std::string& name) { return name == "clt-fbm"; }
inline bool experiment_needs_stable_table(const std::string& name) { return name == "levy-clt"; }

/// Runs one named experiment. `config` overrides defaults; the report echoes every value used.
inline ExperimentReport run_experiment(const std::string& name, const json& config,
                                       const ExperimentContext& ctx) {
  Params prm(config);
  ExperimentReport rep;
  rep.id = name;
  const auto start = std::chrono::steady_clock::now();
  if (name == "clt-fbm") {
    experiment_clt_fbm(prm, ctx, rep);
  } else if (name == "diffusion-rate") {
    experiment_diffusion_rate(prm, ctx, rep);
  } else if (name == "trend-robustness") {
    experiment_trend_robustness(prm, ctx, rep);
  } else if (name == "levy-clt") {
    experiment_levy_clt(prm, ctx, rep);
  } else if (name == "smooth-limit") {
    experiment_smooth_limit(prm, ctx, rep);
  } else if (name == "local-mbm") {
    experiment_local_mbm(prm, ctx, rep);
  } else {
    throw domain_error("unknown experiment '" + name + "'");
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.config = prm.effective();
  for (const auto& key : prm.unused()) rep.warnings.push_back("config key '" + key + "' was not used");
  if (!rep.failures.empty()) {
    rep.warnings.push_back(std::to_string(rep.failures.size()) + " replication(s) failed; see failures");
  }
  return rep;
}

}  // namespace roughir

#endif  // ROUGHIR_EXPERIMENTS_HPP
