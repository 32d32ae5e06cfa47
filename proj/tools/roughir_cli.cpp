// roughir command-line front end: estimate | simulate | tables | experiment.
//
// Exit codes: 0 success (and every verdict passed), 1 a verdict failed, 2 usage, parse or
// domain error, 3 estimation or runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roughir/roughir.hpp"

namespace fs = std::filesystem;
using roughir::json;

namespace {

constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
  std::string table_dir;
  bool strict = false;
  unsigned threads = 0;
};

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    roughir::io::write_atomic(out, text);
  }
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

json summary_json(const roughir::IRSummary& s, const std::string& name) {
  return {{"name", name},
          {"value", s.value},
          {"terms", s.terms},
          {"zero_over_zero", s.zero_over_zero},
          {"degenerate", s.degenerate()}};
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::string input;
  std::string method = "hurst";
  unsigned p = 2;
  double t0 = 0.5;
  double w = 0.6;
  double confidence = 0.95;
  std::string out;
};

int run_estimate(const EstimateOptions& o, const CommonOptions& c) {
  const roughir::io::PathFile file = roughir::io::read_path(o.input);
  roughir::TableStore store(roughir::resolve_table_dir(c.table_dir), c.strict, c.threads);
  json out;
  out["input"] = o.input;
  out["n"] = file.path.n();
  out["method"] = o.method;
  out["confidence"] = o.confidence;
  json header = json::object();
  for (const auto& [k, v] : file.header) header[k] = v;
  out["input_header"] = header;

  if (o.method == "hurst") {
    auto [table, info] = store.gaussian();
    const auto e = roughir::estimate_H(file.path, table, o.confidence, o.p);
    out["p"] = o.p;
    out["statistic"] = summary_json(e.statistic, "R^{" + std::to_string(o.p) + ",n}");
    out["estimate"] = e.h_hat;
    out["std_error"] = e.std_error;
    out["ci"] = {e.ci_low, e.ci_high};
    out["sigma"] = e.sigma;
    out["table"] = info;
  } else if (o.method == "alpha") {
    auto [table, info] = store.stable();
    const auto e = roughir::estimate_alpha(file.path, table, o.confidence);
    out["statistic"] = summary_json(e.statistic, "R-tilde^{2,n}");
    out["estimate"] = e.alpha_hat;
    out["std_error"] = e.std_error;
    out["ci"] = {e.ci_low, e.ci_high};
    out["clamped"] = e.clamped;
    if (e.clamped) out["boundary"] = e.boundary;
    out["table"] = info;
  } else if (o.method == "local") {
    auto [table, info] = store.gaussian();
    const auto s = roughir::r_local(file.path, o.t0, o.w);
    if (s.degenerate()) {
      throw roughir::range_error("local R^{2,n} is dominated by 0/0 terms (" + std::to_string(s.zero_over_zero) +
                                     " of " + std::to_string(s.terms) + "): constant or quantised input",
                                 1.0, roughir::Lambda2_lower(), roughir::Lambda2_upper());
    }
    const double h = roughir::invert_Lambda2(s.value);
    // The local average has `terms` summands, so its variance is about Sigma_2 / terms.
    const double se = std::sqrt(roughir::s2_sq(h, table.sigma(2, h)) / static_cast<double>(s.terms));
    const double z = roughir::normal_quantile_two_sided(o.confidence);
    out["t0"] = o.t0;
    out["window_exponent"] = o.w;
    out["statistic"] = summary_json(s, "R_w^{2,n}(t0)");
    out["estimate"] = h;
    out["std_error"] = se;
    out["ci"] = {h - z * se, h + z * se};
    out["table"] = info;
  } else {
    throw roughir::domain_error("unknown method '" + o.method + "' (hurst | alpha | local)");
  }
  print_warnings(store.warnings());
  out["warnings"] = store.warnings();
  emit(out, o.out);
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string config;
  std::string out;
  std::map<std::string, std::string> flags;  // key -> value for every flag given
};

std::map<std::string, std::string> read_keyvalue_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';' || line[first] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw roughir::parse_error("expected key=value", lineno);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\"");
      const auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int run_simulate(const SimulateOptions& o) {
  std::map<std::string, std::string> kv;
  if (!o.config.empty()) kv = read_keyvalue_file(o.config);
  for (const auto& [k, v] : o.flags) kv[k] = v;
  const roughir::sim::SimSpec spec = roughir::sim::spec_from_keyvalues(kv);
  const roughir::SampledPath path = roughir::sim::simulate(spec);
  const auto header = roughir::sim::describe(spec);
  if (o.out.empty() || o.out == "-") {
    std::cout << roughir::io::format_path(path, header);
  } else {
    roughir::io::write_path(o.out, path, header);
    std::cerr << "wrote " << o.out << " (" << roughir::sim::to_string(spec.kind) << ", n=" << spec.n << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------- tables

struct TablesOptions {
  std::string kind;
  std::optional<std::size_t> reps;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t path_len = 4096;
  std::vector<double> grid;
  double p1_max = 0.70;
  double alpha_step = 0.05;
  std::size_t blocks = roughir::kDefaultStableBlocks;
  std::string out;
};

int run_tables(const TablesOptions& o, const CommonOptions& c) {
  const fs::path dir = roughir::resolve_table_dir(c.table_dir);
  roughir::io::DelimitedTable t;
  fs::path target;
  std::vector<std::string> warnings;
  if (o.kind == "gaussian") {
    roughir::VarianceTableConfig cfg;
    if (o.reps) cfg.reps = *o.reps;
    if (o.seed_given) cfg.seed = o.seed;
    cfg.path_len = o.path_len;
    cfg.grid = o.grid;
    cfg.p1_max_hurst = o.p1_max;
    const auto table = roughir::VarianceTable::build(cfg, c.threads);
    t = table.to_delimited();
    if (cfg.reps < 1000) warnings.push_back("reps " + std::to_string(cfg.reps) + " below the recommended 1000");
    for (const auto& r : table.rows()) {
      const double z = (r.sigma - r.sigma_lagsum) / std::hypot(r.mc_stderr, r.lagsum_stderr);
      std::fprintf(stderr, "p=%u H=%.2f Sigma=%.5f (+-%.5f) lag-sum=%.5f (+-%.5f) z=%+.2f\n", r.p, r.hurst, r.sigma,
                   r.mc_stderr, r.sigma_lagsum, r.lagsum_stderr, z);
    }
    target = o.out.empty() ? dir / roughir::kGaussianTableFile : fs::path(o.out);
  } else if (o.kind == "stable") {
    roughir::LambdaTildeTableConfig cfg;
    if (o.reps) cfg.reps = *o.reps;
    if (o.seed_given) cfg.seed = o.seed;
    cfg.alpha_step = o.alpha_step;
    cfg.blocks = o.blocks;
    const auto table = roughir::LambdaTildeTable::build(cfg, c.threads);
    t = table.to_delimited();
    if (cfg.reps < 100000) warnings.push_back("reps " + std::to_string(cfg.reps) + " below the recommended 1e5");
    if (const auto v = table.monotonicity_violations()) {
      warnings.push_back(std::to_string(v) + " raw Lambda-tilde increase(s) beyond 3 stderr absorbed by smoothing");
    }
    for (const auto& r : table.rows()) {
      std::fprintf(stderr, "alpha=%.2f Lambda~=%.5f (raw %.5f +-%.5f) sigma~^2=%.4f dL/da=%.4f\n", r.alpha, r.lambda,
                   r.lambda_raw, r.lambda_stderr, r.sigma_sq, r.dlambda_dalpha);
    }
    target = o.out.empty() ? dir / roughir::kStableTableFile : fs::path(o.out);
  } else {
    throw roughir::domain_error("unknown table kind '" + o.kind + "' (gaussian | stable)");
  }
  if (!warnings.empty()) {
    std::string joined;
    for (const auto& w : warnings) joined += (joined.empty() ? "" : "; ") + w;
    t.meta["warning"] = joined;
  }
  print_warnings(warnings);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  roughir::io::write_atomic(target, roughir::io::format_table(t));
  std::cerr << "wrote " << target.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- experiment

struct ExperimentOptions {
  std::string name;
  std::string config;
  std::string replay;
  std::vector<std::string> sets;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<double> h;
  std::optional<double> alpha;
  std::string out;
};

json parse_set_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

int run_experiment_cmd(const ExperimentOptions& o, const CommonOptions& c) {
  json cfg = json::object();
  std::string name = o.name;
  if (!o.replay.empty()) {
    const json rep = json::parse(roughir::io::read_file(o.replay));
    if (!rep.contains("experiment") || !rep.contains("config")) {
      throw roughir::parse_error("not a roughir report: " + o.replay, 1);
    }
    if (name.empty()) name = rep.at("experiment").get<std::string>();
    cfg = rep.at("config");
    cfg.erase("gaussian_table");
    cfg.erase("stable_table");
  }
  if (!o.config.empty()) {
    const json extra = json::parse(roughir::io::read_file(o.config));
    if (!extra.is_object()) throw roughir::parse_error("experiment config must be a JSON object", 1);
    if (name.empty() && extra.contains("experiment")) name = extra.at("experiment").get<std::string>();
    for (auto it = extra.begin(); it != extra.end(); ++it) {
      if (it.key() != "experiment") cfg[it.key()] = it.value();
    }
  }
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw roughir::domain_error("--set expects key=value, got '" + s + "'");
    cfg[s.substr(0, eq)] = parse_set_value(s.substr(eq + 1));
  }
  if (o.reps) cfg["reps"] = *o.reps;
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.n) cfg["n"] = *o.n;
  if (o.h) cfg["hurst"] = json::array({*o.h});
  if (o.alpha) cfg["alpha"] = json::array({*o.alpha});
  if (name.empty()) throw roughir::domain_error("experiment name required");
  if (name == "trend-robustness" && o.h) cfg["hurst"] = *o.h;
  if (name == "diffusion-rate" && o.n) cfg["n"] = json::array({*o.n});
  if (name == "smooth-limit" && o.n) cfg["n"] = json::array({*o.n});

  roughir::TableStore store(roughir::resolve_table_dir(c.table_dir), c.strict, c.threads);
  roughir::ExperimentContext ctx;
  ctx.threads = c.threads;
  std::optional<roughir::VarianceTable> gtab;
  std::optional<roughir::LambdaTildeTable> stab;
  if (roughir::experiment_needs_gaussian_table(name)) {
    auto [t, info] = store.gaussian();
    gtab = std::move(t);
    ctx.gaussian = &*gtab;
    ctx.gaussian_info = info;
  }
  if (roughir::experiment_needs_stable_table(name)) {
    auto [t, info] = store.stable();
    stab = std::move(t);
    ctx.stable = &*stab;
    ctx.stable_info = info;
  }
  roughir::ExperimentReport rep = roughir::run_experiment(name, cfg, ctx);
  for (const auto& w : store.warnings()) rep.warnings.push_back(w);
  print_warnings(rep.warnings);
  for (const auto& v : rep.verdicts) {
    std::fprintf(stderr, "%s %-45s value=%.6g  [%s, %s]\n", v.passed ? "PASS" : "FAIL", v.name.c_str(), v.value,
                 std::isfinite(v.lower) ? std::to_string(v.lower).c_str() : "-inf",
                 std::isfinite(v.upper) ? std::to_string(v.upper).c_str() : "inf");
  }
  std::fprintf(stderr, "%s: %s (%.1f s)\n", name.c_str(), rep.passed() ? "all verdicts passed" : "verdict failure",
               rep.wall_seconds);
  emit(roughir::report_to_json(rep), o.out);
  if (!o.out.empty() && o.out != "-") roughir::io::write_atomic(o.out + ".reps.tsv", roughir::records_to_tsv(rep));
  return rep.passed() ? 0 : kExitVerdict;
}

void add_common(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--tables", c.table_dir, "table directory (default $ROUGHIR_TABLE_DIR or the built-in data dir)");
  sub->add_flag("--strict", c.strict, "require prebuilt tables instead of building them on the fly");
  sub->add_option("--threads", c.threads, "worker threads (default $ROUGHIR_THREADS or all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roughir: increment-ratio roughness statistics, Hurst and stable-index estimation"};
  // Help is long-form only so that --h stays available for the Hurst exponent.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  CommonOptions common;

  EstimateOptions est;
  auto* cmd_est = app.add_subcommand("estimate", "estimate H or alpha from a path file");
  cmd_est->add_option("--input,-i", est.input, "path file")->required();
  cmd_est->add_option("--method", est.method, "hurst | alpha | local")->capture_default_str();
  cmd_est->add_option("--p", est.p, "increment order for hurst (1 or 2)")->capture_default_str();
  cmd_est->add_option("--t0", est.t0, "centre of the local window")->capture_default_str();
  cmd_est->add_option("--window,--w", est.w, "local window exponent in (0,1)")->capture_default_str();
  cmd_est->add_option("--confidence", est.confidence, "confidence level")->capture_default_str();
  cmd_est->add_option("--out,-o", est.out, "write the JSON result here instead of stdout");
  add_common(cmd_est, common);

  SimulateOptions sim;
  auto* cmd_sim = app.add_subcommand("simulate", "simulate a path and write it as a path file");
  cmd_sim->add_option("--config", sim.config, "flat key=value file with simulation parameters");
  cmd_sim->add_option("--out,-o", sim.out, "output path file ('-' for stdout)");
  const std::vector<std::pair<std::string, std::string>> sim_keys{
      {"kind", "fbm | mbm | multiscale_fbm | diffusion | levy_stable | levy_compound | brownian"},
      {"n", "grid size"},
      {"seed", "64-bit seed"},
      {"h", "fBm Hurst exponent"},
      {"h_curve", "mBm H(t) as t:h,t:h,... (piecewise linear)"},
      {"bands", "multiscale bands omega:sigma:H,..."},
      {"cutoff_factor", "multiscale cutoff as a multiple of n pi"},
      {"grid_points", "multiscale frequency grid size"},
      {"a_poly", "diffusion coefficient a(x) as c0,c1,..."},
      {"b_poly", "drift b(x) as c0,c1,..."},
      {"x0", "diffusion start value"},
      {"refine", "Euler steps per grid step"},
      {"alpha", "stable index"},
      {"scale", "stable scale"},
      {"brownian_weight", "compound: Brownian weight"},
      {"jump_rate", "compound: big-jump rate"},
      {"jump_scale", "compound: big-jump standard deviation"},
      {"small_alpha", "compound: small-jump index (0 disables)"},
      {"small_c", "compound: small-jump intensity"},
      {"small_cutoff", "compound: small-jump cutoff"},
      {"jumps_per_step", "compound: exact small jumps per step"},
      {"trend_mult", "trend alpha(t) polynomial"},
      {"trend_mult_sin", "trend alpha(t) sin(2 pi t) amplitude"},
      {"trend_add", "trend beta(t) polynomial"}};
  std::map<std::string, std::string> sim_values;
  for (const auto& [key, help] : sim_keys) {
    std::string flag = "--" + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    if (key == "h") flag = "--h,--hurst";
    cmd_sim->add_option(flag, sim_values[key], help);
  }

  TablesOptions tab;
  auto* cmd_tab = app.add_subcommand("tables", "build and store a limit table");
  cmd_tab->add_option("--kind", tab.kind, "gaussian | stable")->required();
  cmd_tab->add_option("--reps", tab.reps, "replications (gaussian: paths per grid point; stable: triples)");
  auto* seed_opt = cmd_tab->add_option("--seed", tab.seed, "root seed");
  cmd_tab->add_option("--path-len", tab.path_len, "gaussian: path length")->capture_default_str();
  cmd_tab->add_option("--grid", tab.grid, "gaussian: H grid (default 0.05..0.95)");
  cmd_tab->add_option("--p1-max", tab.p1_max, "gaussian: largest H tabulated for p = 1")->capture_default_str();
  cmd_tab->add_option("--alpha-step", tab.alpha_step, "stable: alpha grid step")->capture_default_str();
  cmd_tab->add_option("--blocks", tab.blocks, "stable: batches for standard errors")->capture_default_str();
  cmd_tab->add_option("--out,-o", tab.out, "output file (default <table dir>/<kind>_table.tsv)");
  add_common(cmd_tab, common);

  ExperimentOptions ex;
  auto* cmd_ex = app.add_subcommand("experiment", "run a verification experiment and emit a JSON report");
  cmd_ex->add_option("name", ex.name, "clt-fbm | diffusion-rate | trend-robustness | levy-clt | smooth-limit | local-mbm");
  cmd_ex->add_option("--config", ex.config, "JSON object of parameter overrides");
  cmd_ex->add_option("--replay", ex.replay, "re-run the configuration embedded in a report");
  cmd_ex->add_option("--set", ex.sets, "parameter override key=value (value parsed as JSON when possible)");
  cmd_ex->add_option("--reps", ex.reps, "replications");
  cmd_ex->add_option("--seed", ex.seed, "root seed");
  cmd_ex->add_option("--n", ex.n, "grid size");
  cmd_ex->add_option("--h,--hurst", ex.h, "single Hurst value");
  cmd_ex->add_option("--alpha", ex.alpha, "single stable index");
  cmd_ex->add_option("--out,-o", ex.out, "report file (a .reps.tsv appendix is written next to it)");
  add_common(cmd_ex, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  seed_opt->count() > 0 ? tab.seed_given = true : tab.seed_given = false;
  for (const auto& [key, value] : sim_values) {
    if (!value.empty()) sim.flags[key] = value;
  }

  try {
    if (*cmd_est) return run_estimate(est, common);
    if (*cmd_sim) return run_simulate(sim);
    if (*cmd_tab) return run_tables(tab, common);
    if (*cmd_ex) return run_experiment_cmd(ex, common);
  } catch (const roughir::interpolation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const roughir::range_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.has_bounds()) {
      std::cerr << "attainable statistic range: [" << e.lower() << ", " << e.upper()
                << "], nearest parameter boundary: " << e.boundary() << "\n";
    }
    return kExitRuntime;
  } catch (const roughir::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
