#ifndef ROUGHIR_SIM_SIM_SPEC_HPP
#define ROUGHIR_SIM_SIM_SPEC_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/sampled_path.hpp"
#include "roughir/sim/diffusion.hpp"
#include "roughir/sim/fbm.hpp"
#include "roughir/sim/levy.hpp"
#include "roughir/sim/mbm.hpp"
#include "roughir/sim/multiscale_fbm.hpp"
#include "roughir/sim/trend.hpp"

namespace roughir::sim {

enum class SimKind { fbm, mbm, multiscale_fbm, diffusion, levy_stable, levy_compound, brownian };

inline std::string to_string(SimKind k) {
  switch (k) {
    case SimKind::fbm: return "fbm";
    case SimKind::mbm: return "mbm";
    case SimKind::multiscale_fbm: return "multiscale_fbm";
    case SimKind::diffusion: return "diffusion";
    case SimKind::levy_stable: return "levy_stable";
    case SimKind::levy_compound: return "levy_compound";
    case SimKind::brownian: return "brownian";
  }
  return "unknown";
}

inline SimKind parse_kind(const std::string& s) {
  for (SimKind k : {SimKind::fbm, SimKind::mbm, SimKind::multiscale_fbm, SimKind::diffusion,
                    SimKind::levy_stable, SimKind::levy_compound, SimKind::brownian}) {
    if (to_string(k) == s) return k;
  }
  throw domain_error("unknown process kind '" + s + "'");
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw domain_error("cannot parse " + what + " from '" + s + "'");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

/// c0 + c1 x + c2 x^2 + ...; text form "c0,c1,c2".
struct Polynomial {
  std::vector<double> coeffs{0.0};

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i) out += ",";
      out += detail::format_double(coeffs[i]);
    }
    return out;
  }
  static Polynomial parse(const std::string& s) {
    Polynomial p;
    p.coeffs.clear();
    for (const auto& tok : detail::split(s, ',')) p.coeffs.push_back(detail::parse_double(tok, "polynomial coefficient"));
    if (p.coeffs.empty()) throw domain_error("empty polynomial");
    return p;
  }
};

/// Piecewise-linear function through knots (t_i, v_i), constant beyond the end knots;
/// text form "t0:v0,t1:v1,...".
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots{{0.0, 0.5}, {1.0, 0.5}};

  double operator()(double t) const {
    if (t <= knots.front().first) return knots.front().second;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (t <= knots[i].first) {
        const auto [t0, v0] = knots[i - 1];
        const auto [t1, v1] = knots[i];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
      }
    }
    return knots.back().second;
  }
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (i) out += ",";
      out += detail::format_double(knots[i].first) + ":" + detail::format_double(knots[i].second);
    }
    return out;
  }
  static PiecewiseLinear parse(const std::string& s) {
    PiecewiseLinear f;
    f.knots.clear();
    for (const auto& tok : detail::split(s, ',')) {
      const auto parts = detail::split(tok, ':');
      if (parts.size() != 2) throw domain_error("piecewise-linear knot must be t:v, got '" + tok + "'");
      f.knots.emplace_back(detail::parse_double(parts[0], "knot time"),
                           detail::parse_double(parts[1], "knot value"));
    }
    if (f.knots.empty()) throw domain_error("piecewise-linear function needs at least one knot");
    for (std::size_t i = 1; i < f.knots.size(); ++i) {
      if (!(f.knots[i].first > f.knots[i - 1].first)) throw domain_error("knot times must increase");
    }
    return f;
  }
};

/// alpha(t) = mult(t) + mult_sin * sin(2 pi t),  beta(t) = add(t).
struct TrendSpec {
  Polynomial mult{{1.0}};
  double mult_sin = 0.0;
  Polynomial add{{0.0}};

  double alpha(double t) const { return mult(t) + mult_sin * std::sin(2.0 * std::numbers::pi * t); }
  double beta(double t) const { return add(t); }
};

inline std::vector<SpectralBand> parse_bands(const std::string& s) {
  std::vector<SpectralBand> bands;
  for (const auto& tok : detail::split(s, ',')) {
    const auto parts = detail::split(tok, ':');
    if (parts.size() != 3) throw domain_error("band must be omega:sigma:H, got '" + tok + "'");
    bands.push_back({detail::parse_double(parts[0], "band frequency"),
                     detail::parse_double(parts[1], "band sigma"),
                     detail::parse_double(parts[2], "band H")});
  }
  return bands;
}

inline std::string bands_to_string(const std::vector<SpectralBand>& bands) {
  std::string out;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (i) out += ",";
    out += detail::format_double(bands[i].omega_lo) + ":" + detail::format_double(bands[i].sigma) +
           ":" + detail::format_double(bands[i].hurst);
  }
  return out;
}

/// Declarative description of one simulated path. Only the fields of `kind` are used.
struct SimSpec {
  SimKind kind = SimKind::fbm;
  std::size_t n = 1024;
  std::uint64_t seed = 1;

  double hurst = 0.5;                // fbm
  PiecewiseLinear hurst_curve;       // mbm
  std::vector<SpectralBand> bands{{0.0, 1.0, 0.5}};  // multiscale_fbm
  SpectralGrid grid;
  Polynomial diffusion_coeff{{1.0}};  // diffusion a(x)
  Polynomial drift_coeff{{0.0}};      // diffusion b(x)
  double x0 = 0.0;
  std::size_t refine = kDefaultEulerRefinement;
  double alpha = 1.5;                // levy_stable
  double scale = 1.0;
  CompoundSpec compound;             // levy_compound
  std::optional<TrendSpec> trend;
};

inline SampledPath simulate(const SimSpec& spec) {
  SampledPath path = [&]() -> SampledPath {
    switch (spec.kind) {
      case SimKind::fbm: return sim_fbm(spec.n, spec.hurst, spec.seed);
      case SimKind::brownian: return sim_brownian(spec.n, spec.seed);
      case SimKind::mbm: return sim_mbm(spec.n, spec.hurst_curve, spec.seed);
      case SimKind::multiscale_fbm: return sim_multiscale_fbm(spec.n, spec.bands, spec.seed, spec.grid);
      case SimKind::diffusion:
        return sim_diffusion(spec.n, spec.diffusion_coeff, spec.drift_coeff, spec.x0, spec.refine,
                             spec.seed);
      case SimKind::levy_stable: return sim_levy_stable(spec.n, spec.alpha, spec.scale, spec.seed);
      case SimKind::levy_compound: return sim_levy_compound(spec.n, spec.compound, spec.seed);
    }
    throw domain_error("unknown process kind");
  }();
  if (spec.trend) {
    const TrendSpec tr = *spec.trend;
    path = apply_trend(path, [tr](double t) { return tr.alpha(t); }, [tr](double t) { return tr.beta(t); });
  }
  return path;
}

/// Key/value echo of the fields relevant to spec.kind, in a fixed order.
inline std::vector<std::pair<std::string, std::string>> describe(const SimSpec& spec) {
  using detail::format_double;
  std::vector<std::pair<std::string, std::string>> kv{
      {"kind", to_string(spec.kind)}, {"n", std::to_string(spec.n)}, {"seed", std::to_string(spec.seed)}};
  switch (spec.kind) {
    case SimKind::fbm: kv.emplace_back("h", format_double(spec.hurst)); break;
    case SimKind::brownian: break;
    case SimKind::mbm: kv.emplace_back("h_curve", spec.hurst_curve.to_string()); break;
    case SimKind::multiscale_fbm:
      kv.emplace_back("bands", bands_to_string(spec.bands));
      kv.emplace_back("cutoff_factor", std::to_string(spec.grid.cutoff_factor));
      kv.emplace_back("grid_points", std::to_string(spec.grid.grid_points));
      break;
    case SimKind::diffusion:
      kv.emplace_back("a_poly", spec.diffusion_coeff.to_string());
      kv.emplace_back("b_poly", spec.drift_coeff.to_string());
      kv.emplace_back("x0", format_double(spec.x0));
      kv.emplace_back("refine", std::to_string(spec.refine));
      break;
    case SimKind::levy_stable:
      kv.emplace_back("alpha", format_double(spec.alpha));
      kv.emplace_back("scale", format_double(spec.scale));
      break;
    case SimKind::levy_compound:
      kv.emplace_back("brownian_weight", format_double(spec.compound.brownian_weight));
      kv.emplace_back("jump_rate", format_double(spec.compound.jump_rate));
      kv.emplace_back("jump_scale", format_double(spec.compound.jump_scale));
      kv.emplace_back("small_alpha", format_double(spec.compound.small_alpha));
      kv.emplace_back("small_c", format_double(spec.compound.small_c));
      kv.emplace_back("small_cutoff", format_double(spec.compound.small_cutoff));
      kv.emplace_back("jumps_per_step", format_double(spec.compound.jumps_per_step));
      break;
  }
  if (spec.trend) {
    kv.emplace_back("trend_mult", spec.trend->mult.to_string());
    kv.emplace_back("trend_mult_sin", format_double(spec.trend->mult_sin));
    kv.emplace_back("trend_add", spec.trend->add.to_string());
  }
  return kv;
}

/// Inverse of describe(): builds a SimSpec from key/value pairs. Unknown keys are rejected.
inline SimSpec spec_from_keyvalues(const std::map<std::string, std::string>& kv) {
  SimSpec spec;
  auto get_u64 = [](const std::string& v, const std::string& key) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw domain_error("cannot parse " + key + " from '" + v + "'");
    }
    return out;
  };
  for (const auto& [key, value] : kv) {
    if (key == "kind") spec.kind = parse_kind(value);
    else if (key == "n") spec.n = static_cast<std::size_t>(get_u64(value, key));
    else if (key == "seed") spec.seed = get_u64(value, key);
    else if (key == "h") spec.hurst = detail::parse_double(value, key);
    else if (key == "h_curve") spec.hurst_curve = PiecewiseLinear::parse(value);
    else if (key == "bands") spec.bands = parse_bands(value);
    else if (key == "cutoff_factor") spec.grid.cutoff_factor = static_cast<unsigned>(get_u64(value, key));
    else if (key == "grid_points") spec.grid.grid_points = static_cast<std::size_t>(get_u64(value, key));
    else if (key == "a_poly") spec.diffusion_coeff = Polynomial::parse(value);
    else if (key == "b_poly") spec.drift_coeff = Polynomial::parse(value);
    else if (key == "x0") spec.x0 = detail::parse_double(value, key);
    else if (key == "refine") spec.refine = static_cast<std::size_t>(get_u64(value, key));
    else if (key == "alpha") spec.alpha = detail::parse_double(value, key);
    else if (key == "scale") spec.scale = detail::parse_double(value, key);
    else if (key == "brownian_weight") spec.compound.brownian_weight = detail::parse_double(value, key);
    else if (key == "jump_rate") spec.compound.jump_rate = detail::parse_double(value, key);
    else if (key == "jump_scale") spec.compound.jump_scale = detail::parse_double(value, key);
    else if (key == "small_alpha") spec.compound.small_alpha = detail::parse_double(value, key);
    else if (key == "small_c") spec.compound.small_c = detail::parse_double(value, key);
    else if (key == "small_cutoff") spec.compound.small_cutoff = detail::parse_double(value, key);
    else if (key == "jumps_per_step") spec.compound.jumps_per_step = detail::parse_double(value, key);
    else if (key == "trend_mult") {
      if (!spec.trend) spec.trend.emplace();
      spec.trend->mult = Polynomial::parse(value);
    } else if (key == "trend_mult_sin") {
      if (!spec.trend) spec.trend.emplace();
      spec.trend->mult_sin = detail::parse_double(value, key);
    } else if (key == "trend_add") {
      if (!spec.trend) spec.trend.emplace();
      spec.trend->add = Polynomial::parse(value);
    } else {
      throw domain_error("unknown simulation key '" + key + "'");
    }
  }
  return spec;
}

}  // namespace roughir::sim

#endif  // ROUGHIR_SIM_SIM_SPEC_HPP
