#ifndef ROUGHIR_REPORT_HPP
#define ROUGHIR_REPORT_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "roughir/errors.hpp"
#include "roughir/io.hpp"

namespace roughir {

using json = nlohmann::json;

/// One pass/fail check: `value` must lie in [lower, upper] (infinite bounds allowed).
struct Verdict {
  std::string name;
  double value = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::string rule;
  bool passed = false;
};

inline Verdict make_verdict(std::string name, double value, double lower, double upper, std::string rule) {
  Verdict v{std::move(name), value, lower, upper, std::move(rule), false};
  v.passed = std::isfinite(value) && value >= lower && value <= upper;
  return v;
}

struct ReplicationFailure {
  std::string group;
  std::size_t rep = 0;
  std::string message;
};

/// Result of one experiment run. Everything except `wall_seconds` is a deterministic
/// function of `config`.
struct ExperimentReport {
  std::string id;
  json config = json::object();
  std::vector<std::string> record_columns;
  std::vector<std::vector<double>> records;
  json aggregates = json::object();
  std::vector<Verdict> verdicts;
  json diagnostics = json::object();
  std::vector<ReplicationFailure> failures;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;

  bool passed() const {
    for (const auto& v : verdicts) {
      if (!v.passed) return false;
    }
    return true;
  }
};

namespace detail {
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline double number_or_nan(const json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}
}  // namespace detail

inline json verdict_to_json(const Verdict& v) {
  return {{"name", v.name},
          {"passed", v.passed},
          {"value", detail::finite_or_null(v.value)},
          {"tolerance", {{"lower", detail::finite_or_null(v.lower)}, {"upper", detail::finite_or_null(v.upper)}}},
          {"rule", v.rule}};
}

inline json report_to_json(const ExperimentReport& r) {
  json out;
  out["schema"] = "roughir-report-v1";
  out["experiment"] = r.id;
  out["config"] = r.config;
  out["passed"] = r.passed();
  out["verdicts"] = json::array();
  for (const auto& v : r.verdicts) out["verdicts"].push_back(verdict_to_json(v));
  out["aggregates"] = r.aggregates;
  out["diagnostics"] = r.diagnostics;
  out["warnings"] = r.warnings;
  out["failures"] = json::array();
  for (const auto& f : r.failures) {
    out["failures"].push_back({{"group", f.group}, {"rep", f.rep}, {"message", f.message}});
  }
  json rec;
  rec["columns"] = r.record_columns;
  rec["rows"] = json::array();
  for (const auto& row : r.records) {
    json jr = json::array();
    for (double v : row) jr.push_back(detail::finite_or_null(v));
    rec["rows"].push_back(std::move(jr));
  }
  out["records"] = std::move(rec);
  out["timing"] = {{"wall_seconds", r.wall_seconds}};
  return out;
}

/// Per-replication appendix: one header line and one tab-delimited row per record.
inline std::string records_to_tsv(const ExperimentReport& r) {
  std::string out = "# experiment=" + r.id + "\n";
  for (std::size_t i = 0; i < r.record_columns.size(); ++i) {
    if (i) out += '\t';
    out += r.record_columns[i];
  }
  out += '\n';
  for (const auto& row : r.records) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += std::isfinite(row[i]) ? io::format_double(row[i]) : std::string("nan");
    }
    out += '\n';
  }
  return out;
}

/// Reads parameters from a JSON object and records every value actually used (defaults
/// included), so the effective configuration can be echoed and replayed.
class Params {
 public:
  explicit Params(json given = json::object()) : given_(std::move(given)) {
    if (!given_.is_object()) throw domain_error("experiment config must be a JSON object");
  }

  double num(const std::string& key, double def) { return take<double>(key, def); }
  std::size_t count(const std::string& key, std::size_t def) { return take<std::size_t>(key, def); }
  std::uint64_t seed(const std::string& key, std::uint64_t def) { return take<std::uint64_t>(key, def); }
  /// A bare number is accepted as a one-element list.
  std::vector<double> list(const std::string& key, std::vector<double> def) {
    if (given_.contains(key) && given_.at(key).is_number()) given_[key] = json::array({given_.at(key)});
    return take<std::vector<double>>(key, std::move(def));
  }
  /// Records a value that is not a tunable parameter (table provenance and the like).
  void note(const std::string& key, json value) { used_[key] = std::move(value); }

  /// Keys given but never read: almost always a typo in a config file.
  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (auto it = given_.begin(); it != given_.end(); ++it) {
      if (!used_.contains(it.key())) out.push_back(it.key());
    }
    return out;
  }
  const json& effective() const { return used_; }

 private:
  template <class T>
  T take(const std::string& key, T def) {
    T v = def;
    if (given_.contains(key)) {
      try {
        v = given_.at(key).get<T>();
      } catch (const json::exception& e) {
        throw domain_error("config key '" + key + "': " + e.what());
      }
    }
    used_[key] = v;
    return v;
  }

  json given_;
  json used_ = json::object();
};

}  // namespace roughir

#endif  // ROUGHIR_REPORT_HPP
