#ifndef ROUGHIR_TABLE_STORE_HPP
#define ROUGHIR_TABLE_STORE_HPP

#include <cstdlib>
#include <filesystem>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "roughir/io.hpp"
#include "roughir/report.hpp"
#include "roughir/stable_limits.hpp"
#include "roughir/variance_table.hpp"

#ifndef ROUGHIR_DEFAULT_TABLE_DIR
#define ROUGHIR_DEFAULT_TABLE_DIR "tables"
#endif

namespace roughir {

inline constexpr const char* kGaussianTableFile = "gaussian_table.tsv";
inline constexpr const char* kStableTableFile = "stable_table.tsv";
inline constexpr const char* kTableDirEnv = "ROUGHIR_TABLE_DIR";

/// Table directory: explicit argument, else $ROUGHIR_TABLE_DIR, else the build-time default.
inline std::filesystem::path resolve_table_dir(const std::string& explicit_dir = {}) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv(kTableDirEnv); env && *env) return env;
  return ROUGHIR_DEFAULT_TABLE_DIR;
}

/// Loads the limit tables from a directory. Missing tables are built with reduced replication
/// counts (and cached when the directory is writable) unless `strict` is set.
class TableStore {
 public:
  TableStore(std::filesystem::path dir, bool strict, unsigned threads = 0)
      : dir_(std::move(dir)), strict_(strict), threads_(threads) {}

  /// Replication counts used when a table has to be built on the fly.
  std::size_t auto_gaussian_reps = 500;
  std::size_t auto_stable_reps = 200000;

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::pair<VarianceTable, json> gaussian() {
    const auto file = dir_ / kGaussianTableFile;
    if (std::filesystem::exists(file)) {
      const io::DelimitedTable t = io::read_table(file);
      VarianceTable table = VarianceTable::from_delimited(t);
      return {std::move(table), info(file, t, false)};
    }
    require_or_warn(file, "gaussian");
    VarianceTableConfig cfg;
    cfg.reps = auto_gaussian_reps;
    VarianceTable table = VarianceTable::build(cfg, threads_);
    io::DelimitedTable t = table.to_delimited();
    t.meta["warning"] = "auto-built with reduced replications";
    cache(file, t);
    return {std::move(table), info(file, t, true)};
  }

  std::pair<LambdaTildeTable, json> stable() {
    const auto file = dir_ / kStableTableFile;
    if (std::filesystem::exists(file)) {
      const io::DelimitedTable t = io::read_table(file);
      LambdaTildeTable table = LambdaTildeTable::from_delimited(t);
      return {std::move(table), info(file, t, false)};
    }
    require_or_warn(file, "stable");
    LambdaTildeTableConfig cfg;
    cfg.reps = auto_stable_reps;
    LambdaTildeTable table = LambdaTildeTable::build(cfg, threads_);
    io::DelimitedTable t = table.to_delimited();
    t.meta["warning"] = "auto-built with reduced replications";
    cache(file, t);
    return {std::move(table), info(file, t, true)};
  }

 private:
  void require_or_warn(const std::filesystem::path& file, const char* kind) {
    if (strict_) {
      throw std::runtime_error(std::string("missing prebuilt ") + kind + " table " + file.string() +
                               " (strict mode); build it with `roughir tables --kind " + kind + "`");
    }
    warnings_.push_back(std::string(kind) + " table " + file.string() +
                        " not found; building one with reduced replications");
  }

  void cache(const std::filesystem::path& file, const io::DelimitedTable& t) {
    try {
      std::error_code ec;
      std::filesystem::create_directories(file.parent_path(), ec);
      io::write_atomic(file, io::format_table(t));
    } catch (const std::exception& e) {
      warnings_.push_back(std::string("could not cache table: ") + e.what());
    }
  }

  static json info(const std::filesystem::path& file, const io::DelimitedTable& t, bool auto_built) {
    json j = {{"file", file.string()}, {"auto_built", auto_built}};
    for (const auto& [k, v] : t.meta) j[k] = v;
    return j;
  }

  std::filesystem::path dir_;
  bool strict_;
  unsigned threads_;
  std::vector<std::string> warnings_;
};

}  // namespace roughir

#endif  // ROUGHIR_TABLE_STORE_HPP
