#ifndef ROUGHIR_IO_HPP
#define ROUGHIR_IO_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "roughir/errors.hpp"
#include "roughir/sampled_path.hpp"

namespace roughir::io {

inline constexpr const char* kPathSchema = "roughir-path-v1";
inline constexpr const char* kTableSchema = "roughir-table-v1";

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes `content` to a temporary sibling and renames it over `target`.
inline void write_atomic(const std::filesystem::path& target, const std::string& content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + target.string() + ": " +
                             ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_field(std::string_view f, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
  if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
    throw parse_error("cannot parse number '" + std::string(f) + "'", line);
  }
  if (!std::isfinite(v)) throw parse_error("non-finite value '" + std::string(f) + "'", line);
  return v;
}

// "# key=value" -> (key, value); other comment lines give an empty key.
inline std::pair<std::string, std::string> parse_header(std::string_view line) {
  std::string_view body = trim(line.substr(1));
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) return {};
  return {std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1)))};
}

}  // namespace detail

/// A path plus the `# key=value` header it was stored with.
struct PathFile {
  SampledPath path;
  std::vector<std::pair<std::string, std::string>> header;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : header) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

/// Path text: `# key=value` header lines, then one sample per line as `t<TAB>value`
/// (a bare value column is also accepted). Blank lines are ignored.
inline PathFile parse_path(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      auto kv = detail::parse_header(s);
      if (!kv.first.empty()) header.push_back(std::move(kv));
      continue;
    }
    const auto fields = detail::split_fields(s);
    if (fields.size() > 2) throw parse_error("expected 't<TAB>value' or a single value", lineno);
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns) throw parse_error("inconsistent column count", lineno);
    for (const auto f : fields) detail::parse_field(f, lineno);
    values.push_back(detail::parse_field(fields.back(), lineno));
  }
  if (values.size() < 2) throw parse_error("path needs at least 2 samples", lineno);
  for (const auto& [k, v] : header) {
    if (k == "n" && v != std::to_string(values.size() - 1)) {
      throw parse_error("header n=" + v + " but file holds " + std::to_string(values.size()) +
                            " samples",
                        lineno);
    }
    if (k == "schema" && v != kPathSchema) {
      throw parse_error("unsupported path schema '" + v + "'", 1);
    }
  }
  return {SampledPath(std::move(values)), std::move(header)};
}

inline PathFile read_path(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return parse_path(in);
}

inline std::string format_path(const SampledPath& path,
                               const std::vector<std::pair<std::string, std::string>>& header) {
  std::string out = std::string("# schema=") + kPathSchema + "\n";
  bool has_n = false;
  for (const auto& [k, v] : header) {
    if (k == "schema") continue;
    has_n = has_n || k == "n";
    out += "# " + k + "=" + v + "\n";
  }
  if (!has_n) out += "# n=" + std::to_string(path.n()) + "\n";
  for (std::size_t j = 0; j < path.size(); ++j) {
    out += format_double(path.time(j));
    out += '\t';
    out += format_double(path[j]);
    out += '\n';
  }
  return out;
}

inline void write_path(const std::filesystem::path& file, const SampledPath& path,
                       const std::vector<std::pair<std::string, std::string>>& header) {
  write_atomic(file, format_path(path, header));
}

/// Versioned tab-delimited table: `# key=value` metadata, one column-name line, then rows.
/// Cells are kept as text so 64-bit integers (seeds) survive unchanged.
struct DelimitedTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // source line of each row (0 when built in memory)

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw parse_error("missing column '" + name + "'", 0);
  }
  const std::string& require_meta(const std::string& key) const {
    const auto it = meta.find(key);
    if (it == meta.end()) throw parse_error("missing metadata '" + key + "'", 0);
    return it->second;
  }
  std::size_t line_of(std::size_t row) const { return row < row_lines.size() ? row_lines[row] : 0; }

  double number(std::size_t row, std::size_t col) const {
    return detail::parse_field(rows[row][col], line_of(row));
  }
  std::uint64_t integer(std::size_t row, std::size_t col) const {
    const std::string& f = rows[row][col];
    std::uint64_t v = 0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw parse_error("cannot parse integer '" + f + "'", line_of(row));
    }
    return v;
  }
  void add_row(std::vector<std::string> cells) {
    rows.push_back(std::move(cells));
    row_lines.push_back(0);
  }
};

inline std::string format_table(const DelimitedTable& t) {
  std::string out = std::string("# schema=") + kTableSchema + "\n";
  for (const auto& [k, v] : t.meta) {
    if (k != "schema") out += "# " + k + "=" + v + "\n";
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += '\t';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

inline DelimitedTable parse_table(std::istream& in) {
  DelimitedTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      auto kv = detail::parse_header(s);
      if (!kv.first.empty()) t.meta[kv.first] = kv.second;
      continue;
    }
    const auto fields = detail::split_fields(s);
    if (t.columns.empty()) {
      for (const auto f : fields) t.columns.emplace_back(f);
      continue;
    }
    if (fields.size() != t.columns.size()) {
      throw parse_error("expected " + std::to_string(t.columns.size()) + " fields, got " +
                            std::to_string(fields.size()),
                        lineno);
    }
    std::vector<std::string> row(fields.begin(), fields.end());
    t.rows.push_back(std::move(row));
    t.row_lines.push_back(lineno);
  }
  const auto it = t.meta.find("schema");
  if (it == t.meta.end() || it->second != kTableSchema) {
    throw parse_error("not a " + std::string(kTableSchema) + " file", 1);
  }
  if (t.columns.empty()) throw parse_error("table has no column header", lineno);
  return t;
}

inline DelimitedTable read_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return parse_table(in);
}

}  // namespace roughir::io

#endif  // ROUGHIR_IO_HPP
