#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gbb::cli {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json, Binary };

Format parse_format(const std::string& name);
const char* to_string(Format f) noexcept;

/// Resolved run configuration in flag order. Echoed into every report; the
/// output path and format are left out so a re-run into another file
/// reproduces the same bytes.
class ConfigEcho {
public:
  void add(const std::string& flag, const std::string& value) { entries_.emplace_back(flag, value); }
  void add(const std::string& flag, double value);
  void add(const std::string& flag, long long value) { add(flag, std::to_string(value)); }
  void add(const std::string& flag, std::size_t value) { add(flag, std::to_string(value)); }
  void add(const std::string& flag, int value) { add(flag, std::to_string(value)); }
  void add(const std::string& flag, const std::vector<double>& values);
  void add(const std::string& flag, const std::vector<std::size_t>& values);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  /// "gbb <command> --flag value ..."; an empty value marks a bare flag.
  std::string command_line(const std::string& command) const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Plot-ready table; cells are JSON scalars (number, string or bool).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  std::string command;
  ConfigEcho config;
  Json result = Json::object();
  Table table;
};

/// 17 significant digits.
std::string format_double(double v);

std::string render_json(const Report& report);
/// '#' lines (version, command, config), a header row, then data rows.
std::string render_csv(const Report& report);

/// Writes to `path`, or to stdout when path is empty or "-". IoError on failure.
void write_text(const std::string& text, const std::string& path);
void write_report(const Report& report, const std::string& path, Format format);

/// I/O failure while writing output (exit code 3).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbb::cli
