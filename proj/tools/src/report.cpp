#include "gbb_cli/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gbb/errors.hpp"
#include "gbb/version.hpp"

namespace gbb::cli {

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "bin" || name == "binary") return Format::Binary;
  throw ConfigError("unknown format '" + name + "' (expected csv, json or bin)");
}

const char* to_string(Format f) noexcept {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Binary: return "bin";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ConfigEcho::add(const std::string& flag, double value) { add(flag, format_double(value)); }

void ConfigEcho::add(const std::string& flag, const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
  add(flag, s);
}

void ConfigEcho::add(const std::string& flag, const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  add(flag, s);
}

std::string ConfigEcho::command_line(const std::string& command) const {
  std::string s = "gbb " + command;
  for (const auto& [flag, value] : entries_) s += " --" + flag + (value.empty() ? "" : " " + value);
  return s;
}

namespace {

std::string cell_text(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    for (char& ch : s) {
      if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    }
    return s;
  }
  if (v.is_null()) return "nan";
  return "?";
}

}  // namespace

std::string render_json(const Report& report) {
  Json doc = Json::object();
  doc["version"] = kVersion;
  doc["command"] = report.command;
  doc["command_line"] = report.config.command_line(report.command);
  Json cfg = Json::object();
  for (const auto& [flag, value] : report.config.entries()) cfg[flag] = value;
  doc["config"] = cfg;
  doc["result"] = report.result;
  Json table = Json::object();
  table["columns"] = report.table.columns;
  Json rows = Json::array();
  for (const auto& r : report.table.rows) rows.push_back(Json(r));
  table["rows"] = rows;
  doc["table"] = table;
  return doc.dump(2) + "\n";
}

std::string render_csv(const Report& report) {
  std::ostringstream out;
  out << "# version: " << kVersion << '\n';
  out << "# command_line: " << report.config.command_line(report.command) << '\n';
  for (const auto& [flag, value] : report.config.entries()) out << "# " << flag << ": " << value << '\n';
  for (const auto& [key, value] : report.result.items()) {
    if (value.is_primitive()) out << "# result." << key << ": " << cell_text(value) << '\n';
  }
  for (std::size_t i = 0; i < report.table.columns.size(); ++i) out << (i ? "," : "") << report.table.columns[i];
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  return out.str();
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

void write_report(const Report& report, const std::string& path, Format format) {
  switch (format) {
    case Format::Json: write_text(render_json(report), path); return;
    case Format::Csv: write_text(render_csv(report), path); return;
    case Format::Binary: throw ConfigError("binary output is only available for the sample subcommand");
  }
}

}  // namespace gbb::cli
