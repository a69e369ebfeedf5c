#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>


namespace jpmcount::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  return quoted + "\"";
}

nlohmann::json json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

nlohmann::json table_to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json entry = nlohmann::json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) entry[table.columns[c]] = json_cell(row[c]);
    rows.push_back(std::move(entry));
  }
  return rows;
}

void write_json(const std::filesystem::path& file, const nlohmann::json& value) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  out << value.dump(2) << '\n';
}

std::string write_table(const std::filesystem::path& dir, const std::string& stem,
                        const Table& table, Format format) {
  const std::string name = stem + (format == Format::Csv ? ".csv" : ".json");
  if (format == Format::Json) {
    write_json(dir / name, table_to_json(table));
    return name;
  }
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
    out << '\n';
  }
  return name;
}

}  // namespace jpmcount::cli
