#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace jpmcount::cli {

enum class Format { Csv, Json };

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest text for doubles is avoided in CSV: every value carries 17
/// significant digits so files round-trip exactly.
std::string format_double(double value);

/// Writes stem.csv or stem.json under dir and returns the file name.
std::string write_table(const std::filesystem::path& dir, const std::string& stem,
                        const Table& table, Format format);

nlohmann::json table_to_json(const Table& table);

void write_json(const std::filesystem::path& file, const nlohmann::json& value);

}  // namespace jpmcount::cli
