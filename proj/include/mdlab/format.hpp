#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace mdlab::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// %.17g; non-finite values as inf, -inf, nan.
std::string format_double(double x);

// Two-space indented JSON, keys in insertion order, numbers through
// format_double.  Non-finite numbers are written as the strings "inf",
// "-inf", "nan".  Output ends with a newline.
std::string to_json_text(const json& j);

std::string sha256_hex(std::string_view data);

// CSV with '#'-prefixed metadata lines, one header row, then data rows.
// Fields containing a comma, quote or newline are quoted.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> meta;  // "# key: value"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::size_t column(const std::string& name) const;  // UsageError if absent
  const std::string& meta_value(const std::string& key) const;
};

std::string to_csv_text(const CsvTable& t);
CsvTable parse_csv(std::string_view text);

// Whole-file helpers.  IoError on failure.
void write_text(const std::filesystem::path& p, std::string_view text);
std::string read_text(const std::filesystem::path& p);

double parse_double(std::string_view s);  // UsageError unless the whole field parses

}  // namespace mdlab::io
