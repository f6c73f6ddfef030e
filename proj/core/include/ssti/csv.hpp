#pragma once

#include <string>
#include <vector>

namespace ssti {

/// Column-major numeric table. Serialized dialect: comma separator, '.'
/// decimal, one header row, UTF-8, LF line endings. Formatting is locale
/// independent so identical data always serializes to identical bytes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  size_t row_count() const { return columns.empty() ? 0 : columns.front().size(); }
  void add_column(std::string name, std::vector<double> values);
};

/// Shortest round-trippable decimal representation of v.
std::string format_double(double v);

std::string to_csv_string(const CsvTable& table);
void write_csv(const CsvTable& table, const std::string& path);

/// Strict reader for the dialect above: rejects ragged rows and non-numeric
/// cells with a message naming line and column.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<string>");

}  // namespace ssti
