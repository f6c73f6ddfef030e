#include "ssti/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ssti {

void CsvTable::add_column(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != columns.front().size())
    throw std::invalid_argument("CsvTable: column '" + name + "' length mismatch");
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv_string(const CsvTable& table) {
  if (table.header.size() != table.columns.size())
    throw std::invalid_argument("CsvTable: header/column count mismatch");
  std::string out;
  for (size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  const size_t rows = table.row_count();
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(table.columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  f << to_csv_string(table);
  if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (line_no == 1) {
      table.header = cells;
      table.columns.assign(cells.size(), {});
      continue;
    }
    if (cells.size() != table.header.size())
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(table.header.size()) +
                               " cells, found " + std::to_string(cells.size()));
    for (size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const char* first = cells[c].data();
      const char* last = first + cells[c].size();
      const auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last)
        throw std::runtime_error(origin + ":" + std::to_string(line_no) + ":" +
                                 std::to_string(c + 1) + ": not a number: '" + cells[c] + "'");
      table.columns[c].push_back(v);
    }
  }
  if (table.header.empty())
    throw std::runtime_error(origin + ":1: empty document, header row required");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_csv: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_csv(buf.str(), path);
}

}  // namespace ssti
