#include "qdepth/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qdepth {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

DataSet parse_csv_text(std::string_view text, bool has_header, const std::string& source) {
  std::vector<double> values;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = has_header;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split(line);
    if (columns == 0) {
      columns = cells.size();
    } else if (cells.size() != columns) {
      throw InputError(source + ": row " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(columns));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw InputError(source + ": row " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": not a number: '" + std::string(trim(cells[c])) +
                         "'");
      }
      if (!std::isfinite(v)) {
        throw InputError(source + ": row " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + ": non-finite value");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw InputError(source + ": no data rows");

  DataSet out(static_cast<Index>(rows), static_cast<Index>(columns));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns; ++c) {
      out(static_cast<Index>(r), static_cast<Index>(c)) = values[r * columns + c];
    }
  }
  return out;
}

DataSet parse_csv(const std::string& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_text(buffer.str(), has_header, path);
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto cell : split(text)) {
    double v = 0.0;
    if (!parse_double(cell, v)) {
      throw InputError("not a number in list: '" + std::string(trim(cell)) + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_sig9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace qdepth
