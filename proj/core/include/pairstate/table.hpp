#pragma once

// Comma-delimited text tables with a '#' comment preamble. Numbers are written
// with 17 significant digits so every table reads back bit-exactly.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pairstate {

struct Table {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  std::vector<double> numbers(std::string_view name) const;
};

std::string format_number(double value);
double parse_number(std::string_view text);

void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in, const std::string& source = "<stream>");

void write_table_file(const std::string& path, const Table& table);
Table read_table_file(const std::string& path);

}  // namespace pairstate
