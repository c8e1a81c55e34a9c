#include "pairstate/count_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pairstate/errors.hpp"
#include "pairstate/table.hpp"

namespace pairstate {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

CountFile read_count_file(std::istream& in, const ProjectionSet& set,
                          const std::string& source) {
  CountFile file;
  std::array<bool, kNumProjectors> seen{};
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      std::string comment = trim(t.substr(1));
      if (comment.rfind("label=", 0) == 0) file.label = trim(comment.substr(6));
      file.comments.push_back(std::move(comment));
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected 'label,count'");
    }
    const std::string label = trim(t.substr(0, comma));
    const auto idx = set.index_of(label);
    if (!idx) throw ParseError(source, line_no, "unknown projector label '" + label + "'");
    if (seen[*idx]) throw ParseError(source, line_no, "duplicate projector label '" + label + "'");
    double value = 0.0;
    try {
      value = parse_number(trim(t.substr(comma + 1)));
    } catch (const DomainError& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw ParseError(source, line_no, "count must be finite and non-negative");
    }
    file.counts[*idx] = value;
    seen[*idx] = true;
    ++rows;
  }
  if (rows != kNumProjectors) {
    std::string missing;
    for (std::size_t i = 0; i < kNumProjectors; ++i) {
      if (!seen[i]) missing += (missing.empty() ? "" : " ") + set[i].label;
    }
    throw ParseError(source, 0,
                     "expected 16 count rows, found " + std::to_string(rows) +
                         " (missing: " + missing + ")");
  }
  return file;
}

CountFile read_count_file(const std::string& path, const ProjectionSet& set) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_count_file(in, set, path);
}

void write_count_file(std::ostream& out, const CountFile& file, const ProjectionSet& set) {
  for (const auto& c : file.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << set[i].label << ',' << format_number(file.counts[i]) << '\n';
  }
}

void write_count_file(const std::string& path, const CountFile& file,
                      const ProjectionSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_count_file(out, file, set);
  if (!out) throw Error("failed writing " + path);
}

}  // namespace pairstate
