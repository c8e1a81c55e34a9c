#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pairstate/errors.hpp"
#include "pairstate/qstate.hpp"

namespace pairstate {
namespace {

std::string format_real(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

double parse_real(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw DomainError("malformed complex number '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_complex(Complex value) {
  std::string out = format_real(value.real());
  const double im = value.imag();
  out += std::signbit(im) ? "-" : "+";
  out += format_real(std::abs(im));
  out += 'i';
  return out;
}

Complex parse_complex(std::string_view text) {
  const std::string_view whole = trim(text);
  std::string_view s = whole;
  if (s.empty()) throw DomainError("empty complex number");

  if (s.front() == '(') {
    if (s.back() != ')') {
      throw DomainError("malformed complex number '" + std::string(whole) + "'");
    }
    s = s.substr(1, s.size() - 2);
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) {
      return {parse_real(trim(s), whole), 0.0};
    }
    return {parse_real(trim(s.substr(0, comma)), whole),
            parse_real(trim(s.substr(comma + 1)), whole)};
  }

  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, whole), 0.0};
  s.remove_suffix(1);

  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](std::string_view t) {
    if (t == "+" || t.empty()) return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, whole);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(s)};
  return {parse_real(s.substr(0, split), whole), imag_part(s.substr(split))};
}

std::string format_density_matrix(const DensityMatrix& rho) {
  std::string out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (c > 0) out += ' ';
      out += format_complex(rho(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_density_matrix(std::ostream& out, const DensityMatrix& rho) {
  out << format_density_matrix(rho);
}

DensityMatrix read_density_matrix(std::istream& in, const std::string& source) {
  Matrix4c m;
  std::string line;
  std::size_t line_no = 0;
  int row = 0;
  while (row < 4 && std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream tokens{std::string(t)};
    std::vector<std::string> fields;
    for (std::string tok; tokens >> tok;) fields.push_back(tok);
    if (fields.size() != 4) {
      throw ParseError(source, line_no,
                       "expected 4 complex entries, found " +
                           std::to_string(fields.size()));
    }
    for (int c = 0; c < 4; ++c) {
      try {
        m(row, c) = parse_complex(fields[c]);
      } catch (const DomainError& e) {
        throw ParseError(source, line_no, e.what());
      }
    }
    ++row;
  }
  if (row < 4) {
    throw ParseError(source, line_no,
                     "expected 4 matrix rows, found " + std::to_string(row));
  }
  return DensityMatrix(m);
}

DensityMatrix read_density_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_density_matrix(in, path);
}

}  // namespace pairstate
