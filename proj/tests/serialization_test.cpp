#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pairstate/errors.hpp"
#include "pairstate/qstate.hpp"

namespace pairstate {
namespace {

TEST(ParseComplexTest, AcceptsSupportedForms) {
  EXPECT_EQ(parse_complex("0.5"), Complex(0.5, 0.0));
  EXPECT_EQ(parse_complex("1.5-2e-3i"), Complex(1.5, -2e-3));
  EXPECT_EQ(parse_complex("1e-05+2E+01i"), Complex(1e-5, 20.0));
  EXPECT_EQ(parse_complex("(0.25,-1)"), Complex(0.25, -1.0));
  EXPECT_EQ(parse_complex("-0.5i"), Complex(0.0, -0.5));
  EXPECT_EQ(parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(parse_complex("+i"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("-3-i"), Complex(-3.0, -1.0));
  EXPECT_EQ(parse_complex("1+2j"), Complex(1.0, 2.0));
}

TEST(ParseComplexTest, RejectsMalformedText) {
  for (const char* bad : {"", "abc", "1+2", "1+2k", "(1,2", "1..2", "1+2ii"}) {
    EXPECT_THROW(parse_complex(bad), DomainError) << bad;
  }
}

TEST(FormatComplexTest, RoundTripsExactly) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex z(dist(gen), dist(gen) * std::pow(10.0, i % 20 - 10));
    EXPECT_EQ(parse_complex(format_complex(z)), z) << format_complex(z);
  }
}

TEST(DensityMatrixIoTest, RoundTripIsBitExact) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = oracle::random_state(gen, 1 + trial % 4);
    std::stringstream buffer;
    write_density_matrix(buffer, rho);
    const DensityMatrix back = read_density_matrix(buffer);
    EXPECT_EQ(back.entries(), rho.entries());
  }
}

TEST(DensityMatrixIoTest, SkipsCommentsAndBlankLines) {
  std::istringstream in(
      "# a comment\n\n"
      "0.5 0 0 0.5\n"
      "0 0 0 0\n"
      "# between rows\n"
      "0 0 0 0\n"
      "0.5 0 0 (0.5,0)\n");
  EXPECT_LT(read_density_matrix(in).max_abs_diff(ideal_bell()), 1e-15);
}

TEST(DensityMatrixIoTest, ReportsRowOfBadEntry) {
  std::istringstream in("0.5 0 0 0.5\n0 0 0 0\n0 0 zero 0\n0.5 0 0 0.5\n");
  try {
    read_density_matrix(in, "bad.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.source(), "bad.txt");
    EXPECT_EQ(e.row(), 3u);
  }
}

TEST(DensityMatrixIoTest, RejectsShortRowsAndMissingRows) {
  std::istringstream short_row("0.5 0 0\n0 0 0 0\n0 0 0 0\n0.5 0 0 0.5\n");
  EXPECT_THROW(read_density_matrix(short_row), ParseError);
  std::istringstream missing("0.5 0 0 0.5\n0 0 0 0\n");
  EXPECT_THROW(read_density_matrix(missing), ParseError);
}

}  // namespace
}  // namespace pairstate
