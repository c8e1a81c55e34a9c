#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

#include "pairstate/config.hpp"
#include "pairstate/errors.hpp"
#include "pairstate/table.hpp"

namespace pairstate {
namespace {

TEST(TableTest, RoundTripIsBitExact) {
  std::mt19937_64 gen(47);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  Table t;
  t.comments = {"first note", "second"};
  t.header = {"a", "b", "c"};
  for (int r = 0; r < 20; ++r) {
    t.rows.push_back({format_number(dist(gen)), format_number(dist(gen) * 1e-12),
                      format_number(r)});
  }
  std::stringstream buffer;
  write_table(buffer, t);
  const Table back = read_table(buffer);
  EXPECT_EQ(back.comments, t.comments);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.numbers("b"), t.numbers("b"));
  EXPECT_EQ(back.number(3, "c"), 3.0);
}

TEST(TableTest, NumberFormattingRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, -7.25e17,
                   std::numeric_limits<double>::min()}) {
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_THROW(parse_number("1.5x"), DomainError);
  EXPECT_THROW(parse_number(""), DomainError);
}

TEST(TableTest, RejectsRaggedRowsAndUnknownColumns) {
  std::istringstream ragged("a,b\n1,2\n3\n");
  try {
    read_table(ragged, "t.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
  std::istringstream ok("a,b\n1,2\n");
  const Table t = read_table(ok);
  EXPECT_THROW(t.column("c"), ConfigurationError);
}

TEST(ConfigTest, ParsesKeysCommentsAndLists) {
  std::istringstream in(
      "# sweep setup\n"
      "seed = 7\n"
      "source.alpha = 0.02\n"
      "source.eta=0.5\n"
      "source.n_max = 20\n"
      "sweep.eta_list = 0.001, 0.03, 0.20, 1.00\n"
      "sweep.power_grid = 1, 2, 5\n"
      "calibration.pairs_per_power = 0.02\n"
      "calibration.power_unit = mW\n"
      "simulate.scale = 1e5\n"
      "tomo.total_scale = 2e5\n"
      "tomography.circular_convention = plus_i\n"
      "run.threads = 2\n");
  const RunConfig c = parse_config(in, "c.cfg");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.source.alpha, 0.02);
  EXPECT_EQ(c.source.eta, 0.5);
  EXPECT_EQ(c.source.n_max, 20);
  EXPECT_EQ(c.eta_list, (std::vector<double>{0.001, 0.03, 0.2, 1.0}));
  EXPECT_EQ(c.power_grid, (std::vector<double>{1, 2, 5}));
  EXPECT_EQ(c.calibration.pairs_per_power, 0.02);
  EXPECT_EQ(c.calibration.power_unit, "mW");
  EXPECT_EQ(c.scale, 1e5);
  EXPECT_EQ(c.total_scale, 2e5);
  EXPECT_EQ(c.convention, CircularConvention::kPlusI);
  EXPECT_EQ(c.threads, 2u);
}

TEST(ConfigTest, ErrorsCarryRow) {
  std::istringstream unknown("seed = 1\nsource.beta = 2\n");
  try {
    parse_config(unknown, "bad.cfg");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.source(), "bad.cfg");
  }
  std::istringstream malformed("seed 1\n");
  EXPECT_THROW(parse_config(malformed, "m.cfg"), ParseError);
  std::istringstream bad_value("source.alpha = lots\n");
  EXPECT_THROW(parse_config(bad_value, "v.cfg"), ParseError);
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "tomography.circular_convention", "sideways"),
               ConfigurationError);
}

TEST(ConfigTest, RequireCompleteChecksEachMode) {
  RunConfig c;
  c.mode = Mode::kTomo;
  EXPECT_THROW(require_complete(c), ConfigurationError);
  c.inputs = {"a.csv"};
  EXPECT_NO_THROW(require_complete(c));

  RunConfig s;
  s.mode = Mode::kSweep;
  s.output = "out.csv";
  EXPECT_THROW(require_complete(s), ConfigurationError);
  s.power_grid = {1.0};
  EXPECT_NO_THROW(require_complete(s));
  s.eta_list = {1.5};
  EXPECT_THROW(require_complete(s), ConfigurationError);
}

TEST(ConfigTest, HashTracksResultAffectingSettings) {
  RunConfig a;
  RunConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  RunConfig c;
  apply_setting(c, "source.eta", "0.2");
  EXPECT_NE(config_hash(a), config_hash(c));
  EXPECT_NE(canonical_config_text(c).find("source.eta"), std::string::npos);
}

}  // namespace
}  // namespace pairstate
