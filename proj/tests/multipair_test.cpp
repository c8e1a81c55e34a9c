#include "pairstate/multipair.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pairstate/errors.hpp"

namespace pairstate {
namespace {

constexpr ProjectionClass kClasses[] = {ProjectionClass::kHH, ProjectionClass::kHV,
                                        ProjectionClass::kHR};

double rate_of(const RateTriple& r, int cls) {
  return cls == 0 ? r.r_hh : cls == 1 ? r.r_hv : r.r_hr;
}

TEST(PoissonTest, ValuesAndNormalization) {
  EXPECT_EQ(poisson_pmf(0, 0.0), 1.0);
  EXPECT_EQ(poisson_pmf(3, 0.0), 0.0);
  EXPECT_NEAR(poisson_pmf(1, 1.0), std::exp(-1.0), 1e-16);
  double sum = 0.0;
  for (int x = 0; x <= 15; ++x) sum += poisson_pmf(x, 0.5);
  EXPECT_GT(sum, 1.0 - 1e-9);
  // Log-space branch agrees with a direct product.
  double direct = std::exp(-3.0);
  for (int i = 1; i <= 21; ++i) direct *= 3.0 / i;
  EXPECT_NEAR(poisson_pmf(21, 3.0), direct, 1e-12 * direct);
  EXPECT_THROW(poisson_pmf(-1, 1.0), DomainError);
}

TEST(UnprimedKernelTest, ZeroAndOnePair) {
  for (auto cls : kClasses) EXPECT_EQ(class_prob_unprimed(0, 0.1, cls), 0.0);
  EXPECT_NEAR(class_prob_unprimed(1, 0.1, ProjectionClass::kHH), 0.005, 1e-16);
  EXPECT_NEAR(class_prob_unprimed(1, 0.1, ProjectionClass::kHV), 0.0, 1e-16);
  EXPECT_NEAR(class_prob_unprimed(1, 0.1, ProjectionClass::kHR), 0.0025, 1e-16);
  EXPECT_NEAR(class_prob_unprimed(2, 0.1, ProjectionClass::kHH), 0.014025, 1e-15);
}

TEST(UnprimedKernelTest, MatchesEnumeration) {
  for (double alpha : {0.01, 0.1, 0.5, 1.0}) {
    for (int x = 0; x <= 6; ++x) {
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(class_prob_unprimed(x, alpha, kClasses[c]),
                    oracle::enumerate_class(x, alpha, 1.0, c), 1e-13)
            << "alpha=" << alpha << " x=" << x << " cls=" << c;
      }
    }
  }
}

TEST(PrimedKernelTest, FrozenValues) {
  EXPECT_NEAR(class_prob_primed(2, 0.1, 0.3, ProjectionClass::kHH), 0.00491975, 1e-15);
  EXPECT_NEAR(class_prob_primed(2, 0.1, 0.3, ProjectionClass::kHV), 0.0021125, 1e-15);
  EXPECT_NEAR(class_prob_primed(2, 0.1, 0.3, ProjectionClass::kHR), 0.0035155625, 1e-15);
  EXPECT_NEAR(class_prob_primed(1, 0.1, 0.3, ProjectionClass::kHH), 0.0015, 1e-16);
  EXPECT_NEAR(class_prob_primed(3, 0.1, 0.3, ProjectionClass::kHH), 0.010071858375, 1e-14);
  EXPECT_NEAR(class_prob_primed(4, 0.1, 0.3, ProjectionClass::kHR), 0.014321897509379, 1e-14);
}

TEST(PrimedKernelTest, MatchesEnumeration) {
  for (double alpha : {0.05, 0.3, 1.0}) {
    for (double eta : {0.0, 0.03, 0.5, 1.0}) {
      for (int x = 0; x <= 5; ++x) {
        for (int c = 0; c < 3; ++c) {
          EXPECT_NEAR(class_prob_primed(x, alpha, eta, kClasses[c]),
                      oracle::enumerate_class(x, alpha, eta, c), 1e-13)
              << "alpha=" << alpha << " eta=" << eta << " x=" << x << " cls=" << c;
        }
      }
    }
  }
}

TEST(SplitKernelTest, MatchesClosedForm) {
  for (double alpha : {0.005, 0.1, 0.7}) {
    for (int x = 0; x <= 15; ++x) {
      for (int k = 0; k <= x; ++k) {
        for (int m = 0; m <= x - k; ++m) {
          for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(split_kernel(x, k, m, alpha, kClasses[c]),
                        oracle::split_kernel_closed_form(x, k, m, alpha, c), 1e-12)
                << x << " " << k << " " << m << " " << c;
          }
        }
      }
    }
  }
}

TEST(SplitWeightTest, NormalizationAndDeltaAtUnitEta) {
  for (double eta : {0.0, 0.03, 0.4, 1.0}) {
    for (int x = 0; x <= 15; ++x) {
      double sum = 0.0;
      for (int k = 0; k <= x; ++k)
        for (int m = 0; m <= x - k; ++m) sum += pair_split_weight(x, k, m, eta);
      EXPECT_NEAR(sum, 1.0, 1e-12) << eta << " " << x;
    }
  }
  EXPECT_EQ(pair_split_weight(4, 4, 0, 1.0), 1.0);
  EXPECT_EQ(pair_split_weight(4, 3, 1, 1.0), 0.0);
  EXPECT_NEAR(pair_split_weight(2, 1, 1, 0.5), 0.25, 1e-16);
  EXPECT_THROW(pair_split_weight(2, 3, 0, 0.5), DomainError);
  EXPECT_THROW(pair_split_weight(2, 1, 2, 0.5), DomainError);
}

TEST(PrimedKernelTest, ReducesToUnprimedAtUnitEta) {
  for (double alpha : {0.005, 0.1, 1.0}) {
    for (int x = 0; x <= 10; ++x) {
      for (auto cls : kClasses) {
        EXPECT_NEAR(class_prob_primed(x, alpha, 1.0, cls), class_prob_unprimed(x, alpha, cls),
                    1e-12);
      }
    }
  }
}

TEST(RatesTest, ZeroMuGivesZeroRates) {
  const RateTriple u = rates_unprimed({0.0, 0.1, 1.0, 15});
  const RateTriple p = rates_primed({0.0, 0.1, 0.3, 15});
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(rate_of(u, c), 0.0);
    EXPECT_EQ(rate_of(p, c), 0.0);
  }
}

TEST(RatesTest, LowFluxAsymptotics) {
  for (double alpha : {0.001, 0.005, 0.01}) {
    for (double mu : {0.01, 0.05, 0.1, 0.2}) {
      const RateTriple r = rates_unprimed({mu, alpha, 1.0, 15});
      const double a2 = alpha * alpha;
      EXPECT_NEAR(r.r_hh / (a2 * (mu / 2 + mu * mu / 4)), 1.0, 0.02);
      EXPECT_NEAR(r.r_hv / (a2 * mu * mu / 4), 1.0, 0.02);
      EXPECT_NEAR(r.r_hr / (a2 * (mu / 4 + mu * mu / 4)), 1.0, 0.02);
    }
  }
}

TEST(RatesTest, PrimedAtUnitEtaMatchesUnprimed) {
  for (double mu : {0.1, 1.0, 3.0}) {
    const RateTriple u = rates_unprimed({mu, 0.05, 1.0, 20});
    const RateTriple p = rates_primed({mu, 0.05, 1.0, 20});
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(rate_of(p, c), rate_of(u, c), 1e-14);
  }
}

TEST(RatesTest, KernelTableMatchesDirectRates) {
  const KernelTable table(0.02, 0.2, 20);
  for (double mu : {0.05, 0.7, 2.0}) {
    const RateTriple a = table.rates(mu);
    const RateTriple b = rates_primed({mu, 0.02, 0.2, 20});
    for (int c = 0; c < 3; ++c) EXPECT_EQ(rate_of(a, c), rate_of(b, c));
  }
  EXPECT_THROW(table.kernel(21, ProjectionClass::kHH), DomainError);
}

TEST(RatesTest, TruncationFlagAndStability) {
  EXPECT_TRUE(rates_primed({1.0, 0.01, 0.03, 15}).truncation_adequate);
  EXPECT_FALSE(rates_primed({10.0, 0.01, 0.03, 15}).truncation_adequate);
  for (double mu : {0.01, 0.3, 1.0}) {
    const RateTriple a = rates_primed({mu, 0.01, 0.03, 15});
    const RateTriple b = rates_primed({mu, 0.01, 0.03, 30});
    for (int c = 0; c < 3; ++c)
      EXPECT_NEAR(rate_of(a, c), rate_of(b, c), 1e-9 * rate_of(b, c));
  }
}

TEST(RatesTest, RejectsBadParameters) {
  EXPECT_THROW(rates_primed({-1.0, 0.1, 0.3, 15}), DomainError);
  EXPECT_THROW(rates_primed({1.0, 0.0, 0.3, 15}), DomainError);
  EXPECT_THROW(rates_primed({1.0, 0.1, 1.3, 15}), DomainError);
  EXPECT_THROW(rates_primed({1.0, 0.1, 0.3, 0}), DomainError);
  EXPECT_THROW(rates_primed({1.0, 0.1, 0.3, 171}), DomainError);
}

TEST(MonteCarloTest, AgreesWithAnalyticRates) {
  for (const SourceParams p : {SourceParams{0.5, 0.2, 0.5, 15}, SourceParams{1.0, 0.05, 1.0, 15},
                               SourceParams{0.1, 0.2, 0.03, 15}}) {
    const RateTriple exact = rates_primed(p);
    const MonteCarloRates mc = monte_carlo_rates(p, 400000, 5, 1);
    for (int c = 0; c < 3; ++c) {
      const double se = rate_of(mc.standard_errors, c);
      EXPECT_NEAR(rate_of(mc.rates, c), rate_of(exact, c), 4.0 * se + 1e-12)
          << "mu=" << p.mu << " cls=" << c;
    }
  }
}

TEST(MonteCarloTest, DeterministicAcrossThreadCounts) {
  const SourceParams p{0.5, 0.1, 0.3, 15};
  const MonteCarloRates a = monte_carlo_rates(p, 200000, 77, 1);
  const MonteCarloRates b = monte_carlo_rates(p, 200000, 77, 3);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(rate_of(a.rates, c), rate_of(b.rates, c));
  const MonteCarloRates zero = monte_carlo_rates({0.0, 0.1, 0.3, 15}, 1000, 1, 1);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(rate_of(zero.rates, c), 0.0);
}

TEST(EffectiveGTest, WernerLawAndEdgeCases) {
  for (double mu : {0.01, 0.1, 1.0, 2.0}) {
    const double g = effective_g(rates_primed({mu, 0.005, 1.0, 30}));
    EXPECT_NEAR(g / (mu / (1.0 + mu)), 1.0, 0.01) << mu;
  }
  EXPECT_EQ(effective_g({1.0, 0.0, 0.5, true}), 0.0);
  EXPECT_EQ(effective_g({1.0, 1.0, 1.0, true}), 1.0);
  EXPECT_THROW(effective_g({0.0, 0.0, 0.0, true}), DegenerateInputError);
  // Werner-like rates put r_hr at half of r_hh + r_hv.
  EXPECT_NEAR(hr_consistency(rates_primed({0.1, 0.005, 1.0, 15})), 0.25, 0.003);
}

TEST(EffectiveDensityMatrixTest, IsWernerWithLawParameter) {
  EXPECT_LT(effective_density_matrix(0.0).max_abs_diff(ideal_bell()), 1e-15);
  EXPECT_LT(effective_density_matrix(1.0).max_abs_diff(werner(0.5)), 1e-15);
  EXPECT_LT(effective_density_matrix(3.0).max_abs_diff(werner(0.75)), 1e-15);
  EXPECT_NEAR(tangle(effective_density_matrix(3.0)), 0.0, 1e-9);
  for (int i = 0; i <= 50; ++i) {
    const double mu = 0.1 * i;
    EXPECT_LT(effective_density_matrix(mu).max_abs_diff(werner(mu / (1.0 + mu))), 1e-12);
  }
  EXPECT_THROW(effective_density_matrix(-0.1), DomainError);
}

TEST(ProjectionProbabilitiesTest, LimitsAndWernerMatch) {
  const ProjectionSet set = canonical_projection_set();
  const Probabilities ideal = expected_probabilities(ideal_bell(), set);
  const Probabilities low = projection_probabilities_16(rates_primed({1e-6, 0.005, 1.0, 15}));
  for (std::size_t i = 0; i < kNumProjectors; ++i) EXPECT_NEAR(low[i], ideal[i], 1e-5);
  const Probabilities mid = projection_probabilities_16(rates_primed({1.0, 0.005, 1.0, 15}));
  const Probabilities w = expected_probabilities(werner(0.5), set);
  for (std::size_t i = 0; i < kNumProjectors; ++i) EXPECT_NEAR(mid[i], w[i], 0.01 * w[i] + 1e-3);
  EXPECT_NEAR(mid[*set.index_of("RH")], 0.25, 1e-12);
}

TEST(PowerCurveTest, MonotoneAndLowPowerLimit) {
  const PowerCalibration cal{0.02, "uW"};
  std::vector<double> powers;
  for (int i = 1; i <= 50; ++i) powers.push_back(i);
  for (double eta : {0.001, 0.03, 0.2, 1.0}) {
    const auto curve = g_vs_power_curve(cal, {0.0, 0.01, eta, 15}, powers);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].g, curve[i - 1].g);
  }
  const double tiny[] = {1e-7};
  EXPECT_LT(g_vs_power_curve(cal, {0.0, 0.01, 0.03, 15}, tiny)[0].g, 1e-3);
  const double zero[] = {0.0};
  EXPECT_THROW(g_vs_power_curve(cal, {0.0, 0.01, 0.03, 15}, zero), DomainError);
}

TEST(BackgroundTest, IndependentOfPower) {
  const double first = background_g(3.0, 1.0, 1.0);
  for (double p : {2.0, 5.0, 10.0}) EXPECT_EQ(background_g(3.0, 1.0, p), first);
  EXPECT_EQ(background_g(3.0, 0.0, 2.0), 0.0);
  EXPECT_EQ(background_g(2.0, 2.0, 2.0), 0.5);
  EXPECT_THROW(background_g(0.0, 0.0, 1.0), DegenerateInputError);
  EXPECT_THROW(background_g(1.0, 1.0, 0.0), DomainError);
}

}  // namespace
}  // namespace pairstate
