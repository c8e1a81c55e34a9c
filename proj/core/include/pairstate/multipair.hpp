#pragma once

// Coincidence model for a Poissonian multi-pair source observed with two
// threshold detectors. Analytic projection-class probabilities (with and
// without the simultaneous-detection efficiency eta), the effective Werner
// mixing parameter they imply, and a Monte Carlo oracle built on the same
// physical picture.
//
// Note on the HR kernels: the circular-projection sums use the factor
// {1 - (1 - alpha)^j}. The brace placement {1 - (1 - alpha)}^j collapses to
// alpha^j and contradicts the small-alpha limit alpha^2 (mu/4 + mu^2/4); the
// corrected form reproduces both that limit and the Monte Carlo oracle.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pairstate/qstate.hpp"
#include "pairstate/tomography.hpp"

namespace pairstate {

enum class ProjectionClass { kHH, kHV, kHR };

struct SourceParams {
  double mu = 0.0;     // mean pairs per pulse
  double alpha = 0.01; // per-photon detection efficiency
  double eta = 0.03;   // simultaneous detection efficiency
  int n_max = 15;      // series truncation

  // Throws DomainError when a field is out of range.
  void validate() const;
  // n_max >= ceil(mu + 6 sqrt(mu)).
  bool truncation_adequate() const;
};

struct RateTriple {
  double r_hh = 0.0;
  double r_hv = 0.0;
  double r_hr = 0.0;
  // False when the series was truncated too early for the requested mu.
  bool truncation_adequate = true;
};

struct PowerCalibration {
  double pairs_per_power = 1.0;  // mu = pairs_per_power * P
  std::string power_unit = "uW";

  double mu_at(double power) const { return pairs_per_power * power; }
};

double poisson_pmf(int x, double mu);

// f(x), g(x), h(x): coincidence probability of the class when x pairs are
// generated and every pair falls inside the coincidence window.
double class_prob_unprimed(int x, double alpha, ProjectionClass cls);

// Multinomial weight of k simultaneous pairs, m lone photons in arm 2 and
// x-k-m lone photons in arm 1.
double pair_split_weight(int x, int k, int m, double eta);

// The f(x,k,m), g(x,k,m), h(x,k,m) kernels for a fixed split.
double split_kernel(int x, int k, int m, double alpha, ProjectionClass cls);

// f'(x, eta), g'(x, eta), h'(x, eta).
double class_prob_primed(int x, double alpha, double eta, ProjectionClass cls);

RateTriple rates_unprimed(const SourceParams& params);
RateTriple rates_primed(const SourceParams& params);

// Primed kernels tabulated for x = 0..n_max at fixed (alpha, eta), so a sweep
// over mu only pays for the Poisson weights.
class KernelTable {
 public:
  KernelTable(double alpha, double eta, int n_max);

  double alpha() const noexcept { return alpha_; }
  double eta() const noexcept { return eta_; }
  int n_max() const noexcept { return n_max_; }
  double kernel(int x, ProjectionClass cls) const;

  RateTriple rates(double mu) const;

 private:
  double alpha_;
  double eta_;
  int n_max_;
  std::vector<double> hh_, hv_, hr_;
};

// 2 r_hv / (r_hh + r_hv), clamped to [0, 1]. Throws DegenerateInputError when
// both linear-class rates vanish.
double effective_g(const RateTriple& rates);

// r_hr as a fraction of the computational-basis total 2 (r_hh + r_hv). A
// Werner state gives exactly 1/4.
double hr_consistency(const RateTriple& rates);

// werner(mu / (1 + mu)).
DensityMatrix effective_density_matrix(double mu);

// Probabilities of the Werner state with effective_g(rates) over `set`.
Probabilities projection_probabilities_16(const RateTriple& rates,
                                          const ProjectionSet& set);
Probabilities projection_probabilities_16(const RateTriple& rates);

struct MonteCarloRates {
  RateTriple rates;
  RateTriple standard_errors;
  std::uint64_t shots = 0;
};

// Shot-by-shot simulation of the source, analyzers and threshold detectors.
// Shots are split into fixed-size batches, each seeded from (seed, batch), and
// batches may run on several threads; results do not depend on scheduling.
MonteCarloRates monte_carlo_rates(const SourceParams& params, std::uint64_t shots,
                                  std::uint64_t seed, unsigned threads = 0);

struct CurvePoint {
  double power = 0.0;
  double mu = 0.0;
  double g = 0.0;
};

std::vector<CurvePoint> g_vs_power_curve(const PowerCalibration& calibration,
                                         const SourceParams& params_template,
                                         std::span<const double> powers);

// Mixing parameter produced by a background whose coincidence rate scales with
// the same power law as the pair signal. The power cancels exactly.
double background_g(double signal_coeff, double background_coeff, double power);

}  // namespace pairstate
