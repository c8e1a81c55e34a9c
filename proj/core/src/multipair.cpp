#include "pairstate/multipair.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <thread>

#include "pairstate/errors.hpp"

namespace pairstate {
namespace {

// Largest pair number for which x! (and therefore every binomial in the
// kernels) is finite in double precision.
constexpr int kMaxPairs = 170;
constexpr std::uint64_t kShotsPerBatch = 1u << 16;

class BinomialTable {
 public:
  BinomialTable() : rows_(kMaxPairs + 1) {
    for (int n = 0; n <= kMaxPairs; ++n) {
      rows_[n].assign(n + 1, 1.0);
      for (int k = 1; k < n; ++k) rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
    }
  }
  double operator()(int n, int k) const { return rows_[n][k]; }

 private:
  std::vector<std::vector<double>> rows_;
};

const BinomialTable& binomial() {
  static const BinomialTable table;
  return table;
}

void check_pairs(int x) {
  if (x < 0 || x > kMaxPairs) {
    throw DomainError("pair number must lie in [0, " + std::to_string(kMaxPairs) +
                      "], got " + std::to_string(x));
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("detection efficiency alpha must lie in (0, 1]");
  }
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("simultaneous detection efficiency eta must lie in [0, 1]");
  }
}

// miss[n] = (1 - alpha)^n: probability that none of n incident photons clicks.
std::vector<double> miss_powers(double alpha, int n) {
  std::vector<double> miss(n + 1);
  miss[0] = 1.0;
  for (int i = 1; i <= n; ++i) miss[i] = miss[i - 1] * (1.0 - alpha);
  return miss;
}

// Probability that an arm fed by n photons, each passing the analyzer with
// probability 1/2, registers a click:
// sum_j C(n, j) / 2^n {1 - (1 - alpha)^(n - j)}.
double half_pass_click(int n, const std::vector<double>& miss) {
  const auto& c = binomial();
  double s = 0.0;
  for (int j = 0; j <= n; ++j) s += c(n, j) * (1.0 - miss[n - j]);
  return std::ldexp(s, -n);
}

}  // namespace

void SourceParams::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("mu must be >= 0");
  check_alpha(alpha);
  check_eta(eta);
  if (n_max < 1 || n_max > kMaxPairs) {
    throw DomainError("n_max must lie in [1, " + std::to_string(kMaxPairs) + "]");
  }
}

bool SourceParams::truncation_adequate() const {
  return static_cast<double>(n_max) >= std::ceil(mu + 6.0 * std::sqrt(mu));
}

double poisson_pmf(int x, double mu) {
  if (x < 0) throw DomainError("poisson_pmf needs x >= 0");
  if (!(mu >= 0.0)) throw DomainError("poisson_pmf needs mu >= 0");
  if (mu == 0.0) return x == 0 ? 1.0 : 0.0;
  if (x > 20) {
    return std::exp(-mu + x * std::log(mu) - std::lgamma(x + 1.0));
  }
  double term = std::exp(-mu);
  for (int i = 1; i <= x; ++i) term *= mu / i;
  return term;
}

double class_prob_unprimed(int x, double alpha, ProjectionClass cls) {
  check_pairs(x);
  check_alpha(alpha);
  const auto miss = miss_powers(alpha, x);
  const auto& c = binomial();
  switch (cls) {
    case ProjectionClass::kHH: {
      double s = 0.0;
      for (int y = 0; y <= x; ++y) {
        const double click = 1.0 - miss[x - y];
        s += c(x, y) * click * click;
      }
      return std::ldexp(s, -x);
    }
    case ProjectionClass::kHV: {
      double s = 0.0;
      for (int y = 0; y <= x; ++y) s += c(x, y) * (1.0 - miss[x - y]) * (1.0 - miss[y]);
      return std::ldexp(s, -x);
    }
    case ProjectionClass::kHR: {
      const double arm = half_pass_click(x, miss);
      return arm * arm;
    }
  }
  return 0.0;
}

double pair_split_weight(int x, int k, int m, double eta) {
  check_pairs(x);
  check_eta(eta);
  if (k < 0 || k > x || m < 0 || m > x - k) {
    throw DomainError("pair split indices need 0 <= k <= x and 0 <= m <= x - k");
  }
  const auto& c = binomial();
  return std::pow(eta, k) * std::pow((1.0 - eta) / 2.0, x - k) * c(x, k) * c(x - k, m);
}

double split_kernel(int x, int k, int m, double alpha, ProjectionClass cls) {
  check_pairs(x);
  check_alpha(alpha);
  if (k < 0 || k > x || m < 0 || m > x - k) {
    throw DomainError("pair split indices need 0 <= k <= x and 0 <= m <= x - k");
  }
  const int lone1 = x - k - m;
  const auto miss = miss_powers(alpha, x);
  const auto& c = binomial();

  if (cls == ProjectionClass::kHR) {
    // Arm 1 holds the k pair photons plus lone1 singles, arm 2 the k pair
    // photons plus m singles; the circular analyzer is polarization-blind.
    return half_pass_click(x - m, miss) * half_pass_click(k + m, miss);
  }

  // y: H-polarized simultaneous pairs, z: H singles in arm 1, w: H singles in
  // arm 2.
  double s = 0.0;
  for (int y = 0; y <= k; ++y) {
    for (int z = 0; z <= lone1; ++z) {
      const double arm1 = 1.0 - miss[y + z];
      if (arm1 == 0.0) continue;
      for (int w = 0; w <= m; ++w) {
        const double arm2 = cls == ProjectionClass::kHH
                                ? 1.0 - miss[y + w]
                                : 1.0 - miss[k - y + m - w];
        s += c(k, y) * c(lone1, z) * c(m, w) * arm1 * arm2;
      }
    }
  }
  return std::ldexp(s, -x);
}

double class_prob_primed(int x, double alpha, double eta, ProjectionClass cls) {
  check_pairs(x);
  check_alpha(alpha);
  check_eta(eta);
  double s = 0.0;
  for (int k = 0; k <= x; ++k) {
    for (int m = 0; m <= x - k; ++m) {
      const double weight = pair_split_weight(x, k, m, eta);
      if (weight == 0.0) continue;
      s += weight * split_kernel(x, k, m, alpha, cls);
    }
  }
  return s;
}

RateTriple rates_unprimed(const SourceParams& params) {
  params.validate();
  RateTriple r;
  for (int x = 0; x <= params.n_max; ++x) {
    const double w = poisson_pmf(x, params.mu);
    if (w == 0.0) continue;
    r.r_hh += w * class_prob_unprimed(x, params.alpha, ProjectionClass::kHH);
    r.r_hv += w * class_prob_unprimed(x, params.alpha, ProjectionClass::kHV);
    r.r_hr += w * class_prob_unprimed(x, params.alpha, ProjectionClass::kHR);
  }
  r.truncation_adequate = params.truncation_adequate();
  return r;
}

RateTriple rates_primed(const SourceParams& params) {
  params.validate();
  return KernelTable(params.alpha, params.eta, params.n_max).rates(params.mu);
}

KernelTable::KernelTable(double alpha, double eta, int n_max)
    : alpha_(alpha), eta_(eta), n_max_(n_max) {
  SourceParams{0.0, alpha, eta, n_max}.validate();
  hh_.resize(n_max + 1);
  hv_.resize(n_max + 1);
  hr_.resize(n_max + 1);
  for (int x = 0; x <= n_max; ++x) {
    hh_[x] = class_prob_primed(x, alpha, eta, ProjectionClass::kHH);
    hv_[x] = class_prob_primed(x, alpha, eta, ProjectionClass::kHV);
    hr_[x] = class_prob_primed(x, alpha, eta, ProjectionClass::kHR);
  }
}

double KernelTable::kernel(int x, ProjectionClass cls) const {
  if (x < 0 || x > n_max_) throw DomainError("kernel index outside the table");
  switch (cls) {
    case ProjectionClass::kHH: return hh_[x];
    case ProjectionClass::kHV: return hv_[x];
    case ProjectionClass::kHR: return hr_[x];
  }
  return 0.0;
}

RateTriple KernelTable::rates(double mu) const {
  SourceParams p{mu, alpha_, eta_, n_max_};
  p.validate();
  RateTriple r;
  for (int x = 0; x <= n_max_; ++x) {
    const double w = poisson_pmf(x, mu);
    r.r_hh += w * hh_[x];
    r.r_hv += w * hv_[x];
    r.r_hr += w * hr_[x];
  }
  r.truncation_adequate = p.truncation_adequate();
  return r;
}

double effective_g(const RateTriple& rates) {
  const double linear = rates.r_hh + rates.r_hv;
  if (!(linear > 0.0)) {
    throw DegenerateInputError("HH and HV coincidence rates are both zero");
  }
  return std::clamp(2.0 * rates.r_hv / linear, 0.0, 1.0);
}

double hr_consistency(const RateTriple& rates) {
  const double linear = rates.r_hh + rates.r_hv;
  if (!(linear > 0.0)) {
    throw DegenerateInputError("HH and HV coincidence rates are both zero");
  }
  return rates.r_hr / (2.0 * linear);
}

DensityMatrix effective_density_matrix(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("mu must be >= 0");
  const double norm = 4.0 + 4.0 * mu;
  Matrix4c m = Matrix4c::Zero();
  m(kHH, kHH) = (2.0 + mu) / norm;
  m(kHV, kHV) = mu / norm;
  m(kVH, kVH) = mu / norm;
  m(kVV, kVV) = (2.0 + mu) / norm;
  m(kHH, kVV) = 2.0 / norm;
  m(kVV, kHH) = 2.0 / norm;
  return DensityMatrix(m);
}

Probabilities projection_probabilities_16(const RateTriple& rates,
                                          const ProjectionSet& set) {
  return expected_probabilities(werner(effective_g(rates)), set);
}

Probabilities projection_probabilities_16(const RateTriple& rates) {
  static const ProjectionSet canonical = canonical_projection_set();
  return projection_probabilities_16(rates, canonical);
}

namespace {

struct BatchTally {
  std::array<std::uint64_t, 3> coincidences{};
};

BatchTally run_batch(const SourceParams& p, std::uint64_t shots, std::uint64_t seed,
                     std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch),
                    static_cast<std::uint32_t>(batch >> 32)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::poisson_distribution<int> pairs(p.mu > 0.0 ? p.mu : 1.0);

  // Polarization of each photon reaching an arm: true = H.
  std::vector<bool> arm1, arm2;
  BatchTally tally;
  const double lone_arm1 = p.eta + (1.0 - p.eta) / 2.0;

  for (std::uint64_t s = 0; s < shots; ++s) {
    const int x = p.mu > 0.0 ? pairs(gen) : 0;
    if (x == 0) continue;
    arm1.clear();
    arm2.clear();
    for (int i = 0; i < x; ++i) {
      const double route = unit(gen);
      const bool horizontal = unit(gen) < 0.5;
      if (route < p.eta) {
        arm1.push_back(horizontal);
        arm2.push_back(horizontal);
      } else if (route < lone_arm1) {
        arm1.push_back(horizontal);
      } else {
        arm2.push_back(horizontal);
      }
    }

    for (int cls = 0; cls < 3; ++cls) {
      bool click1 = false;
      for (bool h : arm1) {
        // H analyzer; the detector draw happens only for transmitted photons.
        if (h && unit(gen) < p.alpha) click1 = true;
      }
      bool click2 = false;
      for (bool h : arm2) {
        bool transmitted = false;
        switch (cls) {
          case 0: transmitted = h; break;
          case 1: transmitted = !h; break;
          default: transmitted = unit(gen) < 0.5; break;
        }
        if (transmitted && unit(gen) < p.alpha) click2 = true;
      }
      if (click1 && click2) ++tally.coincidences[cls];
    }
  }
  return tally;
}

}  // namespace

MonteCarloRates monte_carlo_rates(const SourceParams& params, std::uint64_t shots,
                                  std::uint64_t seed, unsigned threads) {
  params.validate();
  if (shots < 1) throw DomainError("monte_carlo_rates needs at least one shot");

  const std::uint64_t batches = (shots + kShotsPerBatch - 1) / kShotsPerBatch;
  std::vector<BatchTally> tallies(batches);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t b = first; b < batches; b += stride) {
      const std::uint64_t begin = b * kShotsPerBatch;
      const std::uint64_t n = std::min(kShotsPerBatch, shots - begin);
      tallies[b] = run_batch(params, n, seed, b);
    }
  };

  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, batches));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  std::array<std::uint64_t, 3> total{};
  for (const auto& t : tallies) {
    for (int c = 0; c < 3; ++c) total[c] += t.coincidences[c];
  }
  const double n = static_cast<double>(shots);
  auto rate = [n](std::uint64_t k) { return static_cast<double>(k) / n; };
  auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };

  MonteCarloRates out;
  out.shots = shots;
  out.rates = {rate(total[0]), rate(total[1]), rate(total[2]), true};
  out.standard_errors = {se(out.rates.r_hh), se(out.rates.r_hv), se(out.rates.r_hr), true};
  return out;
}

std::vector<CurvePoint> g_vs_power_curve(const PowerCalibration& calibration,
                                         const SourceParams& params_template,
                                         std::span<const double> powers) {
  if (!(calibration.pairs_per_power > 0.0)) {
    throw DomainError("pairs_per_power must be positive");
  }
  const KernelTable table(params_template.alpha, params_template.eta,
                          params_template.n_max);
  std::vector<CurvePoint> curve;
  curve.reserve(powers.size());
  for (double power : powers) {
    if (!(power > 0.0)) throw DomainError("excitation powers must be positive");
    const double mu = calibration.mu_at(power);
    curve.push_back({power, mu, effective_g(table.rates(mu))});
  }
  return curve;
}

double background_g(double signal_coeff, double background_coeff, double power) {
  if (!(signal_coeff >= 0.0) || !(background_coeff >= 0.0)) {
    throw DomainError("rate coefficients must be non-negative");
  }
  if (!(power > 0.0)) throw DomainError("excitation power must be positive");
  const double total = signal_coeff + background_coeff;
  if (!(total > 0.0)) {
    throw DegenerateInputError("signal and background coefficients are both zero");
  }
  // Both rates carry the same P^2 factor, which cancels from the ratio.
  return background_coeff / total;
}

}  // namespace pairstate
