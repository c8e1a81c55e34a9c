#include "pairstate/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "pairstate/errors.hpp"

namespace pairstate {
namespace {

constexpr std::array<std::string_view, kNumProjectors> kCanonicalLabels = {
    "HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
    "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};

constexpr std::array<std::string_view, 4> kComputationalLabels = {"HH", "HV", "VH",
                                                                  "VV"};

// Reciprocal condition number below which the Gram matrix counts as singular.
constexpr double kGramRcondFloor = 1e-12;

// Position of each complex sub-diagonal entry of T in the parameter vector:
// (row, col) -> t[index], t[index + 1].
struct OffDiagonalSlot {
  int row;
  int col;
  int index;
};
constexpr std::array<OffDiagonalSlot, 6> kOffDiagonal = {{{1, 0, 4},
                                                          {2, 1, 6},
                                                          {3, 2, 8},
                                                          {2, 0, 10},
                                                          {3, 1, 12},
                                                          {3, 0, 14}}};

Matrix4c lower_triangular(std::span<const double> t) {
  Matrix4c m = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) m(i, i) = t[i];
  for (const auto& s : kOffDiagonal) m(s.row, s.col) = Complex(t[s.index], t[s.index + 1]);
  return m;
}

// Reverses basis order; maps upper-triangular matrices to lower-triangular.
Matrix4c reversal() {
  Matrix4c j = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) j(i, 3 - i) = 1.0;
  return j;
}

std::array<double, kNumProjectors> probabilities_of(const Matrix4c& rho,
                                                    const ProjectionSet& set) {
  std::array<double, kNumProjectors> p{};
  for (std::size_t a = 0; a < set.size(); ++a) {
    const Vector4c& k = set[a].ket;
    p[a] = k.dot(rho * k).real();
  }
  return p;
}

double cost_of(const std::array<double, kNumProjectors>& p, const CountVector& counts,
               double variance_floor) {
  const double n_total = counts.total_scale();
  const double eps = variance_floor * n_total;
  double cost = 0.0;
  for (std::size_t a = 0; a < kNumProjectors; ++a) {
    const double expected = n_total * p[a];
    const double diff = expected - counts[a];
    cost += diff * diff / (2.0 * std::max(expected, eps));
  }
  return cost;
}

}  // namespace

AnalyzerState analyzer_state(char label, CircularConvention convention) {
  const double s = 1.0 / std::sqrt(2.0);
  const double circ = convention == CircularConvention::kMinusI ? -1.0 : 1.0;
  AnalyzerState a;
  a.label = label;
  switch (label) {
    case 'H': a.amplitudes << 1.0, 0.0; break;
    case 'V': a.amplitudes << 0.0, 1.0; break;
    case 'D': a.amplitudes << s, s; break;
    case 'A': a.amplitudes << s, -s; break;
    case 'R': a.amplitudes << s, Complex(0.0, circ * s); break;
    case 'L': a.amplitudes << s, Complex(0.0, -circ * s); break;
    default:
      throw DomainError(std::string("unknown analyzer label '") + label + "'");
  }
  return a;
}

Projector make_projector(std::string_view label, CircularConvention convention) {
  if (label.size() != 2) {
    throw DomainError("projector label must have two characters: '" +
                      std::string(label) + "'");
  }
  const auto first = analyzer_state(label[0], convention).amplitudes;
  const auto second = analyzer_state(label[1], convention).amplitudes;
  Projector p;
  p.label = std::string(label);
  p.ket << first(0) * second(0), first(0) * second(1), first(1) * second(0),
      first(1) * second(1);
  p.matrix = p.ket * p.ket.adjoint();
  return p;
}

ProjectionSet::ProjectionSet(std::vector<Projector> projectors)
    : projectors_(std::move(projectors)) {
  if (projectors_.size() != kNumProjectors) {
    throw ConfigurationError("projection set needs exactly 16 projectors, got " +
                             std::to_string(projectors_.size()));
  }
  std::set<std::string> seen;
  for (const auto& p : projectors_) {
    if (!seen.insert(p.label).second) {
      throw ConfigurationError("duplicate projector label " + p.label);
    }
  }
  for (std::size_t a = 0; a < kNumProjectors; ++a) {
    for (std::size_t b = 0; b < kNumProjectors; ++b) {
      gram_(a, b) = std::norm(projectors_[a].ket.dot(projectors_[b].ket));
    }
  }
  Eigen::JacobiSVD<GramMatrix> svd(gram_);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  condition_number_ = smallest > 0.0 ? sv(0) / smallest
                                     : std::numeric_limits<double>::infinity();
  if (!(smallest > kGramRcondFloor * sv(0))) {
    throw ConfigurationError(
        "projection set is not informationally complete (singular Gram matrix)");
  }
  const GramMatrix inverse = gram_.fullPivLu().inverse();
  dual_.assign(kNumProjectors, Matrix4c::Zero());
  for (std::size_t a = 0; a < kNumProjectors; ++a) {
    for (std::size_t b = 0; b < kNumProjectors; ++b) {
      dual_[a] += inverse(a, b) * projectors_[b].matrix;
    }
  }
}

const std::array<std::string_view, kNumProjectors>& ProjectionSet::canonical_labels() {
  return kCanonicalLabels;
}

std::optional<std::size_t> ProjectionSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    if (projectors_[i].label == label) return i;
  }
  return std::nullopt;
}

ProjectionSet canonical_projection_set(CircularConvention convention) {
  std::vector<Projector> projectors;
  projectors.reserve(kNumProjectors);
  for (auto label : kCanonicalLabels) projectors.push_back(make_projector(label, convention));
  return ProjectionSet(std::move(projectors));
}

Probabilities expected_probabilities(const DensityMatrix& rho, const ProjectionSet& set) {
  return probabilities_of(rho.entries(), set);
}

CountVector::CountVector(const std::array<double, kNumProjectors>& counts,
                         double total_scale)
    : counts_(counts), total_scale_(total_scale) {
  for (double c : counts_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw DomainError("counts must be finite and non-negative");
    }
  }
  if (!(total_scale_ > 0.0) || !std::isfinite(total_scale_)) {
    throw DomainError("total_scale must be positive");
  }
}

CountVector CountVector::with_computational_scale(
    const std::array<double, kNumProjectors>& counts, const ProjectionSet& set) {
  double scale = 0.0;
  for (auto label : kComputationalLabels) {
    const auto idx = set.index_of(label);
    if (!idx) {
      throw ConfigurationError("projection set lacks computational setting " +
                               std::string(label));
    }
    scale += counts[*idx];
  }
  if (!(scale > 0.0)) {
    throw DegenerateInputError("HH, HV, VH and VV counts are all zero");
  }
  return CountVector(counts, scale);
}

bool CountVector::all_zero() const noexcept {
  return std::all_of(counts_.begin(), counts_.end(), [](double c) { return c == 0.0; });
}

CountVector sample_counts(const Probabilities& probabilities, double total_scale,
                          std::uint64_t seed) {
  if (!(total_scale > 0.0)) throw DomainError("total_scale must be positive");
  std::mt19937_64 generator(seed);
  std::array<double, kNumProjectors> counts{};
  for (std::size_t a = 0; a < kNumProjectors; ++a) {
    const double mean = total_scale * std::max(probabilities[a], 0.0);
    if (mean > 0.0) {
      std::poisson_distribution<long long> draw(mean);
      counts[a] = static_cast<double>(draw(generator));
    }
  }
  return CountVector(counts, total_scale);
}

CountVector simulate_counts(const DensityMatrix& rho, const ProjectionSet& set,
                            double total_scale, std::uint64_t seed) {
  return sample_counts(expected_probabilities(rho, set), total_scale, seed);
}

DensityMatrix linear_reconstruct(const CountVector& counts, const ProjectionSet& set) {
  if (counts.all_zero()) throw DegenerateInputError("all counts are zero");
  double normalization = 0.0;
  for (auto label : kComputationalLabels) {
    const auto idx = set.index_of(label);
    if (!idx) {
      throw ConfigurationError("projection set lacks computational setting " +
                               std::string(label));
    }
    normalization += counts[*idx];
  }
  if (!(normalization > 0.0)) {
    throw DegenerateInputError("HH, HV, VH and VV counts are all zero");
  }
  Matrix4c rho = Matrix4c::Zero();
  for (std::size_t a = 0; a < kNumProjectors; ++a) {
    rho += (counts[a] / normalization) * set.dual_basis()[a];
  }
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix project_to_physical(const DensityMatrix& rho) {
  const Matrix4c h = 0.5 * (rho.entries() + rho.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h);
  const Eigen::Vector4d clamped = solver.eigenvalues().cwiseMax(0.0);
  const double total = clamped.sum();
  if (!(total > 0.0)) return totally_mixed();
  Matrix4c out = solver.eigenvectors() * (clamped / total).asDiagonal() *
                 solver.eigenvectors().adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix from_triangular_parameters(std::span<const double> t) {
  if (t.size() != 16) throw DomainError("triangular parametrization needs 16 values");
  const Matrix4c lower = lower_triangular(t);
  const Matrix4c gram = lower.adjoint() * lower;
  const double trace = gram.trace().real();
  if (!(trace > 0.0)) throw DomainError("triangular parameters are all zero");
  const Matrix4c rho = gram / trace;
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

std::array<double, 16> triangular_parameters(const DensityMatrix& rho) {
  const DensityMatrix physical = project_to_physical(rho);
  const Matrix4c j = reversal();
  const Matrix4c reversed = j * physical.entries() * j;

  // reversed = R^dagger R with R upper triangular, from a QR of its square root.
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(reversed);
  const Eigen::Vector4d roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4c root =
      solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
  Eigen::HouseholderQR<Matrix4c> qr(root);
  Matrix4c upper = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i) {
    const double mag = std::abs(upper(i, i));
    if (mag > 0.0) upper.row(i) *= std::conj(upper(i, i)) / mag;
  }
  const Matrix4c lower = j * upper * j;

  std::array<double, 16> t{};
  for (int i = 0; i < 4; ++i) t[i] = lower(i, i).real();
  for (const auto& s : kOffDiagonal) {
    t[s.index] = lower(s.row, s.col).real();
    t[s.index + 1] = lower(s.row, s.col).imag();
  }
  return t;
}

double likelihood_cost(const DensityMatrix& rho, const CountVector& counts,
                       const ProjectionSet& set, double variance_floor) {
  return cost_of(probabilities_of(rho.entries(), set), counts, variance_floor);
}

MleResult mle_reconstruct_detailed(const CountVector& counts, const ProjectionSet& set,
                                   const MleOptions& options) {
  if (counts.all_zero()) throw DegenerateInputError("all counts are zero");

  const auto objective = [&](std::span<const double> t) {
    const Matrix4c lower = lower_triangular(t);
    const Matrix4c gram = lower.adjoint() * lower;
    const double trace = gram.trace().real();
    if (!(trace > 0.0)) return std::numeric_limits<double>::infinity();
    return cost_of(probabilities_of(gram / trace, set), counts, options.variance_floor);
  };

  DensityMatrix start;
  try {
    start = project_to_physical(linear_reconstruct(counts, set));
  } catch (const DegenerateInputError&) {
    start = totally_mixed();
  }
  const auto start_params = triangular_parameters(start);
  NelderMeadResult best = nelder_mead_with_restarts(objective, start_params, options.optimizer);

  MleResult result;
  if (!best.converged) {
    const auto mixed_params = triangular_parameters(totally_mixed());
    NelderMeadResult retry =
        nelder_mead_with_restarts(objective, mixed_params, options.optimizer);
    const std::size_t spent = best.evaluations + retry.evaluations;
    if (retry.value < best.value || retry.converged) best = std::move(retry);
    best.evaluations = spent;
    result.restarted_from_mixed = true;
    if (!best.converged) {
      throw NonConvergenceError(
          "maximum-likelihood reconstruction did not converge within " +
              std::to_string(options.optimizer.max_evaluations) + " evaluations",
          from_triangular_parameters(best.x), best.value, best.final_step);
    }
  }
  result.state = from_triangular_parameters(best.x);
  result.cost = best.value;
  result.evaluations = best.evaluations;
  return result;
}

DensityMatrix mle_reconstruct(const CountVector& counts, const ProjectionSet& set,
                              const MleOptions& options) {
  return mle_reconstruct_detailed(counts, set, options).state;
}

}  // namespace pairstate
