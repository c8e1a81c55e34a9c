#pragma once

// Sixteen-setting two-photon polarization tomography: projector set, Born-rule
// probabilities, Poisson count synthesis, linear inversion and a
// maximum-likelihood reconstruction constrained to physical states.

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairstate/errors.hpp"
#include "pairstate/nelder_mead.hpp"
#include "pairstate/qstate.hpp"

namespace pairstate {

inline constexpr std::size_t kNumProjectors = 16;

// Sign of the imaginary amplitude of the right-circular analyzer state.
enum class CircularConvention {
  kMinusI,  // R = (1, -i)/sqrt(2)
  kPlusI,   // R = (1, +i)/sqrt(2)
};

struct AnalyzerState {
  char label = 'H';
  Eigen::Vector2cd amplitudes;
};

// One of H, V, D, A, R, L. Throws DomainError for other labels.
AnalyzerState analyzer_state(char label,
                             CircularConvention convention = CircularConvention::kMinusI);

// Rank-1 projector |ab><ab| for a two-character label "ab".
struct Projector {
  std::string label;
  Vector4c ket;
  Matrix4c matrix;
};

Projector make_projector(std::string_view label,
                         CircularConvention convention = CircularConvention::kMinusI);

using GramMatrix = Eigen::Matrix<double, 16, 16>;
using Probabilities = std::array<double, kNumProjectors>;

// Ordered, informationally complete set of 16 projectors. The constructor
// rejects sets whose Gram matrix Tr(P_a P_b) is singular.
class ProjectionSet {
 public:
  explicit ProjectionSet(std::vector<Projector> projectors);

  static const std::array<std::string_view, kNumProjectors>& canonical_labels();

  std::size_t size() const noexcept { return projectors_.size(); }
  const Projector& operator[](std::size_t i) const { return projectors_[i]; }
  const std::vector<Projector>& projectors() const noexcept { return projectors_; }

  std::optional<std::size_t> index_of(std::string_view label) const;

  const GramMatrix& gram() const noexcept { return gram_; }
  double gram_condition_number() const noexcept { return condition_number_; }

  // M_a with Tr(M_a P_b) = delta_ab, so rho = sum_a Tr(rho P_a) M_a.
  const std::vector<Matrix4c>& dual_basis() const noexcept { return dual_; }

 private:
  std::vector<Projector> projectors_;
  GramMatrix gram_;
  double condition_number_ = 0.0;
  std::vector<Matrix4c> dual_;
};

// HH, HV, VV, VH, RH, RV, DV, DH, DR, DD, RD, HD, VD, VL, HL, RL.
ProjectionSet canonical_projection_set(
    CircularConvention convention = CircularConvention::kMinusI);

// p_a = Re Tr(rho P_a).
Probabilities expected_probabilities(const DensityMatrix& rho,
                                     const ProjectionSet& set);

// Coincidence counts per projector, ordered like the projection set they were
// measured with. total_scale is the count expected for a unit-probability
// projector.
class CountVector {
 public:
  CountVector(const std::array<double, kNumProjectors>& counts, double total_scale);

  // total_scale defaults to the sum over the HH, HV, VH and VV settings.
  static CountVector with_computational_scale(
      const std::array<double, kNumProjectors>& counts, const ProjectionSet& set);

  const std::array<double, kNumProjectors>& counts() const noexcept { return counts_; }
  double operator[](std::size_t i) const { return counts_[i]; }
  double total_scale() const noexcept { return total_scale_; }
  bool all_zero() const noexcept;

 private:
  std::array<double, kNumProjectors> counts_;
  double total_scale_;
};

// Independent Poisson draws with means total_scale * probabilities[a]. The
// generator is seeded only by `seed`, so equal inputs give equal outputs.
CountVector sample_counts(const Probabilities& probabilities, double total_scale,
                          std::uint64_t seed);

CountVector simulate_counts(const DensityMatrix& rho, const ProjectionSet& set,
                            double total_scale, std::uint64_t seed);

// Dual-basis inversion normalized by the HH+HV+VH+VV counts. The result is
// Hermitian with unit trace but may have negative eigenvalues.
DensityMatrix linear_reconstruct(const CountVector& counts, const ProjectionSet& set);

// Clamps negative eigenvalues to zero and renormalizes the trace.
DensityMatrix project_to_physical(const DensityMatrix& rho);

// Lower-triangular parametrization rho(t) = T^dagger T / Tr(T^dagger T) with
// real diagonal t[0..3] and complex sub-diagonal pairs t[4..15].
DensityMatrix from_triangular_parameters(std::span<const double> t);
std::array<double, 16> triangular_parameters(const DensityMatrix& rho);

struct MleOptions {
  // Variance floor epsilon = variance_floor * total_scale.
  double variance_floor = 1e-9;
  NelderMeadOptions optimizer{};
};

// Gaussian approximation to the Poisson negative log-likelihood:
// sum_a (N p_a - n_a)^2 / (2 max(N p_a, eps)).
double likelihood_cost(const DensityMatrix& rho, const CountVector& counts,
                       const ProjectionSet& set, double variance_floor = 1e-9);

struct MleResult {
  DensityMatrix state;
  double cost = 0.0;
  std::size_t evaluations = 0;
  bool restarted_from_mixed = false;
};

// Raised when neither the linear-inversion start nor the totally-mixed restart
// converges. Carries the best state found and the final simplex size.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, DensityMatrix best, double cost,
                      double final_step)
      : Error(what), best_(std::move(best)), cost_(cost), final_step_(final_step) {}

  const DensityMatrix& best_state() const noexcept { return best_; }
  double best_cost() const noexcept { return cost_; }
  double final_step() const noexcept { return final_step_; }

 private:
  DensityMatrix best_;
  double cost_;
  double final_step_;
};

MleResult mle_reconstruct_detailed(const CountVector& counts, const ProjectionSet& set,
                                   const MleOptions& options = {});

DensityMatrix mle_reconstruct(const CountVector& counts, const ProjectionSet& set,
                              const MleOptions& options = {});

}  // namespace pairstate
