#include "pairstate/qstate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairstate/errors.hpp"

namespace pairstate {
namespace {

constexpr double kUnitNormTolerance = 1e-12;
constexpr double kFidelityImagTolerance = 1e-12;

Matrix4c hermitian_part(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

// sigma_y (x) sigma_y in the |HH>,|HV>,|VH>,|VV> basis.
Matrix4c spin_flip() {
  Matrix4c yy = Matrix4c::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

Matrix4c psd_sqrt(const Matrix4c& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(hermitian);
  Eigen::Vector4d roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() *
         solver.eigenvectors().adjoint();
}

// Re Tr(A^dagger B).
double frobenius_inner(const Matrix4c& a, const Matrix4c& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace

PureState::PureState(const Vector4c& amplitudes) : amplitudes_(amplitudes) {
  const double norm = amplitudes.norm();
  if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
    throw DomainError("pure state is not normalized (norm " +
                      std::to_string(norm) + ")");
  }
}

PureState PureState::normalized(const Vector4c& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("cannot normalize a zero or non-finite state vector");
  }
  return PureState(amplitudes / norm);
}

PureState ideal_bell_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState(Vector4c(s, 0.0, 0.0, s));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::max_abs_diff(const DensityMatrix& other) const {
  return (entries_ - other.entries_).cwiseAbs().maxCoeff();
}

DensityMatrix ideal_bell() {
  Matrix4c m = Matrix4c::Zero();
  m(kHH, kHH) = 0.5;
  m(kHH, kVV) = 0.5;
  m(kVV, kHH) = 0.5;
  m(kVV, kVV) = 0.5;
  return DensityMatrix(m);
}

DensityMatrix totally_mixed() {
  return DensityMatrix(Matrix4c::Identity() * 0.25);
}

DensityMatrix werner(double g) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw DomainError("werner mixing parameter must lie in [0, 1], got " +
                      std::to_string(g));
  }
  return DensityMatrix((1.0 - g) * ideal_bell().entries() +
                       g * totally_mixed().entries());
}

std::string Diagnostics::failures() const {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += ", ";
    out += name;
  };
  if (!hermitian) add("hermiticity");
  if (!unit_trace) add("unit trace");
  if (!positive) add("positive semidefiniteness");
  return out;
}

Diagnostics validate(const DensityMatrix& rho,
                     const ValidationTolerances& tolerances) {
  const Matrix4c& m = rho.entries();
  Diagnostics d;
  d.hermiticity_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  d.trace_deviation = std::abs(m.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(hermitian_part(m),
                                                 Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  d.hermitian = d.hermiticity_deviation <= tolerances.hermiticity;
  d.unit_trace = d.trace_deviation <= tolerances.trace;
  d.positive = d.min_eigenvalue >= tolerances.min_eigenvalue;
  return d;
}

void require_valid(const DensityMatrix& rho,
                   const ValidationTolerances& tolerances) {
  const Diagnostics d = validate(rho, tolerances);
  if (!d.passed()) {
    std::ostringstream msg;
    msg << "density matrix fails " << d.failures()
        << " (hermiticity deviation " << d.hermiticity_deviation
        << ", trace deviation " << d.trace_deviation << ", min eigenvalue "
        << d.min_eigenvalue << ")";
    throw ValidationError(msg.str());
  }
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  require_valid(rho);
  const Vector4c& v = psi.amplitudes();
  const Complex overlap = v.dot(rho.entries() * v);  // dot conjugates v
  if (std::abs(overlap.imag()) > kFidelityImagTolerance) {
    throw ValidationError("fidelity has non-negligible imaginary part");
  }
  return overlap.real();
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return (rho.entries() * rho.entries()).trace().real();
}

double linear_entropy(const DensityMatrix& rho) {
  return 4.0 / 3.0 * (1.0 - purity(rho));
}

double concurrence(const DensityMatrix& rho) {
  const Matrix4c h = hermitian_part(rho.entries());
  const Matrix4c yy = spin_flip();
  const Matrix4c flipped = yy * h.conjugate() * yy;
  const Matrix4c root = psd_sqrt(h);
  const Matrix4c r = hermitian_part(root * flipped * root);

  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(r, Eigen::EigenvaluesOnly);
  Eigen::Vector4d lambda = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lambda.data(), lambda.data() + 4, std::greater<>());
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

double tangle(const DensityMatrix& rho) {
  const double c = concurrence(rho);
  return c * c;
}

double werner_fit(const DensityMatrix& rho) {
  const Matrix4c ideal = ideal_bell().entries();
  const Matrix4c direction = totally_mixed().entries() - ideal;
  const double g = frobenius_inner(direction, rho.entries() - ideal) /
                   frobenius_inner(direction, direction);
  return std::clamp(g, 0.0, 1.0);
}

bool StateMetrics::within_ranges(double slack) const noexcept {
  auto in = [slack](double v, double lo, double hi) {
    return v >= lo - slack && v <= hi + slack;
  };
  return in(fidelity, 0.0, 1.0) && in(tangle, 0.0, 1.0) &&
         in(linear_entropy, 0.0, 1.0) && in(purity, 0.25, 1.0) &&
         in(werner_g, 0.0, 1.0);
}

StateMetrics compute_metrics(const DensityMatrix& rho) {
  StateMetrics m;
  m.fidelity = fidelity(rho, ideal_bell_state());
  m.tangle = tangle(rho);
  m.purity = purity(rho);
  m.linear_entropy = linear_entropy(rho);
  m.werner_g = werner_fit(rho);
  return m;
}

std::string format_metrics(const StateMetrics& metrics) {
  std::ostringstream out;
  out.precision(17);
  out << "fidelity=" << metrics.fidelity << ", tangle=" << metrics.tangle
      << ", linear_entropy=" << metrics.linear_entropy
      << ", werner_g=" << metrics.werner_g;
  return out.str();
}

}  // namespace pairstate
