#pragma once

// Two-photon polarization states in the fixed basis |HH>, |HV>, |VH>, |VV>,
// together with the fidelity / tangle / linear-entropy metrics used to place
// a state on the Werner family.

#include <Eigen/Core>

#include <complex>
#include <iosfwd>
#include <string>

namespace pairstate {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Row/column index of each two-photon basis state.
enum BasisIndex : int { kHH = 0, kHV = 1, kVH = 2, kVV = 3 };

// Normalized two-photon ket.
class PureState {
 public:
  // Throws DomainError unless `amplitudes` has unit norm within 1e-12.
  explicit PureState(const Vector4c& amplitudes);

  // Rescales any nonzero vector to unit norm.
  static PureState normalized(const Vector4c& amplitudes);

  const Vector4c& amplitudes() const noexcept { return amplitudes_; }

 private:
  Vector4c amplitudes_;
};

// (|HH> + |VV>)/sqrt(2).
PureState ideal_bell_state();

// 4x4 complex matrix in the two-photon basis. Construction does not enforce
// physicality: reconstructions by linear inversion may carry small negative
// eigenvalues, so use validate() to check the invariants.
class DensityMatrix {
 public:
  DensityMatrix() : entries_(Matrix4c::Zero()) {}
  explicit DensityMatrix(const Matrix4c& entries) : entries_(entries) {}

  static DensityMatrix from_pure(const PureState& psi);

  const Matrix4c& entries() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  Complex trace() const { return entries_.trace(); }

  // Largest entrywise modulus of the difference.
  double max_abs_diff(const DensityMatrix& other) const;

 private:
  Matrix4c entries_;
};

DensityMatrix ideal_bell();
DensityMatrix totally_mixed();

// (1-g) * ideal_bell() + g * totally_mixed(). Throws DomainError for g
// outside [0, 1].
DensityMatrix werner(double g);

struct ValidationTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

struct Diagnostics {
  double hermiticity_deviation = 0.0;  // max |rho_ij - conj(rho_ji)|
  double trace_deviation = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;         // of the Hermitian part
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool passed() const noexcept { return hermitian && unit_trace && positive; }
  // Comma-separated names of the failed invariants, empty when passed().
  std::string failures() const;
};

Diagnostics validate(const DensityMatrix& rho,
                     const ValidationTolerances& tolerances = {});

// Throws ValidationError naming the failed invariants.
void require_valid(const DensityMatrix& rho,
                   const ValidationTolerances& tolerances = {});

// <psi|rho|psi>. Validates both arguments.
double fidelity(const DensityMatrix& rho, const PureState& psi);

double purity(const DensityMatrix& rho);

// (4/3) (1 - Tr rho^2): 0 for pure states, 1 for the totally mixed state.
double linear_entropy(const DensityMatrix& rho);

// Wootters concurrence via the Hermitian form sqrt(rho) rho~ sqrt(rho).
double concurrence(const DensityMatrix& rho);

double tangle(const DensityMatrix& rho);

// Mixing parameter of the Werner state closest to rho in Frobenius norm,
// clamped to [0, 1].
double werner_fit(const DensityMatrix& rho);

struct StateMetrics {
  double fidelity = 0.0;
  double tangle = 0.0;
  double linear_entropy = 0.0;
  double purity = 0.0;
  double werner_g = 0.0;

  bool within_ranges(double slack = 1e-9) const noexcept;
};

// Fidelity is taken against ideal_bell_state().
StateMetrics compute_metrics(const DensityMatrix& rho);

// "fidelity=..., tangle=..., linear_entropy=..., werner_g=..."
std::string format_metrics(const StateMetrics& metrics);

// Plain-text matrix format: four lines of four whitespace-separated complex
// entries written as "a+bi". The reader also accepts "(a,b)" and bare reals.
std::string format_density_matrix(const DensityMatrix& rho);
void write_density_matrix(std::ostream& out, const DensityMatrix& rho);
DensityMatrix read_density_matrix(std::istream& in,
                                  const std::string& source = "<stream>");
DensityMatrix read_density_matrix_file(const std::string& path);

std::string format_complex(Complex value);
// Throws DomainError on malformed text.
Complex parse_complex(std::string_view text);

}  // namespace pairstate
