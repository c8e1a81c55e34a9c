#pragma once

// Batch front end: tomography over count files, synthetic count generation
// from the multi-pair model, model sweeps over excitation power, and metrics
// for a stored density matrix.

#include <cstddef>
#include <string>
#include <vector>

#include "pairstate/config.hpp"
#include "pairstate/qstate.hpp"
#include "pairstate/table.hpp"

namespace pairstate {

struct AnalysisRecord {
  std::string label;
  std::string source;
  DensityMatrix state;
  StateMetrics metrics;
  double min_eigenvalue = 0.0;
  std::size_t evaluations = 0;
  double hr_probability = 0.0;  // Tr(rho P_HR); 1/4 for any Werner state
};

enum class FailureKind { kParse, kValidation, kNonConvergence, kDegenerate, kIo };

struct FileFailure {
  std::string path;
  FailureKind kind = FailureKind::kParse;
  std::string message;
};

struct TomoOutcome {
  std::vector<AnalysisRecord> records;  // sorted by label
  std::vector<FileFailure> failures;    // in input order
};

// Orders labels numerically when both parse as numbers, else lexicographically.
bool label_less(const std::string& a, const std::string& b);

// Reconstructs every input file by maximum likelihood. A failing file is
// recorded and the batch continues. When config.output is set, writes one
// "<stem>.report.txt" per record and "tomo_summary.csv" into that directory.
TomoOutcome run_tomo(const RunConfig& config);

// Writes one count file per power-grid point (or a single file at source.mu
// when the grid is empty). Returns the written paths.
std::vector<std::string> run_simulate(const RunConfig& config);

struct SweepRow {
  double power = 0.0;
  double mu = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double r_hh = 0.0;
  double r_hv = 0.0;
  double r_hr = 0.0;
  double g = 0.0;
  double tangle = 0.0;
  double linear_entropy = 0.0;
  double fidelity = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;  // grouped by eta (ascending), then power
  Table sweep;                 // power,mu,eta,alpha,r_hh,r_hv,r_hr,g,tangle,linear_entropy,fidelity
  Table werner_curve;          // g,linear_entropy,tangle,fidelity
  Table fidelity;              // eta,power,mu,fidelity,ideal,separable_limit,totally_mixed
  std::vector<std::string> written;
};

// Analytic, deterministic. With config.output = "x.csv" also writes
// "x.werner_curve.csv" and "x.fidelity.csv" beside it.
SweepOutcome run_sweep(const RunConfig& config);

// Dense Werner (S_L, T) trajectory on g = 0, 0.01, ..., 1 plus g = 2/3.
Table werner_curve_table();

// Reads inputs[0] as a density matrix, validates it and computes the metrics.
// Throws ValidationError naming the failed invariant.
StateMetrics run_metrics(const RunConfig& config);

// "pairstate <version>", "config_hash=...", "seed=...", "mode=...".
std::vector<std::string> provenance(const RunConfig& config);

}  // namespace pairstate
