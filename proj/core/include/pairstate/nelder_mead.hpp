#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pairstate {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  // Converged when (f_worst - f_best) <= relative_tolerance * |f_best| +
  // absolute_tolerance across the simplex.
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-14;
  std::size_t max_evaluations = 200000;
  double initial_step = 0.1;

  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  // Largest vertex distance from the best vertex in the final simplex.
  double final_step = 0.0;
};

// Downhill simplex minimization starting from an axis-aligned simplex around
// `start`. Apart from the n + 1 evaluations of the initial simplex, never
// exceeds options.max_evaluations.
NelderMeadResult nelder_mead(const Objective& objective,
                             std::span<const double> start,
                             const NelderMeadOptions& options = {});

// Repeats nelder_mead() from the best point with a fresh simplex until a
// restart no longer improves the objective by more than the relative
// tolerance, or the evaluation budget runs out. Fresh simplices guard against
// the premature collapse plain Nelder-Mead is prone to in many dimensions.
NelderMeadResult nelder_mead_with_restarts(const Objective& objective,
                                           std::span<const double> start,
                                           const NelderMeadOptions& options = {},
                                           std::size_t max_restarts = 20);

}  // namespace pairstate
