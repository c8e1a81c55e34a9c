#include "pairstate/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pairstate {
namespace {

using Point = std::vector<double>;

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective,
                             std::span<const double> start,
                             const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  NelderMeadResult result;
  std::size_t evaluations = 0;
  auto eval = [&](const Point& p) {
    ++evaluations;
    const double v = objective(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Point> vertex(n + 1, Point(start.begin(), start.end()));
  for (std::size_t i = 0; i < n; ++i) {
    const double step = start[i] != 0.0
                            ? options.initial_step * std::max(1.0, std::abs(start[i]))
                            : options.initial_step;
    vertex[i + 1][i] += step;
  }
  std::vector<double> value(n + 1);
  for (std::size_t j = 0; j <= n; ++j) value[j] = eval(vertex[j]);

  std::vector<std::size_t> order(n + 1);
  Point centroid(n), trial(n), trial2(n);

  auto blend = [n](const Point& base, const Point& toward, double t, Point& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    const double spread = value[worst] - value[best];
    if (spread <= options.relative_tolerance * std::abs(value[best]) +
                      options.absolute_tolerance) {
      result.converged = true;
      break;
    }
    // An iteration costs at most n + 2 evaluations (a shrink after a failed
    // contraction); stop before one could overrun the budget.
    if (evaluations + n + 2 > options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += vertex[j][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    // Reflection: centroid + r (centroid - worst).
    blend(centroid, vertex[worst], -options.reflection, trial);
    const double f_reflect = eval(trial);

    if (f_reflect < value[best]) {
      blend(centroid, vertex[worst], -options.reflection * options.expansion,
            trial2);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        vertex[worst] = trial2;
        value[worst] = f_expand;
      } else {
        vertex[worst] = trial;
        value[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < value[second_worst]) {
      vertex[worst] = trial;
      value[worst] = f_reflect;
      continue;
    }

    const bool outside = f_reflect < value[worst];
    blend(centroid, outside ? trial : vertex[worst], options.contraction, trial2);
    const double f_contract = eval(trial2);
    if (f_contract < (outside ? f_reflect : value[worst])) {
      vertex[worst] = trial2;
      value[worst] = f_contract;
      continue;
    }

    for (std::size_t j = 0; j <= n; ++j) {
      if (j == best) continue;
      blend(vertex[best], vertex[j], options.shrink, vertex[j]);
      value[j] = eval(vertex[j]);
    }
  }

  const std::size_t best = static_cast<std::size_t>(
      std::min_element(value.begin(), value.end()) - value.begin());
  result.x = vertex[best];
  result.value = value[best];
  result.evaluations = evaluations;
  for (std::size_t j = 0; j <= n; ++j) {
    result.final_step = std::max(result.final_step, distance(vertex[j], vertex[best]));
  }
  return result;
}

NelderMeadResult nelder_mead_with_restarts(const Objective& objective,
                                           std::span<const double> start,
                                           const NelderMeadOptions& options,
                                           std::size_t max_restarts) {
  NelderMeadOptions round = options;
  NelderMeadResult best = nelder_mead(objective, start, round);
  std::size_t used = best.evaluations;

  for (std::size_t r = 0; r < max_restarts && best.converged; ++r) {
    if (used >= options.max_evaluations) break;
    round.max_evaluations = options.max_evaluations - used;
    NelderMeadResult next = nelder_mead(objective, best.x, round);
    used += next.evaluations;
    const double gain = best.value - next.value;
    const bool improved = next.value < best.value;
    if (improved) {
      next.evaluations = used;
      best = std::move(next);
    } else {
      best.evaluations = used;
    }
    if (!improved || gain <= options.relative_tolerance * std::abs(best.value) +
                                  options.absolute_tolerance) {
      break;
    }
  }
  best.evaluations = used;
  return best;
}

}  // namespace pairstate
