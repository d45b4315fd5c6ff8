// Parameter grids: either an integer lattice (count-valued parameters) or a
// uniform discretization of a bounded real window.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "possim/errors.hpp"

namespace possim {

enum class GridKind { IntegerLattice, ContinuumDiscretization };

struct ParameterGrid {
  std::vector<double> points;  // strictly increasing
  GridKind kind = GridKind::ContinuumDiscretization;
  double resolution = 0.0;  // step between adjacent points (0 if irregular)

  double lo() const { return points.front(); }
  double hi() const { return points.back(); }
  std::size_t size() const { return points.size(); }

  // Insert a point unless an existing one already sits within float slack.
  // Used to force the MLE onto evaluation grids so contour maxima are exact.
  // resolution stays positive, reinterpreted as the finest spacing.
  void insert(double value) {
    auto it = std::lower_bound(points.begin(), points.end(), value);
    double slack = 1e-12 * std::max(1.0, std::abs(value));
    if (it != points.end() && std::abs(*it - value) <= slack) return;
    if (it != points.begin() && std::abs(*(it - 1) - value) <= slack) return;
    it = points.insert(it, value);
    if (it != points.begin())
      resolution = std::min(resolution > 0 ? resolution : *(it) - *(it - 1),
                            *it - *(it - 1));
    if (it + 1 != points.end())
      resolution = std::min(resolution > 0 ? resolution : *(it + 1) - *it,
                            *(it + 1) - *it);
  }
};

inline ParameterGrid make_grid(double lo, double hi, double step,
                               GridKind kind = GridKind::ContinuumDiscretization) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step)))
    throw spec_error("grid: bounds and step must be finite");
  if (!(step > 0.0)) throw spec_error("grid: step must be positive");
  if (!(hi >= lo)) throw spec_error("grid: hi must be >= lo");
  if (kind == GridKind::IntegerLattice) {
    long long a = llround(lo), b = llround(hi), s = llround(step);
    if (s < 1) throw spec_error("grid: integer lattice step must be >= 1");
    ParameterGrid g;
    g.kind = kind;
    g.resolution = double(s);
    for (long long v = a; v <= b; v += s) g.points.push_back(double(v));
    if (g.points.empty()) throw spec_error("grid: empty");
    return g;
  }
  ParameterGrid g;
  g.kind = kind;
  g.resolution = step;
  std::size_t count = std::size_t(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 50'000'000) throw spec_error("grid: too many points");
  g.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double v = lo + double(i) * step;
    if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
    g.points.push_back(std::min(v, hi));
  }
  if (g.points.empty()) throw spec_error("grid: empty");
  return g;
}

}  // namespace possim
