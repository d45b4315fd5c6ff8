// From contour to inference: possibility of a hypothesis is the supremum of
// the contour over it; tests reject when that supremum falls to alpha or
// below; confidence sets keep every parameter whose contour exceeds alpha.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "possim/contour.hpp"
#include "possim/errors.hpp"
#include "possim/hypothesis.hpp"

namespace possim {

struct PossibilityResult {
  double value = 0.0;
  bool grid_intersected = false;  // false: hypothesis missed every grid point
};

// Supremum of the contour over grid points belonging to A (grid scan; the
// contour may be multi-modal, so no local search shortcuts).
inline PossibilityResult possibility(const Contour& c, const HypothesisSet& A) {
  PossibilityResult r;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (!A.contains(c.grid.points[i])) continue;
    r.grid_intersected = true;
    r.value = std::max(r.value, c.values[i]);
  }
  return r;
}

namespace detail {

inline void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw spec_error("alpha must lie strictly between 0 and 1");
}

inline double complement_possibility(const Contour& c, const HypothesisSet& A,
                                     bool& complement_nonempty) {
  double sup = 0.0;
  complement_nonempty = false;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (A.contains(c.grid.points[i])) continue;
    complement_nonempty = true;
    sup = std::max(sup, c.values[i]);
  }
  return sup;
}

}  // namespace detail

enum class Verdict { Refuted, Supported, Inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Refuted: return "refuted";
    case Verdict::Supported: return "supported";
    default: return "inconclusive";
  }
}

// Refuted when the hypothesis itself is barely possible; supported when it is
// possible and its complement is not. A hypothesis covering the whole grid
// has a vacuously impossible complement, hence "supported".
inline Verdict verdict(const Contour& c, const HypothesisSet& A, double alpha) {
  detail::require_alpha(alpha);
  double pa = possibility(c, A).value;
  if (pa <= alpha) return Verdict::Refuted;
  bool complement_nonempty = false;
  double pc = detail::complement_possibility(c, A, complement_nonempty);
  if (!complement_nonempty || pc <= alpha) return Verdict::Supported;
  return Verdict::Inconclusive;
}

struct ConfidenceSet {
  double alpha = 0.0;
  std::vector<double> retained;  // grid points with contour value > alpha
  std::vector<std::pair<double, double>> interval_hull;  // maximal grid runs
};

inline ConfidenceSet confidence_set(const Contour& c, double alpha) {
  detail::require_alpha(alpha);
  ConfidenceSet cs;
  cs.alpha = alpha;
  bool in_run = false;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (c.values[i] > alpha) {
      cs.retained.push_back(c.grid.points[i]);
      if (!in_run) {
        cs.interval_hull.emplace_back(c.grid.points[i], c.grid.points[i]);
        in_run = true;
      } else {
        cs.interval_hull.back().second = c.grid.points[i];
      }
    } else {
      in_run = false;
    }
  }
  return cs;
}

enum class TestDecision { Reject, Retain };

inline std::string_view to_string(TestDecision d) {
  return d == TestDecision::Reject ? "reject" : "retain";
}

inline TestDecision test_hypothesis(const Contour& c, const HypothesisSet& A,
                                    double alpha) {
  detail::require_alpha(alpha);
  return possibility(c, A).value <= alpha ? TestDecision::Reject
                                          : TestDecision::Retain;
}

}  // namespace possim
