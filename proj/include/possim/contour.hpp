// The probability-to-possibility transform: pi_x(theta) is the probability,
// under P_theta, of drawing an outcome whose relative likelihood does not
// exceed eta(x, theta). Computed by exact enumeration, closed form, or
// seeded Monte Carlo.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "possim/grid.hpp"
#include "possim/math.hpp"
#include "possim/model.hpp"
#include "possim/observation.hpp"
#include "possim/parallel.hpp"
#include "possim/rng.hpp"

namespace possim {

enum class ContourMethod { Exact, ClosedForm, MonteCarlo };

inline std::string_view to_string(ContourMethod m) {
  switch (m) {
    case ContourMethod::Exact: return "exact";
    case ContourMethod::ClosedForm: return "closed-form";
    default: return "monte-carlo";
  }
}

struct McConfig {
  std::size_t replications = 10'000;
  std::uint64_t seed = 0;
  double tie_tolerance = 1e-12;  // relative, applied to log-domain thresholds
};

struct Contour {
  ParameterGrid grid;
  std::vector<double> values;       // aligned with grid.points, in [0,1]
  ContourMethod method = ContourMethod::Exact;
  std::vector<double> mc_std_err;   // empty unless Monte Carlo
  Observation observation;
  std::string model_id;
  std::optional<std::uint64_t> seed;  // set for Monte Carlo contours

  double max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  }
};

namespace detail {

inline double tie_slack(double log_thr, double tol) {
  return tol * std::max(1.0, std::abs(log_thr));
}

// Cumulative distribution of log eta(X, theta) over an enumerated support,
// sorted ascending with compensated cumulative sums. pi values read off this
// table ARE entries of `cum`, so downstream comparisons of the form
// "cumulative mass below a pi level" are exact in floating point: the
// validity theorem's exceedance can never spuriously exceed alpha through
// rounding alone.
struct EtaTable {
  std::vector<double> log_eta;  // per enumerated outcome, ascending
  std::vector<double> cum;      // cum[i] = P{log eta(X) <= log_eta[i]} within ties
  double residual = 0.0;        // unenumerated tail, treated as inside the event

  // P{eta(X) <= exp(log_thr)}, ties included via relative slack.
  double pi(double log_thr, double tie_tol) const {
    if (log_eta.empty()) return std::min(1.0, residual);
    if (log_thr == kNegInf) return std::min(1.0, residual);
    double t = log_thr + tie_slack(log_thr, tie_tol);
    if (t >= log_eta.back()) return 1.0;  // whole support qualifies
    auto it = std::upper_bound(log_eta.begin(), log_eta.end(), t);
    if (it == log_eta.begin()) return std::min(1.0, residual);
    return std::min(1.0, cum[std::size_t(it - log_eta.begin()) - 1] + residual);
  }
};

inline EtaTable build_eta_table(const Model& m, double theta, double tail_tol,
                                double tie_tol) {
  Enumeration e = m.enumerate_outcomes(theta, tail_tol);
  std::vector<std::pair<double, double>> lev(e.outcomes.size());
  for (std::size_t i = 0; i < e.outcomes.size(); ++i)
    lev[i] = {m.log_relative_likelihood(e.outcomes[i].value, theta),
              e.outcomes[i].prob};
  std::sort(lev.begin(), lev.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  EtaTable t;
  t.residual = e.residual_tail_mass;
  t.log_eta.resize(lev.size());
  t.cum.resize(lev.size());
  KahanSum run;
  for (std::size_t i = 0; i < lev.size(); ++i) {
    run.add(lev[i].second);
    t.log_eta[i] = lev[i].first;
    t.cum[i] = run.value();
  }
  // Entries tied in log eta share the event {eta <= level}; give them all the
  // cumulative mass through the end of their tie span.
  std::size_t i = lev.size();
  while (i-- > 1) {
    if (t.log_eta[i - 1] + tie_slack(t.log_eta[i - 1], tie_tol) >= t.log_eta[i])
      t.cum[i - 1] = t.cum[i];
  }
  return t;
}

// MLE-augment a grid so the contour's maximum of 1 lands on an evaluated
// point. Observations a model cannot score (possible for cross-member
// ensemble evaluation) simply skip augmentation.
inline ParameterGrid augmented_grid(const Model& m, const Observation& x,
                                    ParameterGrid grid) {
  try {
    double hat = m.mle(x);
    if (m.in_parameter_space(hat)) grid.insert(hat);
  } catch (const spec_error&) {
  }
  return grid;
}

}  // namespace detail

inline Contour contour_exact(const Model& m, const Observation& x,
                             ParameterGrid grid, double tail_tol = 1e-10,
                             double tie_tol = 1e-12) {
  if (!m.capabilities().enumerable)
    throw spec_error(std::string(m.name()) + ": contour_exact needs an enumerable model");
  Contour c;
  c.grid = detail::augmented_grid(m, x, std::move(grid));
  c.method = ContourMethod::Exact;
  c.observation = x;
  c.model_id = m.describe();
  c.values.assign(c.grid.size(), 0.0);
  parallel_for(c.grid.size(), [&](std::size_t i) {
    double theta = c.grid.points[i];
    if (!m.in_parameter_space(theta)) return;  // possibility 0 off the space
    auto table = detail::build_eta_table(m, theta, tail_tol, tie_tol);
    c.values[i] = table.pi(m.log_relative_likelihood(x, theta), tie_tol);
  });
  return c;
}

inline Contour contour_closed_form(const Model& m, const Observation& x,
                                   ParameterGrid grid) {
  if (!m.capabilities().closed_form_contour)
    throw spec_error(std::string(m.name()) + ": no closed-form contour");
  Contour c;
  c.grid = detail::augmented_grid(m, x, std::move(grid));
  c.method = ContourMethod::ClosedForm;
  c.observation = x;
  c.model_id = m.describe();
  c.values.assign(c.grid.size(), 0.0);

  if (m.get_if<NormalUnitVariance>()) {
    double obs = std::get<double>(x);
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      c.values[i] = 2.0 * (1.0 - normal_cdf(std::abs(obs - c.grid.points[i])));
  } else if (auto* u = m.get_if<DiscreteUniform>()) {
    (void)u;
    auto& v = std::get<std::vector<int>>(x);
    double s = double(*std::max_element(v.begin(), v.end()));
    double n = double(v.size());
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      double theta = c.grid.points[i];
      if (!m.in_parameter_space(theta) || theta < s) continue;
      c.values[i] = std::pow(s / theta, n);
    }
  } else {
    auto* t = m.get_if<Ticket>();
    double obs = std::get<double>(x);
    double spike = 1.0 - Ticket::kThetaProb;  // mass of the multiplier tickets
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      double theta = c.grid.points[i];
      if (!m.in_parameter_space(theta)) continue;
      if (t->matches_theta(obs, theta))
        c.values[i] = 1.0;
      else if (t->matches_multiplier(obs, theta))
        c.values[i] = spike;
    }
  }
  return c;
}

inline Contour contour_mc(const Model& m, const Observation& x,
                          ParameterGrid grid, const McConfig& cfg = {}) {
  if (cfg.replications < 100)
    throw spec_error("contour_mc: replications must be >= 100");
  if (!m.capabilities().samplable)
    throw spec_error(std::string(m.name()) + ": not samplable");
  Contour c;
  c.grid = detail::augmented_grid(m, x, std::move(grid));
  c.method = ContourMethod::MonteCarlo;
  c.observation = x;
  c.model_id = m.describe();
  c.seed = cfg.seed;
  c.values.assign(c.grid.size(), 0.0);
  c.mc_std_err.assign(c.grid.size(), 0.0);
  const double reps = double(cfg.replications);
  Substream root = Substream::root(cfg.seed);
  parallel_for(c.grid.size(), [&](std::size_t i) {
    double theta = c.grid.points[i];
    if (!m.in_parameter_space(theta)) return;
    double thr = m.log_relative_likelihood(x, theta);
    double cut = (thr == kNegInf) ? kNegInf
                                  : thr + detail::tie_slack(thr, cfg.tie_tolerance);
    Substream point_stream = root.child(i);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      Substream s = point_stream.child(r);
      double le = m.log_relative_likelihood(m.draw_one(theta, s), theta);
      if (le <= cut) ++hits;
    }
    double p = double(hits) / reps;
    c.values[i] = p;
    c.mc_std_err[i] = std::sqrt(p * (1.0 - p) / reps);
  });
  return c;
}

// Preference order: exact enumeration, then closed form, then Monte Carlo.
inline Contour contour_auto(const Model& m, const Observation& x,
                            ParameterGrid grid, const McConfig& cfg = {}) {
  auto caps = m.capabilities();
  if (caps.enumerable) return contour_exact(m, x, std::move(grid), 1e-10, cfg.tie_tolerance);
  if (caps.closed_form_contour) return contour_closed_form(m, x, std::move(grid));
  return contour_mc(m, x, std::move(grid), cfg);
}

inline Contour contour_auto(const Model& m, const Observation& x,
                            const McConfig& cfg = {}) {
  return contour_auto(m, x, m.default_grid(x), cfg);
}

}  // namespace possim
