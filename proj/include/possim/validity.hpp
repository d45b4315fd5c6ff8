// Simulation harness for the calibration guarantee: under P_theta the contour
// value pi_X(theta) is stochastically no smaller than uniform, so
// P{pi_X(theta) <= alpha} <= alpha. Exact mode evaluates that probability by
// enumeration; Monte Carlo mode estimates it from seeded draws. A deliberate
// eta_power distortion is available so the harness can prove it would catch a
// mis-calibrated contour.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "possim/contour.hpp"
#include "possim/errors.hpp"
#include "possim/hypothesis.hpp"
#include "possim/likelihood.hpp"
#include "possim/math.hpp"
#include "possim/model.hpp"
#include "possim/multimodel.hpp"
#include "possim/parallel.hpp"
#include "possim/rng.hpp"

namespace possim {

enum class SimMode { ExactEnumeration, MonteCarlo };

inline std::string_view to_string(SimMode m) {
  return m == SimMode::ExactEnumeration ? "exact-enumeration" : "monte-carlo";
}

struct ValidityOptions {
  std::size_t replications = 10'000;  // Monte Carlo mode only
  std::uint64_t seed = 0;
  double tail_tol = 1e-10;
  double tie_tolerance = 1e-12;
  // Threshold exponent for the ranking event. 1 is the calibrated transform;
  // anything else deliberately mis-calibrates the contour (a harness
  // self-test fixture, exposed via the CLI as --distort).
  double eta_power = 1.0;
  std::optional<SimMode> mode;  // default: exact when enumerable
};

struct RateCell {
  double theta = 0.0;
  double alpha = 0.0;
  double rate = 0.0;
  double se = 0.0;
};

struct SimulationReport {
  std::string model_id;
  std::vector<double> theta_grid;
  std::vector<double> alpha_grid;
  std::size_t replications = 0;  // 0 in exact mode
  std::uint64_t seed = 0;
  SimMode mode = SimMode::ExactEnumeration;
  std::vector<std::vector<double>> rates;  // [theta][alpha]
  std::vector<std::vector<double>> ses;
  std::vector<RateCell> violations;  // rate > alpha (exact) or > alpha + 4 se (MC)

  bool valid() const { return violations.empty(); }
};

namespace detail {

inline void check_alpha_grid(const std::vector<double>& alphas) {
  if (alphas.empty()) throw spec_error("validity: empty alpha grid");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw spec_error("validity: alpha levels must lie strictly in (0,1)");
}

// pi_X(theta) for outcomes drawn at a fixed theta: an enumerated cumulative
// table where available, the normal closed form otherwise.
struct PiEvaluator {
  const Model* model = nullptr;
  double theta = 0.0;
  double power = 1.0;
  double tie_tol = 1e-12;
  std::optional<EtaTable> table;

  double operator()(const Observation& x) const {
    if (table)
      return table->pi(power * model->log_relative_likelihood(x, theta), tie_tol);
    double d = std::abs(std::get<double>(x) - theta);
    return 2.0 * (1.0 - normal_cdf(std::sqrt(power) * d));
  }
};

inline PiEvaluator make_pi_evaluator(const Model& m, double theta,
                                     const ValidityOptions& opt) {
  PiEvaluator ev;
  ev.model = &m;
  ev.theta = theta;
  ev.power = opt.eta_power;
  ev.tie_tol = opt.tie_tolerance;
  if (m.capabilities().enumerable)
    ev.table = build_eta_table(m, theta, opt.tail_tol, opt.tie_tolerance);
  else if (!m.get_if<NormalUnitVariance>())
    throw spec_error(std::string(m.name()) +
                     ": no exact pi evaluator and no sampling shortcut");
  return ev;
}

// Exact exceedance P{pi_X(theta) <= alpha}. The reported rate is itself one
// of the table's cumulative sums (plus the conservative tail), which is what
// makes the zero-tolerance comparison against alpha meaningful.
inline double exact_exceedance(const EtaTable& t, double alpha,
                               const ValidityOptions& opt) {
  double rate = 0.0;
  for (std::size_t i = 0; i < t.log_eta.size(); ++i) {
    double pi_i = t.pi(opt.eta_power * t.log_eta[i], opt.tie_tolerance);
    if (pi_i <= alpha)
      rate = std::max(rate, t.cum[i]);
    else if (opt.eta_power == 1.0)
      break;  // pi is nondecreasing along the sorted table
  }
  return std::min(1.0, rate + t.residual);
}

}  // namespace detail

inline SimulationReport validity_sim(const Model& m,
                                     const std::vector<double>& theta_grid,
                                     const std::vector<double>& alpha_grid,
                                     const ValidityOptions& opt = {}) {
  if (theta_grid.empty()) throw spec_error("validity: empty theta grid");
  detail::check_alpha_grid(alpha_grid);
  for (double t : theta_grid)
    if (!m.in_parameter_space(t))
      throw spec_error("validity: theta=" + std::to_string(t) +
                       " outside parameter space of " + m.describe());

  bool exact = opt.mode ? (*opt.mode == SimMode::ExactEnumeration)
                        : m.capabilities().enumerable;
  if (exact && !m.capabilities().enumerable)
    throw spec_error(std::string(m.name()) + ": exact validity needs enumeration");
  if (!exact && opt.replications < 1000)
    throw spec_error("validity: monte-carlo mode needs replications >= 1000");
  if (!exact && !m.capabilities().samplable)
    throw spec_error(std::string(m.name()) + ": not samplable");

  SimulationReport rep;
  rep.model_id = m.describe();
  rep.theta_grid = theta_grid;
  rep.alpha_grid = alpha_grid;
  rep.replications = exact ? 0 : opt.replications;
  rep.seed = opt.seed;
  rep.mode = exact ? SimMode::ExactEnumeration : SimMode::MonteCarlo;
  rep.rates.assign(theta_grid.size(), std::vector<double>(alpha_grid.size(), 0.0));
  rep.ses.assign(theta_grid.size(), std::vector<double>(alpha_grid.size(), 0.0));

  Substream root = Substream::root(opt.seed);
  parallel_for(theta_grid.size(), [&](std::size_t i) {
    double theta = theta_grid[i];
    if (exact) {
      auto table = detail::build_eta_table(m, theta, opt.tail_tol, opt.tie_tolerance);
      for (std::size_t j = 0; j < alpha_grid.size(); ++j)
        rep.rates[i][j] = detail::exact_exceedance(table, alpha_grid[j], opt);
      return;
    }
    auto ev = detail::make_pi_evaluator(m, theta, opt);
    std::vector<std::size_t> hits(alpha_grid.size(), 0);
    Substream point = root.child(i);
    for (std::size_t r = 0; r < opt.replications; ++r) {
      Substream s = point.child(r);
      double pi = ev(m.draw_one(theta, s));
      for (std::size_t j = 0; j < alpha_grid.size(); ++j)
        if (pi <= alpha_grid[j]) ++hits[j];
    }
    for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
      double p = double(hits[j]) / double(opt.replications);
      rep.rates[i][j] = p;
      rep.ses[i][j] = std::sqrt(p * (1.0 - p) / double(opt.replications));
    }
  });

  for (std::size_t i = 0; i < theta_grid.size(); ++i)
    for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
      double bound = alpha_grid[j] + (exact ? 0.0 : 4.0 * rep.ses[i][j]);
      if (rep.rates[i][j] > bound)
        rep.violations.push_back(
            {theta_grid[i], alpha_grid[j], rep.rates[i][j], rep.ses[i][j]});
    }
  return rep;
}

// Per-draw contour values pi_X(theta) at a fixed theta; the raw material for
// distribution-level checks (probability integral transform, KS tests).
inline std::vector<double> validity_pit_samples(const Model& m, double theta,
                                                std::size_t reps,
                                                std::uint64_t seed,
                                                const ValidityOptions& opt = {}) {
  if (!m.in_parameter_space(theta))
    throw spec_error("pit samples: theta outside parameter space");
  if (reps < 1) throw spec_error("pit samples: need reps >= 1");
  auto ev = detail::make_pi_evaluator(m, theta, opt);
  std::vector<double> out(reps);
  Substream root = Substream::root(seed);
  parallel_for(reps, [&](std::size_t r) {
    Substream s = root.child(r);
    out[r] = ev(m.draw_one(theta, s));
  });
  return out;
}

// Kolmogorov-Smirnov distance between a sample and Uniform(0,1).
inline double ks_uniform_statistic(std::vector<double> u) {
  if (u.empty()) throw spec_error("ks: empty sample");
  std::sort(u.begin(), u.end());
  double n = double(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, double(i + 1) / n - u[i]);
    d = std::max(d, u[i] - double(i) / n);
  }
  return d;
}

struct CoverageEstimate {
  double coverage = 0.0;
  double se = 0.0;
  SimMode mode = SimMode::ExactEnumeration;
};

// P_theta{theta in C_alpha(X)} = 1 - P{pi_X(theta) <= alpha}.
inline CoverageEstimate coverage_sim(const Model& m, double theta, double alpha,
                                     const ValidityOptions& opt = {}) {
  SimulationReport r = validity_sim(m, {theta}, {alpha}, opt);
  return {1.0 - r.rates[0][0], r.ses[0][0], r.mode};
}

// Validity of the ENSEMBLE contour under each member's sampling model. The
// combined contour dominates each member's, so exceedance can only shrink.
inline std::vector<SimulationReport> ensemble_validity_sim(
    const ModelEnsemble& e, const std::vector<double>& theta_grid,
    const std::vector<double>& alpha_grid, const ValidityOptions& opt = {}) {
  if (theta_grid.empty()) throw spec_error("validity: empty theta grid");
  detail::check_alpha_grid(alpha_grid);
  for (double t : theta_grid)
    for (const auto& m : e.members())
      if (!m.in_parameter_space(t))
        throw spec_error("validity: theta=" + std::to_string(t) +
                         " outside parameter space of " + m.describe());

  bool exact = true;
  for (const auto& m : e.members()) exact &= m.capabilities().enumerable;
  if (opt.mode) exact = (*opt.mode == SimMode::ExactEnumeration);
  if (!exact && opt.replications < 1000)
    throw spec_error("validity: monte-carlo mode needs replications >= 1000");

  std::vector<SimulationReport> reports;
  for (std::size_t k = 0; k < e.members().size(); ++k) {
    const Model& sampler = e.members()[k];
    SimulationReport rep;
    rep.model_id = e.describe() + " under " + sampler.describe();
    rep.theta_grid = theta_grid;
    rep.alpha_grid = alpha_grid;
    rep.replications = exact ? 0 : opt.replications;
    rep.seed = opt.seed;
    rep.mode = exact ? SimMode::ExactEnumeration : SimMode::MonteCarlo;
    rep.rates.assign(theta_grid.size(),
                     std::vector<double>(alpha_grid.size(), 0.0));
    rep.ses.assign(theta_grid.size(), std::vector<double>(alpha_grid.size(), 0.0));

    Substream root = Substream::root(opt.seed).child(k);
    parallel_for(theta_grid.size(), [&](std::size_t i) {
      double theta = theta_grid[i];
      std::vector<detail::PiEvaluator> evs;
      evs.reserve(e.members().size());
      for (const auto& m : e.members())
        evs.push_back(detail::make_pi_evaluator(m, theta, opt));
      auto pi_ens = [&](const Observation& x) {
        double v = 0.0;
        for (const auto& ev : evs) v = std::max(v, ev(x));
        return v;
      };

      if (exact) {
        Enumeration en = sampler.enumerate_outcomes(theta, opt.tail_tol);
        std::vector<std::pair<double, double>> cells(en.outcomes.size());
        for (std::size_t c = 0; c < en.outcomes.size(); ++c)
          cells[c] = {pi_ens(en.outcomes[c].value), en.outcomes[c].prob};
        std::sort(cells.begin(), cells.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<double> cum(cells.size());
        KahanSum run;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          run.add(cells[c].second);
          cum[c] = run.value();
        }
        for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
          double rate = 0.0;
          for (std::size_t c = 0; c < cells.size() && cells[c].first <= alpha_grid[j]; ++c)
            rate = cum[c];
          rep.rates[i][j] = std::min(1.0, rate + en.residual_tail_mass);
        }
        return;
      }

      std::vector<std::size_t> hits(alpha_grid.size(), 0);
      Substream point = root.child(i);
      for (std::size_t r = 0; r < opt.replications; ++r) {
        Substream s = point.child(r);
        double pi = pi_ens(sampler.draw_one(theta, s));
        for (std::size_t j = 0; j < alpha_grid.size(); ++j)
          if (pi <= alpha_grid[j]) ++hits[j];
      }
      for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
        double p = double(hits[j]) / double(opt.replications);
        rep.rates[i][j] = p;
        rep.ses[i][j] = std::sqrt(p * (1.0 - p) / double(opt.replications));
      }
    });

    for (std::size_t i = 0; i < theta_grid.size(); ++i)
      for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
        double bound = alpha_grid[j] + (exact ? 0.0 : 4.0 * rep.ses[i][j]);
        if (rep.rates[i][j] > bound)
          rep.violations.push_back(
              {theta_grid[i], alpha_grid[j], rep.rates[i][j], rep.ses[i][j]});
      }
    reports.push_back(std::move(rep));
  }
  return reports;
}

// ---------------------------------------------------------------------------
struct FalseConfidenceReport {
  double theta_true = 0.0;
  double epsilon = 0.1;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  std::string hypothesis;  // textual description of the false hypothesis B

  // Distribution of the additive normalized-likelihood mass of B.
  double mass_mean = 0.0, mass_q10 = 0.0, mass_median = 0.0, mass_q90 = 0.0;
  // Companion possibilistic quantities in the same runs.
  double poss_b_mean = 0.0;   // mean of the possibility of B
  double pi_theta_mean = 0.0; // mean of pi_X(theta_true)
  std::vector<double> alpha_grid;
  std::vector<double> pi_exceedance;     // empirical P{pi_X(theta_true) <= alpha}
  std::vector<double> pi_exceedance_se;
};

// The additive foil assigns heavy mass to B = (window minus a small interval
// around theta_true) even though B is false; the contour value at theta_true
// stays calibrated in the very same draws.
inline FalseConfidenceReport false_confidence_demo(
    double theta_true, double epsilon = 0.1, std::size_t reps = 10'000,
    std::uint64_t seed = 0,
    std::vector<double> alpha_grid = {0.01, 0.05, 0.1, 0.25, 0.5},
    double window = 15.0, double resolution = 0.01) {
  if (!std::isfinite(theta_true)) throw spec_error("false confidence: bad theta");
  if (!(epsilon > 0.0)) throw spec_error("false confidence: epsilon must be > 0");
  if (!(window > epsilon) || !(resolution > 0.0) || resolution >= window)
    throw spec_error("false confidence: need window > epsilon and 0 < resolution < window");
  if (reps < 100) throw spec_error("false confidence: need reps >= 100");
  detail::check_alpha_grid(alpha_grid);

  const Model m = Model::normal();

  std::vector<double> mass(reps), poss_b(reps), pi_theta(reps);
  Substream root = Substream::root(seed);
  parallel_for(reps, [&](std::size_t i) {
    Substream s = root.child(i);
    double x = std::get<double>(m.draw_one(theta_true, s));
    double lo = x - window, hi = x + window;

    std::vector<std::pair<double, double>> b_parts;
    if (theta_true - epsilon > lo) b_parts.push_back({lo, theta_true - epsilon});
    if (theta_true + epsilon < hi) b_parts.push_back({theta_true + epsilon, hi});
    auto nl = NormalizedLikelihood::over_window(m, x, lo, hi, resolution);
    mass[i] = b_parts.empty() ? 0.0 : nl.mass(HypothesisSet::intervals(b_parts));

    double d = std::abs(x - theta_true);
    pi_theta[i] = 2.0 * (1.0 - normal_cdf(d));
    // sup of the contour over B is attained at B's point nearest to x
    poss_b[i] = d >= epsilon ? 1.0 : 2.0 * (1.0 - normal_cdf(epsilon - d));
  });

  FalseConfidenceReport r;
  r.theta_true = theta_true;
  r.epsilon = epsilon;
  r.replications = reps;
  r.seed = seed;
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "complement of (%g, %g) within a +/-%g likelihood window",
                  theta_true - epsilon, theta_true + epsilon, window);
    r.hypothesis = buf;
  }
  KahanSum ms, ps, bs;
  for (std::size_t i = 0; i < reps; ++i) {
    ms.add(mass[i]);
    ps.add(pi_theta[i]);
    bs.add(poss_b[i]);
  }
  r.mass_mean = ms.value() / double(reps);
  r.pi_theta_mean = ps.value() / double(reps);
  r.poss_b_mean = bs.value() / double(reps);

  std::vector<double> sorted = mass;
  std::sort(sorted.begin(), sorted.end());
  auto q = [&](double p) {
    return sorted[std::min(sorted.size() - 1,
                           std::size_t(p * double(sorted.size())))];
  };
  r.mass_q10 = q(0.10);
  r.mass_median = q(0.50);
  r.mass_q90 = q(0.90);

  r.alpha_grid = alpha_grid;
  for (double a : alpha_grid) {
    std::size_t hits = 0;
    for (double v : pi_theta)
      if (v <= a) ++hits;
    double p = double(hits) / double(reps);
    r.pi_exceedance.push_back(p);
    r.pi_exceedance_se.push_back(std::sqrt(p * (1.0 - p) / double(reps)));
  }
  return r;
}

}  // namespace possim
