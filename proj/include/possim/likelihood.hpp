// Relative likelihood (the possibility-ranking engine) and the normalized
// likelihood: L-bar(A) = integral of L over A divided by the integral over
// the whole (windowed) parameter space. The latter is additive where the
// relative-likelihood possibility is maxitive; the contrast between the two
// is the point of carrying both.
#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "possim/errors.hpp"
#include "possim/hypothesis.hpp"
#include "possim/math.hpp"
#include "possim/model.hpp"

namespace possim {

inline double relative_likelihood(const Model& m, const Observation& x,
                                  double theta) {
  return m.relative_likelihood(x, theta);
}

inline double log_relative_likelihood(const Model& m, const Observation& x,
                                      double theta) {
  return m.log_relative_likelihood(x, theta);
}

enum class IntegrationRule { FiniteSum, Trapezoid };

class NormalizedLikelihood {
 public:
  // Continuum parameter: trapezoid rule over a bounded window at a fixed
  // resolution, hypothesis endpoints inserted into the partition so that
  // disjoint masses add exactly.
  static NormalizedLikelihood over_window(const Model& m, const Observation& x,
                                          double win_lo, double win_hi,
                                          double resolution) {
    if (!(std::isfinite(win_lo) && std::isfinite(win_hi) && win_lo < win_hi))
      throw spec_error("normalized likelihood: bad window");
    if (!(resolution > 0.0))
      throw spec_error("normalized likelihood: resolution must be positive");
    m.validate_observation(x);
    NormalizedLikelihood nl;
    nl.rule_ = IntegrationRule::Trapezoid;
    nl.model_ = m;
    nl.x_ = x;
    nl.win_lo_ = win_lo;
    nl.win_hi_ = win_hi;
    nl.res_ = resolution;
    nl.denom_ = nl.integrate(win_lo, win_hi);
    if (!(nl.denom_ > 0.0))
      throw numeric_error("normalized likelihood: vanishing normalizer over window");
    return nl;
  }

  // Finite parameter support with explicit likelihood weights.
  static NormalizedLikelihood finite(std::vector<double> support,
                                     std::vector<double> likelihood) {
    if (support.empty() || support.size() != likelihood.size())
      throw spec_error("normalized likelihood: support/likelihood size mismatch");
    NormalizedLikelihood nl;
    nl.rule_ = IntegrationRule::FiniteSum;
    nl.support_ = std::move(support);
    nl.weights_ = std::move(likelihood);
    KahanSum total;
    for (double w : nl.weights_) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw spec_error("normalized likelihood: weights must be finite and >= 0");
      total.add(w);
    }
    nl.denom_ = total.value();
    if (!(nl.denom_ > 0.0))
      throw numeric_error("normalized likelihood: vanishing normalizer");
    nl.win_lo_ = nl.support_.front();
    nl.win_hi_ = nl.support_.back();
    return nl;
  }

  // Family-appropriate defaults: unit normal integrates over mle +/- 15 at
  // 0.01; Bernoulli designs over [0,1] at 0.001; lattice/atomic parameter
  // models get finite sums over their default candidate grids.
  static NormalizedLikelihood from_model(const Model& m, const Observation& x) {
    if (m.get_if<NormalUnitVariance>()) {
      double c = m.mle(x);
      return over_window(m, x, c - 15.0, c + 15.0, 0.01);
    }
    if (m.get_if<Binomial>() || m.get_if<NegativeBinomial>() ||
        m.get_if<CurtailedBernoulli>())
      return over_window(m, x, 0.0, 1.0, 0.001);
    ParameterGrid g = m.default_grid(x);
    std::vector<double> w(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (m.in_parameter_space(g.points[i]))
        w[i] = std::exp(m.log_density(x, g.points[i]));
    return finite(std::move(g.points), std::move(w));
  }

  IntegrationRule rule() const { return rule_; }
  double window_lo() const { return win_lo_; }
  double window_hi() const { return win_hi_; }

  // L-bar(A): additive over disjoint hypothesis sets, 1 on the full window.
  double mass(const HypothesisSet& A) const {
    check_within_window(A);
    if (rule_ == IntegrationRule::FiniteSum) {
      KahanSum num;
      for (std::size_t i = 0; i < support_.size(); ++i)
        if (A.contains(support_[i])) num.add(weights_[i]);
      return num.value() / denom_;
    }
    if (A.form() == HypothesisSet::Form::FinitePoints)
      return 0.0;  // finite sets carry no Lebesgue mass
    KahanSum num;
    for (auto& [lo, hi] : A.interval_members()) {
      double a = std::max(lo, win_lo_), b = std::min(hi, win_hi_);
      if (b > a) num.add(integrate(a, b));
    }
    return std::min(1.0, num.value() / denom_);
  }

 private:
  NormalizedLikelihood() = default;

  void check_within_window(const HypothesisSet& A) const {
    double slack = 1e-9 * std::max({1.0, std::abs(win_lo_), std::abs(win_hi_)});
    if (A.min_value() < win_lo_ - slack || A.max_value() > win_hi_ + slack)
      throw spec_error("normalized likelihood: hypothesis extends outside window " +
                       std::string("[") + std::to_string(win_lo_) + "," +
                       std::to_string(win_hi_) + "]");
  }

  // eta relative to the observation's own maximum keeps exponentials tame.
  double eta_at(double theta) const {
    if (!model_->in_parameter_space(theta)) return 0.0;
    return std::exp(model_->log_relative_likelihood(x_, theta));
  }

  // Composite trapezoid over [a,b] using the window partition with a and b
  // inserted as panel edges. Splitting an interval at any interior partition
  // knot therefore reproduces the same panels, which is what makes disjoint
  // masses add to the undivided mass.
  double integrate(double a, double b) const {
    KahanSum acc;
    long long k0 = (long long)std::ceil((a - win_lo_) / res_ - 1e-9);
    double prev_t = a;
    double prev_f = eta_at(a);
    for (long long k = k0;; ++k) {
      double t = win_lo_ + double(k) * res_;
      if (t >= b - 1e-12 * std::max(1.0, std::abs(b))) break;
      if (t > prev_t) {
        double f = eta_at(t);
        acc.add(0.5 * (prev_f + f) * (t - prev_t));
        prev_t = t;
        prev_f = f;
      }
    }
    acc.add(0.5 * (prev_f + eta_at(b)) * (b - prev_t));
    return acc.value();
  }

  IntegrationRule rule_ = IntegrationRule::Trapezoid;
  std::optional<Model> model_;
  Observation x_;
  double win_lo_ = 0.0, win_hi_ = 0.0, res_ = 0.0;
  double denom_ = 0.0;
  std::vector<double> support_;
  std::vector<double> weights_;
};

}  // namespace possim
