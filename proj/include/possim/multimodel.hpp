// Ensembles of models sharing one relative likelihood, the combined contour
// (pointwise max over members), and prior-normalized e-values with their
// truncated contours. Because every member shares eta, the e-value
//   eta_Q(x, theta) = eta(x, theta) / integral of eta(x, .) dQ
// is model-free: the likelihood's own normalization cancels.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "possim/contour.hpp"
#include "possim/errors.hpp"
#include "possim/math.hpp"
#include "possim/model.hpp"

namespace possim {

struct ProbePoint {
  Observation x;
  double theta = 0.0;
};

class ModelEnsemble {
 public:
  const std::vector<Model>& members() const { return members_; }
  double verification_tol() const { return tol_; }

  std::string describe() const {
    std::string s = "ensemble(";
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) s += ",";
      s += members_[i].describe();
    }
    return s + ")";
  }

 private:
  friend ModelEnsemble verify_ensemble(std::vector<Model>, const std::vector<ProbePoint>&, double);
  ModelEnsemble(std::vector<Model> members, double tol)
      : members_(std::move(members)), tol_(tol) {}
  std::vector<Model> members_;
  double tol_;
};

// Membership requires agreement of eta across members at every probe; the
// first offending probe is reported. Probes should sit inside every member's
// parameter space.
inline ModelEnsemble verify_ensemble(std::vector<Model> members,
                                     const std::vector<ProbePoint>& probes,
                                     double tol = 1e-10) {
  if (members.empty()) throw spec_error("ensemble: no members");
  if (probes.empty()) throw spec_error("ensemble: no probe points");
  for (const auto& p : probes) {
    double shared = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      double eta;
      try {
        eta = members[m].relative_likelihood(p.x, p.theta);
      } catch (const spec_error& e) {
        throw spec_error("ensemble: member " + members[m].describe() +
                         " cannot score probe (x=" + possim::to_string(p.x) +
                         ", theta=" + std::to_string(p.theta) + "): " + e.what());
      }
      if (m == 0) {
        shared = eta;
      } else if (std::abs(eta - shared) > tol) {
        throw spec_error("ensemble: relative likelihoods disagree at probe (x=" +
                         possim::to_string(p.x) + ", theta=" + std::to_string(p.theta) +
                         "): member " + members[m].describe() + " gives " +
                         std::to_string(eta) + " vs " + std::to_string(shared) +
                         " from " + members[0].describe());
      }
    }
  }
  return ModelEnsemble(std::move(members), tol);
}

// Probe battery: the observation of interest plus a few representative
// outcomes from each enumerable member, crossed with interior theta values.
inline std::vector<ProbePoint> default_probes(const std::vector<Model>& members,
                                              const Observation& x) {
  std::vector<Observation> obs{x};
  for (const auto& m : members) {
    if (!m.capabilities().enumerable) continue;
    Enumeration e = m.enumerate_outcomes(0.5, 1e-6);
    std::size_t take = std::min<std::size_t>(e.outcomes.size(), 12);
    for (std::size_t i = 0; i < take; ++i) obs.push_back(e.outcomes[i].value);
  }
  std::vector<ProbePoint> probes;
  for (const auto& o : obs)
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) probes.push_back({o, t});
  return probes;
}

// Without an observation of interest, probe through a universal outcome.
inline std::vector<ProbePoint> default_probes(const std::vector<Model>& members) {
  return default_probes(members, BernoulliOutcome{2, 1});
}

// Pointwise maximum of member contours on a shared MLE-augmented grid; valid
// under every member's sampling model at the price of a wider contour.
inline Contour contour_ensemble(const ModelEnsemble& e, const Observation& x,
                                ParameterGrid grid, const McConfig& cfg = {}) {
  for (const auto& m : e.members()) grid = detail::augmented_grid(m, x, std::move(grid));

  Contour combined;
  combined.grid = std::move(grid);
  combined.observation = x;
  combined.model_id = e.describe();
  combined.method = ContourMethod::Exact;
  combined.values.assign(combined.grid.size(), 0.0);

  bool any_mc = false, any_closed = false;
  std::vector<double> se(combined.grid.size(), 0.0);
  for (const auto& m : e.members()) {
    Contour part = contour_auto(m, x, combined.grid, cfg);
    if (part.grid.size() != combined.grid.size())
      throw numeric_error("ensemble: member grid diverged after augmentation");
    if (part.method == ContourMethod::MonteCarlo) any_mc = true;
    if (part.method == ContourMethod::ClosedForm) any_closed = true;
    for (std::size_t i = 0; i < combined.grid.size(); ++i) {
      if (part.values[i] > combined.values[i]) {
        combined.values[i] = part.values[i];
        se[i] = part.mc_std_err.empty() ? 0.0 : part.mc_std_err[i];
      }
    }
  }
  if (any_mc) {
    combined.method = ContourMethod::MonteCarlo;
    combined.mc_std_err = std::move(se);
    combined.seed = cfg.seed;
  } else if (any_closed) {
    combined.method = ContourMethod::ClosedForm;
  }
  return combined;
}

// ---------------------------------------------------------------------------
class PriorSpec {
 public:
  enum class Kind { Uniform01, Beta, PointMass, Discrete };

  static PriorSpec uniform01() { return PriorSpec(Kind::Uniform01); }

  static PriorSpec beta(double a, double b) {
    if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b)))
      throw spec_error("prior: beta shape parameters must be positive");
    PriorSpec p(Kind::Beta);
    p.a_ = a;
    p.b_ = b;
    return p;
  }

  static PriorSpec point_mass(double t0) {
    if (!std::isfinite(t0)) throw spec_error("prior: point mass location must be finite");
    PriorSpec p(Kind::PointMass);
    p.t0_ = t0;
    return p;
  }

  static PriorSpec discrete(std::vector<double> support, std::vector<double> weights) {
    if (support.empty() || support.size() != weights.size())
      throw spec_error("prior: discrete support/weights size mismatch");
    KahanSum total;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw spec_error("prior: discrete weights must be finite and >= 0");
      total.add(w);
    }
    if (std::abs(total.value() - 1.0) > 1e-9)
      throw spec_error("prior: discrete weights must sum to 1");
    for (double& w : weights) w /= total.value();
    PriorSpec p(Kind::Discrete);
    p.support_ = std::move(support);
    p.weights_ = std::move(weights);
    return p;
  }

  Kind kind() const { return kind_; }
  double beta_a() const { return a_; }
  double beta_b() const { return b_; }
  double location() const { return t0_; }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Uniform01: return "uniform-0-1";
      case Kind::Beta:
        return "beta(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
      case Kind::PointMass: return "point-mass(" + std::to_string(t0_) + ")";
      default: return "discrete(" + std::to_string(support_.size()) + " atoms)";
    }
  }

 private:
  explicit PriorSpec(Kind k) : kind_(k) {}
  Kind kind_;
  double a_ = 0.0, b_ = 0.0, t0_ = 0.0;
  std::vector<double> support_;
  std::vector<double> weights_;
};

namespace detail {

// log of the Bernoulli kernel's maximized likelihood: sup over theta of
// theta^y (1-theta)^(n-y), attained at y/n (0^0 = 1 at the boundary).
inline double log_kernel_sup(int n, int y) {
  double acc = 0.0;
  if (y > 0) acc += double(y) * std::log(double(y) / double(n));
  if (y < n) acc += double(n - y) * std::log(double(n - y) / double(n));
  return acc;
}

inline const BernoulliOutcome& evalue_pair(const Observation& x) {
  auto* b = std::get_if<BernoulliOutcome>(&x);
  if (!b)
    throw spec_error("e-value: defined here via the shared Bernoulli relative "
                     "likelihood; observation must be a (trials,successes) pair");
  if (b->trials < 1 || b->successes < 0 || b->successes > b->trials)
    throw spec_error("e-value: need 0 <= successes <= trials");
  return *b;
}

// log of integral over [0,1] of eta(x, t) dQ(t), exact through Beta
// normalizers for the continuous priors and direct sums for atomic ones.
inline double log_eta_prior_integral(const BernoulliOutcome& b, const PriorSpec& q) {
  const int n = b.trials, y = b.successes;
  switch (q.kind()) {
    case PriorSpec::Kind::Uniform01:
      return log_beta(double(y) + 1.0, double(n - y) + 1.0) - log_kernel_sup(n, y);
    case PriorSpec::Kind::Beta:
      return log_beta(double(y) + q.beta_a(), double(n - y) + q.beta_b()) -
             log_beta(q.beta_a(), q.beta_b()) - log_kernel_sup(n, y);
    case PriorSpec::Kind::PointMass: {
      double t0 = q.location();
      if (t0 < 0.0 || t0 > 1.0)
        throw spec_error("e-value: point-mass prior outside [0,1]");
      return log_bernoulli_relative_likelihood(n, y, t0);
    }
    default: {
      KahanSum acc;
      for (std::size_t i = 0; i < q.support().size(); ++i) {
        double t = q.support()[i];
        if (t < 0.0 || t > 1.0)
          throw spec_error("e-value: discrete prior atom outside [0,1]");
        acc.add(q.weights()[i] *
                std::exp(log_bernoulli_relative_likelihood(n, y, t)));
      }
      return std::log(acc.value());
    }
  }
}

}  // namespace detail

// eta_Q(x, theta): the likelihood at theta against its Q-average. Reciprocal
// is an e-value: its expectation under any theta and any ensemble member
// equals 1.
inline double e_value(const Observation& x, double theta, const PriorSpec& q) {
  const auto& b = detail::evalue_pair(x);
  if (theta < 0.0 || theta > 1.0)
    throw spec_error("e-value: theta outside [0,1]");
  double log_den = detail::log_eta_prior_integral(b, q);
  if (log_den == kNegInf || std::isnan(log_den))
    throw numeric_error("e-value: degenerate normalizer (prior gives the "
                        "likelihood zero mass)");
  double log_num = log_bernoulli_relative_likelihood(b.trials, b.successes, theta);
  if (log_num == kNegInf) return 0.0;
  return std::exp(log_num - log_den);
}

struct EContour {
  ParameterGrid grid;
  std::vector<double> values;  // min(eta_Q, 1)
  PriorSpec prior = PriorSpec::uniform01();
  Observation observation;
};

inline EContour e_contour(const Observation& x, ParameterGrid grid,
                          const PriorSpec& q) {
  const auto& b = detail::evalue_pair(x);
  double log_den = detail::log_eta_prior_integral(b, q);
  if (log_den == kNegInf || std::isnan(log_den))
    throw numeric_error("e-value: degenerate normalizer");
  EContour e;
  e.grid = std::move(grid);
  e.prior = q;
  e.observation = x;
  e.values.assign(e.grid.size(), 0.0);
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    double t = e.grid.points[i];
    if (t < 0.0 || t > 1.0) continue;
    double log_num = log_bernoulli_relative_likelihood(b.trials, b.successes, t);
    e.values[i] = std::min(1.0, std::exp(log_num - log_den));
  }
  return e;
}

}  // namespace possim
