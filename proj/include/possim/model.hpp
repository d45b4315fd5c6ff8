// The six built-in sampling models behind one immutable value-type facade.
// Each model supplies a log density, the relative likelihood used for
// possibility ranking, an MLE, a deterministic sampler, and (where the
// support allows) an outcome enumerator.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "possim/errors.hpp"
#include "possim/grid.hpp"
#include "possim/math.hpp"
#include "possim/observation.hpp"
#include "possim/parallel.hpp"
#include "possim/rng.hpp"

namespace possim {

struct Capabilities {
  bool closed_form_contour = false;
  bool enumerable = false;
  bool samplable = true;
};

struct WeightedOutcome {
  Observation value;
  double prob = 0.0;
};

// Tail-truncated outcome listing. listed probabilities sum to at least
// 1 - tail_tol; residual_tail_mass = 1 - that sum (zero for finite supports).
struct Enumeration {
  std::vector<WeightedOutcome> outcomes;
  double residual_tail_mass = 0.0;
};

// log of (n th / y)^y ((n - n th)/(n - y))^(n-y) with the 0^0 = 1 convention.
// This is the relative likelihood shared by every Bernoulli-process design
// that observes y successes in n trials, whatever the stopping rule.
inline double log_bernoulli_relative_likelihood(int n, int y, double theta) {
  double acc = 0.0;
  if (y > 0) {
    if (theta <= 0.0) return kNegInf;
    acc += double(y) * std::log(double(n) * theta / double(y));
  }
  if (y < n) {
    if (theta >= 1.0) return kNegInf;
    acc += double(n - y) * std::log(double(n) * (1.0 - theta) / double(n - y));
  }
  return std::min(acc, 0.0);
}

namespace detail {

inline const BernoulliOutcome& require_pair(const Observation& x,
                                            std::string_view model) {
  auto* b = std::get_if<BernoulliOutcome>(&x);
  if (!b)
    throw spec_error(std::string(model) + ": observation must be a (trials,successes) pair");
  if (b->trials < 1 || b->successes < 0 || b->successes > b->trials)
    throw spec_error(std::string(model) + ": need 0 <= successes <= trials, trials >= 1, got " +
                     possim::to_string(x));
  return *b;
}

// log binomial pmf with explicit boundary handling so theta in {0,1} yields
// exact 0/-inf rather than 0*log(0) = nan.
inline double log_binom_pmf(int n, int y, double theta) {
  double acc = log_choose(n, y);
  if (y > 0) {
    if (theta <= 0.0) return kNegInf;
    acc += double(y) * std::log(theta);
  }
  if (y < n) {
    if (theta >= 1.0) return kNegInf;
    acc += double(n - y) * std::log1p(-theta);
  }
  return acc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// X ~ N(theta, 1), theta real.
class NormalUnitVariance {
 public:
  std::string_view id() const { return "normal-unit-variance"; }
  std::string describe() const { return "normal-unit-variance"; }
  Capabilities caps() const { return {true, false, true}; }
  bool theta_ok(double t) const { return std::isfinite(t); }

  void check_obs(const Observation& x) const {
    auto* d = std::get_if<double>(&x);
    if (!d || !std::isfinite(*d))
      throw spec_error("normal-unit-variance: observation must be a finite real");
  }

  double log_density(const Observation& x, double theta) const {
    double d = std::get<double>(x) - theta;
    return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * d * d;
  }

  double log_rel(const Observation& x, double theta) const {
    double d = std::get<double>(x) - theta;
    return -0.5 * d * d;
  }

  double mle(const Observation& x) const { return std::get<double>(x); }

  Observation draw(double theta, Substream& s) const {
    return theta + normal_quantile(s.next_uniform());
  }

  Enumeration enumerate(double, double) const {
    throw spec_error("normal-unit-variance: not enumerable");
  }

  ParameterGrid default_grid(const Observation& x) const {
    double c = std::get<double>(x);
    return make_grid(c - 10.0, c + 10.0, 0.01);
  }
};

// ---------------------------------------------------------------------------
// y successes in a fixed number of trials. The trial count used for sampling
// and enumeration is fixed at construction; densities are evaluated against
// the trial count each observation carries, so data from different designs
// can still be scored.
class Binomial {
 public:
  explicit Binomial(int trials) : trials_(trials) {
    if (trials < 1) throw spec_error("binomial: trials must be >= 1");
  }

  int trials() const { return trials_; }
  std::string_view id() const { return "binomial"; }
  std::string describe() const { return "binomial(n=" + std::to_string(trials_) + ")"; }
  Capabilities caps() const { return {false, true, true}; }
  bool theta_ok(double t) const { return t >= 0.0 && t <= 1.0; }

  void check_obs(const Observation& x) const { detail::require_pair(x, "binomial"); }

  double log_density(const Observation& x, double theta) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return detail::log_binom_pmf(b.trials, b.successes, theta);
  }

  double log_rel(const Observation& x, double theta) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return log_bernoulli_relative_likelihood(b.trials, b.successes, theta);
  }

  double mle(const Observation& x) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return double(b.successes) / double(b.trials);
  }

  Observation draw(double theta, Substream& s) const {
    int y = 0;
    for (int i = 0; i < trials_; ++i)
      if (s.next_uniform() < theta) ++y;
    return BernoulliOutcome{trials_, y};
  }

  Enumeration enumerate(double theta, double) const {
    Enumeration e;
    e.outcomes.reserve(std::size_t(trials_) + 1);
    for (int y = 0; y <= trials_; ++y) {
      double p = std::exp(detail::log_binom_pmf(trials_, y, theta));
      if (p > 0.0) e.outcomes.push_back({BernoulliOutcome{trials_, y}, p});
    }
    return e;
  }

  ParameterGrid default_grid(const Observation&) const {
    return make_grid(0.0, 1.0, 0.001);
  }

 private:
  int trials_;
};

// ---------------------------------------------------------------------------
// Trials continue until a fixed number of successes y; the observation is the
// total trial count at stopping. theta = 0 is excluded (the experiment would
// never stop).
class NegativeBinomial {
 public:
  explicit NegativeBinomial(int successes) : successes_(successes) {
    if (successes < 1)
      throw spec_error("negative-binomial: at least one success required to stop");
  }

  int successes() const { return successes_; }
  std::string_view id() const { return "negative-binomial"; }
  std::string describe() const {
    return "negative-binomial(y=" + std::to_string(successes_) + ")";
  }
  Capabilities caps() const { return {false, true, true}; }
  bool theta_ok(double t) const { return t > 0.0 && t <= 1.0; }

  void check_obs(const Observation& x) const {
    auto& b = detail::require_pair(x, "negative-binomial");
    if (b.successes < 1)
      throw spec_error("negative-binomial: observation needs successes >= 1");
  }

  double log_density(const Observation& x, double theta) const {
    auto& b = std::get<BernoulliOutcome>(x);
    if (b.successes < 1) return kNegInf;
    double acc = log_choose(b.trials - 1, b.successes - 1);
    acc += double(b.successes) * std::log(theta);
    if (b.trials > b.successes) {
      if (theta >= 1.0) return kNegInf;
      acc += double(b.trials - b.successes) * std::log1p(-theta);
    }
    return acc;
  }

  double log_rel(const Observation& x, double theta) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return log_bernoulli_relative_likelihood(b.trials, b.successes, theta);
  }

  double mle(const Observation& x) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return double(b.successes) / double(b.trials);
  }

  Observation draw(double theta, Substream& s) const {
    int n = 0, got = 0;
    while (got < successes_) {
      if (++n > 100'000'000)
        throw numeric_error("negative-binomial: sampler exceeded trial cap");
      if (s.next_uniform() < theta) ++got;
    }
    return BernoulliOutcome{n, successes_};
  }

  // P(N = n) for n = y, y+1, ... computed by the multiplicative recurrence
  // P(n+1) = P(n) * (1-theta) * n / (n+1-y). Ratios decrease toward 1-theta,
  // so once the next ratio r < 1 the remaining tail is at most P(n) r/(1-r);
  // truncation stops when that geometric bound drops below tail_tol.
  Enumeration enumerate(double theta, double tail_tol) const {
    const int y = successes_;
    double log_p0 = double(y) * std::log(theta);
    if (log_p0 < -700.0)
      throw numeric_error("negative-binomial: enumeration underflow at theta=" +
                          std::to_string(theta));
    Enumeration e;
    KahanSum total;
    double p = std::exp(log_p0);
    for (long long n = y;; ++n) {
      if (p > 0.0) e.outcomes.push_back({BernoulliOutcome{int(n), y}, p});
      total.add(p);
      double r = (1.0 - theta) * double(n) / double(n + 1 - y);
      if (r < 1.0 && p * r / (1.0 - r) <= tail_tol) break;
      if (n > 20'000'000)
        throw numeric_error("negative-binomial: enumeration did not converge");
      p *= r;
    }
    e.residual_tail_mass = std::max(0.0, 1.0 - total.value());
    return e;
  }

  ParameterGrid default_grid(const Observation&) const {
    return make_grid(0.0, 1.0, 0.001);
  }

 private:
  int successes_;
};

// ---------------------------------------------------------------------------
// n iid draws from Uniform{1, ..., theta}, theta a positive integer.
class DiscreteUniform {
 public:
  explicit DiscreteUniform(int draws) : draws_(draws) {
    if (draws < 1) throw spec_error("discrete-uniform: need draws >= 1");
  }

  int draws() const { return draws_; }
  std::string_view id() const { return "discrete-uniform"; }
  std::string describe() const {
    return "discrete-uniform(n=" + std::to_string(draws_) + ")";
  }
  Capabilities caps() const { return {true, true, true}; }

  bool theta_ok(double t) const {
    return std::isfinite(t) && t >= 1.0 &&
           std::abs(t - std::round(t)) <= 1e-9 * std::max(1.0, std::abs(t));
  }

  void check_obs(const Observation& x) const {
    auto* v = std::get_if<std::vector<int>>(&x);
    if (!v || v->empty())
      throw spec_error("discrete-uniform: observation must be a non-empty integer vector");
    for (int e : *v)
      if (e < 1) throw spec_error("discrete-uniform: entries must be >= 1");
  }

  double log_density(const Observation& x, double theta) const {
    auto& v = std::get<std::vector<int>>(x);
    long long t = llround(theta);
    for (int e : v)
      if (e > t) return kNegInf;
    return -double(v.size()) * std::log(double(t));
  }

  double log_rel(const Observation& x, double theta) const {
    auto& v = std::get<std::vector<int>>(x);
    long long t = llround(theta);
    int s = *std::max_element(v.begin(), v.end());
    if (s > t) return kNegInf;
    return double(v.size()) * (std::log(double(s)) - std::log(double(t)));
  }

  double mle(const Observation& x) const {
    auto& v = std::get<std::vector<int>>(x);
    return double(*std::max_element(v.begin(), v.end()));
  }

  Observation draw(double theta, Substream& s) const {
    long long t = llround(theta);
    std::vector<int> v(static_cast<std::size_t>(draws_));
    for (auto& e : v) {
      auto k = (long long)(s.next_uniform() * double(t));
      e = int(std::min(t - 1, std::max(0LL, k))) + 1;
    }
    return v;
  }

  Enumeration enumerate(double theta, double) const {
    long long t = llround(theta);
    double tuples = std::pow(double(t), double(draws_));
    if (tuples > 5e7)
      throw numeric_error("discrete-uniform: enumeration too large (theta^n > 5e7)");
    Enumeration e;
    e.outcomes.reserve(std::size_t(tuples));
    double p = 1.0;
    for (int i = 0; i < draws_; ++i) p /= double(t);
    std::vector<int> v(std::size_t(draws_), 1);
    for (;;) {
      e.outcomes.push_back({v, p});
      int i = draws_ - 1;
      while (i >= 0 && v[std::size_t(i)] == t) v[std::size_t(i--)] = 1;
      if (i < 0) break;
      ++v[std::size_t(i)];
    }
    return e;
  }

  ParameterGrid default_grid(const Observation& x) const {
    long long s = llround(mle(x));
    return make_grid(double(s), double(s + 45), 1.0, GridKind::IntegerLattice);
  }

 private:
  int draws_;
};

// ---------------------------------------------------------------------------
// Urn of 1000 tickets: 20 labeled with the parameter itself and 980 labeled
// with multiplier_j * parameter, the multipliers distinct known constants.
// One ticket is drawn and its label observed.
class Ticket {
 public:
  static constexpr double kThetaProb = 0.02;  // 20 / 1000

  static std::vector<double> default_multipliers() {
    std::vector<double> m(980);
    for (std::size_t j = 0; j < 980; ++j)
      m[j] = 9.9 + 0.2 * double(j) / 979.0;
    return m;
  }

  Ticket() : Ticket(default_multipliers()) {}

  explicit Ticket(std::vector<double> multipliers)
      : multipliers_(std::move(multipliers)) {
    if (multipliers_.size() != 980)
      throw spec_error("ticket: expected exactly 980 multipliers");
    sorted_ = multipliers_;
    std::sort(sorted_.begin(), sorted_.end());
    for (std::size_t j = 0; j < sorted_.size(); ++j) {
      double a = sorted_[j];
      if (!(std::isfinite(a) && a > 0.0))
        throw spec_error("ticket: multipliers must be positive finite");
      if (std::abs(a - 1.0) <= 1e-9)
        throw spec_error("ticket: multiplier too close to 1");
      if (j > 0 && !(a - sorted_[j - 1] > 1e-12 * std::max(1.0, a)))
        throw spec_error("ticket: multipliers must be distinct");
    }
  }

  const std::vector<double>& multipliers() const { return multipliers_; }
  std::string_view id() const { return "ticket"; }
  std::string describe() const { return "ticket"; }
  Capabilities caps() const { return {true, true, true}; }
  bool theta_ok(double t) const { return std::isfinite(t) && t > 0.0; }

  void check_obs(const Observation& x) const {
    auto* d = std::get_if<double>(&x);
    if (!d || !(std::isfinite(*d) && *d > 0.0))
      throw spec_error("ticket: observation must be a positive real label");
  }

  double per_multiplier_prob() const {
    return (1.0 - kThetaProb) / double(multipliers_.size());
  }

  // Label x can arise from parameter theta in exactly two ways: x == theta,
  // or x == a_j * theta for some multiplier. Matching is relative-tolerance.
  bool matches_theta(double x, double theta) const {
    return std::abs(x - theta) <= 1e-9 * std::max(1.0, std::abs(x));
  }
  bool matches_multiplier(double x, double theta) const {
    double r = x / theta;
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), r - 1e-9 * std::max(1.0, r));
    return it != sorted_.end() && std::abs(*it - r) <= 1e-9 * std::max(1.0, r);
  }

  double log_density(const Observation& x, double theta) const {
    double v = std::get<double>(x);
    if (matches_theta(v, theta)) return std::log(kThetaProb);
    if (matches_multiplier(v, theta)) return std::log(per_multiplier_prob());
    return kNegInf;
  }

  double log_rel(const Observation& x, double theta) const {
    double v = std::get<double>(x);
    if (matches_theta(v, theta)) return 0.0;
    if (matches_multiplier(v, theta))
      return std::log(per_multiplier_prob() / kThetaProb);
    return kNegInf;
  }

  double mle(const Observation& x) const { return std::get<double>(x); }

  Observation draw(double theta, Substream& s) const {
    double u = s.next_uniform();
    if (u < kThetaProb) return theta;
    auto j = std::size_t((u - kThetaProb) / (1.0 - kThetaProb) * double(multipliers_.size()));
    j = std::min(j, multipliers_.size() - 1);
    return multipliers_[j] * theta;
  }

  Enumeration enumerate(double theta, double) const {
    Enumeration e;
    e.outcomes.reserve(multipliers_.size() + 1);
    e.outcomes.push_back({theta, kThetaProb});
    double p = per_multiplier_prob();
    for (double a : multipliers_) e.outcomes.push_back({a * theta, p});
    return e;
  }

  // Candidate parameters given label x, padded with off-support filler so the
  // contour's zero floor is visible: {x} and {x / a_j}, plus coarse multiples.
  ParameterGrid default_grid(const Observation& x) const {
    double v = std::get<double>(x);
    std::vector<double> pts;
    pts.reserve(multipliers_.size() + 41);
    pts.push_back(v);
    for (double a : sorted_) pts.push_back(v / a);
    for (int k = 1; k <= 40; ++k) pts.push_back(0.05 * double(k) * v);
    std::sort(pts.begin(), pts.end());
    ParameterGrid g;
    g.kind = GridKind::ContinuumDiscretization;
    for (double p : pts)
      if (g.points.empty() ||
          p - g.points.back() > 1e-12 * std::max(1.0, std::abs(p)))
        g.points.push_back(p);
    g.resolution = min_gap(g.points);
    return g;
  }

 private:
  static double min_gap(const std::vector<double>& pts) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < pts.size(); ++i)
      gap = std::min(gap, pts[i] - pts[i - 1]);
    return std::isfinite(gap) ? gap : 0.0;
  }

  std::vector<double> multipliers_;
  std::vector<double> sorted_;
};

// ---------------------------------------------------------------------------
// Curtailed Bernoulli design: run one trial and stop on success, otherwise
// run exactly one more. Sample space {(1,1), (2,0), (2,1)} with masses
// theta, (1-theta)^2, theta(1-theta). Registered under the model id
// "example21".
class CurtailedBernoulli {
 public:
  std::string_view id() const { return "example21"; }
  std::string describe() const { return "example21"; }
  Capabilities caps() const { return {false, true, true}; }
  bool theta_ok(double t) const { return t >= 0.0 && t <= 1.0; }

  void check_obs(const Observation& x) const {
    auto& b = detail::require_pair(x, "example21");
    bool ok = (b.trials == 1 && b.successes == 1) ||
              (b.trials == 2 && b.successes <= 1);
    if (!ok)
      throw spec_error("example21: outcome must be one of (1,1),(2,0),(2,1), got " +
                       possim::to_string(x));
  }

  double log_density(const Observation& x, double theta) const {
    auto& b = std::get<BernoulliOutcome>(x);
    if (b.trials == 1 && b.successes == 1)
      return theta > 0.0 ? std::log(theta) : kNegInf;
    if (b.trials == 2 && b.successes == 0)
      return theta < 1.0 ? 2.0 * std::log1p(-theta) : kNegInf;
    if (b.trials == 2 && b.successes == 1) {
      if (theta <= 0.0 || theta >= 1.0) return kNegInf;
      return std::log(theta) + std::log1p(-theta);
    }
    return kNegInf;
  }

  double log_rel(const Observation& x, double theta) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return log_bernoulli_relative_likelihood(b.trials, b.successes, theta);
  }

  double mle(const Observation& x) const {
    auto& b = std::get<BernoulliOutcome>(x);
    return double(b.successes) / double(b.trials);
  }

  Observation draw(double theta, Substream& s) const {
    if (s.next_uniform() < theta) return BernoulliOutcome{1, 1};
    return BernoulliOutcome{2, s.next_uniform() < theta ? 1 : 0};
  }

  Enumeration enumerate(double theta, double) const {
    Enumeration e;
    double p11 = theta;
    double p20 = (1.0 - theta) * (1.0 - theta);
    double p21 = theta * (1.0 - theta);
    if (p11 > 0.0) e.outcomes.push_back({BernoulliOutcome{1, 1}, p11});
    if (p20 > 0.0) e.outcomes.push_back({BernoulliOutcome{2, 0}, p20});
    if (p21 > 0.0) e.outcomes.push_back({BernoulliOutcome{2, 1}, p21});
    return e;
  }

  ParameterGrid default_grid(const Observation&) const {
    return make_grid(0.0, 1.0, 0.001);
  }
};

// ---------------------------------------------------------------------------
class Model {
 public:
  static Model normal() { return Model(NormalUnitVariance{}); }
  static Model binomial(int trials) { return Model(Binomial{trials}); }
  static Model negative_binomial(int successes) {
    return Model(NegativeBinomial{successes});
  }
  static Model discrete_uniform(int draws) { return Model(DiscreteUniform{draws}); }
  static Model ticket() { return Model(Ticket{}); }
  static Model ticket(std::vector<double> multipliers) {
    return Model(Ticket{std::move(multipliers)});
  }
  static Model curtailed_bernoulli() { return Model(CurtailedBernoulli{}); }

  std::string_view name() const {
    return std::visit([](auto& m) { return m.id(); }, impl_);
  }
  std::string describe() const {
    return std::visit([](auto& m) { return m.describe(); }, impl_);
  }
  Capabilities capabilities() const {
    return std::visit([](auto& m) { return m.caps(); }, impl_);
  }
  bool in_parameter_space(double theta) const {
    return std::visit([&](auto& m) { return m.theta_ok(theta); }, impl_);
  }
  void validate_observation(const Observation& x) const {
    std::visit([&](auto& m) { m.check_obs(x); }, impl_);
  }

  double log_density(const Observation& x, double theta) const {
    validate_observation(x);
    require_theta(theta);
    return std::visit([&](auto& m) { return m.log_density(x, theta); }, impl_);
  }

  // log eta(x, theta) in [-inf, 0]. For the Bernoulli-design models this is
  // the shared kernel and accepts any (trials, successes) pair, including
  // pairs outside the model's own stopping-rule support; ensembles rely on
  // scoring one member's outcomes through another member's kernel.
  double log_relative_likelihood(const Observation& x, double theta) const {
    require_theta(theta);
    if (std::holds_alternative<BernoulliOutcome>(x) && is_bernoulli_design())
      detail::require_pair(x, name());
    else
      validate_observation(x);
    return std::visit([&](auto& m) { return m.log_rel(x, theta); }, impl_);
  }

  double relative_likelihood(const Observation& x, double theta) const {
    return std::exp(log_relative_likelihood(x, theta));
  }

  double mle(const Observation& x) const {
    validate_observation(x);
    return std::visit([&](auto& m) { return m.mle(x); }, impl_);
  }

  // One draw from P_theta consuming only the given substream.
  Observation draw_one(double theta, Substream& s) const {
    return std::visit([&](auto& m) -> Observation { return m.draw(theta, s); },
                      impl_);
  }

  // Deterministic given (theta, seed, count) and invariant to worker count:
  // draw i comes entirely from substream child(i) of root(seed).
  std::vector<Observation> sample(double theta, std::uint64_t seed,
                                  std::size_t count) const {
    require_theta(theta);
    if (count < 1) throw spec_error("sample: count must be >= 1");
    std::vector<Observation> out(count);
    Substream root = Substream::root(seed);
    parallel_for(count, [&](std::size_t i) {
      Substream s = root.child(i);
      out[i] = draw_one(theta, s);
    });
    return out;
  }

  Enumeration enumerate_outcomes(double theta, double tail_tol = 1e-10) const {
    require_theta(theta);
    if (!(tail_tol >= 0.0 && tail_tol <= 1e-6))
      throw spec_error("enumerate_outcomes: tail_tol must be in [0, 1e-6]");
    if (!capabilities().enumerable)
      throw spec_error(std::string(name()) + ": not enumerable");
    return std::visit([&](auto& m) { return m.enumerate(theta, tail_tol); }, impl_);
  }

  ParameterGrid default_grid(const Observation& x) const {
    validate_observation(x);
    return std::visit([&](auto& m) { return m.default_grid(x); }, impl_);
  }

  template <typename M>
  const M* get_if() const {
    return std::get_if<M>(&impl_);
  }

 private:
  using Impl = std::variant<NormalUnitVariance, Binomial, NegativeBinomial,
                            DiscreteUniform, Ticket, CurtailedBernoulli>;

  explicit Model(Impl impl) : impl_(std::move(impl)) {}

  bool is_bernoulli_design() const {
    return std::holds_alternative<Binomial>(impl_) ||
           std::holds_alternative<NegativeBinomial>(impl_) ||
           std::holds_alternative<CurtailedBernoulli>(impl_);
  }

  void require_theta(double theta) const {
    if (!in_parameter_space(theta))
      throw spec_error(describe() + ": theta=" + std::to_string(theta) +
                       " outside parameter space");
  }

  Impl impl_;
};

}  // namespace possim
