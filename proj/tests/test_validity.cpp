#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "possim/possim.hpp"

using namespace possim;

namespace {

const std::vector<double> kAlphas{0.01, 0.05, 0.1, 0.25, 0.5};

}  // namespace

TEST_CASE("exact exceedance: binomial sweep never exceeds alpha") {
  Model b = Model::binomial(10);
  std::vector<double> thetas;
  for (double t = 0.05; t < 0.951; t += 0.05) thetas.push_back(t);
  SimulationReport r = validity_sim(b, thetas, kAlphas);
  CHECK(r.mode == SimMode::ExactEnumeration);
  CHECK(r.replications == 0);
  CHECK(r.valid());
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (std::size_t j = 0; j < kAlphas.size(); ++j) {
      CHECK(r.rates[i][j] <= kAlphas[j]);  // zero tolerance
      CHECK(r.ses[i][j] == 0.0);
    }
}

TEST_CASE("exact exceedance: binomial theta=0.1 rational oracle") {
  Model b = Model::binomial(10);
  SimulationReport r = validity_sim(b, {0.1}, kAlphas);
  // cumulative binomial(10, 0.1) masses over eta-ordered outcomes
  const double expect[5] = {0.0016349374, 0.0127951984, 0.0701908264,
                            0.0701908264, 0.4188692665};
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(r.rates[0][j] == Catch::Approx(expect[j]).margin(1e-12));
}

TEST_CASE("exact exceedance: support model and curtailed design") {
  Model u = Model::discrete_uniform(1);
  SimulationReport ru = validity_sim(u, {10.0}, {0.25});
  // pi values are 0.1, 0.2, ..., 1.0; mass at or below 0.25 is exactly 0.2
  CHECK(ru.rates[0][0] == Catch::Approx(0.2).margin(1e-15));
  CHECK(ru.valid());

  Model cb = Model::curtailed_bernoulli();
  SimulationReport rc = validity_sim(cb, {0.5}, kAlphas);
  const double expect[5] = {0.0, 0.0, 0.0, 0.25, 0.25};
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(rc.rates[0][j] == Catch::Approx(expect[j]).margin(1e-15));
  CHECK(rc.valid());
}

TEST_CASE("distorted contour is caught") {
  Model b = Model::binomial(10);
  ValidityOptions opt;
  opt.eta_power = 2.0;  // squared relative likelihood: a broken transform
  SimulationReport r = validity_sim(b, {0.1, 0.3}, kAlphas, opt);
  CHECK_FALSE(r.valid());
  // the squared contour at theta=0.1 dumps 0.4188... of mass at alpha=0.05
  bool found = false;
  for (const RateCell& v : r.violations) {
    if (v.theta == 0.1 && v.alpha == 0.05) {
      found = true;
      CHECK(v.rate == Catch::Approx(0.4188692665).margin(1e-9));
    }
  }
  CHECK(found);
}

TEST_CASE("continuous case: pit samples look uniform") {
  Model n = Model::normal();
  std::vector<double> u = validity_pit_samples(n, 0.0, 10'000, 42);
  REQUIRE(u.size() == 10'000);
  double ks = ks_uniform_statistic(u);
  CHECK(ks < 0.0162762361152);  // 1% critical value at this sample size
  for (double a : kAlphas) {
    std::size_t hits = 0;
    for (double v : u) hits += (v <= a);
    double rate = double(hits) / 10'000.0;
    CHECK(std::abs(rate - a) <= 4.0 * std::sqrt(a * (1.0 - a) / 10'000.0));
  }
}

TEST_CASE("monte carlo agrees with enumeration") {
  Model b = Model::binomial(10);
  SimulationReport exact = validity_sim(b, {0.3}, kAlphas);
  ValidityOptions opt;
  opt.mode = SimMode::MonteCarlo;
  opt.replications = 10'000;
  opt.seed = 5;
  SimulationReport mc = validity_sim(b, {0.3}, kAlphas, opt);
  CHECK(mc.mode == SimMode::MonteCarlo);
  CHECK(mc.replications == 10'000);
  CHECK(mc.valid());
  for (std::size_t j = 0; j < kAlphas.size(); ++j) {
    double bound = 4.0 * mc.ses[0][j] + 2.0 / 10'000.0 + 4.0e-2 * exact.ses[0][j];
    CHECK(std::abs(mc.rates[0][j] - exact.rates[0][j]) <=
          std::max(bound, 4.0 * std::sqrt(exact.rates[0][j] *
                                          (1.0 - exact.rates[0][j]) / 10'000.0) +
                              2.0 / 10'000.0));
  }
}

TEST_CASE("coverage is one minus exceedance") {
  Model b = Model::binomial(16);
  SimulationReport r = validity_sim(b, {0.4}, {0.1});
  CoverageEstimate c = coverage_sim(b, 0.4, 0.1);
  CHECK(c.coverage == 1.0 - r.rates[0][0]);
  CHECK(c.coverage >= 0.9);
  CHECK(c.mode == SimMode::ExactEnumeration);
}

TEST_CASE("ensemble contour stays valid under every member") {
  std::vector<Model> members{Model::binomial(10), Model::negative_binomial(3)};
  ModelEnsemble e =
      verify_ensemble(members, default_probes(members, BernoulliOutcome{10, 3}));
  std::vector<double> thetas{0.2, 0.4, 0.6};
  std::vector<SimulationReport> reports = ensemble_validity_sim(e, thetas, kAlphas);
  REQUIRE(reports.size() == 2);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const SimulationReport& r = reports[k];
    CHECK(r.valid());
    // the combined contour dominates the member's own, so its exceedance
    // can only be smaller
    SimulationReport own = validity_sim(e.members()[k], thetas, kAlphas);
    for (std::size_t i = 0; i < thetas.size(); ++i)
      for (std::size_t j = 0; j < kAlphas.size(); ++j)
        CHECK(r.rates[i][j] <= own.rates[i][j] + 1e-12);
  }
}

TEST_CASE("additive mass concentrates near one on a tiny exclusion") {
  FalseConfidenceReport fc = false_confidence_demo(7.0, 0.1, 2000, 1);
  CHECK(fc.replications == 2000);
  CHECK(fc.mass_mean >= 0.9);
  CHECK(fc.mass_median >= 0.9);
  CHECK(fc.poss_b_mean >= 0.9);  // the possibilistic score also stays high
  CHECK(fc.hypothesis.find("complement") != std::string::npos);
  // ... yet pi_X(theta) keeps its calibration
  REQUIRE(fc.alpha_grid == std::vector<double>{0.01, 0.05, 0.1, 0.25, 0.5});
  for (std::size_t j = 0; j < fc.alpha_grid.size(); ++j) {
    double a = fc.alpha_grid[j];
    double se = std::sqrt(a * (1.0 - a) / 2000.0);
    CHECK(std::abs(fc.pi_exceedance[j] - a) <= 4.0 * se);
  }
}

TEST_CASE("simulation is reproducible across worker counts") {
  Model n = Model::normal();
  setenv("POSSIM_THREADS", "1", 1);
  std::vector<double> u1 = validity_pit_samples(n, 1.5, 4000, 9);
  setenv("POSSIM_THREADS", "8", 1);
  std::vector<double> u8 = validity_pit_samples(n, 1.5, 4000, 9);
  unsetenv("POSSIM_THREADS");
  CHECK(u1 == u8);

  ValidityOptions opt;
  opt.mode = SimMode::MonteCarlo;
  opt.replications = 2000;
  opt.seed = 13;
  Model b = Model::binomial(10);
  setenv("POSSIM_THREADS", "1", 1);
  SimulationReport r1 = validity_sim(b, {0.3, 0.7}, kAlphas, opt);
  setenv("POSSIM_THREADS", "8", 1);
  SimulationReport r8 = validity_sim(b, {0.3, 0.7}, kAlphas, opt);
  unsetenv("POSSIM_THREADS");
  CHECK(r1.rates == r8.rates);
}

TEST_CASE("ks statistic sanity") {
  CHECK(ks_uniform_statistic({0.5}) == Catch::Approx(0.5).margin(1e-15));
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
  CHECK(ks_uniform_statistic(grid) == Catch::Approx(0.005).margin(1e-12));
  std::vector<double> lump(50, 0.3);
  CHECK(ks_uniform_statistic(lump) == Catch::Approx(0.7).margin(1e-15));
}

TEST_CASE("argument validation") {
  Model b = Model::binomial(10);
  CHECK_THROWS_AS(validity_sim(b, {}, kAlphas), spec_error);
  CHECK_THROWS_AS(validity_sim(b, {0.3}, {}), spec_error);
  CHECK_THROWS_AS(validity_sim(b, {0.3}, {0.0}), spec_error);
  CHECK_THROWS_AS(validity_sim(b, {0.3}, {1.0}), spec_error);
  CHECK_THROWS_AS(validity_sim(b, {1.5}, kAlphas), spec_error);

  ValidityOptions tiny;
  tiny.mode = SimMode::MonteCarlo;
  tiny.replications = 100;
  CHECK_THROWS_AS(validity_sim(b, {0.3}, kAlphas, tiny), spec_error);

  CHECK_THROWS_AS(false_confidence_demo(7.0, -0.5), spec_error);
  CHECK_THROWS_AS(false_confidence_demo(7.0, 0.1, 10), spec_error);

  CHECK(to_string(SimMode::ExactEnumeration) == "exact-enumeration");
  CHECK(to_string(SimMode::MonteCarlo) == "monte-carlo");
}
