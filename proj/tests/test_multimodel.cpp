#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "possim/possim.hpp"

using namespace possim;

namespace {

ModelEnsemble bernoulli_trio() {
  std::vector<Model> members{Model::binomial(10), Model::negative_binomial(3),
                             Model::curtailed_bernoulli()};
  return verify_ensemble(members, default_probes(members, BernoulliOutcome{10, 3}));
}

}  // namespace

TEST_CASE("ensemble membership: shared relative likelihood accepted") {
  ModelEnsemble e = bernoulli_trio();
  CHECK(e.members().size() == 3);
  CHECK(e.describe().find("binomial") != std::string::npos);
  CHECK(e.describe().find("negative-binomial") != std::string::npos);
}

TEST_CASE("ensemble membership: disagreeing member rejected") {
  std::vector<Model> members{Model::normal(), Model::binomial(10)};
  CHECK_THROWS_AS(
      verify_ensemble(members, default_probes(members, BernoulliOutcome{10, 3})),
      spec_error);
  CHECK_THROWS_AS(verify_ensemble({}, {{BernoulliOutcome{2, 1}, 0.5}}), spec_error);
  CHECK_THROWS_AS(verify_ensemble({Model::binomial(10)}, {}), spec_error);
}

TEST_CASE("combined contour is the pointwise max of member contours") {
  ModelEnsemble e = bernoulli_trio();
  Observation x = BernoulliOutcome{10, 3};
  ParameterGrid g = make_grid(0.0, 1.0, 0.01, GridKind::ContinuumDiscretization);
  Contour comb = contour_ensemble(e, x, g);

  for (const Model& m : e.members()) {
    Contour part = contour_auto(m, x, comb.grid);
    REQUIRE(part.grid.points == comb.grid.points);
    for (std::size_t i = 0; i < comb.grid.size(); ++i)
      CHECK(comb.values[i] >= part.values[i]);
  }
  // and it is attained: at every point some member achieves the max
  Contour b = contour_auto(e.members()[0], x, comb.grid);
  Contour nb = contour_auto(e.members()[1], x, comb.grid);
  Contour cb = contour_auto(e.members()[2], x, comb.grid);
  for (std::size_t i = 0; i < comb.grid.size(); ++i) {
    double best = std::max({b.values[i], nb.values[i], cb.values[i]});
    CHECK(comb.values[i] == best);
  }
  CHECK(comb.max_value() == 1.0);
}

TEST_CASE("e-value oracles under the flat prior") {
  Observation x = BernoulliOutcome{10, 3};
  PriorSpec q = PriorSpec::uniform01();
  // denominator B(4,8) = 1/1320; at the mle eta = 1
  CHECK(e_value(x, 0.3, q) ==
        Catch::Approx(2.935107252).epsilon(1e-12));
  // theta^3 (1-theta)^7 * 1320 at 0.75 is the dyadic 4455/131072
  CHECK(e_value(x, 0.75, q) ==
        Catch::Approx(0.03398895263671875).epsilon(1e-12));
  // a boundary theta that kills the likelihood
  CHECK(e_value(x, 0.0, q) == 0.0);
  CHECK(e_value(x, 1.0, q) == 0.0);
}

TEST_CASE("e-value under other priors") {
  Observation x = BernoulliOutcome{10, 3};
  CHECK(e_value(x, 0.3, PriorSpec::beta(2.0, 2.0)) ==
        Catch::Approx(2.38477464225).epsilon(1e-12));

  // point mass at the mle: denominator equals 1
  PriorSpec pm = PriorSpec::point_mass(0.3);
  CHECK(e_value(x, 0.3, pm) == Catch::Approx(1.0).margin(1e-12));
  Model b10 = Model::binomial(10);
  CHECK(e_value(x, 0.5, pm) ==
        Catch::Approx(relative_likelihood(b10, x, 0.5)).epsilon(1e-12));

  PriorSpec disc = PriorSpec::discrete({0.2, 0.5}, {0.5, 0.5});
  double den = 0.5 * relative_likelihood(b10, x, 0.2) +
               0.5 * relative_likelihood(b10, x, 0.5);
  CHECK(e_value(x, 0.4, disc) ==
        Catch::Approx(relative_likelihood(b10, x, 0.4) / den).epsilon(1e-10));
}

TEST_CASE("prior validation") {
  CHECK_THROWS_AS(PriorSpec::beta(0.0, 1.0), spec_error);
  CHECK_THROWS_AS(PriorSpec::beta(2.0, -1.0), spec_error);
  CHECK_THROWS_AS(PriorSpec::discrete({0.2}, {0.5, 0.5}), spec_error);
  CHECK_THROWS_AS(PriorSpec::discrete({0.2, 0.5}, {0.7, 0.7}), spec_error);
  CHECK_THROWS_AS(PriorSpec::discrete({0.2, 0.5}, {-0.5, 1.5}), spec_error);

  Observation x = BernoulliOutcome{10, 3};
  // construction allows any finite location; scoring enforces [0,1]
  CHECK_THROWS_AS(e_value(x, 0.3, PriorSpec::point_mass(1.5)), spec_error);
  // a prior that gives the observed likelihood zero mass cannot normalize
  CHECK_THROWS_AS(e_value(x, 0.3, PriorSpec::point_mass(0.0)), numeric_error);
  CHECK_THROWS_AS(e_value(x, 1.2, PriorSpec::uniform01()), spec_error);
  CHECK_THROWS_AS(e_value(Observation{7.5}, 0.3, PriorSpec::uniform01()),
                  spec_error);
  CHECK_THROWS_AS(e_value(Observation{BernoulliOutcome{3, 5}}, 0.3,
                          PriorSpec::uniform01()),
                  spec_error);
}

TEST_CASE("truncated e-value contour") {
  Observation x = BernoulliOutcome{10, 3};
  PriorSpec q = PriorSpec::uniform01();
  ParameterGrid g;
  g.kind = GridKind::ContinuumDiscretization;
  g.points = {-0.5, 0.0, 0.3, 0.75, 1.0, 1.5};
  g.resolution = 0.05;
  EContour e = e_contour(x, g, q);
  REQUIRE(e.values.size() == 6);
  CHECK(e.values[0] == 0.0);  // outside [0,1]
  CHECK(e.values[1] == 0.0);  // boundary kills the likelihood
  CHECK(e.values[2] == 1.0);  // 2.93... truncated
  CHECK(e.values[3] == Catch::Approx(0.03398895263671875).epsilon(1e-12));
  CHECK(e.values[4] == 0.0);
  CHECK(e.values[5] == 0.0);  // outside [0,1]
  CHECK(e.prior.kind() == PriorSpec::Kind::Uniform01);
}

TEST_CASE("relative likelihood never exceeds the truncated e-contour") {
  Observation x = BernoulliOutcome{16, 11};
  Model b = Model::binomial(16);
  ParameterGrid g = make_grid(0.0, 1.0, 0.001, GridKind::ContinuumDiscretization);
  EContour e = e_contour(x, g, PriorSpec::uniform01());
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    double eta = relative_likelihood(b, x, e.grid.points[i]);
    CHECK(eta <= e.values[i] + 1e-12);
  }
}

TEST_CASE("e-value is model-free across ensemble members") {
  // the same (trials, successes) pair gives one e-value no matter which
  // member generated it, because sup-normalization cancels the constants
  Observation x = BernoulliOutcome{10, 3};
  ModelEnsemble e = bernoulli_trio();
  PriorSpec q = PriorSpec::uniform01();
  double ref = e_value(x, 0.4, q);
  for (const Model& m : e.members()) {
    double eta = relative_likelihood(m, x, 0.4);
    double eta_mle = relative_likelihood(m, x, 0.3);
    CHECK(eta / eta_mle == Catch::Approx(ref / e_value(x, 0.3, q)).epsilon(1e-12));
  }
}

TEST_CASE("prior descriptions") {
  CHECK(PriorSpec::uniform01().to_string() == "uniform-0-1");
  CHECK(PriorSpec::beta(2, 2).to_string().find("beta") == 0);
  CHECK(PriorSpec::point_mass(0.3).to_string().find("point-mass") == 0);
  CHECK(PriorSpec::discrete({0.5}, {1.0}).to_string().find("discrete") == 0);
}
