#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "possim/possim.hpp"

using namespace possim;

TEST_CASE("relative likelihood oracles") {
  Model n = Model::normal();
  // exp(-0.7^2/2), high-precision reference
  CHECK(relative_likelihood(n, 7.0, 7.7) ==
        Catch::Approx(0.7827045382418681).margin(1e-14));
  // direct density quotient
  CHECK(relative_likelihood(n, 7.0, 7.7) ==
        Catch::Approx(std::exp(n.log_density(7.0, 7.7) - n.log_density(7.0, 7.0)))
            .margin(1e-14));

  Model b = Model::binomial(10);
  CHECK(relative_likelihood(b, BernoulliOutcome{10, 3}, 0.3) == 1.0);
  CHECK(relative_likelihood(Model::binomial(16), BernoulliOutcome{16, 11}, 0.6875) ==
        1.0);

  Model e21 = Model::curtailed_bernoulli();
  CHECK(relative_likelihood(e21, BernoulliOutcome{2, 1}, 0.25) ==
        Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("relative likelihood bounds and mle normalization") {
  struct Case {
    Model m;
    Observation x;
  };
  std::vector<Case> cases{{Model::binomial(10), BernoulliOutcome{10, 3}},
                          {Model::negative_binomial(3), BernoulliOutcome{12, 3}},
                          {Model::discrete_uniform(3), std::vector<int>{2, 5, 3}},
                          {Model::curtailed_bernoulli(), BernoulliOutcome{2, 0}},
                          {Model::normal(), 1.5},
                          {Model::ticket(), 2.0}};
  for (const auto& c : cases) {
    CHECK(relative_likelihood(c.m, c.x, c.m.mle(c.x)) == 1.0);
    for (double t : c.m.default_grid(c.x).points) {
      if (!c.m.in_parameter_space(t)) continue;
      double v = relative_likelihood(c.m, c.x, t);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("binomial and negative binomial share the relative likelihood") {
  std::vector<BernoulliOutcome> data{{10, 3}, {16, 11}, {5, 1}, {7, 7}, {9, 2}};
  for (const auto& d : data) {
    Model b = Model::binomial(d.trials);
    Model nb = Model::negative_binomial(std::max(d.successes, 1));
    for (double t : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      double lb = log_relative_likelihood(b, d, t);
      double ln = log_relative_likelihood(nb, d, t);
      if (std::isinf(lb) && std::isinf(ln)) continue;
      CHECK(std::abs(lb - ln) <= 1e-12);
    }
  }
}

TEST_CASE("normalized likelihood: finite support") {
  NormalizedLikelihood nl =
      NormalizedLikelihood::finite({1.0, 2.0}, {0.2, 0.6});
  CHECK(nl.mass(HypothesisSet::points({1.0})) == Catch::Approx(0.25).margin(1e-15));
  CHECK(nl.mass(HypothesisSet::points({2.0})) == Catch::Approx(0.75).margin(1e-15));
  CHECK(nl.mass(HypothesisSet::points({1.0, 2.0})) ==
        Catch::Approx(1.0).margin(1e-15));

  CHECK_THROWS_AS(NormalizedLikelihood::finite({1.0}, {0.2, 0.3}), spec_error);
  CHECK_THROWS_AS(NormalizedLikelihood::finite({1.0, 2.0}, {-0.1, 0.3}), spec_error);
  CHECK_THROWS_AS(NormalizedLikelihood::finite({1.0, 2.0}, {0.0, 0.0}),
                  numeric_error);
}

TEST_CASE("normalized likelihood: normal window masses") {
  Model n = Model::normal();
  NormalizedLikelihood nl = NormalizedLikelihood::over_window(n, 7.0, -8.0, 22.0, 0.01);

  double a = nl.mass(HypothesisSet::interval(7.7, 8.0));
  double b = nl.mass(HypothesisSet::interval(7.7, 20.0));
  // exact Gaussian tail ratios on the same window
  CHECK(a == Catch::Approx(0.08330839829161596).epsilon(1e-4));
  CHECK(b == Catch::Approx(0.241963652223073).epsilon(1e-4));
  CHECK(b / a == Catch::Approx(2.904432892540966).epsilon(1e-4));
  CHECK(b / a >= 2.85);
  CHECK(b / a <= 2.95);

  SECTION("full window has mass exactly 1") {
    CHECK(nl.mass(HypothesisSet::interval(-8.0, 22.0)) == 1.0);
  }
  SECTION("monotone in the hypothesis") { CHECK(a < b); }
  SECTION("window containment enforced") {
    CHECK_THROWS_AS(nl.mass(HypothesisSet::interval(-50.0, -40.0)), spec_error);
    CHECK_THROWS_AS(nl.mass(HypothesisSet::interval(0.0, 30.0)), spec_error);
  }
  SECTION("finite point sets carry no continuum mass") {
    CHECK(nl.mass(HypothesisSet::points({7.0})) == 0.0);
  }
}

TEST_CASE("normalized likelihood: additivity") {
  Model n = Model::normal();
  NormalizedLikelihood nl = NormalizedLikelihood::over_window(n, 0.0, -15.0, 15.0, 0.01);

  SECTION("disjoint intervals with a gap") {
    double u = nl.mass(HypothesisSet::intervals({{-1.0, 0.0}, {1.0, 2.0}}));
    double p = nl.mass(HypothesisSet::interval(-1.0, 0.0)) +
               nl.mass(HypothesisSet::interval(1.0, 2.0));
    CHECK(u == Catch::Approx(p).margin(1e-12));
  }
  SECTION("split at an interior point off the quadrature knots") {
    double whole = nl.mass(HypothesisSet::interval(-1.0, 1.0));
    double left = nl.mass(HypothesisSet::interval(-1.0, 0.123456));
    double right = nl.mass(HypothesisSet::interval(0.123456, 1.0));
    CHECK(left + right == Catch::Approx(whole).margin(1e-9));
  }
  SECTION("complement within the window") {
    double inner = nl.mass(HypothesisSet::interval(-2.0, 2.0));
    double outer = nl.mass(HypothesisSet::intervals({{-15.0, -2.0}, {2.0, 15.0}}));
    CHECK(inner + outer == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("normalized likelihood: lattice models sum point masses") {
  Model u = Model::discrete_uniform(3);
  Observation x = std::vector<int>{2, 5, 3};
  NormalizedLikelihood nl = NormalizedLikelihood::from_model(u, x);

  // independent arithmetic: L(theta) = theta^-3 for theta >= 5 on the default grid
  auto grid = u.default_grid(x).points;
  double total = 0.0, at5 = 0.0;
  for (double t : grid) {
    if (t < 5.0) continue;
    double l = std::pow(t, -3.0);
    total += l;
    if (t == 5.0) at5 = l;
  }
  CHECK(nl.mass(HypothesisSet::points({5.0})) ==
        Catch::Approx(at5 / total).epsilon(1e-12));
  CHECK(nl.mass(HypothesisSet::interval(grid.front(), grid.back())) ==
        Catch::Approx(1.0).margin(1e-12));
  // off-lattice point inside the window: no support there
  CHECK(nl.mass(HypothesisSet::points({5.5})) == 0.0);
  // outside the normalization window: rejected, not silently 0
  CHECK_THROWS_AS(nl.mass(HypothesisSet::points({4.0})), spec_error);
}

TEST_CASE("possibility ignores set size where normalized mass does not") {
  // the contrast driving the false-confidence phenomenon: A subset of B with
  // equal possibility but strictly smaller additive mass
  Model n = Model::normal();
  Observation x = 7.0;
  Contour c = contour_closed_form(n, x, n.default_grid(x));
  HypothesisSet a = HypothesisSet::interval(7.7, 8.0);
  HypothesisSet b = HypothesisSet::interval(7.7, 20.0);
  CHECK(possibility(c, a).value == possibility(c, b).value);

  NormalizedLikelihood nl = NormalizedLikelihood::over_window(n, 7.0, -8.0, 22.0, 0.01);
  CHECK(nl.mass(a) < nl.mass(b));
}

TEST_CASE("over_window argument validation") {
  Model n = Model::normal();
  CHECK_THROWS_AS(NormalizedLikelihood::over_window(n, 7.0, 8.0, 7.0, 0.01),
                  spec_error);
  CHECK_THROWS_AS(NormalizedLikelihood::over_window(n, 7.0, -8.0, 22.0, 0.0),
                  spec_error);
  // window far from the data: likelihood vanishes numerically
  CHECK_THROWS_AS(NormalizedLikelihood::over_window(n, 7.0, 500.0, 510.0, 0.01),
                  numeric_error);
}
