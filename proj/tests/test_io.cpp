#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "possim/possim.hpp"

using namespace possim;
using possim::io::json;

namespace {

Contour tiny_contour() {
  Contour c;
  c.grid.kind = GridKind::ContinuumDiscretization;
  c.grid.points = {0.25, 0.5, 0.98};
  c.grid.resolution = 0.25;
  c.values = {0.5, 1.0, 0.0};
  c.method = ContourMethod::Exact;
  c.model_id = "binomial(n=4)";
  c.observation = BernoulliOutcome{4, 2};
  return c;
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(io::fmt(0.5) == "0.5");
  CHECK(io::fmt(1.0) == "1");
  CHECK(io::fmt(0.0) == "0");
  CHECK(io::fmt(0.98) == "0.98");
  CHECK(io::fmt(0.1 + 0.2) == "0.30000000000000004");
  for (double v : {0.1, 1e-10, 3.141592653589793, 0.4188692665}) {
    double back = io::parse_double(io::fmt(v), "roundtrip");
    CHECK(back == v);
  }
}

TEST_CASE("config hashing is stable and collision-averse") {
  std::string h = io::hash_hex("contour --model binomial");
  CHECK(h.size() == 16);
  CHECK(h == io::hash_hex("contour --model binomial"));
  CHECK(h != io::hash_hex("contour --model ticket"));
  for (char c : h) CHECK(std::string("0123456789abcdef").find(c) != std::string::npos);
}

TEST_CASE("contour csv golden form") {
  io::OutputMeta meta;
  meta.config = "test-config";
  meta.seed = 7;
  std::string expect =
      "# possim_version=" + std::string(kVersion) + "\n"
      "# config=test-config\n"
      "# config_hash=" + io::hash_hex("test-config") + "\n"
      "# seed=7\n"
      "theta,pi,se,method\n"
      "0.25,0.5,0,exact\n"
      "0.5,1,0,exact\n"
      "0.98,0,0,exact\n";
  CHECK(io::contour_csv(tiny_contour(), meta) == expect);

  meta.seed.reset();
  std::string no_seed = io::contour_csv(tiny_contour(), meta);
  CHECK(no_seed.find("# seed=none\n") != std::string::npos);
}

TEST_CASE("serializers are deterministic") {
  io::OutputMeta meta;
  meta.config = "same";
  Contour c = tiny_contour();
  CHECK(io::contour_csv(c, meta) == io::contour_csv(c, meta));
  CHECK(io::contour_json(c, meta) == io::contour_json(c, meta));
}

TEST_CASE("contour json carries provenance and data") {
  io::OutputMeta meta;
  meta.config = "cfg";
  meta.seed = 3;
  json j = json::parse(io::contour_json(tiny_contour(), meta));
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("config") == "cfg");
  CHECK(j.at("config_hash") == io::hash_hex("cfg"));
  CHECK(j.at("seed") == 3);
  CHECK(j.at("model") == "binomial(n=4)");
  CHECK(j.at("observation") == "(4,2)");
  CHECK(j.at("theta").size() == 3);
  CHECK(j.at("pi")[1] == 1.0);
}

TEST_CASE("series csv long format") {
  io::OutputMeta meta;
  meta.config = "cfg";
  io::LabeledSeries a{"combined", {0.1, 0.2}, {0.5, 1.0}};
  std::string out = io::series_csv({a}, meta);
  CHECK(out.find("series,theta,value\n") != std::string::npos);
  CHECK(out.find("combined,0.1,0.5\n") != std::string::npos);
  CHECK(out.find("combined,0.2,1\n") != std::string::npos);
  io::LabeledSeries bad{"x", {0.1}, {0.5, 0.7}};
  CHECK_THROWS_AS(io::series_csv({bad}, meta), spec_error);
}

TEST_CASE("simulation report serialization") {
  Model b = Model::binomial(10);
  SimulationReport r = validity_sim(b, {0.1}, {0.05, 0.5});
  io::OutputMeta meta;
  meta.config = "validate";
  std::string csv = io::report_csv(r, meta);
  CHECK(csv.find("# model=binomial(n=10)\n") != std::string::npos);
  CHECK(csv.find("# mode=exact-enumeration\n") != std::string::npos);
  CHECK(csv.find("theta,alpha,rate,se\n") != std::string::npos);
  CHECK(csv.find("0.1,0.05,0.0127951984") != std::string::npos);

  std::string cov = io::reports_csv({r}, meta, true);
  CHECK(cov.find("theta,alpha,coverage,se\n") != std::string::npos);
  CHECK(cov.find("0.1,0.5," + io::fmt(1.0 - r.rates[0][1]) + ",0\n") !=
        std::string::npos);

  json j = json::parse(io::report_json(r, meta));
  CHECK(j.at("mode") == "exact-enumeration");
  CHECK(j.at("replications") == 0);
  CHECK(j.at("violations").empty());
  CHECK(j.at("rates")[0][0].get<double>() ==
        Catch::Approx(0.0127951984).margin(1e-12));
}

TEST_CASE("e-contour serialization names the prior") {
  EContour e = e_contour(BernoulliOutcome{10, 3},
                         make_grid(0.0, 1.0, 0.5, GridKind::ContinuumDiscretization),
                         PriorSpec::uniform01());
  io::OutputMeta meta;
  meta.config = "cfg";
  std::string csv = io::e_contour_csv(e, meta);
  CHECK(csv.find("# prior=uniform-0-1\n") != std::string::npos);
  CHECK(csv.find(",0,e-value\n") != std::string::npos);
  json j = json::parse(io::e_contour_json(e, meta));
  CHECK(j.at("prior") == "uniform-0-1");
  CHECK(j.at("method") == "e-value");
}

TEST_CASE("false confidence serialization") {
  FalseConfidenceReport fc = false_confidence_demo(7.0, 0.1, 200, 2);
  io::OutputMeta meta;
  meta.config = "demo";
  meta.seed = 2;
  json j = json::parse(io::false_confidence_json(fc, meta));
  CHECK(j.at("theta_true") == 7.0);
  CHECK(j.at("replications") == 200);
  CHECK(j.at("normalized_likelihood_mass").contains("mean"));
  CHECK(j.at("pi_exceedance").size() == j.at("alpha_grid").size());
}

TEST_CASE("grid spec parsing") {
  io::GridSpec g = io::parse_grid_spec("0:1:0.001");
  CHECK(g.lo == 0.0);
  CHECK(g.hi == 1.0);
  CHECK(g.step == 0.001);
  io::GridSpec n = io::parse_grid_spec("-3:17:0.5");
  CHECK(n.lo == -3.0);
  CHECK(n.hi == 17.0);
  CHECK_THROWS_AS(io::parse_grid_spec("0:1"), spec_error);
  CHECK_THROWS_AS(io::parse_grid_spec("a:b:c"), spec_error);
}

TEST_CASE("model names canonicalize") {
  CHECK(io::canonical_model_name("normal") == "normal-unit-variance");
  CHECK(io::canonical_model_name("Normal-Unit-Variance") == "normal-unit-variance");
  CHECK(io::canonical_model_name("binom") == "binomial");
  CHECK(io::canonical_model_name("negbinom") == "negative-binomial");
  CHECK(io::canonical_model_name("TICKET") == "ticket");
  CHECK(io::canonical_model_name("example21") == "example21");
  CHECK_THROWS_AS(io::canonical_model_name("poisson"), spec_error);
}

TEST_CASE("data parsing follows the model's observation shape") {
  Observation d = io::parse_data("normal-unit-variance", "7.5");
  CHECK(std::get<double>(d) == 7.5);
  Observation t = io::parse_data("ticket", "1");
  CHECK(std::get<double>(t) == 1.0);
  Observation u = io::parse_data("discrete-uniform", "2,5,3");
  CHECK(std::get<std::vector<int>>(u) == std::vector<int>{2, 5, 3});
  Observation b = io::parse_data("binomial", "10,3");
  CHECK(std::get<BernoulliOutcome>(b).trials == 10);
  CHECK(std::get<BernoulliOutcome>(b).successes == 3);

  CHECK_THROWS_AS(io::parse_data("binomial", "10"), spec_error);
  CHECK_THROWS_AS(io::parse_data("binomial", "10,3.5"), spec_error);
  CHECK_THROWS_AS(io::parse_data("binomial", "a"), spec_error);
  CHECK_THROWS_AS(io::parse_data("discrete-uniform", "2,5.5"), spec_error);
  CHECK_THROWS_AS(io::parse_data("normal-unit-variance", ""), spec_error);
}

TEST_CASE("model building uses params or the data hint") {
  json empty = json::object();
  Observation pair = BernoulliOutcome{12, 4};
  Model b = io::make_model("binomial", {{"n", 10}}, nullptr);
  CHECK(b.describe() == "binomial(n=10)");
  Model bh = io::make_model("binomial", empty, &pair);
  CHECK(bh.describe() == "binomial(n=12)");
  Model nb = io::make_model("negative-binomial", empty, &pair);
  CHECK(nb.describe() == "negative-binomial(y=4)");
  Observation draws = std::vector<int>{2, 5, 3};
  Model u = io::make_model("discrete-uniform", empty, &draws);
  CHECK(u.describe() == "discrete-uniform(n=3)");
  Model t = io::make_model("ticket", empty, nullptr);
  CHECK(t.describe() == "ticket");
  CHECK_THROWS_AS(io::make_model("binomial", empty, nullptr), spec_error);
  CHECK_THROWS_AS(io::make_model("discrete-uniform", empty, &pair), spec_error);
}

TEST_CASE("model and ensemble specs parse from json") {
  json mj = json::parse(R"({"model": "binom", "params": {"n": 16}})");
  Model m = io::parse_model_spec(mj);
  CHECK(m.describe() == "binomial(n=16)");
  CHECK_THROWS_AS(io::parse_model_spec(json::parse(R"({"params": {}})")),
                  spec_error);

  json ej = json::parse(R"({"ensemble": ["binomial", "negbinom"], "data": [10, 3]})");
  io::EnsembleSpecResult er = io::parse_ensemble_spec(ej);
  CHECK(er.ensemble.members().size() == 2);
  CHECK(std::get<BernoulliOutcome>(er.data).trials == 10);
  CHECK_THROWS_AS(io::parse_ensemble_spec(json::parse(R"({"ensemble": []})")),
                  spec_error);
  CHECK_THROWS_AS(
      io::parse_ensemble_spec(
          json::parse(R"({"ensemble": ["binomial"], "data": [10]})")),
      spec_error);
}

TEST_CASE("prior specs parse from json") {
  CHECK(io::parse_prior(json("uniform")).kind() == PriorSpec::Kind::Uniform01);
  PriorSpec b = io::parse_prior(json::parse(R"({"beta": [2, 2]})"));
  CHECK(b.kind() == PriorSpec::Kind::Beta);
  CHECK(b.beta_a() == 2.0);
  PriorSpec p = io::parse_prior(json::parse(R"({"point": 0.3})"));
  CHECK(p.location() == 0.3);
  PriorSpec d = io::parse_prior(
      json::parse(R"({"discrete": {"support": [0.2, 0.5], "weights": [0.5, 0.5]}})"));
  CHECK(d.support().size() == 2);
  CHECK_THROWS_AS(io::parse_prior(json("jeffreys")), spec_error);
  CHECK_THROWS_AS(io::parse_prior(json::parse(R"({"beta": [2]})")), spec_error);
  CHECK_THROWS_AS(io::parse_prior(json(42)), spec_error);
}

TEST_CASE("number list parsing") {
  CHECK(io::parse_number_list("1,2.5,3", "t") ==
        std::vector<double>{1.0, 2.5, 3.0});
  CHECK_THROWS_AS(io::parse_number_list("", "t"), spec_error);
  CHECK_THROWS_AS(io::parse_number_list("1,,2", "t"), spec_error);
  CHECK_THROWS_AS(io::parse_double("1.2.3", "t"), spec_error);
}
