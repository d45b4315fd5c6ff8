// Serialization and config parsing for the CLI: deterministic number
// formatting (shortest round-trip), FNV-1a config hashes, CSV/JSON writers,
// and JSON model/ensemble/prior specs.
#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "possim/contour.hpp"
#include "possim/errors.hpp"
#include "possim/model.hpp"
#include "possim/multimodel.hpp"
#include "possim/observation.hpp"
#include "possim/validity.hpp"
#include "possim/version.hpp"

namespace possim::io {

using nlohmann::json;

// Shortest representation that parses back to the same double; the single
// formatter used by every writer, so reruns are byte-identical.
inline std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw numeric_error("number formatting failed");
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hash_hex(std::string_view text) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(text);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xf];
  return out;
}

// Provenance block stamped into every output file.
struct OutputMeta {
  std::string config;  // canonical config line, hashed below
  std::optional<std::uint64_t> seed;
};

inline void write_meta_comments(std::ostream& os, const OutputMeta& meta) {
  os << "# possim_version=" << kVersion << "\n";
  os << "# config=" << meta.config << "\n";
  os << "# config_hash=" << hash_hex(meta.config) << "\n";
  os << "# seed=" << (meta.seed ? std::to_string(*meta.seed) : "none") << "\n";
}

inline void attach_meta(json& j, const OutputMeta& meta) {
  j["version"] = kVersion;
  j["config"] = meta.config;
  j["config_hash"] = hash_hex(meta.config);
  if (meta.seed)
    j["seed"] = *meta.seed;
  else
    j["seed"] = nullptr;
}

// --------------------------------------------------------------------------
// Contours

inline std::string contour_csv(const Contour& c, const OutputMeta& meta) {
  std::ostringstream os;
  write_meta_comments(os, meta);
  os << "theta,pi,se,method\n";
  std::string_view method = to_string(c.method);
  for (std::size_t i = 0; i < c.grid.points.size(); ++i) {
    double se = c.mc_std_err.empty() ? 0.0 : c.mc_std_err[i];
    os << fmt(c.grid.points[i]) << ',' << fmt(c.values[i]) << ',' << fmt(se)
       << ',' << method << "\n";
  }
  return os.str();
}

inline std::string contour_json(const Contour& c, const OutputMeta& meta) {
  json j;
  attach_meta(j, meta);
  j["model"] = c.model_id;
  j["observation"] = to_string(c.observation);
  j["method"] = std::string(to_string(c.method));
  j["theta"] = c.grid.points;
  j["pi"] = c.values;
  j["se"] = c.mc_std_err.empty() ? std::vector<double>(c.grid.points.size(), 0.0)
                                 : c.mc_std_err;
  return j.dump(2) + "\n";
}

inline std::string e_contour_csv(const EContour& c, const OutputMeta& meta) {
  std::ostringstream os;
  write_meta_comments(os, meta);
  os << "# prior=" << c.prior.to_string() << "\n";
  os << "theta,pi,se,method\n";
  for (std::size_t i = 0; i < c.grid.points.size(); ++i)
    os << fmt(c.grid.points[i]) << ',' << fmt(c.values[i]) << ",0,e-value\n";
  return os.str();
}

// Long format for multi-series figure data: one labeled row per point.
struct LabeledSeries {
  std::string label;
  std::vector<double> theta;
  std::vector<double> value;
};

inline std::string series_csv(const std::vector<LabeledSeries>& series,
                              const OutputMeta& meta) {
  std::ostringstream os;
  write_meta_comments(os, meta);
  os << "series,theta,value\n";
  for (const auto& s : series) {
    if (s.theta.size() != s.value.size())
      throw spec_error("series '" + s.label + "': length mismatch");
    for (std::size_t i = 0; i < s.theta.size(); ++i)
      os << s.label << ',' << fmt(s.theta[i]) << ',' << fmt(s.value[i]) << "\n";
  }
  return os.str();
}

// --------------------------------------------------------------------------
// Simulation reports

inline std::string report_csv(const SimulationReport& r, const OutputMeta& meta) {
  std::ostringstream os;
  write_meta_comments(os, meta);
  os << "# model=" << r.model_id << "\n";
  os << "# mode=" << to_string(r.mode) << "\n";
  os << "theta,alpha,rate,se\n";
  for (std::size_t i = 0; i < r.theta_grid.size(); ++i)
    for (std::size_t j = 0; j < r.alpha_grid.size(); ++j)
      os << fmt(r.theta_grid[i]) << ',' << fmt(r.alpha_grid[j]) << ','
         << fmt(r.rates[i][j]) << ',' << fmt(r.ses[i][j]) << "\n";
  return os.str();
}

inline json report_to_json(const SimulationReport& r) {
  json j;
  j["model"] = r.model_id;
  j["mode"] = std::string(to_string(r.mode));
  j["theta_grid"] = r.theta_grid;
  j["alpha_grid"] = r.alpha_grid;
  j["replications"] = r.replications;
  j["rates"] = r.rates;
  j["ses"] = r.ses;
  j["violations"] = json::array();
  for (const auto& v : r.violations)
    j["violations"].push_back(
        {{"theta", v.theta}, {"alpha", v.alpha}, {"rate", v.rate}, {"se", v.se}});
  return j;
}

inline std::string report_json(const SimulationReport& r, const OutputMeta& meta) {
  json j = report_to_json(r);
  attach_meta(j, meta);
  return j.dump(2) + "\n";
}

// One file covering several reports (e.g. an ensemble checked under each
// sampling member); `coverage` flips the rate column to 1 - exceedance.
inline std::string reports_csv(const std::vector<SimulationReport>& rs,
                               const OutputMeta& meta, bool coverage = false) {
  std::ostringstream os;
  write_meta_comments(os, meta);
  for (const auto& r : rs) {
    os << "# model=" << r.model_id << "\n";
    os << "# mode=" << to_string(r.mode) << "\n";
    os << "theta,alpha," << (coverage ? "coverage" : "rate") << ",se\n";
    for (std::size_t i = 0; i < r.theta_grid.size(); ++i)
      for (std::size_t j = 0; j < r.alpha_grid.size(); ++j) {
        double v = coverage ? 1.0 - r.rates[i][j] : r.rates[i][j];
        os << fmt(r.theta_grid[i]) << ',' << fmt(r.alpha_grid[j]) << ','
           << fmt(v) << ',' << fmt(r.ses[i][j]) << "\n";
      }
  }
  return os.str();
}

inline std::string reports_json(const std::vector<SimulationReport>& rs,
                                const OutputMeta& meta, bool coverage = false) {
  json j;
  attach_meta(j, meta);
  j["reports"] = json::array();
  for (const auto& r : rs) {
    json rj = report_to_json(r);
    if (coverage) {
      auto cov = r.rates;
      for (auto& row : cov)
        for (auto& v : row) v = 1.0 - v;
      rj["coverage"] = cov;
      rj.erase("rates");
    }
    j["reports"].push_back(std::move(rj));
  }
  return j.dump(2) + "\n";
}

inline std::string e_contour_json(const EContour& c, const OutputMeta& meta) {
  json j;
  attach_meta(j, meta);
  j["prior"] = c.prior.to_string();
  j["observation"] = to_string(c.observation);
  j["method"] = "e-value";
  j["theta"] = c.grid.points;
  j["pi"] = c.values;
  return j.dump(2) + "\n";
}

inline std::string false_confidence_json(const FalseConfidenceReport& r,
                                         const OutputMeta& meta) {
  json j;
  attach_meta(j, meta);
  j["theta_true"] = r.theta_true;
  j["epsilon"] = r.epsilon;
  j["replications"] = r.replications;
  j["hypothesis"] = r.hypothesis;
  j["normalized_likelihood_mass"] = {{"mean", r.mass_mean},
                                     {"q10", r.mass_q10},
                                     {"median", r.mass_median},
                                     {"q90", r.mass_q90}};
  j["possibility_of_hypothesis_mean"] = r.poss_b_mean;
  j["pi_at_theta_true_mean"] = r.pi_theta_mean;
  j["alpha_grid"] = r.alpha_grid;
  j["pi_exceedance"] = r.pi_exceedance;
  j["pi_exceedance_se"] = r.pi_exceedance_se;
  return j.dump(2) + "\n";
}

// --------------------------------------------------------------------------
// Parsing

inline double parse_double(std::string_view text, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw spec_error(std::string(what) + ": cannot parse number '" +
                     std::string(text) + "'");
  return v;
}

inline std::vector<double> parse_number_list(std::string_view text,
                                             const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_double(text.substr(start, end - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw spec_error(std::string(what) + ": empty list");
  return out;
}

struct GridSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

// "lo:hi:step"
inline GridSpec parse_grid_spec(std::string_view text) {
  std::size_t c1 = text.find(':');
  std::size_t c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos)
    throw spec_error("grid: expected lo:hi:step, got '" + std::string(text) + "'");
  GridSpec g;
  g.lo = parse_double(text.substr(0, c1), "grid lo");
  g.hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "grid hi");
  g.step = parse_double(text.substr(c2 + 1), "grid step");
  return g;
}

inline std::string canonical_model_name(std::string name) {
  for (auto& ch : name) ch = char(std::tolower((unsigned char)ch));
  if (name == "normal" || name == "normal-unit-variance") return "normal-unit-variance";
  if (name == "binom" || name == "binomial") return "binomial";
  if (name == "negbinom" || name == "negative-binomial") return "negative-binomial";
  if (name == "discrete-uniform") return "discrete-uniform";
  if (name == "ticket") return "ticket";
  if (name == "example21") return "example21";
  throw spec_error("unknown model name '" + name + "'");
}

// The observation, parsed in the shape the named model expects.
inline Observation parse_data(const std::string& canonical, std::string_view text) {
  if (canonical == "normal-unit-variance" || canonical == "ticket")
    return parse_double(text, "data");
  if (canonical == "discrete-uniform") {
    auto nums = parse_number_list(text, "data");
    std::vector<int> draws;
    for (double v : nums) {
      if (v != double(int(v))) throw spec_error("data: draws must be integers");
      draws.push_back(int(v));
    }
    return draws;
  }
  auto nums = parse_number_list(text, "data");
  if (nums.size() != 2)
    throw spec_error("data: Bernoulli designs take 'n,y'");
  if (nums[0] != double(int(nums[0])) || nums[1] != double(int(nums[1])))
    throw spec_error("data: n and y must be integers");
  return BernoulliOutcome{int(nums[0]), int(nums[1])};
}

// Builds a model from its canonical name, optional JSON params, and (when
// params omit the design constants) the observation itself.
inline Model make_model(const std::string& canonical, const json& params,
                        const Observation* data_hint = nullptr) {
  auto hint_pair = [&]() -> const BernoulliOutcome* {
    return data_hint ? std::get_if<BernoulliOutcome>(data_hint) : nullptr;
  };
  if (canonical == "normal-unit-variance") return Model::normal();
  if (canonical == "example21") return Model::curtailed_bernoulli();
  if (canonical == "binomial") {
    if (params.contains("n")) return Model::binomial(params.at("n").get<int>());
    if (auto* p = hint_pair()) return Model::binomial(p->trials);
    throw spec_error("binomial: trial count n required (params or data)");
  }
  if (canonical == "negative-binomial") {
    if (params.contains("y"))
      return Model::negative_binomial(params.at("y").get<int>());
    if (auto* p = hint_pair()) return Model::negative_binomial(p->successes);
    throw spec_error("negative-binomial: success count y required (params or data)");
  }
  if (canonical == "discrete-uniform") {
    if (params.contains("n"))
      return Model::discrete_uniform(params.at("n").get<int>());
    if (data_hint)
      if (auto* v = std::get_if<std::vector<int>>(data_hint))
        return Model::discrete_uniform(int(v->size()));
    throw spec_error("discrete-uniform: draw count n required (params or data)");
  }
  if (canonical == "ticket") {
    if (params.contains("multipliers"))
      return Model::ticket(params.at("multipliers").get<std::vector<double>>());
    return Model::ticket();
  }
  throw spec_error("unknown model name '" + canonical + "'");
}

// {"model": name, "params": {...}}
inline Model parse_model_spec(const json& j, const Observation* data_hint = nullptr) {
  if (!j.is_object() || !j.contains("model"))
    throw spec_error("model spec: expected {\"model\": name, \"params\": {...}}");
  std::string canonical = canonical_model_name(j.at("model").get<std::string>());
  json params = j.contains("params") ? j.at("params") : json::object();
  return make_model(canonical, params, data_hint);
}

// {"ensemble": ["binomial","negbinom",...], "data": [n,y]}
struct EnsembleSpecResult {
  ModelEnsemble ensemble;
  Observation data;
};

inline EnsembleSpecResult parse_ensemble_spec(const json& j) {
  if (!j.is_object() || !j.contains("ensemble") || !j.at("ensemble").is_array())
    throw spec_error(
        "ensemble spec: expected {\"ensemble\": [names], \"data\": [n,y]}");
  if (!j.contains("data") || !j.at("data").is_array() || j.at("data").size() != 2)
    throw spec_error("ensemble spec: data must be [n,y]");
  BernoulliOutcome obs{j.at("data").at(0).get<int>(), j.at("data").at(1).get<int>()};
  Observation data = obs;
  std::vector<Model> members;
  for (const auto& name : j.at("ensemble")) {
    std::string canonical = canonical_model_name(name.get<std::string>());
    members.push_back(make_model(canonical, json::object(), &data));
  }
  ModelEnsemble e = verify_ensemble(members, default_probes(members, data));
  return {std::move(e), data};
}

// "uniform" | {"beta":[a,b]} | {"point": t0} | {"discrete": {"support": [...], "weights": [...]}}
inline PriorSpec parse_prior(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "uniform") return PriorSpec::uniform01();
    throw spec_error("prior: unknown name '" + s + "'");
  }
  if (j.is_object()) {
    if (j.contains("beta")) {
      auto ab = j.at("beta").get<std::vector<double>>();
      if (ab.size() != 2) throw spec_error("prior: beta takes [a,b]");
      return PriorSpec::beta(ab[0], ab[1]);
    }
    if (j.contains("point")) return PriorSpec::point_mass(j.at("point").get<double>());
    if (j.contains("discrete")) {
      const json& d = j.at("discrete");
      return PriorSpec::discrete(d.at("support").get<std::vector<double>>(),
                                 d.at("weights").get<std::vector<double>>());
    }
  }
  throw spec_error("prior: unrecognized spec");
}

}  // namespace possim::io
