// possim: possibility contours, hypothesis tests, and validity simulations
// driven by likelihood functions.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "possim/possim.hpp"

namespace ps = possim;
using ps::io::json;

namespace {

struct CommonOpts {
  std::string model_name;
  std::string ensemble_csv;
  std::string spec_text;  // JSON file path or inline JSON
  std::string data_text;
  std::vector<std::string> params;  // key=value design constants
  std::string grid_text;
  std::string method = "auto";
  std::uint64_t seed = 0;
  std::size_t reps = 10'000;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sc, CommonOpts& o, bool with_method = true) {
  sc->add_option("--model", o.model_name,
                 "model name: normal, binomial, negbinom, discrete-uniform, "
                 "ticket, example21");
  sc->add_option("--ensemble", o.ensemble_csv,
                 "comma-separated model names sharing one relative likelihood");
  sc->add_option("--spec", o.spec_text, "JSON model/ensemble spec (path or inline)");
  sc->add_option("--data", o.data_text,
                 "observation: x (normal/ticket), n,y (Bernoulli designs), "
                 "comma list (discrete-uniform)");
  sc->add_option("--param", o.params, "design constant key=value (e.g. n=10, y=3)");
  sc->add_option("--grid", o.grid_text, "parameter grid lo:hi:step");
  if (with_method)
    sc->add_option("--method", o.method, "contour method")
        ->check(CLI::IsMember({"auto", "exact", "closed", "mc"}));
  sc->add_option("--seed", o.seed, "random seed")->capture_default_str();
  sc->add_option("--reps", o.reps, "Monte Carlo replications")->capture_default_str();
  sc->add_option("--out", o.out, "output file (default: stdout)");
  sc->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

json params_from_kv(const std::vector<std::string>& kvs) {
  json p = json::object();
  for (const auto& kv : kvs) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ps::spec_error("--param expects key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    double v = ps::io::parse_double(kv.substr(eq + 1), "--param");
    if (v == double(static_cast<long long>(v)))
      p[key] = static_cast<long long>(v);
    else
      p[key] = v;
  }
  return p;
}

json load_spec_json(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return json::parse(text);
  std::ifstream f(text);
  if (!f) throw ps::spec_error("cannot open spec file: " + text);
  std::ostringstream buf;
  buf << f.rdbuf();
  return json::parse(buf.str());
}

std::string data_text_from_json(const json& j) {
  if (!j.contains("data")) return {};
  const json& d = j.at("data");
  if (d.is_number()) return ps::io::fmt(d.get<double>());
  if (d.is_array()) {
    std::string out;
    for (const auto& v : d) {
      if (!out.empty()) out += ',';
      out += ps::io::fmt(v.get<double>());
    }
    return out;
  }
  throw ps::spec_error("spec data: expected number or array");
}

struct Subject {
  std::optional<ps::Model> model;
  std::optional<ps::ModelEnsemble> ensemble;
  std::optional<ps::Observation> data;
  std::string descr;
};

Subject resolve_subject(const CommonOpts& o, bool need_data) {
  int sources = int(!o.model_name.empty()) + int(!o.ensemble_csv.empty()) +
                int(!o.spec_text.empty());
  if (sources != 1)
    throw ps::spec_error("exactly one of --model, --ensemble, --spec is required");
  json params = params_from_kv(o.params);

  Subject s;
  if (!o.spec_text.empty()) {
    json j = load_spec_json(o.spec_text);
    if (j.contains("ensemble")) {
      if (!o.data_text.empty()) {
        auto nums = ps::io::parse_number_list(o.data_text, "data");
        j["data"] = nums;
      }
      auto res = ps::io::parse_ensemble_spec(j);
      s.ensemble = std::move(res.ensemble);
      s.data = res.data;
    } else {
      if (!j.contains("model"))
        throw ps::spec_error("spec: expected a \"model\" or \"ensemble\" key");
      std::string canonical =
          ps::io::canonical_model_name(j.at("model").get<std::string>());
      std::string dtext =
          !o.data_text.empty() ? o.data_text : data_text_from_json(j);
      if (!dtext.empty()) s.data = ps::io::parse_data(canonical, dtext);
      json p = j.contains("params") ? j.at("params") : json::object();
      for (auto it = params.begin(); it != params.end(); ++it) p[it.key()] = it.value();
      s.model = ps::io::make_model(canonical, p, s.data ? &*s.data : nullptr);
    }
  } else if (!o.ensemble_csv.empty()) {
    if (!o.data_text.empty()) {
      auto nums = ps::io::parse_number_list(o.data_text, "data");
      if (nums.size() != 2 || nums[0] != double(int(nums[0])) ||
          nums[1] != double(int(nums[1])))
        throw ps::spec_error("ensemble data must be n,y");
      s.data = ps::BernoulliOutcome{int(nums[0]), int(nums[1])};
    }
    std::vector<ps::Model> members;
    for (const auto& name : split_csv(o.ensemble_csv))
      members.push_back(ps::io::make_model(ps::io::canonical_model_name(name),
                                           params, s.data ? &*s.data : nullptr));
    auto probes = s.data ? ps::default_probes(members, *s.data)
                         : ps::default_probes(members);
    s.ensemble = ps::verify_ensemble(members, probes);
  } else {
    std::string canonical = ps::io::canonical_model_name(o.model_name);
    if (!o.data_text.empty()) s.data = ps::io::parse_data(canonical, o.data_text);
    s.model = ps::io::make_model(canonical, params, s.data ? &*s.data : nullptr);
  }
  if (need_data && !s.data)
    throw ps::spec_error("--data is required for this command");
  s.descr = s.model ? s.model->describe() : s.ensemble->describe();
  return s;
}

ps::ParameterGrid pick_grid(const Subject& s, const std::string& grid_text) {
  if (!grid_text.empty()) {
    auto g = ps::io::parse_grid_spec(grid_text);
    ps::GridKind kind = ps::GridKind::ContinuumDiscretization;
    if (s.model && s.data) kind = s.model->default_grid(*s.data).kind;
    return ps::make_grid(g.lo, g.hi, g.step, kind);
  }
  if (s.model && s.data) return s.model->default_grid(*s.data);
  return ps::make_grid(0.0, 1.0, 0.001, ps::GridKind::ContinuumDiscretization);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ps::spec_error("cannot open output file: " + out_path);
  f << text;
}

std::string config_line(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ' ';
    out += k;
    if (*k && v.size()) out += "=" + v;
    if (!*k) out = v;  // bare token (the command name)
  }
  return out;
}

ps::Contour compute_contour(const ps::Model& m, const ps::Observation& x,
                            ps::ParameterGrid grid, const std::string& method,
                            const ps::McConfig& cfg) {
  if (method == "auto") return ps::contour_auto(m, x, std::move(grid), cfg);
  if (method == "exact") return ps::contour_exact(m, x, std::move(grid));
  if (method == "closed") return ps::contour_closed_form(m, x, std::move(grid));
  return ps::contour_mc(m, x, std::move(grid), cfg);
}

ps::PriorSpec parse_prior_text(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return ps::io::parse_prior(json::parse(text).contains("prior")
                                   ? json::parse(text).at("prior")
                                   : json::parse(text));
  return ps::io::parse_prior(json(text));
}

int run_contour(const CommonOpts& o, const std::string& prior_text) {
  Subject s = resolve_subject(o, true);
  ps::ParameterGrid grid = pick_grid(s, o.grid_text);
  ps::McConfig cfg{o.reps, o.seed, 1e-12};

  ps::io::OutputMeta meta;
  meta.seed = o.seed;
  meta.config = config_line({{"", "contour"},
                             {"subject", s.descr},
                             {"data", ps::to_string(*s.data)},
                             {"grid", o.grid_text.empty() ? "default" : o.grid_text},
                             {"method", o.method},
                             {"prior", prior_text.empty() ? "none" : prior_text},
                             {"reps", std::to_string(o.reps)},
                             {"seed", std::to_string(o.seed)},
                             {"format", o.format}});

  std::string text;
  if (!prior_text.empty()) {
    ps::PriorSpec q = parse_prior_text(prior_text);
    if (!std::get_if<ps::BernoulliOutcome>(&*s.data))
      throw ps::spec_error("e-value contours need Bernoulli-design data n,y");
    ps::EContour ec = ps::e_contour(*s.data, grid, q);
    text = o.format == "csv" ? ps::io::e_contour_csv(ec, meta)
                             : ps::io::e_contour_json(ec, meta);
  } else if (s.ensemble) {
    ps::Contour c = ps::contour_ensemble(*s.ensemble, *s.data, std::move(grid), cfg);
    text = o.format == "csv" ? ps::io::contour_csv(c, meta)
                             : ps::io::contour_json(c, meta);
  } else {
    ps::Contour c = compute_contour(*s.model, *s.data, std::move(grid), o.method, cfg);
    text = o.format == "csv" ? ps::io::contour_csv(c, meta)
                             : ps::io::contour_json(c, meta);
  }
  emit(text, o.out);
  return 0;
}

int run_infer(const CommonOpts& o, const std::string& hypothesis_text, double alpha) {
  Subject s = resolve_subject(o, true);
  ps::ParameterGrid grid = pick_grid(s, o.grid_text);
  ps::McConfig cfg{o.reps, o.seed, 1e-12};

  ps::Contour c = s.ensemble
                      ? ps::contour_ensemble(*s.ensemble, *s.data, std::move(grid), cfg)
                      : compute_contour(*s.model, *s.data, std::move(grid), o.method, cfg);

  ps::HypothesisSet a = ps::HypothesisSet::parse(hypothesis_text);
  ps::PossibilityResult pa = ps::possibility(c, a);
  bool complement_nonempty = false;
  double pc = ps::detail::complement_possibility(c, a, complement_nonempty);
  ps::Verdict v = ps::verdict(c, a, alpha);
  ps::TestDecision d = ps::test_hypothesis(c, a, alpha);
  ps::ConfidenceSet cs = ps::confidence_set(c, alpha);

  std::string hull;
  for (const auto& [lo, hi] : cs.interval_hull) {
    if (!hull.empty()) hull += "U";
    hull += "[" + ps::io::fmt(lo) + "," + ps::io::fmt(hi) + "]";
  }
  if (hull.empty()) hull = "{}";

  ps::io::OutputMeta meta;
  meta.seed = o.seed;
  meta.config = config_line({{"", "infer"},
                             {"subject", s.descr},
                             {"data", ps::to_string(*s.data)},
                             {"hypothesis", hypothesis_text},
                             {"alpha", ps::io::fmt(alpha)},
                             {"grid", o.grid_text.empty() ? "default" : o.grid_text},
                             {"method", o.method},
                             {"seed", std::to_string(o.seed)},
                             {"format", o.format}});

  std::string text;
  if (o.format == "csv") {
    std::ostringstream os;
    ps::io::write_meta_comments(os, meta);
    if (!pa.grid_intersected)
      os << "# warning=hypothesis does not intersect the parameter grid\n";
    os << "key,value\n";
    os << "hypothesis," << a.to_string() << "\n";
    os << "alpha," << ps::io::fmt(alpha) << "\n";
    os << "possibility," << ps::io::fmt(pa.value) << "\n";
    os << "complement_possibility," << ps::io::fmt(pc) << "\n";
    os << "verdict," << ps::to_string(v) << "\n";
    os << "test_decision," << ps::to_string(d) << "\n";
    os << "confidence_set," << hull << "\n";
    os << "confidence_set_size," << cs.retained.size() << "\n";
    os << "grid_intersected," << (pa.grid_intersected ? "true" : "false") << "\n";
    text = os.str();
  } else {
    json j;
    ps::io::attach_meta(j, meta);
    j["hypothesis"] = a.to_string();
    j["alpha"] = alpha;
    j["possibility"] = pa.value;
    j["complement_possibility"] = pc;
    j["verdict"] = std::string(ps::to_string(v));
    j["test_decision"] = std::string(ps::to_string(d));
    j["confidence_set_hull"] = hull;
    j["confidence_set"] = cs.retained;
    j["grid_intersected"] = pa.grid_intersected;
    text = j.dump(2) + "\n";
  }
  emit(text, o.out);
  return 0;
}

std::vector<double> parse_level_list(const std::string& text, const char* what) {
  if (text.find(':') != std::string::npos) {
    auto g = ps::io::parse_grid_spec(text);
    return ps::make_grid(g.lo, g.hi, g.step, ps::GridKind::ContinuumDiscretization)
        .points;
  }
  return ps::io::parse_number_list(text, what);
}

std::vector<double> default_theta_grid(const Subject& s) {
  std::string name = s.model ? std::string(s.model->name()) : "ensemble";
  if (name == "discrete-uniform")
    return ps::make_grid(5, 30, 1, ps::GridKind::IntegerLattice).points;
  if (name == "ticket") return {1.0};
  if (name == "normal-unit-variance") return {0.0};
  return ps::make_grid(0.05, 0.95, 0.05, ps::GridKind::ContinuumDiscretization)
      .points;
}

int run_validate(const CommonOpts& o, const std::string& theta_text,
                 const std::string& alpha_text, const std::string& distort,
                 bool coverage) {
  Subject s = resolve_subject(o, false);
  std::vector<double> thetas = theta_text.empty() ? default_theta_grid(s)
                                                  : parse_level_list(theta_text, "--theta-grid");
  std::vector<double> alphas = alpha_text.empty()
                                   ? std::vector<double>{0.01, 0.05, 0.1, 0.25, 0.5}
                                   : parse_level_list(alpha_text, "--alpha-grid");

  ps::ValidityOptions vo;
  vo.replications = o.reps;
  vo.seed = o.seed;
  if (!distort.empty()) {
    if (distort != "eta-squared")
      throw ps::spec_error("--distort: only 'eta-squared' is recognized");
    vo.eta_power = 2.0;
  }
  if (o.method == "exact") vo.mode = ps::SimMode::ExactEnumeration;
  if (o.method == "mc") vo.mode = ps::SimMode::MonteCarlo;

  std::vector<ps::SimulationReport> reports;
  if (s.ensemble)
    reports = ps::ensemble_validity_sim(*s.ensemble, thetas, alphas, vo);
  else
    reports = {ps::validity_sim(*s.model, thetas, alphas, vo)};

  ps::io::OutputMeta meta;
  meta.seed = o.seed;
  meta.config = config_line({{"", "validate"},
                             {"subject", s.descr},
                             {"theta_grid", theta_text.empty() ? "default" : theta_text},
                             {"alpha_grid", alpha_text.empty() ? "default" : alpha_text},
                             {"method", o.method},
                             {"distort", distort.empty() ? "none" : distort},
                             {"coverage", coverage ? "true" : "false"},
                             {"reps", std::to_string(o.reps)},
                             {"seed", std::to_string(o.seed)},
                             {"format", o.format}});

  std::string text = o.format == "csv" ? ps::io::reports_csv(reports, meta, coverage)
                                       : ps::io::reports_json(reports, meta, coverage);
  emit(text, o.out);

  std::size_t total_violations = 0;
  for (const auto& r : reports) total_violations += r.violations.size();
  if (total_violations > 0) {
    std::cerr << "validity violations: " << total_violations << "\n";
    for (const auto& r : reports)
      for (const auto& v : r.violations)
        std::cerr << "  " << r.model_id << " theta=" << ps::io::fmt(v.theta)
                  << " alpha=" << ps::io::fmt(v.alpha)
                  << " rate=" << ps::io::fmt(v.rate) << " se=" << ps::io::fmt(v.se)
                  << "\n";
    return 4;
  }
  return 0;
}

int run_demo(const std::string& name, const std::string& out_dir,
             const CommonOpts& o, double theta_true, double epsilon,
             double window, double resolution) {
  auto path = [&](const char* f) {
    return out_dir.empty() ? std::string(f) : out_dir + "/" + f;
  };
  ps::McConfig cfg{o.reps, o.seed, 1e-12};
  ps::io::OutputMeta meta;
  meta.seed = o.seed;
  meta.config = config_line({{"", "demo"},
                             {"name", name},
                             {"grid", o.grid_text.empty() ? "default" : o.grid_text},
                             {"reps", std::to_string(o.reps)},
                             {"seed", std::to_string(o.seed)}});

  if (name == "fig1a") {
    ps::ParameterGrid grid =
        o.grid_text.empty()
            ? ps::make_grid(5, 15, 1, ps::GridKind::IntegerLattice)
            : [&] {
                auto g = ps::io::parse_grid_spec(o.grid_text);
                return ps::make_grid(g.lo, g.hi, g.step, ps::GridKind::IntegerLattice);
              }();
    ps::Model u1 = ps::Model::discrete_uniform(1);
    ps::Model u3 = ps::Model::discrete_uniform(3);
    ps::Observation x1 = std::vector<int>{5};
    ps::Observation x3 = std::vector<int>{2, 5, 3};
    ps::Contour c1 = ps::contour_auto(u1, x1, grid, cfg);
    ps::Contour c3 = ps::contour_auto(u3, x3, grid, cfg);
    std::vector<ps::io::LabeledSeries> series{
        {"n=1", c1.grid.points, c1.values}, {"n=3", c3.grid.points, c3.values}};
    emit(ps::io::series_csv(series, meta), path("fig1a.csv"));
    std::cout << "wrote " << path("fig1a.csv") << "\n";
    return 0;
  }
  if (name == "fig1b") {
    ps::Model t = ps::Model::ticket();
    ps::Observation x = 1.0;
    ps::Contour c = ps::contour_auto(t, x, t.default_grid(x), cfg);
    emit(ps::io::contour_csv(c, meta), path("fig1b.csv"));
    std::cout << "wrote " << path("fig1b.csv") << "\n";
    return 0;
  }
  if (name == "fig2a" || name == "fig2b") {
    ps::BernoulliOutcome pair = name == "fig2a" ? ps::BernoulliOutcome{10, 3}
                                                : ps::BernoulliOutcome{16, 11};
    ps::Observation x = pair;
    ps::ParameterGrid grid =
        o.grid_text.empty()
            ? ps::make_grid(0, 1, 0.001, ps::GridKind::ContinuumDiscretization)
            : [&] {
                auto g = ps::io::parse_grid_spec(o.grid_text);
                return ps::make_grid(g.lo, g.hi, g.step,
                                     ps::GridKind::ContinuumDiscretization);
              }();
    ps::Model b = ps::Model::binomial(pair.trials);
    ps::Model nb = ps::Model::negative_binomial(pair.successes);
    std::vector<ps::Model> members{b, nb};
    ps::ModelEnsemble ens =
        ps::verify_ensemble(members, ps::default_probes(members, x));
    ps::Contour comb = ps::contour_ensemble(ens, x, grid, cfg);
    ps::Contour cb = ps::contour_exact(b, x, comb.grid);
    ps::Contour cnb = ps::contour_exact(nb, x, comb.grid);
    std::vector<double> rl(comb.grid.points.size());
    for (std::size_t i = 0; i < rl.size(); ++i)
      rl[i] = b.relative_likelihood(x, comb.grid.points[i]);
    ps::EContour ec = ps::e_contour(x, comb.grid, ps::PriorSpec::uniform01());
    std::vector<ps::io::LabeledSeries> series{
        {"binomial", cb.grid.points, cb.values},
        {"negative-binomial", cnb.grid.points, cnb.values},
        {"combined", comb.grid.points, comb.values},
        {"relative-likelihood", comb.grid.points, rl},
        {"e-value", ec.grid.points, ec.values}};
    const char* fname = name == "fig2a" ? "fig2a.csv" : "fig2b.csv";
    emit(ps::io::series_csv(series, meta), path(fname));
    std::cout << "wrote " << path(fname) << "\n";
    return 0;
  }
  if (name == "false-confidence") {
    ps::FalseConfidenceReport r = ps::false_confidence_demo(
        theta_true, epsilon, o.reps, o.seed, {0.01, 0.05, 0.1, 0.25, 0.5},
        window, resolution);
    emit(ps::io::false_confidence_json(r, meta), path("false-confidence.json"));
    std::cout << "wrote " << path("false-confidence.json") << "\n";
    return 0;
  }
  throw ps::spec_error("unknown demo '" + name +
                       "' (expected fig1a, fig1b, fig2a, fig2b, false-confidence)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"possibility contours, tests, and validity simulations from likelihoods"};
  app.require_subcommand(1);

  CommonOpts contour_opts;
  std::string contour_prior;
  CLI::App* contour_cmd =
      app.add_subcommand("contour", "evaluate a possibility contour on a grid");
  add_common(contour_cmd, contour_opts);
  contour_cmd->add_option("--prior", contour_prior,
                          "emit the truncated e-value contour for this prior "
                          "(name or JSON, e.g. uniform)");

  CommonOpts infer_opts;
  std::string hypothesis;
  double alpha = 0.05;
  CLI::App* infer_cmd = app.add_subcommand(
      "infer", "possibility, verdict, test decision, and confidence set");
  add_common(infer_cmd, infer_opts);
  infer_cmd->add_option("--hypothesis", hypothesis,
                        "hypothesis set, e.g. [7.7,8] or {1,2,3} or [0,0.2]U[0.8,1]")
      ->required();
  infer_cmd->add_option("--alpha", alpha, "significance level")->capture_default_str();

  CommonOpts validate_opts;
  std::string theta_text, alpha_text, distort;
  bool coverage = false;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "simulate exceedance rates P{pi_X(theta) <= alpha}");
  add_common(validate_cmd, validate_opts, false);
  validate_cmd->add_option("--method", validate_opts.method, "simulation mode")
      ->check(CLI::IsMember({"auto", "exact", "mc"}));
  validate_cmd->add_option("--theta-grid", theta_text,
                           "theta values: comma list or lo:hi:step");
  validate_cmd->add_option("--alpha-grid", alpha_text,
                           "alpha levels: comma list or lo:hi:step");
  validate_cmd->add_option("--distort", distort,
                           "harness self-test: mis-calibrate the contour "
                           "(eta-squared), expecting exit 4");
  validate_cmd->add_flag("--coverage", coverage,
                         "report coverage 1-rate instead of exceedance");

  CommonOpts demo_opts;
  std::string demo_name, out_dir;
  double theta_true = 7.0, epsilon = 0.1, window = 15.0, resolution = 0.01;
  CLI::App* demo_cmd =
      app.add_subcommand("demo", "emit plot-ready data for the worked examples");
  demo_cmd->add_option("name", demo_name,
                       "fig1a | fig1b | fig2a | fig2b | false-confidence")
      ->required();
  demo_cmd->add_option("--out-dir", out_dir, "directory for output files");
  demo_cmd->add_option("--grid", demo_opts.grid_text, "parameter grid lo:hi:step");
  demo_cmd->add_option("--seed", demo_opts.seed, "random seed")->capture_default_str();
  demo_cmd->add_option("--reps", demo_opts.reps, "Monte Carlo replications")
      ->capture_default_str();
  demo_cmd->add_option("--theta", theta_true, "true parameter (false-confidence)")
      ->capture_default_str();
  demo_cmd->add_option("--epsilon", epsilon,
                       "half-width of the excluded neighborhood (false-confidence)")
      ->capture_default_str();
  demo_cmd->add_option("--window", window,
                       "normalization half-window (false-confidence)")
      ->capture_default_str();
  demo_cmd->add_option("--resolution", resolution,
                       "normalization grid resolution (false-confidence)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*contour_cmd) return run_contour(contour_opts, contour_prior);
    if (*infer_cmd) return run_infer(infer_opts, hypothesis, alpha);
    if (*validate_cmd)
      return run_validate(validate_opts, theta_text, alpha_text, distort, coverage);
    if (*demo_cmd)
      return run_demo(demo_name, out_dir, demo_opts, theta_true, epsilon, window,
                      resolution);
    return 2;
  } catch (const ps::spec_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ps::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
