#include "eblab/runner.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eblab/format.hpp"
#include "eblab/solvers.hpp"
#include "eblab/subdiff_geometry.hpp"
#include "eblab/svg_plot.hpp"

namespace eblab {

namespace {

using nlohmann::json;

const std::set<std::string>& known_claims() {
  static const std::set<std::string> ids = {
      "reference-stationarity", "strict-complementarity", "eb-ambient", "eb-manifold",
      "eb-equivalence", "sharpness", "linear-growth", "u-gradient-distance",
      "u-gradient-riemannian", "riemannian-distance", "slope-consistency", "slope-restriction",
      "subgradient-inequality", "prox-regularity", "u-lagrangian-at0", "eb-proximal",
      "proximal-inequality", "proximal-chain-lower", "proximal-chain-upper",
      "eb-proximal-manifold", "finite-identification"};
  return ids;
}

[[noreturn]] void malformed(const std::string& what) {
  throw LabError(ErrorCode::kMalformedConfig, what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) malformed(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      malformed("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    malformed(where + "." + key + " has the wrong type");
  }
}

Vector to_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) malformed(where + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) malformed(where + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LabError(ErrorCode::kIo, "cannot write " + path.string());
  f << content;
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream s;
  w(s);
  return s.str();
}

PlotSeries series_of(const std::string& name, const Estimate& e, const std::vector<double>& radii) {
  PlotSeries s{name, {}};
  for (std::size_t r = 0; r < radii.size() && r < e.per_radius.size(); ++r)
    if (e.per_radius[r]) s.points.emplace_back(radii[r], *e.per_radius[r]);
  return s;
}

std::string report_text(const ExperimentConfig& cfg, const Vector& xbar, const RegularityReport& report) {
  std::ostringstream s;
  s << "fixture: " << report.fixture << "\n";
  s << "reference minimizer:";
  for (Eigen::Index i = 0; i < xbar.size(); ++i) s << ' ' << format_real(xbar[i]);
  s << "\nstep t: " << format_real(cfg.settings.step) << "\nseed: " << cfg.plan.seed
      << "\nsamples: " << report.ledger.rows.size() << "\n";
  auto est = [](const Estimate& e) { return e.value ? format_real(*e.value) : std::string("vacuous"); };
  s << "mu_ambient: " << est(report.mu_ambient) << "\nmu_manifold: " << est(report.mu_manifold)
    << "\nmu_proximal: " << (report.mu_proximal ? est(*report.mu_proximal) : std::string("n/a"))
    << "\neta: " << est(report.eta) << "\ndelta: " << est(report.delta) << "\n\n";
  for (const auto& c : report.claims) {
    s << verdict_name(c.verdict) << "  " << c.id << "  " << c.value;
    if (!c.note.empty()) s << "  (" << c.note << ")";
    s << "\n";
  }
  s << "\nNote: every constant is a minimum over samples in balls of the configured radii. "
       "A positive value at a finite radius is evidence for, not a certificate of, the local "
       "property; compare the per-radius curves to tell a stable constant from one decaying to 0.\n";
  return s.str();
}

struct Prepared {
  ExperimentConfig cfg;
  const Fixture* fixture = nullptr;
};

Prepared prepare(const std::filesystem::path& config_path, const RunOverrides& overrides) {
  Prepared p{load_config(config_path), nullptr};
  p.fixture = &find_fixture(p.cfg.fixture);
  if (overrides.seed) p.cfg.plan.seed = *overrides.seed;
  if (overrides.output_dir) p.cfg.output_dir = *overrides.output_dir;
  return p;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"fixture", "step", "output_dir", "threads", "sample_plan", "slope_probe", "solver", "claims"});
  ExperimentConfig cfg;
  if (!root.contains("fixture") || !root["fixture"].is_string()) malformed("config.fixture (string) is required");
  cfg.fixture = root["fixture"].get<std::string>();
  const Fixture& fixture = find_fixture(cfg.fixture);

  cfg.settings.step = get_or(root, "step", 1.0, "config");
  if (!(cfg.settings.step > 0.0)) malformed("config.step must be positive");
  cfg.settings.threads = get_or(root, "threads", 0u, "config");
  cfg.output_dir = get_or(root, "output_dir", std::string("out/") + cfg.fixture, "config");

  if (!root.contains("sample_plan")) malformed("config.sample_plan is required");
  const json& sp = root["sample_plan"];
  check_keys(sp, "sample_plan", {"radii", "per_radius_count", "seed", "stratification"});
  if (!sp.contains("radii")) malformed("sample_plan.radii is required");
  const Vector radii = to_vector(sp["radii"], "sample_plan.radii");
  cfg.plan.radii.assign(radii.data(), radii.data() + radii.size());
  cfg.plan.per_radius_count = get_or(sp, "per_radius_count", 100, "sample_plan");
  cfg.plan.seed = get_or(sp, "seed", std::uint64_t{0}, "sample_plan");
  if (sp.contains("stratification")) {
    const json& st = sp["stratification"];
    check_keys(st, "stratification", {"on_manifold", "off_manifold", "mixed"});
    cfg.plan.strata.on_manifold = get_or(st, "on_manifold", 0.4, "stratification");
    cfg.plan.strata.off_manifold = get_or(st, "off_manifold", 0.4, "stratification");
    cfg.plan.strata.mixed = get_or(st, "mixed", 0.2, "stratification");
  }
  cfg.plan.center = Vector::Zero(fixture.problem.dim);
  try {
    cfg.plan.validate();
  } catch (const LabError& e) {
    malformed(e.what());
  }
  if (cfg.plan.radii.front() > fixture.chart.radius()) {
    malformed("sample radius " + format_real(cfg.plan.radii.front()) + " exceeds the chart radius " +
              format_real(fixture.chart.radius()) + " of fixture " + fixture.name);
  }

  if (root.contains("slope_probe")) {
    const json& probe = root["slope_probe"];
    check_keys(probe, "slope_probe", {"radius", "count"});
    cfg.settings.probe_radius = get_or(probe, "radius", cfg.settings.probe_radius, "slope_probe");
    cfg.settings.probe_count = get_or(probe, "count", cfg.settings.probe_count, "slope_probe");
    if (!(cfg.settings.probe_radius > 0.0 && cfg.settings.probe_radius <= 1e-3) || cfg.settings.probe_count < 1) {
      malformed("slope_probe needs radius in (0, 1e-3] and count >= 1");
    }
  }

  if (root.contains("solver")) {
    const json& sv = root["solver"];
    check_keys(sv, "solver", {"start", "step", "tol", "max_iter"});
    if (sv.contains("start")) {
      cfg.settings.solver_start = to_vector(sv["start"], "solver.start");
      if (cfg.settings.solver_start->size() != fixture.problem.dim) malformed("solver.start has the wrong dimension");
    }
    cfg.settings.solver_step = get_or(sv, "step", cfg.settings.solver_step, "solver");
    cfg.settings.solver_tol = get_or(sv, "tol", cfg.settings.solver_tol, "solver");
    cfg.settings.solver_max_iter = get_or(sv, "max_iter", cfg.settings.solver_max_iter, "solver");
    if (!(cfg.settings.solver_step > 0.0 && cfg.settings.solver_tol > 0.0) || cfg.settings.solver_max_iter < 1) {
      malformed("solver needs step > 0, tol > 0, max_iter >= 1");
    }
  }

  if (root.contains("claims")) {
    const json& claims = root["claims"];
    if (!claims.is_object()) malformed("config.claims must be an object of booleans");
    for (const auto& [id, on] : claims.items()) {
      if (!known_claims().count(id)) malformed("unknown claim id '" + id + "'");
      if (!on.is_boolean()) malformed("claims." + id + " must be a boolean");
      cfg.toggles[id] = on.get<bool>();
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw LabError(ErrorCode::kIo, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

int run_experiment(const std::filesystem::path& config_path, const RunOverrides& overrides,
                   std::ostream& out, std::ostream& err) {
  Prepared prep;
  try {
    prep = prepare(config_path, overrides);
  } catch (const LabError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  ExperimentConfig& cfg = prep.cfg;
  const Fixture& fixture = *prep.fixture;

  std::string stage = "reference-stationarity";
  try {
    const Vector xbar = reference_minimizer(fixture.problem, fixture.start);
    cfg.plan.center = xbar;
    stage = "sample-ledger";
    const RegularityReport report = check_equivalences(fixture, xbar, cfg.plan, cfg.settings, cfg.toggles);

    stage = "output";
    std::filesystem::create_directories(cfg.output_dir);
    const auto& dir = cfg.output_dir;
    write_file(dir / "ledger.csv", render([&](std::ostream& s) { write_ledger_csv(s, report.ledger); }));
    write_file(dir / "summary.csv", render([&](std::ostream& s) { write_summary_csv(s, report); }));
    write_file(dir / "estimates.csv", render([&](std::ostream& s) { write_estimates_csv(s, report); }));
    if (report.trace) {
      write_file(dir / "trace.csv", render([&](std::ostream& s) { write_trace_csv(s, *report.trace); }));
    }
    const auto& radii = report.ledger.radii;
    std::vector<PlotSeries> eb = {series_of("mu ambient", report.mu_ambient, radii),
                                  series_of("mu manifold", report.mu_manifold, radii)};
    if (report.mu_proximal) eb.push_back(series_of("mu proximal", *report.mu_proximal, radii));
    write_file(dir / "eb.svg", render_loglog_svg(fixture.name + ": error-bound constants", "radius", "mu", eb));
    write_file(dir / "sharpness.svg",
               render_loglog_svg(fixture.name + ": sharpness margin", "radius", "eta",
                                 {series_of("eta", report.eta, radii)}));
    write_file(dir / "growth.svg",
               render_loglog_svg(fixture.name + ": linear growth", "radius", "delta",
                                 {series_of("delta", report.delta, radii)}));
    const std::string text = report_text(cfg, xbar, report);
    write_file(dir / "report.txt", text);
    out << text;
    return report.any_failed() ? 1 : 0;
  } catch (const LabError& e) {
    err << "error in claim " << stage << ": " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_trace(const std::filesystem::path& config_path, const RunOverrides& overrides,
              std::ostream& out, std::ostream& err) {
  try {
    Prepared prep = prepare(config_path, overrides);
    const Fixture& fixture = *prep.fixture;
    const LabSettings& s = prep.cfg.settings;
    const SolveTrace trace = prox_gradient_solve(fixture.problem, s.solver_start.value_or(fixture.start),
                                                 s.solver_step, s.solver_tol, s.solver_max_iter);
    if (trace.step_exceeds_inverse_lipschitz) err << "warning: step exceeds 1/L\n";
    std::filesystem::create_directories(prep.cfg.output_dir);
    write_file(prep.cfg.output_dir / "trace.csv", render([&](std::ostream& o) { write_trace_csv(o, trace); }));
    const Identification id = identification_index(trace, fixture.chart);
    out << "iterations: " << trace.size() - 1 << "\nfinal residual: " << format_real(trace.residuals.back())
        << "\nidentification index: " << (id.index ? std::to_string(*id.index) : "not-identified") << "\n";
    return 0;
  } catch (const LabError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

void list_fixtures(std::ostream& out) {
  for (const auto& f : fixture_registry()) {
    out << f.name << "  family=" << f.family << "  " << (f.convex ? "convex" : "nonconvex") << "  "
        << (f.strict_complementarity ? "strict-complementarity" : "non-strict") << "\n";
  }
}

}  // namespace eblab
