// End-to-end acceptance checks over the shipped configurations. Prints one
// PASS/FAIL line per criterion and exits nonzero if any criterion fails.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eblab/format.hpp"
#include "eblab/runner.hpp"
#include "eblab/solvers.hpp"

using namespace eblab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = EBLAB_CONFIG_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(std::optional<double> v) { return v ? format_real(*v) : "vacuous"; }

bool in_range(std::optional<double> v, double lo, double hi) { return v && *v >= lo && *v <= hi; }

// Mirrors what `run` does, keeping the report in memory.
struct Run {
  ExperimentConfig cfg;
  const Fixture* fixture = nullptr;
  RegularityReport report;
};

const Run& run_for(const std::string& name) {
  static std::map<std::string, Run> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  Run r;
  r.cfg = load_config(kConfigs / (name + ".cfg"));
  r.fixture = &find_fixture(r.cfg.fixture);
  const Vector xbar = reference_minimizer(r.fixture->problem, r.fixture->start);
  r.cfg.plan.center = xbar;
  r.report = check_equivalences(*r.fixture, xbar, r.cfg.plan, r.cfg.settings, r.cfg.toggles);
  return cache.emplace(name, std::move(r)).first->second;
}

bool claim_is(const RegularityReport& rep, const std::string& id, Verdict v) {
  return rep.claim(id).verdict == v;
}

Outcome criterion_1() {
  Outcome o;
  const Run& r = run_for("lasso2d");
  const auto& rep = r.report;
  std::size_t at_first = 0;
  for (const auto& row : rep.ledger.rows) at_first += row.sample.radius_index == 0;
  o.require(rep.ledger.radii.front() == 0.1, "first radius is not 0.1");
  o.require(at_first >= 500, "fewer than 500 samples at radius 0.1");
  o.require(r.cfg.settings.step == 1.0, "step is not 1");
  const auto mu_a = rep.mu_ambient.per_radius[0], mu_m = rep.mu_manifold.per_radius[0];
  const auto mu_p = rep.mu_proximal ? rep.mu_proximal->per_radius[0] : std::nullopt;
  o.require(in_range(mu_a, 0.95, 1.05), "mu_ambient " + num(mu_a));
  o.require(in_range(mu_m, 0.95, 1.05), "mu_manifold " + num(mu_m));
  o.require(in_range(mu_p, 0.95, 1.05), "mu_proximal " + num(mu_p));
  if (o.pass) o.detail = "mu = (" + num(mu_a) + ", " + num(mu_m) + ", " + num(mu_p) + ")";
  return o;
}

Outcome eb_equivalence(const std::string& name) {
  Outcome o;
  const auto& rep = run_for(name).report;
  const bool a = rep.mu_ambient.value && *rep.mu_ambient.value > 0;
  const bool m = rep.mu_manifold.value && *rep.mu_manifold.value > 0;
  o.require(a == m, name + ": positivity differs");
  o.require(a && m, name + ": constants not positive");
  for (const char* id : {"eb-ambient", "eb-manifold", "eb-equivalence"})
    o.require(claim_is(rep, id, Verdict::kPass), name + ": " + id + " not PASS");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  for (const char* name : {"lasso2d", "maxquad-hyperbola", "noncvx2d"}) {
    const Outcome f = eb_equivalence(name);
    o.require(f.pass, f.detail);
    const auto& rep = run_for(name).report;
    if (f.pass) o.detail += std::string(o.detail.empty() ? "" : ", ") + name + " " +
                            num(rep.mu_ambient.value) + "/" + num(rep.mu_manifold.value);
  }
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const auto& good = run_for("lasso2d").report;
  for (std::size_t r = 0; r < good.ledger.radii.size(); ++r) {
    const std::string at = " at r=" + format_real(good.ledger.radii[r]);
    o.require(in_range(good.eta.per_radius[r], 0.5, 0.56), "eta " + num(good.eta.per_radius[r]) + at);
    o.require(in_range(good.delta.per_radius[r], 0.45, 0.55),
              "delta " + num(good.delta.per_radius[r]) + at);
  }
  const auto& bad = run_for("lasso2d-degenerate").report;
  std::size_t k = bad.ledger.radii.size();
  for (std::size_t r = 0; r < bad.ledger.radii.size(); ++r)
    if (bad.ledger.radii[r] == 0.01) k = r;
  o.require(k < bad.ledger.radii.size(), "degenerate plan has no radius 0.01");
  if (k < bad.ledger.radii.size()) {
    o.require(bad.eta.per_radius[k] && *bad.eta.per_radius[k] <= 0.02,
              "degenerate eta(0.01) " + num(bad.eta.per_radius[k]));
    o.require(bad.delta.per_radius[k] && *bad.delta.per_radius[k] <= 0.01,
              "degenerate delta(0.01) " + num(bad.delta.per_radius[k]));
    if (o.pass) o.detail = "degenerate eta(0.01)=" + num(bad.eta.per_radius[k]) +
                           " delta(0.01)=" + num(bad.delta.per_radius[k]);
  }
  o.require(!bad.strict_complementarity, "degenerate reports strict complementarity");
  o.require(bad.claim("strict-complementarity").value == "false", "strict-complementarity value");
  for (const char* id : {"eb-equivalence", "sharpness", "linear-growth"})
    o.require(claim_is(bad, id, Verdict::kSkipped), std::string(id) + " not SKIPPED");
  return o;
}

Outcome u_gradient_identities(const std::string& name) {
  Outcome o;
  const Run& r = run_for(name);
  const double tol = r.fixture->chart.is_coordinate() ? 1e-8 : 1e-6;
  std::size_t on = 0;
  double worst_norm = 0, worst_gap = 0;
  for (const auto& row : r.report.ledger.rows) {
    if (!row.sample.on_manifold) continue;
    ++on;
    worst_norm = std::max(worst_norm, std::abs(*row.u_grad_norm - row.dist_subdiff));
    worst_gap = std::max(worst_gap, *row.u_grad_riem_gap);
  }
  o.require(on >= 200, name + ": only " + std::to_string(on) + " on-manifold samples");
  o.require(worst_norm <= tol, name + ": | |g_U| - dist | = " + format_real(worst_norm));
  o.require(worst_gap <= tol, name + ": |g_U - grad_M f| = " + format_real(worst_gap));
  if (o.pass) o.detail = name + " " + format_real(worst_norm) + "/" + format_real(worst_gap);
  return o;
}

Outcome criterion_4() {
  Outcome o;
  std::string details;
  for (const char* name : {"lasso2d", "maxquad-hyperbola", "noncvx2d"}) {
    const Outcome f = u_gradient_identities(name);
    o.require(f.pass, f.detail);
    if (f.pass) details += (details.empty() ? "" : ", ") + f.detail;
  }
  if (o.pass) o.detail = details;
  return o;
}

Outcome proximal_chain(const std::string& name) {
  Outcome o;
  const Run& r = run_for(name);
  const auto& rep = r.report;
  const double t = r.cfg.settings.step, L = r.fixture->problem.smooth.lipschitz;
  std::size_t violations = 0;
  for (const auto& row : rep.ledger.rows)
    violations += !(*row.prox_residual <= t * row.dist_subdiff + 1e-10);
  o.require(violations == 0, name + ": " + std::to_string(violations) + " inequality violations");
  o.require(rep.mu_proximal && rep.mu_proximal->value && rep.mu_ambient.value, name + ": missing constants");
  if (o.pass) {
    const double mu_a = *rep.mu_ambient.value, mu_p = *rep.mu_proximal->value;
    const double bound = 1.0 / (1.0 + (1.0 + t * L) / mu_a) - 0.05;
    o.require(mu_p >= bound, name + ": mu_proximal " + format_real(mu_p) + " < " + format_real(bound));
    if (o.pass) o.detail = name + " mu_p=" + format_real(mu_p) + " >= " + format_real(bound);
  }
  return o;
}

Outcome criterion_5() {
  Outcome o;
  std::string details;
  for (const char* name : {"lasso2d", "noncvx2d"}) {
    const Outcome f = proximal_chain(name);
    o.require(f.pass, f.detail);
    if (f.pass) details += (details.empty() ? "" : ", ") + f.detail;
  }
  if (o.pass) o.detail = details;
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const Fixture& fx = find_fixture("maxquad-hyperbola");
  const Vector x = reference_minimizer(fx.problem, fx.start);
  const Vector u = tangent_bases(fx.chart, x).tangent.col(0);
  std::vector<double> ls, lv;
  for (double s : {1e-1, 5e-2, 2.5e-2, 1.25e-2}) {
    ls.push_back(std::log(s));
    lv.push_back(std::log(v_correction(fx.chart, x, s * u).norm()));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) mx += ls[i], my += lv[i];
  mx /= static_cast<double>(ls.size());
  my /= static_cast<double>(ls.size());
  double num_ = 0, den = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    num_ += (ls[i] - mx) * (lv[i] - my);
    den += (ls[i] - mx) * (ls[i] - mx);
  }
  const double slope = num_ / den;
  o.require(slope >= 1.9 && slope <= 2.1, "slope " + format_real(slope));
  o.detail = "log-log slope " + format_real(slope);
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const Fixture& good = find_fixture("lasso2d");
  const SolveTrace tg = prox_gradient_solve(good.problem, Vector{{5.0, 5.0}}, 0.5, 1e-10, 1000);
  const Identification ig = identification_index(tg, good.chart);
  o.require(ig.index.has_value() && *ig.index <= 100, "lasso2d not identified within 100");
  o.require(ig.stable_support == std::vector<Eigen::Index>{0}, "lasso2d stable support is not {1}");
  const Fixture& bad = find_fixture("lasso2d-degenerate");
  const SolveTrace tb = prox_gradient_solve(bad.problem, Vector{{5.0, 5.0}}, 0.5, 1e-300, 1000);
  const Identification ib = identification_index(tb, bad.chart);
  o.require(!ib.index.has_value(), "degenerate fixture identified at " +
                                       std::to_string(ib.index.value_or(0)));
  if (o.pass)
    o.detail = "lasso2d index " + std::to_string(*ig.index) + ", degenerate NOT-IDENTIFIED after " +
               std::to_string(tb.size() - 1) + " iterations";
  return o;
}

Outcome criterion_8() {
  Outcome o;
  std::string details;
  for (const char* name : {"lasso2d", "maxquad-hyperbola", "noncvx2d"}) {
    const auto& rep = run_for(name).report;
    std::size_t mixed = 0;
    double worst_mixed = 0, worst_on = 0;
    for (const auto& row : rep.ledger.rows) {
      if (!row.slope_est) continue;
      if (row.sample.on_manifold) {
        const double g = *row.riem_grad_norm;
        worst_on = std::max(worst_on, std::abs(*row.slope_est - g) / std::max(1.0, g));
      } else if (row.sample.kind == SampleKind::kMixed) {
        ++mixed;
        worst_mixed = std::max(worst_mixed, std::abs(*row.slope_est - row.dist_subdiff) / row.dist_subdiff);
      }
    }
    o.require(mixed >= 50, std::string(name) + ": only " + std::to_string(mixed) + " mixed samples");
    o.require(worst_mixed <= 0.05, std::string(name) + ": mixed relative error " + format_real(worst_mixed));
    o.require(worst_on <= 0.05, std::string(name) + ": restricted slope error " + format_real(worst_on));
    details += (details.empty() ? "" : ", ") + std::string(name) + " " + std::to_string(mixed) +
               " mixed, err " + format_real(worst_mixed);
  }
  if (o.pass) o.detail = details;
  return o;
}

Outcome criterion_9() {
  Outcome o;
  for (const Outcome& f : {eb_equivalence("noncvx2d"), u_gradient_identities("noncvx2d"),
                           proximal_chain("noncvx2d")})
    o.require(f.pass, f.detail);
  const auto mu_m = run_for("noncvx2d").report.mu_manifold.value;
  o.require(in_range(mu_m, 0.95, 1.05), "mu_manifold " + num(mu_m));
  o.require(!run_for("noncvx2d").report.any_failed(), "a noncvx2d claim FAILED");
  if (o.pass) o.detail = "mu_manifold " + num(mu_m);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion_10() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "eblab_acceptance_determinism";
  fs::remove_all(base);
  std::ostringstream out, err;
  const int a = run_experiment(kConfigs / "lasso2d.cfg", {std::nullopt, base / "a"}, out, err);
  const int b = run_experiment(kConfigs / "lasso2d.cfg", {std::nullopt, base / "b"}, out, err);
  o.require(a == 0 && b == 0, "run exit codes " + std::to_string(a) + "/" + std::to_string(b));
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const fs::path name = entry.path().filename();
    o.require(slurp(base / "a" / name) == slurp(base / "b" / name), name.string() + " differs");
  }
  o.require(compared >= 3, "expected ledger, summary and trace CSVs");
  if (o.pass) o.detail = std::to_string(compared) + " CSV files identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"lasso2d constants", criterion_1},
      {"error-bound equivalence", criterion_2},
      {"sharpness and growth", criterion_3},
      {"U-gradient identities", criterion_4},
      {"proximal chain", criterion_5},
      {"implicit-function order", criterion_6},
      {"finite identification", criterion_7},
      {"slope consistency", criterion_8},
      {"nonconvex path", criterion_9},
      {"determinism", criterion_10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
