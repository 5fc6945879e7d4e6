#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eblab/fixtures.hpp"
#include "eblab/regularity.hpp"
#include "eblab/subdiff_geometry.hpp"

using namespace eblab;

namespace {

Vector v2(double a, double b) { return Vector{{a, b}}; }

SamplePlan plan_at(const Vector& center, std::vector<double> radii, int count, std::uint64_t seed) {
  SamplePlan plan;
  plan.center = center;
  plan.radii = std::move(radii);
  plan.per_radius_count = count;
  plan.seed = seed;
  return plan;
}

LabSettings settings(unsigned threads = 1) {
  LabSettings s;
  s.threads = threads;
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST(SamplePlanTest, ValidationRejectsBadPlans) {
  auto p = plan_at(v2(1, 0), {0.1, 0.2}, 10, 1);
  EXPECT_THROW(p.validate(), LabError);
  p = plan_at(v2(1, 0), {0.1}, 0, 1);
  EXPECT_THROW(p.validate(), LabError);
  p = plan_at(v2(1, 0), {0.1}, 10, 1);
  p.strata = {0.5, 0.5, 0.5};
  EXPECT_THROW(p.validate(), LabError);
}

TEST(SamplePoints, OnManifoldSamplesAreExactlyOnCoordinateChart) {
  const Fixture& fx = find_fixture("lasso2d");
  const auto samples = sample_points(fx.chart, plan_at(v2(1, 0), {0.1}, 200, 3));
  int on = 0, off = 0, mixed = 0;
  for (const Sample& s : samples) {
    EXPECT_LE((s.x - v2(1, 0)).norm(), 0.1 + 1e-15);
    if (s.kind == SampleKind::kOnManifold) {
      ++on;
      EXPECT_EQ(s.x[1], 0.0);
      EXPECT_TRUE(s.on_manifold);
    } else if (s.kind == SampleKind::kOffManifold) {
      ++off;
      EXPECT_FALSE(s.on_manifold);
      EXPECT_GE(std::abs(s.x[1]), 0.01 - 1e-15);
    } else {
      ++mixed;
    }
  }
  EXPECT_EQ(on, 80);
  EXPECT_EQ(off, 80);
  EXPECT_EQ(mixed, 40);
}

TEST(SamplePoints, CurvedChartSamplesStayOnManifold) {
  const Fixture& fx = find_fixture("maxquad-hyperbola");
  for (const Sample& s : sample_points(fx.chart, plan_at(v2(0, 1), {0.1, 0.05}, 100, 4))) {
    if (s.kind == SampleKind::kOnManifold) EXPECT_LE(fx.chart.infeasibility(s.x), 1e-12);
  }
}

TEST(SamplePoints, SameSeedSameSequence) {
  const Fixture& fx = find_fixture("noncvx2d");
  const auto plan = plan_at(v2(1, 0), {0.1, 0.01}, 50, 99);
  const auto a = sample_points(fx.chart, plan);
  const auto b = sample_points(fx.chart, plan);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].on_manifold, b[i].on_manifold);
  }
  const auto c = sample_points(fx.chart, plan_at(v2(1, 0), {0.1, 0.01}, 50, 100));
  EXPECT_NE(a[0].x, c[0].x);
}

TEST(Estimators, LassoConstants) {
  const Fixture& fx = find_fixture("lasso2d");
  const Ledger L = evaluate_samples(fx, v2(1, 0), plan_at(v2(1, 0), {0.1}, 500, 5), settings());
  ASSERT_TRUE(estimate_eb_ambient(L).value);
  EXPECT_NEAR(*estimate_eb_ambient(L).value, 1.0, 0.05);
  EXPECT_NEAR(*estimate_eb_manifold(L).value, 1.0, 1e-10);
  EXPECT_NEAR(*estimate_eb_proximal(L).value, 1.0, 0.05);
  EXPECT_GE(*sharpness_margin(L).value, 0.5);
  EXPECT_LE(*sharpness_margin(L).value, 0.56);
  EXPECT_GE(*linear_growth_delta(L).value, 0.45);
  EXPECT_LE(*linear_growth_delta(L).value, 0.55);
}

TEST(Estimators, SmoothQuadraticHasUnitEb) {
  Fixture fx = find_fixture("lasso2d");
  fx.problem = make_shifted_quadratic_l1(v2(2, 0.5), 0.0);
  fx.chart = ManifoldChart::coordinate(2, {});
  const Ledger L = evaluate_samples(fx, v2(2, 0.5), plan_at(v2(2, 0.5), {0.1}, 200, 6), settings());
  EXPECT_NEAR(*estimate_eb_ambient(L).value, 1.0, 1e-12);
  // M is the whole space: nothing is off the manifold.
  EXPECT_TRUE(sharpness_margin(L).vacuous());
  EXPECT_TRUE(linear_growth_delta(L).vacuous());
}

TEST(Estimators, PointManifoldIsVacuous) {
  Fixture fx = find_fixture("lasso2d");
  fx.chart = ManifoldChart::coordinate(2, {0, 1});
  fx.strict_complementarity = false;
  // Center the plan at the origin, the only point of M, so on-manifold samples
  // sit at zero distance from the center.
  const Ledger L = evaluate_samples(fx, Vector::Zero(2), plan_at(Vector::Zero(2), {0.1}, 100, 7),
                                    settings());
  EXPECT_TRUE(estimate_eb_manifold(L).vacuous());
}

TEST(Estimators, DegenerateFixtureDecays) {
  const Fixture& fx = find_fixture("lasso2d-degenerate");
  const Ledger L =
      evaluate_samples(fx, v2(1, 0), plan_at(v2(1, 0), {0.1, 0.05, 0.01}, 500, 8), settings());
  EXPECT_NEAR(*estimate_eb_ambient(L).value, 1.0, 0.05);
  const Estimate eta = sharpness_margin(L), delta = linear_growth_delta(L);
  EXPECT_LE(*eta.per_radius[2], 0.02);
  EXPECT_LE(*delta.per_radius[2], 0.01);
  EXPECT_GE(*eta.per_radius[0], *eta.per_radius[2]);
}

TEST(Estimators, ProximalInequalityPointwise) {
  for (const char* name : {"lasso2d", "noncvx2d", "lasso2d-degenerate"}) {
    const Fixture& fx = find_fixture(name);
    const Vector xbar = reference_minimizer(fx.problem, fx.start);
    for (double t : {0.5, 1.0}) {
      LabSettings s = settings();
      s.step = t;
      const Ledger L = evaluate_samples(fx, xbar, plan_at(xbar, {0.1, 0.01}, 200, 9), s);
      for (const LedgerRow& row : L.rows) EXPECT_LE(*row.prox_residual, t * row.dist_subdiff + 1e-10);
    }
  }
}

TEST(SlopeSample, Examples) {
  const auto p = make_shifted_quadratic_l1(v2(2, 0.5), 1.0);
  EXPECT_NEAR(slope_sample(p, v2(2, 0), 1e-4, 256), 1.0, 0.05);
  EXPECT_LE(slope_sample(p, v2(1, 0), 1e-4, 256), 1e-3);
  const auto smooth = make_shifted_quadratic_l1(v2(2, 0.5), 0.0);
  const Vector x = v2(0.3, -0.2);
  const double g = (x - v2(2, 0.5)).norm();
  EXPECT_NEAR(slope_sample(smooth, x, 1e-4, 256), g, 0.05 * g);
  EXPECT_THROW(slope_sample(p, x, 1e-2, 10), LabError);
}

TEST(SlopeSample, RestrictedMatchesRiemannianGradient) {
  for (const Fixture& fx : fixture_registry()) {
    const Vector xbar = reference_minimizer(fx.problem, fx.start);
    for (const Sample& s : sample_points(fx.chart, plan_at(xbar, {0.1}, 60, 10))) {
      if (!s.on_manifold) continue;
      const double g = riemannian_grad(fx.chart, fx.problem, s.x).norm();
      const double slope = restricted_slope_sample(fx.problem, fx.chart, s.x, 1e-4, 256);
      EXPECT_LE(std::abs(slope - g), 0.05 * std::max(1.0, g)) << fx.name;
    }
  }
}

TEST(Ledger, OnManifoldIdentitiesHold) {
  for (const Fixture& fx : fixture_registry()) {
    if (!fx.strict_complementarity) continue;
    const Vector xbar = reference_minimizer(fx.problem, fx.start);
    const Ledger L = evaluate_samples(fx, xbar, plan_at(xbar, {0.1, 0.01}, 300, 11), settings());
    for (const LedgerRow& row : L.rows) {
      if (!row.sample.on_manifold) continue;
      EXPECT_LE(std::abs(*row.riem_grad_norm - row.dist_subdiff), fx.identity_tol) << fx.name;
      EXPECT_LE(std::abs(*row.u_grad_norm - row.dist_subdiff), fx.identity_tol) << fx.name;
      EXPECT_LE(*row.u_grad_riem_gap, fx.identity_tol) << fx.name;
    }
  }
}

TEST(Ledger, EstimatesRecomputeBitForBitFromCsv) {
  const Fixture& fx = find_fixture("lasso2d");
  const Ledger L =
      evaluate_samples(fx, v2(1, 0), plan_at(v2(1, 0), {0.1, 0.05, 0.01}, 300, 12), settings(4));
  std::ostringstream os;
  write_ledger_csv(os, L);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  const auto header = split(line);
  ASSERT_EQ(header.size(), 11u);
  std::optional<double> mu_a, mu_m, mu_p, eta;
  auto take_min = [](std::optional<double>& slot, double v) {
    if (!slot || v < *slot) slot = v;
  };
  while (std::getline(in, line)) {
    const auto c = split(line);
    ASSERT_EQ(c.size(), 11u);
    const bool on = c[2] == "1";
    const double dist_s = std::stod(c[6]), dist_sub = std::stod(c[7]);
    if (dist_s > 1e-9) {
      take_min(mu_a, dist_sub / dist_s);
      take_min(mu_p, std::stod(c[9]) / dist_s);
      if (on) take_min(mu_m, std::stod(c[8]) / dist_s);
    }
    if (!on) take_min(eta, dist_sub);
  }
  EXPECT_EQ(mu_a, estimate_eb_ambient(L).value);
  EXPECT_EQ(mu_m, estimate_eb_manifold(L).value);
  EXPECT_EQ(mu_p, estimate_eb_proximal(L).value);
  EXPECT_EQ(eta, sharpness_margin(L).value);
}

TEST(Ledger, IndependentOfThreadCount) {
  const Fixture& fx = find_fixture("maxquad-hyperbola");
  const auto plan = plan_at(v2(0, 1), {0.1, 0.05}, 100, 13);
  std::string first;
  for (unsigned threads : {1u, 2u, 7u}) {
    std::ostringstream os;
    write_ledger_csv(os, evaluate_samples(fx, v2(0, 1), plan, settings(threads)));
    if (first.empty()) first = os.str();
    EXPECT_EQ(os.str(), first) << threads << " threads";
  }
}

TEST(CheckEquivalences, LassoAllPass) {
  const Fixture& fx = find_fixture("lasso2d");
  LabSettings s = settings(2);
  s.solver_start = v2(5, 5);
  const RegularityReport r =
      check_equivalences(fx, v2(1, 0), plan_at(v2(1, 0), {0.1, 0.05, 0.01}, 200, 14), s);
  EXPECT_FALSE(r.any_failed());
  for (const ClaimResult& c : r.claims) EXPECT_EQ(c.verdict, Verdict::kPass) << c.id << ": " << c.note;
}

TEST(CheckEquivalences, DegenerateSkipsGatedClaims) {
  const Fixture& fx = find_fixture("lasso2d-degenerate");
  const RegularityReport r =
      check_equivalences(fx, v2(1, 0), plan_at(v2(1, 0), {0.1, 0.01}, 200, 15), settings(2));
  EXPECT_FALSE(r.any_failed());
  EXPECT_FALSE(r.strict_complementarity);
  EXPECT_EQ(r.claim("eb-equivalence").verdict, Verdict::kSkipped);
  EXPECT_EQ(r.claim("sharpness").verdict, Verdict::kSkipped);
}

TEST(CheckEquivalences, ToggledClaimIsSkipped) {
  const Fixture& fx = find_fixture("lasso2d");
  const RegularityReport r = check_equivalences(
      fx, v2(1, 0), plan_at(v2(1, 0), {0.1}, 100, 16), settings(), {{"slope-consistency", false}});
  EXPECT_EQ(r.claim("slope-consistency").verdict, Verdict::kSkipped);
}

TEST(CheckEquivalences, MaxFixtureHasNoProximalClaims) {
  const Fixture& fx = find_fixture("maxquad-hyperbola");
  const RegularityReport r =
      check_equivalences(fx, v2(0, 1), plan_at(v2(0, 1), {0.1, 0.05}, 200, 17), settings(2));
  EXPECT_FALSE(r.any_failed());
  EXPECT_FALSE(r.mu_proximal.has_value());
  EXPECT_EQ(r.claim("eb-proximal").verdict, Verdict::kSkipped);
  EXPECT_EQ(r.claim("eb-equivalence").verdict, Verdict::kPass);
}
