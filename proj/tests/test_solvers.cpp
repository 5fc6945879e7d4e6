#include <gtest/gtest.h>

#include <sstream>

#include "eblab/fixtures.hpp"
#include "eblab/solvers.hpp"
#include "eblab/subdiff_geometry.hpp"

using namespace eblab;

namespace {

Vector v2(double a, double b) { return Vector{{a, b}}; }

}  // namespace

TEST(ProxGradient, LassoConvergesToMinimizer) {
  const Fixture& fx = find_fixture("lasso2d");
  const SolveTrace tr = prox_gradient_solve(fx.problem, v2(5, 5), 0.5, 1e-10, 1000);
  EXPECT_LE((tr.iterates.back() - v2(1, 0)).norm(), 1e-8);
  EXPECT_EQ(tr.iterates.size(), tr.residuals.size());
  EXPECT_EQ(tr.iterates.size(), tr.supports.size());
  EXPECT_EQ(tr.iterates.size(), tr.values.size());
}

TEST(ProxGradient, StartingAtMinimizerStopsImmediately) {
  const Fixture& fx = find_fixture("lasso2d");
  const SolveTrace tr = prox_gradient_solve(fx.problem, v2(1, 0), 0.5, 1e-10, 1000);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_LE(tr.residuals[0], 1e-12);
}

TEST(ProxGradient, SoftThresholdKillsSmallInput) {
  const SolveTrace tr = prox_gradient_solve(make_pure_l1(1, 1.0), Vector{{0.3}}, 1.0, 1e-12, 10);
  ASSERT_GE(tr.size(), 2u);
  EXPECT_EQ(tr.iterates[1][0], 0.0);
}

TEST(ProxGradient, MaxFamilyRejected) {
  const Fixture& fx = find_fixture("maxquad-hyperbola");
  EXPECT_THROW(prox_gradient_solve(fx.problem, fx.start, 0.5, 1e-10, 10), LabError);
}

TEST(ProxGradient, MonotoneDescentAndResidualDomination) {
  for (const char* name : {"lasso2d", "lasso2d-degenerate", "noncvx2d"}) {
    const Fixture& fx = find_fixture(name);
    const double L = fx.problem.smooth.lipschitz;
    for (double t : {0.25 / L, 0.5 / L, 1.0 / L}) {
      for (const Vector& x0 : {v2(5, 5), v2(-3, 2), v2(0.5, -4)}) {
        const SolveTrace tr = prox_gradient_solve(fx.problem, x0, t, 1e-12, 300);
        for (std::size_t k = 0; k < tr.size(); ++k) {
          if (k + 1 < tr.size()) EXPECT_LE(tr.values[k + 1], tr.values[k] + 1e-12) << name;
          // Exact subdifferential at the iterate: no activity tolerance.
          const double d = dist_zero(subdiff_at(fx.problem, tr.iterates[k], 0.0)).distance;
          EXPECT_LE(tr.residuals[k] * t, t * d + 1e-10) << name << " k=" << k;
        }
      }
    }
  }
}

TEST(Identification, LassoIdentifiesFinitely) {
  const Fixture& fx = find_fixture("lasso2d");
  const SolveTrace tr = prox_gradient_solve(fx.problem, v2(5, 5), 0.5, 1e-10, 1000);
  const Identification id = identification_index(tr, fx.chart);
  ASSERT_TRUE(id.index.has_value());
  EXPECT_LE(*id.index, 100u);
  ASSERT_EQ(id.stable_support.size(), 1u);
  EXPECT_EQ(id.stable_support[0], 0);
  for (std::size_t k = *id.index; k < tr.size(); ++k) EXPECT_EQ(tr.supports[k], id.stable_support);
}

TEST(Identification, StartAtMinimizerGivesIndexZero) {
  const Fixture& fx = find_fixture("lasso2d");
  const SolveTrace tr = prox_gradient_solve(fx.problem, v2(1, 0), 0.5, 1e-10, 1000);
  const Identification id = identification_index(tr, fx.chart);
  ASSERT_TRUE(id.index.has_value());
  EXPECT_EQ(*id.index, 0u);
}

TEST(Identification, DegenerateFixtureNeverIdentifies) {
  const Fixture& fx = find_fixture("lasso2d-degenerate");
  const SolveTrace tr = prox_gradient_solve(fx.problem, v2(5, 5), 0.5, 1e-300, 1000);
  EXPECT_FALSE(identification_index(tr, fx.chart).index.has_value());
  for (const Vector& x : tr.iterates) EXPECT_GT(x[1], 0.0);
}

TEST(Polish, LassoFromNearby) {
  const Fixture& fx = find_fixture("lasso2d");
  const Vector x = reduced_newton_polish(fx.problem, fx.chart, v2(1.1, 0), 1e-13);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_EQ(x[1], 0.0);
}

TEST(Polish, OptimalPointUnchanged) {
  const Fixture& fx = find_fixture("lasso2d");
  const Vector x = reduced_newton_polish(fx.problem, fx.chart, v2(1, 0), 1e-13);
  EXPECT_NEAR(x[0], 1.0, 1e-14);
}

TEST(Polish, NonconvexFixture) {
  const Fixture& fx = find_fixture("noncvx2d");
  const Vector x = reduced_newton_polish(fx.problem, fx.chart, v2(1.05, 0), 1e-12);
  EXPECT_NEAR(x[0], 1.0, 1e-10);
  EXPECT_EQ(x[1], 0.0);
}

TEST(Polish, OffManifoldInputRejected) {
  const Fixture& fx = find_fixture("lasso2d");
  EXPECT_THROW(reduced_newton_polish(fx.problem, fx.chart, v2(1.1, 0.2), 1e-12), LabError);
}

TEST(TraceCsv, HeaderAndOneBasedSupports) {
  const Fixture& fx = find_fixture("lasso2d");
  const SolveTrace tr = prox_gradient_solve(fx.problem, v2(5, 5), 0.5, 1e-10, 1000);
  std::ostringstream os;
  write_trace_csv(os, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,x_1,x_2,f,residual,support");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 6), "0,5,5,");
  EXPECT_EQ(line.substr(line.size() - 4), ",1;2");
  std::size_t rows = 1;
  std::string last;
  while (std::getline(in, line)) ++rows, last = line;
  EXPECT_EQ(rows, tr.size());
  EXPECT_EQ(last.substr(last.size() - 2), ",1");
}
