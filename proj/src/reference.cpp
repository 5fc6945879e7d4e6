#include <cmath>
#include <limits>

#include "eblab/manifolds.hpp"
#include "eblab/problems.hpp"
#include "eblab/solvers.hpp"
#include "eblab/subdiff_geometry.hpp"

namespace eblab {

namespace {

constexpr double kStationarityTarget = 1e-12;
constexpr double kPolishTol = 1e-13;

double stationarity(const CompositeProblem& p, const Vector& x) {
  return dist_zero(subdiff_at(p, x)).distance;
}

ManifoldChart max_piece_chart(const CompositeProblem& p, const std::vector<std::size_t>& active) {
  const auto& pieces = std::get<MaxTerm>(p.nonsmooth).pieces;
  if (active.size() <= 1) return ManifoldChart::coordinate(p.dim, {});
  LevelSetChart chart;
  chart.codim = static_cast<Eigen::Index>(active.size()) - 1;
  chart.value = [pieces, active](const Vector& x) {
    Vector F(static_cast<Eigen::Index>(active.size()) - 1);
    const double base = pieces[active.front()].value(x);
    for (std::size_t j = 1; j < active.size(); ++j)
      F[static_cast<Eigen::Index>(j) - 1] = pieces[active[j]].value(x) - base;
    return F;
  };
  chart.jacobian = [pieces, active](const Vector& x) {
    DenseMatrix J(static_cast<Eigen::Index>(active.size()) - 1, x.size());
    const Vector base = pieces[active.front()].gradient(x);
    for (std::size_t j = 1; j < active.size(); ++j)
      J.row(static_cast<Eigen::Index>(j) - 1) = (pieces[active[j]].gradient(x) - base).transpose();
    return J;
  };
  return ManifoldChart::level_set(p.dim, std::move(chart));
}

Vector descend_max(const CompositeProblem& p, const Vector& x0) {
  Vector x = x0;
  Vector best = x0;
  double best_f = eval_f(p, x0);
  const double scale = std::max(1.0, x0.norm());
  for (int k = 0; k < 20000; ++k) {
    // Minimum-norm subgradient over a slightly enlarged active set.
    const Projection s = dist_zero(subdiff_at(p, x, 1e-6));
    if (s.distance <= kStationarityTarget) return x;
    x -= (0.5 * scale / std::sqrt(k + 1.0)) * s.point / s.distance;
    const double fx = eval_f(p, x);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  }
  return best;
}

}  // namespace

Vector reference_minimizer(const CompositeProblem& p, const Vector& x0) {
  require_same_dim(x0, p.dim, "reference_minimizer");
  if (p.has_prox()) {
    const double t = 1.0 / p.smooth.lipschitz;
    const SolveTrace trace = prox_gradient_solve(p, x0, t, 1e-13, 100000);
    Vector x = trace.iterates.back();
    std::vector<Eigen::Index> zero_set;
    if (p.is_l1()) {
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) <= 1e-8) zero_set.push_back(i);
    }
    const ManifoldChart M = ManifoldChart::coordinate(p.dim, zero_set);
    try {
      x = reduced_newton_polish(p, M, project_to_manifold(M, x), kPolishTol);
    } catch (const LabError& e) {
      throw LabError(ErrorCode::kNoReference, std::string("polish failed: ") + e.what());
    }
    if (stationarity(p, x) > kStationarityTarget) {
      throw LabError(ErrorCode::kNoReference, "reference point is not stationary to 1e-12");
    }
    return x;
  }

  const Vector rough = descend_max(p, x0);
  for (double tol : {1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1}) {
    const auto active = active_pieces(p, rough, tol);
    try {
      const ManifoldChart M = max_piece_chart(p, active);
      const Vector x = reduced_newton_polish(p, M, project_to_manifold(M, rough), kPolishTol);
      if (stationarity(p, x) <= kStationarityTarget) return x;
    } catch (const LabError&) {
      // Wrong active-set guess; try a looser one.
    }
  }
  throw LabError(ErrorCode::kNoReference, "no stationary point found for the max problem");
}

}  // namespace eblab
