#include "eblab/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eblab {

namespace {

constexpr int kMaxNewtonIterations = 100;

void require_on_manifold(const ManifoldChart& M, const Vector& x, const char* where) {
  require_same_dim(x, M.dim(), where);
  const double gap = M.infeasibility(x);
  if (gap > kFeasibilityTol) {
    throw LabError(ErrorCode::kOffManifold,
                   std::string(where) + ": point violates chart by " + std::to_string(gap));
  }
}

DenseMatrix checked_jacobian(const LevelSetChart& chart, const Vector& x) {
  DenseMatrix J = chart.jacobian(x);
  if (J.rows() != chart.codim || J.cols() != x.size()) {
    throw LabError(ErrorCode::kDimensionMismatch, "level-set Jacobian has wrong shape");
  }
  return J;
}

}  // namespace

ManifoldChart ManifoldChart::coordinate(Eigen::Index n, std::vector<Eigen::Index> zero_set,
                                        double radius) {
  std::sort(zero_set.begin(), zero_set.end());
  zero_set.erase(std::unique(zero_set.begin(), zero_set.end()), zero_set.end());
  for (Eigen::Index i : zero_set) {
    if (i < 0 || i >= n) throw LabError(ErrorCode::kInvalidArgument, "zero-set index out of range");
  }
  return ManifoldChart(n, CoordChart{std::move(zero_set)}, radius);
}

ManifoldChart ManifoldChart::level_set(Eigen::Index n, LevelSetChart chart, double radius) {
  if (chart.codim < 1 || chart.codim > n) {
    throw LabError(ErrorCode::kInvalidArgument, "level-set codimension out of range");
  }
  return ManifoldChart(n, std::move(chart), radius);
}

Eigen::Index ManifoldChart::codim() const {
  if (is_coordinate()) return static_cast<Eigen::Index>(as_coordinate().zero_set.size());
  return as_level_set().codim;
}

double ManifoldChart::infeasibility(const Vector& x) const {
  require_same_dim(x, n_, "ManifoldChart::infeasibility");
  if (is_coordinate()) {
    double worst = 0.0;
    for (Eigen::Index i : as_coordinate().zero_set) worst = std::max(worst, std::abs(x[i]));
    return worst;
  }
  return as_level_set().value(x).norm();
}

TangentFrame tangent_projector(const ManifoldChart& M, const Vector& x) {
  require_on_manifold(M, x, "tangent_projector");
  const Eigen::Index n = M.dim();
  TangentFrame frame;
  if (M.is_coordinate()) {
    frame.projector = DenseMatrix::Identity(n, n);
    for (Eigen::Index i : M.as_coordinate().zero_set) frame.projector(i, i) = 0.0;
  } else {
    frame.projector = orthogonal_projector(checked_jacobian(M.as_level_set(), x));
  }
  frame.normal_projector = DenseMatrix::Identity(n, n) - frame.projector;
  return frame;
}

TangentBases tangent_bases(const ManifoldChart& M, const Vector& x) {
  require_on_manifold(M, x, "tangent_bases");
  const Eigen::Index n = M.dim();
  if (M.is_coordinate()) {
    const auto& zero = M.as_coordinate().zero_set;
    TangentBases b{DenseMatrix::Zero(n, n - static_cast<Eigen::Index>(zero.size())),
                   DenseMatrix::Zero(n, static_cast<Eigen::Index>(zero.size()))};
    Eigen::Index t = 0, m = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::binary_search(zero.begin(), zero.end(), i)) {
        b.normal(i, m++) = 1.0;
      } else {
        b.tangent(i, t++) = 1.0;
      }
    }
    return b;
  }
  const DenseMatrix J = checked_jacobian(M.as_level_set(), x);
  DenseMatrix normal = range_basis(J.transpose());
  if (normal.cols() < J.rows()) {
    throw LabError(ErrorCode::kRankDeficient, "tangent_bases: level-set Jacobian lost rank");
  }
  DenseMatrix tangent = complement_basis(normal, n);
  return {std::move(tangent), std::move(normal)};
}

Vector project_to_manifold(const ManifoldChart& M, const Vector& x) {
  require_same_dim(x, M.dim(), "project_to_manifold");
  if (M.is_coordinate()) {
    Vector y = x;
    for (Eigen::Index i : M.as_coordinate().zero_set) y[i] = 0.0;
    return y;
  }
  const auto& chart = M.as_level_set();
  // Gauss-Newton: linearize F at y and take the nearest point to x on the
  // linearized constraint set. Fixed points are feasible and satisfy
  // x - y in range(J^T).
  Vector y = x;
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Vector F = chart.value(y);
    const DenseMatrix J = checked_jacobian(chart, y);
    const Vector stationarity = orthogonal_projector(J) * (x - y);
    if (F.norm() <= 1e-12 && stationarity.norm() <= 1e-10) return y;
    const Vector rhs = F + J * (x - y);
    const Vector multiplier = least_squares_solve(J * J.transpose(), rhs);
    Vector next = x - J.transpose() * multiplier;
    require_finite(next, "project_to_manifold");
    y = std::move(next);
  }
  throw LabError(ErrorCode::kNonConvergence, "project_to_manifold: Gauss-Newton did not converge");
}

Vector riemannian_grad(const ManifoldChart& M, const CompositeProblem& p, const Vector& x) {
  require_on_manifold(M, x, "riemannian_grad");
  require_same_dim(x, p.dim, "riemannian_grad");
  const DenseMatrix P = tangent_projector(M, x).projector;
  const Vector grad_g = p.smooth.gradient(x);
  if (const auto* m = std::get_if<MaxTerm>(&p.nonsmooth)) {
    const auto active = active_pieces(p, x, kActivityTol);
    Vector first = P * (grad_g + m->pieces[active.front()].gradient(x));
    for (std::size_t k = 1; k < active.size(); ++k) {
      const Vector other = P * (grad_g + m->pieces[active[k]].gradient(x));
      if ((other - first).norm() > 1e-8) {
        throw LabError(ErrorCode::kRepresentativeMismatch,
                       "riemannian_grad: active pieces disagree along the manifold");
      }
    }
    return first;
  }
  Vector smooth_rep = grad_g;
  if (p.is_l1()) {
    Vector sign = Vector::Zero(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) sign[i] = std::copysign(1.0, x[i]);
    if (M.is_coordinate())
      for (Eigen::Index i : M.as_coordinate().zero_set) sign[i] = 0.0;
    smooth_rep += p.l1_weight() * sign;
  }
  return P * smooth_rep;
}

Vector v_correction(const ManifoldChart& M, const Vector& x, const Vector& u) {
  require_on_manifold(M, x, "v_correction");
  require_same_dim(u, M.dim(), "v_correction");
  const TangentBases bases = tangent_bases(M, x);
  if ((bases.normal.transpose() * u).norm() > 1e-10) {
    throw LabError(ErrorCode::kInvalidArgument, "v_correction: u is not tangent");
  }
  if (M.is_coordinate()) return Vector::Zero(M.dim());
  const auto& chart = M.as_level_set();
  const DenseMatrix& N = bases.normal;
  Vector coeffs = Vector::Zero(N.cols());
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Vector point = x + u + N * coeffs;
    const Vector F = chart.value(point);
    if (F.norm() <= 1e-12) return N * coeffs;
    const DenseMatrix JN = checked_jacobian(chart, point) * N;
    coeffs -= least_squares_solve(JN, F);
    require_finite(coeffs, "v_correction");
  }
  throw LabError(ErrorCode::kNonConvergence, "v_correction: Newton did not converge");
}

}  // namespace eblab
