#include "eblab/subdiff_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace eblab {

namespace {

DenseMatrix stack_columns(const std::vector<Vector>& vs) {
  DenseMatrix M(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = vs[j];
  return M;
}

DenseMatrix differences(const std::vector<Vector>& vs) {
  DenseMatrix D(vs.front().size(), static_cast<Eigen::Index>(vs.size()) - 1);
  for (std::size_t j = 1; j < vs.size(); ++j)
    D.col(static_cast<Eigen::Index>(j) - 1) = vs[j] - vs.front();
  return D;
}

bool affinely_independent(const std::vector<Vector>& vs) {
  if (vs.size() <= 1) return true;
  return range_basis(differences(vs)).cols() == static_cast<Eigen::Index>(vs.size()) - 1;
}

// Barycentric coordinates of the projection of 0 onto aff(vs); vs must be
// affinely independent.
Vector barycentric_of_origin(const std::vector<Vector>& vs) {
  Vector w(static_cast<Eigen::Index>(vs.size()));
  if (vs.size() == 1) {
    w[0] = 1.0;
    return w;
  }
  const Vector mu = least_squares_solve(differences(vs), -vs.front());
  w[0] = 1.0 - mu.sum();
  w.tail(mu.size()) = mu;
  return w;
}

Vector project_onto_simplex(const Vector& y) {
  std::vector<double> s(y.data(), y.data() + y.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cumulative += s[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (s[k] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).max(0.0).matrix();
}

Projection project_small_hull(const std::vector<Vector>& vs) {
  Projection best{std::numeric_limits<double>::infinity(), Vector()};
  const std::size_t k = vs.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<Vector> face;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) face.push_back(vs[i]);
    if (!affinely_independent(face)) continue;
    const Vector w = barycentric_of_origin(face);
    if (w.minCoeff() < -1e-14) continue;
    const Vector point = stack_columns(face) * w;
    const double d = point.norm();
    if (d < best.distance) best = {d, point};
  }
  return best;
}

// Wolfe's min-norm-point method. Returns nullopt if the iteration cap is hit
// or round-off breaks affine independence of the corral.
std::optional<Vector> min_norm_point(const std::vector<Vector>& vs) {
  const std::size_t k = vs.size();
  double scale = 0.0;
  std::size_t first = 0;
  for (std::size_t i = 0; i < k; ++i) {
    scale = std::max(scale, vs[i].squaredNorm());
    if (vs[i].squaredNorm() < vs[first].squaredNorm()) first = i;
  }
  scale = std::max(scale, 1e-300);
  std::vector<std::size_t> corral{first};
  std::vector<double> lambda{1.0};
  Vector x = vs[first];
  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < k; ++i)
      if (x.dot(vs[i]) < x.dot(vs[j])) j = i;
    if (x.squaredNorm() - x.dot(vs[j]) <= 1e-15 * scale) return x;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) return x;
    corral.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      std::vector<Vector> face;
      for (std::size_t i : corral) face.push_back(vs[i]);
      if (!affinely_independent(face)) return std::nullopt;
      const Vector alpha = barycentric_of_origin(face);
      if (alpha.minCoeff() > 0.0) {
        for (std::size_t i = 0; i < corral.size(); ++i) lambda[i] = alpha[static_cast<Eigen::Index>(i)];
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        const double a = alpha[static_cast<Eigen::Index>(i)];
        if (a <= 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - a));
      }
      std::vector<std::size_t> kept;
      std::vector<double> kept_lambda;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        const double l = theta * alpha[static_cast<Eigen::Index>(i)] + (1.0 - theta) * lambda[i];
        if (l > 1e-15) {
          kept.push_back(corral[i]);
          kept_lambda.push_back(l);
        }
      }
      corral = std::move(kept);
      lambda = std::move(kept_lambda);
      if (corral.empty()) return std::nullopt;
    }
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    x.setZero();
    for (std::size_t i = 0; i < corral.size(); ++i) x += (lambda[i] / total) * vs[corral[i]];
  }
  return std::nullopt;
}

// Alternating projections between {w : V w = 0, sum w = 1} and {w >= margin}.
bool strictly_positive_representation(const std::vector<Vector>& vs) {
  const Eigen::Index k = static_cast<Eigen::Index>(vs.size());
  const Eigen::Index n = vs.front().size();
  DenseMatrix C(n + 1, k);
  C.topRows(n) = stack_columns(vs);
  C.row(n).setOnes();
  Vector d = Vector::Zero(n + 1);
  d[n] = 1.0;
  const double margin = 10.0 * kRiMargin;
  auto to_affine = [&](const Vector& w) -> Vector {
    return w - least_squares_solve(C, C * w - d);
  };
  Vector w = Vector::Constant(k, 1.0 / static_cast<double>(k));
  for (int it = 0; it < 20000; ++it) {
    w = to_affine(w);
    if ((C * w - d).norm() > 1e-9) return false;  // 0 not in the affine hull
    if (w.minCoeff() > kRiMargin) return true;
    w = w.cwiseMax(margin);
  }
  return false;
}

}  // namespace

Projection project_zero_onto_polytope(const std::vector<Vector>& vertices) {
  const DenseMatrix V = stack_columns(vertices);
  const Eigen::Index k = V.cols();
  const DenseMatrix G = V.transpose() * V;
  const double lipschitz = std::max(G.diagonal().sum(), 1e-300);
  Vector w = Vector::Constant(k, 1.0 / static_cast<double>(k));
  Vector y = w;
  double momentum = 1.0;
  for (int it = 0; it < 200000; ++it) {
    const Vector grad_w = G * w;
    const double gap = grad_w.dot(w) - grad_w.minCoeff();
    if (gap <= 1e-12) break;
    const Vector next = project_onto_simplex(y - G * y / lipschitz);
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - w);
    // Restart when the objective goes up.
    if (next.dot(G * next) > w.dot(G * w)) {
      y = next;
      momentum = 1.0;
    } else {
      momentum = next_momentum;
    }
    w = next;
  }
  Vector point = V * w;
  // The gap test only pins the point to about sqrt(2e-12); an active-set
  // pass recovers the exact face.
  const std::optional<Vector> exact = min_norm_point(vertices);
  if (exact && exact->norm() <= point.norm() + 1e-9) point = *exact;
  return {point.norm(), point};
}

Projection dist_zero(const SubdiffSet& S) {
  if (S.is_box()) {
    const auto& b = S.as_box();
    Vector point = Vector::Zero(b.lower.size()).cwiseMax(b.lower).cwiseMin(b.upper);
    return {point.norm(), point};
  }
  const auto& vs = S.as_hull().vertices;
  if (vs.size() <= 3) return project_small_hull(vs);
  return project_zero_onto_polytope(vs);
}

Vector aff_project_zero(const SubdiffSet& S) {
  if (S.is_box()) {
    const auto& b = S.as_box();
    Vector point = b.lower;
    for (Eigen::Index i = 0; i < point.size(); ++i)
      if (b.is_free(i)) point[i] = 0.0;
    return point;
  }
  const auto& vs = S.as_hull().vertices;
  if (vs.size() == 1) return vs.front();
  const DenseMatrix basis = range_basis(differences(vs));
  return vs.front() - basis * (basis.transpose() * vs.front());
}

VUSplit vu_split(const SubdiffSet& S) {
  const Eigen::Index n = S.dim();
  if (S.is_box()) {
    const auto& b = S.as_box();
    std::vector<Eigen::Index> free, fixed;
    for (Eigen::Index i = 0; i < n; ++i) (b.is_free(i) ? free : fixed).push_back(i);
    VUSplit split{DenseMatrix::Zero(n, static_cast<Eigen::Index>(fixed.size())),
                  DenseMatrix::Zero(n, static_cast<Eigen::Index>(free.size()))};
    for (std::size_t j = 0; j < fixed.size(); ++j) split.u_basis(fixed[j], static_cast<Eigen::Index>(j)) = 1.0;
    for (std::size_t j = 0; j < free.size(); ++j) split.v_basis(free[j], static_cast<Eigen::Index>(j)) = 1.0;
    return split;
  }
  const auto& vs = S.as_hull().vertices;
  DenseMatrix v_basis = vs.size() > 1 ? range_basis(differences(vs)) : DenseMatrix(n, 0);
  DenseMatrix u_basis = complement_basis(v_basis, n);
  return {std::move(u_basis), std::move(v_basis)};
}

bool ri_contains_zero(const SubdiffSet& S) {
  if (S.is_box()) {
    const auto& b = S.as_box();
    for (Eigen::Index i = 0; i < b.lower.size(); ++i) {
      if (b.is_free(i)) {
        if (!(b.lower[i] < -kRiMargin && b.upper[i] > kRiMargin)) return false;
      } else if (std::abs(b.lower[i]) > kRiMargin) {
        return false;
      }
    }
    return true;
  }
  const auto& vs = S.as_hull().vertices;
  if (aff_project_zero(S).norm() > kRiMargin) return false;
  if (vs.size() == 1) return true;
  if (affinely_independent(vs)) return barycentric_of_origin(vs).minCoeff() > kRiMargin;
  return strictly_positive_representation(vs);
}

double dist_to_set(const SubdiffSet& S, const Vector& y) {
  return dist_zero(S.translated(y)).distance;
}

UGradient u_gradient(const CompositeProblem& p, const Vector& x, double activity_tol) {
  const SubdiffSet S = subdiff_at(p, x, activity_tol);
  UGradient out;
  out.vector = aff_project_zero(S);
  out.in_relative_interior = ri_contains_zero(S.translated(out.vector));
  return out;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section search for the minimizer of phi on [lo, hi].
double golden_section(const std::function<double(double)>& phi, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 400 && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ULagrangianValue u_lagrangian_eval(const CompositeProblem& p, const Vector& x, const Vector& g,
                                   const Vector& u, double ball_eps) {
  require_same_dim(x, p.dim, "u_lagrangian_eval x");
  require_same_dim(g, p.dim, "u_lagrangian_eval g");
  require_same_dim(u, p.dim, "u_lagrangian_eval u");
  if (!(ball_eps > 0.0)) throw LabError(ErrorCode::kInvalidArgument, "ball radius must be positive");
  const SubdiffSet S = subdiff_at(p, x);
  if (dist_to_set(S, g) > 1e-10) {
    throw LabError(ErrorCode::kInvalidArgument, "u_lagrangian_eval: g is not a subgradient at x");
  }
  const VUSplit split = vu_split(S);
  const DenseMatrix& V = split.v_basis;
  if ((V * (V.transpose() * u)).norm() > 1e-10) {
    throw LabError(ErrorCode::kInvalidArgument, "u_lagrangian_eval: u has a V component");
  }
  const Eigen::Index k = V.cols();
  const Vector base = x + u;
  auto objective = [&](const Vector& xi) {
    const Vector v = V * xi;
    return eval_f(p, base + v) - g.dot(v);
  };

  Vector xi = Vector::Zero(k);
  double value = objective(xi);
  bool converged = (k == 0);
  for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double others = xi.squaredNorm() - xi[j] * xi[j];
      const double reach = std::sqrt(std::max(0.0, ball_eps * ball_eps - others));
      auto along = [&](double s) {
        Vector trial = xi;
        trial[j] = s;
        return objective(trial);
      };
      const double old = xi[j];
      double best_s = old;
      double best_val = value;
      for (double s : {golden_section(along, -reach, reach, 1e-10), 0.0}) {
        const double val = along(s);
        if (val < best_val) {
          best_val = val;
          best_s = s;
        }
      }
      xi[j] = best_s;
      value = best_val;
      max_change = std::max(max_change, std::abs(best_s - old));
    }
    converged = max_change <= 1e-10;
  }
  if (!converged) throw LabError(ErrorCode::kInnerSolve, "u_lagrangian_eval: coordinate descent stalled");
  return {value, V * xi};
}

}  // namespace eblab
