#include "eblab/problems.hpp"

#include <algorithm>
#include <cmath>

namespace eblab {

double CompositeProblem::l1_weight() const {
  if (const auto* l1 = std::get_if<L1Term>(&nonsmooth)) return l1->weight;
  return 0.0;
}

SubdiffSet::SubdiffSet(BoxSet box) : rep_(std::move(box)) {
  const auto& b = std::get<BoxSet>(rep_);
  if (b.lower.size() != b.upper.size()) {
    throw LabError(ErrorCode::kDimensionMismatch, "box bounds differ in size");
  }
  if ((b.upper.array() < b.lower.array()).any()) {
    throw LabError(ErrorCode::kInvalidArgument, "box interval with low > high");
  }
}

SubdiffSet::SubdiffSet(HullSet hull) : rep_(std::move(hull)) {
  const auto& h = std::get<HullSet>(rep_);
  if (h.vertices.empty()) throw LabError(ErrorCode::kInvalidArgument, "hull without vertices");
  for (const auto& v : h.vertices) require_same_dim(v, h.vertices.front().size(), "hull vertex");
}

Eigen::Index SubdiffSet::dim() const {
  if (is_box()) return as_box().lower.size();
  return as_hull().vertices.front().size();
}

std::vector<Vector> SubdiffSet::extreme_points() const {
  if (!is_box()) return as_hull().vertices;
  const auto& b = as_box();
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < b.lower.size(); ++i)
    if (b.is_free(i)) free.push_back(i);
  if (free.size() > 20) {
    throw LabError(ErrorCode::kInvalidArgument, "too many free box coordinates to enumerate");
  }
  std::vector<Vector> corners;
  const std::size_t count = std::size_t{1} << free.size();
  corners.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector c = b.lower;
    for (std::size_t k = 0; k < free.size(); ++k)
      if (mask & (std::size_t{1} << k)) c[free[k]] = b.upper[free[k]];
    corners.push_back(std::move(c));
  }
  return corners;
}

SubdiffSet SubdiffSet::translated(const Vector& offset) const {
  require_same_dim(offset, dim(), "SubdiffSet::translated");
  if (is_box()) {
    const auto& b = as_box();
    // Keep singletons exact: lower == upper must survive the shift.
    Vector lo = b.lower - offset;
    Vector hi = b.upper - offset;
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (!b.is_free(i)) hi[i] = lo[i];
    return SubdiffSet::box(std::move(lo), std::move(hi));
  }
  std::vector<Vector> shifted;
  for (const auto& v : as_hull().vertices) shifted.push_back(v - offset);
  return SubdiffSet::hull(std::move(shifted));
}

Vector SubdiffSet::relative_center() const {
  if (is_box()) return 0.5 * (as_box().lower + as_box().upper);
  const auto& vs = as_hull().vertices;
  Vector c = Vector::Zero(vs.front().size());
  for (const auto& v : vs) c += v;
  return c / static_cast<double>(vs.size());
}

std::vector<double> piece_values(const CompositeProblem& p, const Vector& x) {
  std::vector<double> out;
  if (const auto* m = std::get_if<MaxTerm>(&p.nonsmooth)) {
    out.reserve(m->pieces.size());
    for (const auto& piece : m->pieces) out.push_back(piece.value(x));
  }
  return out;
}

std::vector<std::size_t> active_pieces(const CompositeProblem& p, const Vector& x,
                                       double activity_tol) {
  const auto vals = piece_values(p, x);
  std::vector<std::size_t> active;
  if (vals.empty()) return active;
  const double top = *std::max_element(vals.begin(), vals.end());
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (top - vals[i] <= activity_tol) active.push_back(i);
  return active;
}

double eval_f(const CompositeProblem& p, const Vector& x) {
  require_same_dim(x, p.dim, "eval_f");
  double value = p.smooth.value(x);
  std::visit(
      [&](const auto& term) {
        using T = std::decay_t<decltype(term)>;
        if constexpr (std::is_same_v<T, L1Term>) {
          value += term.weight * x.template lpNorm<1>();
        } else if constexpr (std::is_same_v<T, MaxTerm>) {
          const auto vals = piece_values(p, x);
          value += *std::max_element(vals.begin(), vals.end());
        }
      },
      p.nonsmooth);
  return value;
}

Vector prox_h(const CompositeProblem& p, const Vector& v, double t) {
  require_same_dim(v, p.dim, "prox_h");
  if (!(t > 0.0)) throw LabError(ErrorCode::kInvalidArgument, "prox step must be positive");
  if (p.is_max()) throw LabError(ErrorCode::kProxUnavailable, "max-type nonsmooth part has no prox");
  if (!p.is_l1()) return v;
  const double shrink = t * p.l1_weight();
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - shrink;
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

Vector prox_step(const CompositeProblem& p, const Vector& x, double t) {
  require_same_dim(x, p.dim, "prox_step");
  if (p.is_max()) throw LabError(ErrorCode::kProxUnavailable, "max-type nonsmooth part has no prox");
  if (!(t > 0.0)) throw LabError(ErrorCode::kInvalidArgument, "prox step must be positive");
  const Vector grad = p.smooth.gradient(x);
  if (!p.is_l1()) return x - t * grad;
  // Soft-threshold of x - t grad, written as an increment of x. Forming
  // x - t grad first absorbs small x_i into O(1) terms and rounds them to an
  // exact zero that the exact map never produces.
  const double lambda = p.l1_weight();
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double above = x[i] - t * (grad[i] + lambda);
    const double below = x[i] - t * (grad[i] - lambda);
    out[i] = above > 0.0 ? above : (below < 0.0 ? below : 0.0);
  }
  return out;
}

SubdiffSet subdiff_at(const CompositeProblem& p, const Vector& x, double activity_tol) {
  require_same_dim(x, p.dim, "subdiff_at");
  const Vector grad = p.smooth.gradient(x);
  if (const auto* m = std::get_if<MaxTerm>(&p.nonsmooth)) {
    std::vector<Vector> vertices;
    for (std::size_t i : active_pieces(p, x, activity_tol))
      vertices.push_back(grad + m->pieces[i].gradient(x));
    return SubdiffSet::hull(std::move(vertices));
  }
  Vector lo = grad;
  Vector hi = grad;
  if (p.is_l1()) {
    const double lambda = p.l1_weight();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x[i]) > activity_tol) {
        lo[i] = hi[i] = grad[i] + std::copysign(lambda, x[i]);
      } else {
        lo[i] = grad[i] - lambda;
        hi[i] = grad[i] + lambda;
      }
    }
  }
  return SubdiffSet::box(std::move(lo), std::move(hi));
}

std::vector<Eigen::Index> support_of(const CompositeProblem& p, const Vector& x) {
  std::vector<Eigen::Index> s;
  if (p.is_max()) {
    for (std::size_t i : active_pieces(p, x, kActivityTol)) s.push_back(static_cast<Eigen::Index>(i));
    return s;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s.push_back(i);
  return s;
}

CompositeProblem make_shifted_quadratic_l1(const Vector& b, double lambda) {
  CompositeProblem p;
  p.dim = b.size();
  p.smooth.value = [b](const Vector& x) { return 0.5 * (x - b).squaredNorm(); };
  p.smooth.gradient = [b](const Vector& x) -> Vector { return x - b; };
  p.smooth.lipschitz = 1.0;
  p.smooth.convex = true;
  if (lambda > 0.0) p.nonsmooth = L1Term{lambda};
  return p;
}

CompositeProblem make_pure_l1(Eigen::Index n, double lambda) {
  CompositeProblem p;
  p.dim = n;
  p.smooth.value = [](const Vector&) { return 0.0; };
  p.smooth.gradient = [n](const Vector&) -> Vector { return Vector::Zero(n); };
  // Any positive constant bounds the zero gradient's variation.
  p.smooth.lipschitz = 1.0;
  p.smooth.convex = true;
  p.nonsmooth = L1Term{lambda};
  return p;
}

CompositeProblem make_cosine_l1(double a, double kappa, double lambda) {
  CompositeProblem p;
  p.dim = 2;
  p.smooth.value = [a, kappa](const Vector& x) {
    return 0.5 * (x[0] - a) * (x[0] - a) + kappa * (1.0 - std::cos(x[1]));
  };
  p.smooth.gradient = [a, kappa](const Vector& x) -> Vector {
    return Vector{{x[0] - a, kappa * std::sin(x[1])}};
  };
  // Hessian is diag(1, kappa cos x2).
  p.smooth.lipschitz = std::max(1.0, std::abs(kappa));
  p.smooth.convex = false;
  if (lambda > 0.0) p.nonsmooth = L1Term{lambda};
  return p;
}

CompositeProblem make_max_problem(Eigen::Index n, std::vector<QuadraticPiece> pieces,
                                  std::optional<Vector> center) {
  if (pieces.empty()) throw LabError(ErrorCode::kInvalidArgument, "max problem without pieces");
  for (const auto& piece : pieces) {
    if (piece.Q.rows() != n || piece.Q.cols() != n || piece.b.size() != n) {
      throw LabError(ErrorCode::kDimensionMismatch, "max piece has wrong shape");
    }
    if (!piece.Q.isApprox(piece.Q.transpose(), 1e-14)) {
      throw LabError(ErrorCode::kInvalidArgument, "max piece Q is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(piece.Q, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-12) {
      throw LabError(ErrorCode::kInvalidArgument, "max piece Q is not positive semidefinite");
    }
  }
  CompositeProblem p;
  p.dim = n;
  if (center) {
    Vector c = *center;
    require_same_dim(c, n, "make_max_problem center");
    p.smooth.value = [c](const Vector& x) { return 0.5 * (x - c).squaredNorm(); };
    p.smooth.gradient = [c](const Vector& x) -> Vector { return x - c; };
  } else {
    p.smooth.value = [](const Vector&) { return 0.0; };
    p.smooth.gradient = [n](const Vector&) -> Vector { return Vector::Zero(n); };
  }
  p.smooth.lipschitz = 1.0;
  p.smooth.convex = true;
  p.nonsmooth = MaxTerm{std::move(pieces)};
  return p;
}

}  // namespace eblab
