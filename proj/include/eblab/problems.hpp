#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eblab/numkit.hpp"

namespace eblab {

/// Default activity threshold for deciding which coordinates sit at zero or
/// which max-pieces are active.
inline constexpr double kActivityTol = 1e-9;

struct SmoothPart {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0.0;  // Lipschitz constant of the gradient
  bool convex = true;
};

/// lambda * ||x||_1
struct L1Term {
  double weight = 1.0;
};

/// One piece 0.5 x^T Q x + b^T x + c of a pointwise maximum.
struct QuadraticPiece {
  DenseMatrix Q;
  Vector b;
  double c = 0.0;

  double value(const Vector& x) const { return 0.5 * x.dot(Q * x) + b.dot(x) + c; }
  Vector gradient(const Vector& x) const { return Q * x + b; }
};

struct MaxTerm {
  std::vector<QuadraticPiece> pieces;
};

struct NoTerm {};

using NonsmoothPart = std::variant<NoTerm, L1Term, MaxTerm>;

/// f = g + h with g smooth (gradient Lipschitz) and h one of the supported
/// nonsmooth terms.
struct CompositeProblem {
  Eigen::Index dim = 0;
  SmoothPart smooth;
  NonsmoothPart nonsmooth = NoTerm{};

  bool has_prox() const { return !std::holds_alternative<MaxTerm>(nonsmooth); }
  bool is_l1() const { return std::holds_alternative<L1Term>(nonsmooth); }
  bool is_max() const { return std::holds_alternative<MaxTerm>(nonsmooth); }
  double l1_weight() const;
  bool convex() const { return smooth.convex; }
};

/// Product of singletons and intervals: coordinate i ranges over
/// [lower_i, upper_i]; lower_i == upper_i marks a singleton.
struct BoxSet {
  Vector lower;
  Vector upper;

  bool is_free(Eigen::Index i) const { return upper[i] > lower[i]; }
};

/// Convex hull of finitely many points.
struct HullSet {
  std::vector<Vector> vertices;
};

/// Exact description of the (regular) subdifferential at a point.
class SubdiffSet {
 public:
  explicit SubdiffSet(BoxSet box);
  explicit SubdiffSet(HullSet hull);

  static SubdiffSet box(Vector lower, Vector upper) {
    return SubdiffSet(BoxSet{std::move(lower), std::move(upper)});
  }
  static SubdiffSet hull(std::vector<Vector> vertices) {
    return SubdiffSet(HullSet{std::move(vertices)});
  }

  Eigen::Index dim() const;
  bool is_box() const { return std::holds_alternative<BoxSet>(rep_); }
  const BoxSet& as_box() const { return std::get<BoxSet>(rep_); }
  const HullSet& as_hull() const { return std::get<HullSet>(rep_); }

  /// Extreme points. For a box with k free coordinates that is 2^k corners.
  std::vector<Vector> extreme_points() const;

  /// The same set shifted by -offset.
  SubdiffSet translated(const Vector& offset) const;

  /// A point in the relative interior (box center, vertex average).
  Vector relative_center() const;

 private:
  std::variant<BoxSet, HullSet> rep_;
};

struct SolveTrace {
  std::vector<Vector> iterates;
  std::vector<std::vector<Eigen::Index>> supports;  // 0-based
  std::vector<double> residuals;                    // ||x_k - xhat_k|| / t
  std::vector<double> values;                       // f(x_k)
  bool step_exceeds_inverse_lipschitz = false;

  std::size_t size() const { return iterates.size(); }
};

double eval_f(const CompositeProblem& p, const Vector& x);

/// Values of the max-pieces of h (empty unless the problem is MAX).
std::vector<double> piece_values(const CompositeProblem& p, const Vector& x);

/// Indices of max-pieces within activity_tol of the max.
std::vector<std::size_t> active_pieces(const CompositeProblem& p, const Vector& x,
                                       double activity_tol);

/// prox_{t h} applied to v (no gradient step).
Vector prox_h(const CompositeProblem& p, const Vector& v, double t);

/// prox_{t h}(x - t grad g(x)).
Vector prox_step(const CompositeProblem& p, const Vector& x, double t);

SubdiffSet subdiff_at(const CompositeProblem& p, const Vector& x,
                      double activity_tol = kActivityTol);

/// Support of x: coordinates with x_i != 0 (L1/NONE) or the active pieces
/// (MAX).
std::vector<Eigen::Index> support_of(const CompositeProblem& p, const Vector& x);

/// Point with dist(0, df) <= 1e-12, found by a first-order method from x0
/// and then polished on the identified manifold.
Vector reference_minimizer(const CompositeProblem& p, const Vector& x0);

// Problem builders.

/// g(x) = 0.5 ||x - b||^2 plus lambda ||x||_1 (lambda = 0 gives NONE).
CompositeProblem make_shifted_quadratic_l1(const Vector& b, double lambda);

/// g == 0 plus lambda ||x||_1.
CompositeProblem make_pure_l1(Eigen::Index n, double lambda);

/// g(x) = 0.5 (x_1 - a)^2 + kappa (1 - cos x_2) plus lambda ||x||_1.
CompositeProblem make_cosine_l1(double a, double kappa, double lambda);

/// g(x) = 0.5 ||x - center||^2 (g == 0 without a center) plus the max of pieces.
CompositeProblem make_max_problem(Eigen::Index n, std::vector<QuadraticPiece> pieces,
                                  std::optional<Vector> center);

}  // namespace eblab
