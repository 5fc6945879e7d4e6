#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "eblab/problems.hpp"

namespace eblab {

inline constexpr double kFeasibilityTol = 1e-8;

/// M = {x : x_i = 0 for i in zero_set}.
struct CoordChart {
  std::vector<Eigen::Index> zero_set;  // 0-based, sorted
};

/// M = {x : F(x) = 0} locally, F: R^n -> R^m with full-rank Jacobian.
struct LevelSetChart {
  std::function<Vector(const Vector&)> value;
  std::function<DenseMatrix(const Vector&)> jacobian;  // m x n
  Eigen::Index codim = 1;
};

class ManifoldChart {
 public:
  static ManifoldChart coordinate(Eigen::Index n, std::vector<Eigen::Index> zero_set,
                                  double radius = 0.5);
  static ManifoldChart level_set(Eigen::Index n, LevelSetChart chart, double radius = 0.5);

  Eigen::Index dim() const { return n_; }
  Eigen::Index codim() const;
  double radius() const { return radius_; }
  bool is_coordinate() const { return std::holds_alternative<CoordChart>(rep_); }
  const CoordChart& as_coordinate() const { return std::get<CoordChart>(rep_); }
  const LevelSetChart& as_level_set() const { return std::get<LevelSetChart>(rep_); }

  /// Constraint violation: max |x_i| over I, or ||F(x)||.
  double infeasibility(const Vector& x) const;
  bool contains(const Vector& x, double tol = kFeasibilityTol) const {
    return infeasibility(x) <= tol;
  }

 private:
  ManifoldChart(Eigen::Index n, std::variant<CoordChart, LevelSetChart> rep, double radius)
      : n_(n), rep_(std::move(rep)), radius_(radius) {}

  Eigen::Index n_;
  std::variant<CoordChart, LevelSetChart> rep_;
  double radius_;
};

struct TangentFrame {
  DenseMatrix projector;         // onto T_x M
  DenseMatrix normal_projector;  // onto N_x M
};

TangentFrame tangent_projector(const ManifoldChart& M, const Vector& x);

/// Orthonormal bases of T_x M and N_x M (columns).
struct TangentBases {
  DenseMatrix tangent;
  DenseMatrix normal;
};
TangentBases tangent_bases(const ManifoldChart& M, const Vector& x);

Vector project_to_manifold(const ManifoldChart& M, const Vector& x);

Vector riemannian_grad(const ManifoldChart& M, const CompositeProblem& p, const Vector& x);

/// The small v in N_x M with x + u + v on M.
Vector v_correction(const ManifoldChart& M, const Vector& x, const Vector& u);

}  // namespace eblab
