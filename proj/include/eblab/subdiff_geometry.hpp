#pragma once

#include "eblab/problems.hpp"

namespace eblab {

/// Orthonormal bases of the smooth (U) and nonsmooth (V) subspaces at a point.
struct VUSplit {
  DenseMatrix u_basis;
  DenseMatrix v_basis;
};

struct UGradient {
  Vector vector;
  bool in_relative_interior = false;
};

struct Projection {
  double distance = 0.0;
  Vector point;
};

/// Margin for strict inequalities in the relative-interior tests.
inline constexpr double kRiMargin = 1e-10;

/// Nearest point of S to the origin.
Projection dist_zero(const SubdiffSet& S);

/// Projection of the origin onto aff S.
Vector aff_project_zero(const SubdiffSet& S);

VUSplit vu_split(const SubdiffSet& S);

bool ri_contains_zero(const SubdiffSet& S);

/// Distance from y to S.
double dist_to_set(const SubdiffSet& S, const Vector& y);

UGradient u_gradient(const CompositeProblem& p, const Vector& x,
                     double activity_tol = kActivityTol);

struct ULagrangianValue {
  double value = 0.0;
  Vector minimizer_v;
};

/// inf over v in V(x), ||v|| <= ball_eps, of f(x + u + v) - <g, v>.
ULagrangianValue u_lagrangian_eval(const CompositeProblem& p, const Vector& x, const Vector& g,
                                   const Vector& u, double ball_eps);

/// Projection of the origin onto the simplex hull of `vertices` by
/// accelerated projected gradient on the barycentric weights; exposed for
/// testing against the exact enumeration.
Projection project_zero_onto_polytope(const std::vector<Vector>& vertices);

}  // namespace eblab
