#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "eblab/manifolds.hpp"
#include "eblab/problems.hpp"

namespace eblab {

/// Fixed-step proximal gradient. Stops once ||x_k - xhat_k|| / t <= tol or
/// after max_iter steps; the trace holds x_0 .. x_K.
SolveTrace prox_gradient_solve(const CompositeProblem& p, const Vector& x0, double t, double tol,
                               int max_iter);

struct Identification {
  std::optional<std::size_t> index;  // nullopt: not identified
  std::vector<Eigen::Index> stable_support;
};

/// Smallest k such that every iterate from k on lies on M. Prox iterates land
/// on coordinate manifolds exactly, so the default tolerance is zero.
Identification identification_index(const SolveTrace& trace, const ManifoldChart& M,
                                    double tol = 0.0);

/// Newton on f restricted to M, in tangent coordinates at the current point,
/// with a central-difference Hessian and backtracking.
Vector reduced_newton_polish(const CompositeProblem& p, const ManifoldChart& M, const Vector& x,
                             double tol);

/// Columns: k, x_1..x_n, f, residual, support (1-based, ';'-joined).
void write_trace_csv(std::ostream& out, const SolveTrace& trace);

}  // namespace eblab
