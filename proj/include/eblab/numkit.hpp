#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>

#include "eblab/error.hpp"

namespace eblab {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Relative rank tolerance shared by every decomposition in the library. The
/// reference scale is the largest column norm of the factored matrix.
inline constexpr double kRankTolerance = 1e-10;

/// Minimizer of ||A x - b||. When A is rank deficient the minimum-norm
/// minimizer is returned; only a numerically zero A is rejected.
Vector least_squares_solve(const DenseMatrix& A, const Vector& b);

/// Projector onto ker(B), i.e. I - B^T (B B^T)^{-1} B. Requires full row rank.
DenseMatrix orthogonal_projector(const DenseMatrix& B);

/// Orthonormal basis (as columns) of the column space of A. May have zero
/// columns.
DenseMatrix range_basis(const DenseMatrix& A);

/// Orthonormal basis of the orthogonal complement of the column space of A,
/// which must have orthonormal columns (as returned by range_basis).
DenseMatrix complement_basis(const DenseMatrix& orthonormal_columns, Eigen::Index ambient_dim);

void require_finite(const Vector& v, const std::string& where);
void require_same_dim(const Vector& v, Eigen::Index n, const std::string& where);

}  // namespace eblab
