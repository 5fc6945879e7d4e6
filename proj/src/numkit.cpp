#include "eblab/numkit.hpp"

#include <cmath>

namespace eblab {

namespace {

double max_column_norm(const DenseMatrix& A) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) m = std::max(m, A.col(j).norm());
  return m;
}

}  // namespace

Vector least_squares_solve(const DenseMatrix& A, const Vector& b) {
  if (A.rows() != b.size()) {
    throw LabError(ErrorCode::kDimensionMismatch,
                   "least_squares_solve: A has " + std::to_string(A.rows()) + " rows, b has " +
                       std::to_string(b.size()) + " entries");
  }
  if (A.cols() == 0) return Vector::Zero(0);
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod;
  cod.setThreshold(kRankTolerance);
  cod.compute(A);
  if (max_column_norm(A) == 0.0 || cod.rank() == 0) {
    throw LabError(ErrorCode::kRankDeficient, "least_squares_solve: matrix is numerically zero");
  }
  Vector x = cod.solve(b);
  require_finite(x, "least_squares_solve");
  return x;
}

DenseMatrix orthogonal_projector(const DenseMatrix& B) {
  const Eigen::Index n = B.cols();
  if (B.rows() == 0) return DenseMatrix::Identity(n, n);
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(B.transpose());
  qr.setThreshold(kRankTolerance);
  if (qr.rank() < B.rows()) {
    throw LabError(ErrorCode::kRankDeficient,
                   "orthogonal_projector: rank " + std::to_string(qr.rank()) + " < " +
                       std::to_string(B.rows()) + " rows");
  }
  const DenseMatrix Q = DenseMatrix(qr.householderQ()).leftCols(B.rows());
  DenseMatrix P = DenseMatrix::Identity(n, n) - Q * Q.transpose();
  // Exact symmetry; round-off in the product is not symmetric on its own.
  return 0.5 * (P + P.transpose());
}

DenseMatrix range_basis(const DenseMatrix& A) {
  if (A.cols() == 0 || max_column_norm(A) == 0.0) return DenseMatrix(A.rows(), 0);
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(A);
  qr.setThreshold(kRankTolerance);
  return DenseMatrix(qr.householderQ()).leftCols(qr.rank());
}

DenseMatrix complement_basis(const DenseMatrix& orthonormal_columns, Eigen::Index ambient_dim) {
  const Eigen::Index k = orthonormal_columns.cols();
  if (k == 0) return DenseMatrix::Identity(ambient_dim, ambient_dim);
  if (k >= ambient_dim) return DenseMatrix(ambient_dim, 0);
  Eigen::HouseholderQR<DenseMatrix> qr(orthonormal_columns);
  const DenseMatrix Q = qr.householderQ();
  return Q.rightCols(ambient_dim - k);
}

void require_finite(const Vector& v, const std::string& where) {
  if (!v.allFinite()) throw LabError(ErrorCode::kNonConvergence, where + ": non-finite result");
}

void require_same_dim(const Vector& v, Eigen::Index n, const std::string& where) {
  if (v.size() != n) {
    throw LabError(ErrorCode::kDimensionMismatch,
                   where + ": expected dimension " + std::to_string(n) + ", got " +
                       std::to_string(v.size()));
  }
}

}  // namespace eblab
