#include "eblab/solvers.hpp"

#include <cmath>
#include <ostream>

#include "eblab/format.hpp"

namespace eblab {

SolveTrace prox_gradient_solve(const CompositeProblem& p, const Vector& x0, double t, double tol,
                               int max_iter) {
  require_same_dim(x0, p.dim, "prox_gradient_solve");
  if (!p.has_prox()) throw LabError(ErrorCode::kProxUnavailable, "prox_gradient_solve on a max problem");
  if (!(t > 0.0) || !(tol > 0.0) || max_iter < 1) {
    throw LabError(ErrorCode::kInvalidArgument, "prox_gradient_solve: need t > 0, tol > 0, max_iter >= 1");
  }
  SolveTrace trace;
  trace.step_exceeds_inverse_lipschitz = t * p.smooth.lipschitz > 1.0;
  Vector x = x0;
  for (int k = 0;; ++k) {
    Vector next = prox_step(p, x, t);
    const double residual = (x - next).norm() / t;
    trace.iterates.push_back(x);
    trace.supports.push_back(support_of(p, x));
    trace.residuals.push_back(residual);
    trace.values.push_back(eval_f(p, x));
    if (residual <= tol || k == max_iter) break;
    x = std::move(next);
  }
  return trace;
}

Identification identification_index(const SolveTrace& trace, const ManifoldChart& M, double tol) {
  if (trace.size() == 0) throw LabError(ErrorCode::kInvalidArgument, "identification_index: empty trace");
  std::optional<std::size_t> index;
  for (std::size_t k = trace.size(); k-- > 0;) {
    if (!M.contains(trace.iterates[k], tol)) break;
    index = k;
  }
  Identification out{index, {}};
  if (index) out.stable_support = trace.supports[*index];
  return out;
}

namespace {

Vector retract(const ManifoldChart& M, const Vector& x, const Vector& step) {
  return project_to_manifold(M, x + step);
}

}  // namespace

Vector reduced_newton_polish(const CompositeProblem& p, const ManifoldChart& M, const Vector& x,
                             double tol) {
  constexpr double kFdStep = 1e-5;
  Vector current = x;
  for (int it = 0; it < 100; ++it) {
    const Vector grad = riemannian_grad(M, p, current);
    if (grad.norm() <= tol) return current;
    const DenseMatrix B = tangent_bases(M, current).tangent;
    const Eigen::Index k = B.cols();
    const Vector reduced_grad = B.transpose() * grad;

    auto field = [&](const Vector& w) -> Vector {
      return B.transpose() * riemannian_grad(M, p, retract(M, current, B * w));
    };
    DenseMatrix H(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Vector e = kFdStep * Vector::Unit(k, j);
      H.col(j) = (field(e) - field(-e)) / (2.0 * kFdStep);
    }
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::LLT<DenseMatrix> llt(H);
    if (llt.info() != Eigen::Success) {
      throw LabError(ErrorCode::kIndefinite, "reduced_newton_polish: reduced Hessian is not positive definite");
    }
    const Vector direction = -llt.solve(reduced_grad);
    const double f0 = eval_f(p, current);
    const double slope = reduced_grad.dot(direction);
    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-12; alpha *= 0.5) {
      Vector trial = retract(M, current, alpha * (B * direction));
      const bool armijo = eval_f(p, trial) <= f0 + 1e-4 * alpha * slope;
      // Near the solution f differences sink below round-off; a smaller
      // gradient is then the only usable progress signal.
      if (armijo || riemannian_grad(M, p, trial).norm() < grad.norm()) {
        current = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw LabError(ErrorCode::kNonConvergence, "reduced_newton_polish: line search failed");
  }
  throw LabError(ErrorCode::kNonConvergence, "reduced_newton_polish: iteration limit reached");
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  const Eigen::Index n = trace.size() ? trace.iterates.front().size() : 0;
  out << "k";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",f,residual,support\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_real(trace.iterates[k][i]);
    out << ',' << format_real(trace.values[k]) << ',' << format_real(trace.residuals[k]) << ',';
    for (std::size_t j = 0; j < trace.supports[k].size(); ++j) {
      if (j) out << ';';
      out << trace.supports[k][j] + 1;
    }
    out << '\n';
  }
}

}  // namespace eblab
