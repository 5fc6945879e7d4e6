#pragma once

#include <string>
#include <vector>

#include "eblab/manifolds.hpp"
#include "eblab/problems.hpp"

namespace eblab {

/// A registered test problem together with its identifiable manifold and the
/// hypotheses it is built to satisfy.
struct Fixture {
  std::string name;
  char family = 'A';  // A: l1 composite, B: max of quadratics, C: nonconvex l1 composite
  CompositeProblem problem;
  ManifoldChart chart;
  Vector start;  // start for the reference solve and the default solver run
  bool convex = true;
  bool strict_complementarity = true;
  /// Declared Lipschitz bound for x -> g_U(x) along the manifold.
  double u_gradient_lipschitz = 1.0;
  /// Ball radius for the U-Lagrangian (large surrogate for infinity when convex).
  double u_lagrangian_ball = 1e3;
  /// Tolerance for the g_U / Riemannian-gradient identities; looser on curved
  /// charts solved by Gauss-Newton.
  double identity_tol = 1e-8;
};

const std::vector<Fixture>& fixture_registry();

/// Throws LabError(kUnknownFixture).
const Fixture& find_fixture(const std::string& name);

}  // namespace eblab
