#include "eblab/fixtures.hpp"

namespace eblab {

namespace {

Fixture lasso(std::string name, Vector b, bool strict) {
  return Fixture{std::move(name),
                 'A',
                 make_shifted_quadratic_l1(b, 1.0),
                 ManifoldChart::coordinate(2, {1}),
                 Vector{{5.0, 5.0}},
                 true,
                 strict,
                 1.0,
                 1e3,
                 1e-8};
}

// f(x) = 0.5 x1^2 + 0.5 (x2 - 2)^2 + max(x2^2, x1^2 + 1). The two pieces tie
// on the hyperbola x2^2 - x1^2 = 1 and the minimizer (0, 1) has subgradient
// hull {(0, 1), (0, -1)}, so 0 sits at its midpoint.
Fixture maxquad_hyperbola() {
  QuadraticPiece upper{DenseMatrix{{0.0, 0.0}, {0.0, 2.0}}, Vector::Zero(2), 0.0};
  QuadraticPiece side{DenseMatrix{{2.0, 0.0}, {0.0, 0.0}}, Vector::Zero(2), 1.0};
  LevelSetChart hyperbola;
  hyperbola.codim = 1;
  hyperbola.value = [](const Vector& x) { return Vector{{x[1] * x[1] - x[0] * x[0] - 1.0}}; };
  hyperbola.jacobian = [](const Vector& x) { return DenseMatrix{{-2.0 * x[0], 2.0 * x[1]}}; };
  return Fixture{"maxquad-hyperbola",
                 'B',
                 make_max_problem(2, {upper, side}, Vector{{0.0, 2.0}}),
                 ManifoldChart::level_set(2, std::move(hyperbola)),
                 Vector{{0.5, 2.0}},
                 true,
                 true,
                 5.0,
                 1e3,
                 1e-6};
}

Fixture noncvx2d() {
  return Fixture{"noncvx2d",
                 'C',
                 make_cosine_l1(2.0, 0.3, 1.0),
                 ManifoldChart::coordinate(2, {1}),
                 Vector{{3.0, 0.5}},
                 false,
                 true,
                 1.0,
                 0.5,
                 1e-8};
}

}  // namespace

const std::vector<Fixture>& fixture_registry() {
  static const std::vector<Fixture> registry = {
      lasso("lasso2d", Vector{{2.0, 0.5}}, true),
      lasso("lasso2d-degenerate", Vector{{2.0, 1.0}}, false),
      maxquad_hyperbola(),
      noncvx2d(),
  };
  return registry;
}

const Fixture& find_fixture(const std::string& name) {
  for (const auto& f : fixture_registry())
    if (f.name == name) return f;
  throw LabError(ErrorCode::kUnknownFixture, "no fixture named '" + name + "'");
}

}  // namespace eblab
