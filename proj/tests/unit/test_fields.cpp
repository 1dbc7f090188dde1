#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "vortlab/fields.hpp"

using namespace vortlab;

namespace {

const Expr t = Expr::variable("t");
const Expr x = Expr::variable("x");
const Expr y = Expr::variable("y");
const Expr lambda = Expr::variable("lambda");
const Expr mu = Expr::variable("mu");

/// Smooth random expression over (t, x, y), defined everywhere.
Expr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 9);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  switch (pick(rng)) {
    case 0: return t;
    case 1: return x;
    case 2: return y;
    case 3: return Expr(coeff(rng));
    case 4: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 5: return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
    case 6: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 7: return sin(random_tree(rng, depth - 1));
    case 8: return cos(random_tree(rng, depth - 1)) * exp(0.3 * random_tree(rng, depth - 1));
    default: return random_tree(rng, depth - 1) / (2.0 + sin(random_tree(rng, depth - 1)));
  }
}

Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Point{{"t", u(rng)}, {"x", u(rng)}, {"y", u(rng)}};
}

}  // namespace

TEST(EvalDerivatives, Examples) {
  EXPECT_DOUBLE_EQ(eval_derivatives(AnalyticField(x * y), Point{{"t", 0}, {"x", 2}, {"y", 3}},
                                    {0, 1, 0}),
                   3.0);
  EXPECT_DOUBLE_EQ(eval_derivatives(AnalyticField(sin(x)), Point{{"t", 0}, {"x", 0}, {"y", 0}},
                                    {0, 2, 0}),
                   0.0);
  EXPECT_DOUBLE_EQ(eval_derivatives(AnalyticField(x * x * y), Point{{"t", 0}, {"x", 1}, {"y", 1}},
                                    {0, 2, 1}),
                   2.0);
}

TEST(EvalDerivatives, RejectsHighOrdersAndDomainErrors) {
  const AnalyticField f(x * x * x * x);
  const Point p{{"t", 0}, {"x", 1}, {"y", 1}};
  EXPECT_THROW(eval_derivatives(f, p, {0, 4, 0}), std::invalid_argument);
  EXPECT_THROW(eval_derivatives(f, p, {-1, 0, 0}), std::invalid_argument);
  const AnalyticField g(1.0 / x);
  EXPECT_THROW(eval_derivatives(g, Point{{"t", 0}, {"x", 0}, {"y", 0}}, {0, 1, 0}), DomainError);
}

TEST(AnalyticField, RejectsForeignVariables) {
  EXPECT_THROW(AnalyticField(x + mu), std::invalid_argument);
  EXPECT_THROW(AnalyticField(x, Frame::Spherical), std::invalid_argument);
  EXPECT_NO_THROW(AnalyticField(lambda * mu + t, Frame::Spherical));
}

TEST(EvalDerivatives, MixedPartialsCommuteOnRandomTrees) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const AnalyticField f(random_tree(rng, 4));
    const Point p = random_point(rng);
    const double xy = f.derivative("x").derivative("y")(p);
    const double yx = f.derivative("y").derivative("x")(p);
    const double tx = f.derivative("t").derivative("x")(p);
    const double xt = f.derivative("x").derivative("t")(p);
    const double xyy = f.derivative("y").derivative("x").derivative("y")(p);
    const double yyx = eval_derivatives(f, p, {0, 1, 2});
    EXPECT_NEAR(xy, yx, 1e-13 * std::max(1.0, std::abs(xy))) << f.expr().to_string();
    EXPECT_NEAR(tx, xt, 1e-13 * std::max(1.0, std::abs(tx))) << f.expr().to_string();
    EXPECT_NEAR(xyy, yyx, 1e-13 * std::max(1.0, std::abs(xyy))) << f.expr().to_string();
  }
}

TEST(EvalDerivatives, AgreesWithCentralDifferences) {
  std::mt19937_64 rng(12);
  const double h = 1e-5;
  for (int trial = 0; trial < 60; ++trial) {
    const AnalyticField f(random_tree(rng, 4));
    const Point p = random_point(rng);
    for (const char* v : {"t", "x", "y"}) {
      Point plus = p, minus = p;
      plus.set(v, p.get(v) + h);
      minus.set(v, p.get(v) - h);
      const double fd = (f(plus) - f(minus)) / (2.0 * h);
      const double exact = f.derivative(v)(p);
      EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << f.expr().to_string();
    }
  }
}

TEST(Vorticity, Examples) {
  const Point p{{"t", 0.2}, {"x", 0.3}, {"y", -0.4}};
  EXPECT_DOUBLE_EQ(vorticity_of(AnalyticField(x * x + y * y), EquationKind::Cartesian)(p), 4.0);
  EXPECT_NEAR(vorticity_of(AnalyticField(sin(x + y)), EquationKind::Cartesian)(p),
              -2.0 * std::sin(-0.1), 1e-15);
  EXPECT_DOUBLE_EQ(vorticity_of(AnalyticField(x * x), EquationKind::Potential)(p), 2.0);
  const Point s{{"t", 0.0}, {"lambda", 1.0}, {"mu", 0.3}};
  EXPECT_NEAR(vorticity_of(AnalyticField(mu, Frame::Spherical), EquationKind::Spherical)(s), -0.6,
              1e-15);
  EXPECT_NEAR(vorticity_of(AnalyticField(mu, Frame::Spherical), EquationKind::Spherical, 2.0)(s),
              -0.15, 1e-15);
  EXPECT_THROW(vorticity_of(AnalyticField(x), EquationKind::Spherical), std::invalid_argument);
}

TEST(Vorticity, SphericalHarmonicsAreEigenfunctions) {
  // Y_2^1 ~ mu sqrt(1 - mu^2) cos(lambda): eigenvalue -n(n+1) = -6.
  const AnalyticField psi(mu * sqrt(1.0 - mu * mu) * cos(lambda), Frame::Spherical);
  const auto zeta = vorticity_of(psi, EquationKind::Spherical);
  Grid::spherical_default().for_each([&](const Point& p) {
    EXPECT_NEAR(zeta(p), -6.0 * psi(p), 1e-13);
  });
}

TEST(EquationParams, Validation) {
  EXPECT_NO_THROW(EquationParams::cartesian(0.0).validate());
  EXPECT_THROW(EquationParams::spherical(1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(EquationParams::potential(1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(EquationParams::cartesian(NAN).validate(), std::invalid_argument);
  EXPECT_EQ(EquationParams::spherical(1.0).frame(), Frame::Spherical);
  EXPECT_EQ(EquationParams::potential(1.0, 1.0).frame(), Frame::Cartesian);
}

TEST(Grid, DefaultsAndValidation) {
  EXPECT_EQ(Grid::cartesian_default().size(), 11u * 11u * 11u);
  EXPECT_EQ(Grid::spherical_default().size(), 5u * 16u * 13u);
  EXPECT_THROW(Grid(std::vector<Grid::Axis>{}), std::invalid_argument);
  EXPECT_THROW(Grid(std::vector<Grid::Axis>{{"x", {}}}), std::invalid_argument);
  EXPECT_THROW(Grid(std::vector<Grid::Axis>{{"x", {0.0, 0.0}}}), std::invalid_argument);
  EXPECT_THROW(Grid(std::vector<Grid::Axis>{{"mu", {-1.0, 0.0}}}), std::domain_error);
  const auto lam = Grid::linspace(0.0, 1.0, 4, false);
  ASSERT_EQ(lam.size(), 4u);
  EXPECT_DOUBLE_EQ(lam.back(), 0.75);
  EXPECT_DOUBLE_EQ(Grid::linspace(-1.0, 1.0, 11)[5], 0.0);
}

TEST(Residual, Examples) {
  const Grid grid = Grid::cartesian_default();
  const auto constant = residual(AnalyticField(Expr(3.0)), EquationParams::cartesian(1.0), grid);
  EXPECT_EQ(constant.max_abs, 0.0);
  EXPECT_EQ(constant.n_points, grid.size());

  const auto zonal = residual(AnalyticField(mu * mu, Frame::Spherical),
                              EquationParams::spherical(0.0), Grid::spherical_default());
  EXPECT_EQ(zonal.max_abs, 0.0);

  const AnalyticField wave(sin(x));
  const auto r = residual(wave, EquationParams::cartesian(1.0), grid);
  EXPECT_NEAR(r.max_abs, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.worst_point.get("x"), 0.0);
  EXPECT_LE(r.rms, r.max_abs);
  grid.for_each([&](const Point& p) {
    EXPECT_NEAR(residual_at(wave, EquationParams::cartesian(1.0), p), std::cos(p.get("x")),
                1e-15);
  });
}

TEST(Residual, PotentialEquationIncludesStretching) {
  // psi = t: zeta = 0, so only -F psi_t = -F survives.
  const auto r = residual(AnalyticField(t), EquationParams::potential(0.5, 2.5),
                          Grid::cartesian_default());
  EXPECT_NEAR(r.max_abs, 2.5, 1e-15);
}

TEST(Residual, RejectsMismatchedInputs) {
  EXPECT_THROW(residual(AnalyticField(x), EquationParams::spherical(1.0), Grid::cartesian_default()),
               std::invalid_argument);
  const Grid partial({{"x", {0.0, 1.0}}});
  EXPECT_THROW(residual(AnalyticField(x), EquationParams::cartesian(1.0), partial),
               std::invalid_argument);
}
