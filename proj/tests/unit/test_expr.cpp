#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "vortlab/expr.hpp"
#include "vortlab/expr_json.hpp"
#include "vortlab/time_function.hpp"

using namespace vortlab;

namespace {

const Expr t = Expr::variable("t");
const Expr x = Expr::variable("x");
const Expr y = Expr::variable("y");

double central_difference(const TimeFunction& f, double at, int order, double h = 1e-5) {
  return (f(at + h, order) - f(at - h, order)) / (2.0 * h);
}

}  // namespace

TEST(Expr, ConstantFoldingAndIdentities) {
  EXPECT_TRUE((Expr(2.0) + Expr(3.0)).is_constant(5.0));
  EXPECT_TRUE((x + 0.0).same_node(x));
  EXPECT_TRUE((1.0 * x).same_node(x));
  EXPECT_TRUE((0.0 * x).is_constant(0.0));
  EXPECT_TRUE(Expr().is_constant(0.0));
  EXPECT_THROW(x.constant_value(), std::logic_error);
}

TEST(Expr, Evaluate) {
  const Expr e = x * sin(y) + pow(t, 2.0) / 4.0 - exp(log(x));
  const Point p{{"t", 2.0}, {"x", 3.0}, {"y", 0.5}};
  EXPECT_NEAR(e.evaluate(p), 3.0 * std::sin(0.5) + 1.0 - 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(atan2(y, x).evaluate(p), std::atan2(0.5, 3.0));
}

TEST(Expr, DomainErrorsCarryThePoint) {
  const Point p{{"x", 0.0}};
  try {
    (1.0 / x).evaluate(p);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_DOUBLE_EQ(e.point().get("x"), 0.0);
  }
  EXPECT_THROW(log(x).evaluate(p), DomainError);
  EXPECT_THROW(atan2(x, x).evaluate(p), DomainError);
  EXPECT_THROW(y.evaluate(p), DomainError);
  EXPECT_THROW(Expr::time_function_ref("f").evaluate(Point{{"t", 1.0}}), DomainError);
}

TEST(Expr, PointAccess) {
  Point p{{"a", 1.0}};
  p.set("b", 2.0);
  p.set("a", 3.0);
  EXPECT_DOUBLE_EQ(p.get("a"), 3.0);
  EXPECT_DOUBLE_EQ(p.get("b"), 2.0);
  EXPECT_EQ(p.find("c"), nullptr);
  EXPECT_THROW(p.get("c"), std::out_of_range);
}

TEST(Expr, Differentiate) {
  const Point p{{"t", 0.3}, {"x", 1.2}, {"y", -0.7}};
  EXPECT_NEAR(differentiate(x * y, "x").evaluate(p), -0.7, 1e-15);
  EXPECT_NEAR(differentiate(sin(x), "x", 2).evaluate(p), -std::sin(1.2), 1e-15);
  EXPECT_NEAR(differentiate(pow(x, 3.0), "x", 3).evaluate(p), 6.0, 1e-14);
  EXPECT_NEAR(differentiate(x / y, "y").evaluate(p), -1.2 / (0.49), 1e-14);
  EXPECT_NEAR(differentiate(log(x), "x").evaluate(p), 1.0 / 1.2, 1e-15);
  EXPECT_NEAR(differentiate(pow(2.0, x), "x").evaluate(p), std::log(2.0) * std::pow(2.0, 1.2),
              1e-14);
  EXPECT_NEAR(differentiate(atan2(y, x), "x").evaluate(p), 0.7 / (1.44 + 0.49), 1e-15);
  EXPECT_TRUE(differentiate(x, "y").is_constant(0.0));
}

TEST(Expr, TimeFunctionLeavesDifferentiateByOrder) {
  const auto f = share(TimeFunction::sinusoid("f", 2.0, 3.0));
  const Expr e = Expr::time_function(f) * x;
  const Point p{{"t", 0.4}, {"x", 2.0}};
  EXPECT_NEAR(differentiate(e, "t").evaluate(p), 2.0 * 6.0 * std::cos(1.2), 1e-14);
  EXPECT_NEAR(differentiate(e, "t", 3).evaluate(p), -2.0 * 54.0 * std::cos(1.2), 1e-12);
  const Expr shifted = Expr::time_function(f, 0, 2.0 * t);
  EXPECT_NEAR(differentiate(shifted, "t").evaluate(p), 2.0 * 6.0 * std::cos(2.4), 1e-13);
}

TEST(Expr, SubstituteAndFreeVariables) {
  const Expr e = x * x + y;
  const Expr s = substitute(e, {{"x", y + 1.0}, {"y", t}});
  EXPECT_NEAR(s.evaluate(Point{{"t", 2.0}, {"y", 3.0}}), 18.0, 1e-15);
  EXPECT_EQ(free_variables(s), (std::vector<std::string>{"t", "y"}));
  EXPECT_TRUE(depends_on(s, "t"));
  EXPECT_FALSE(depends_on(s, "x"));
}

TEST(Expr, BindResolvesNamedFunctions) {
  const Expr e = Expr::time_function_ref("g", 1) + x;
  EXPECT_TRUE(contains_time_functions(e));
  EXPECT_THROW(vortlab::bind(e, {}), std::invalid_argument);
  TimeFunctionRegistry reg{{"g", share(TimeFunction::polynomial("g", {0.0, 0.0, 1.0}))}};
  EXPECT_NEAR(vortlab::bind(e, reg).evaluate(Point{{"t", 3.0}, {"x", 1.0}}), 7.0, 1e-15);
}

TEST(Expr, NodeCountCountsReferences) {
  const Expr s = sin(x);
  EXPECT_EQ(node_count(s), 2u);
  EXPECT_EQ(node_count(Expr::raw(Expr::Op::Add, {s, s})), 5u);
}

TEST(Expr, JsonRoundTrip) {
  const auto f = share(TimeFunction::exponential("f", 0.5));
  const Expr e = x * sin(y) - Expr::time_function(f, 2) / (2.0 + cos(t)) + atan2(y, pow(x, 2.0));
  const auto j = to_json(e);
  const Expr back = expr_from_json(j, {{"f", f}});
  const Point p{{"t", 0.1}, {"x", 1.5}, {"y", -0.2}};
  EXPECT_DOUBLE_EQ(back.evaluate(p), e.evaluate(p));
  EXPECT_EQ(to_json(back), j);
}

TEST(Expr, JsonDocumentedShape) {
  const auto j = nlohmann::json::parse(R"(["*", ["var","x"], ["sin", ["var","y"]]])");
  const Expr e = expr_from_json(j);
  EXPECT_NEAR(e.evaluate(Point{{"x", 2.0}, {"y", 0.5}}), 2.0 * std::sin(0.5), 1e-15);
  EXPECT_THROW(expr_from_json(nlohmann::json::parse(R"(["tan", 1])")), std::invalid_argument);
  EXPECT_THROW(expr_from_json(nlohmann::json::parse(R"(["/", 1])")), std::invalid_argument);
}

TEST(Expr, UnboundTimeFunctionsSurviveParsing) {
  const Expr e = expr_from_json(nlohmann::json::parse(R"(["tf", "h", 1])"));
  EXPECT_EQ(e.name(), "h");
  EXPECT_EQ(e.order(), 1);
  EXPECT_EQ(e.function(), nullptr);
}

TEST(TimeFunction, PresetsMatchFiniteDifferences) {
  const std::vector<TimeFunction> presets{
      TimeFunction::polynomial("p", {1.0, -2.0, 0.5, 0.25}),
      TimeFunction::exponential("e", -0.7, 1.3),
      TimeFunction::linear_exponential("le", 0.3, 1.1, 0.6),
      TimeFunction::sinusoid("s", 1.4, 2.1, 0.3),
      TimeFunction::abs_power("a", 2.5),
  };
  for (const auto& f : presets) {
    for (double at : {-0.9, 0.35, 1.7}) {
      for (int order = 0; order < 3; ++order) {
        const double exact = f(at, order + 1);
        const double fd = central_difference(f, at, order);
        EXPECT_NEAR(fd, exact, 1e-6 * std::max(1.0, std::abs(exact))) << f.name() << " " << order;
      }
    }
  }
}

TEST(TimeFunction, OrderLimits) {
  const auto user = TimeFunction::from_derivatives(
      "u", {[](double s) { return s * s; }, [](double s) { return 2 * s; },
            [](double) { return 2.0; }, [](double) { return 0.0; }});
  EXPECT_EQ(user.max_order(), 3);
  EXPECT_DOUBLE_EQ(user(3.0, 1), 6.0);
  EXPECT_THROW(user(1.0, 4), std::domain_error);
  EXPECT_THROW(user(1.0, -1), std::invalid_argument);
  EXPECT_THROW(TimeFunction("n", nullptr), std::invalid_argument);
}

TEST(TimeFunction, PolynomialDerivativeKeepsCoefficients) {
  const auto d = TimeFunction::polynomial("p", {1.0, 2.0, 3.0}).derivative();
  EXPECT_EQ(d.name(), "p'");
  ASSERT_TRUE(d.polynomial_coefficients());
  EXPECT_EQ(*d.polynomial_coefficients(), (std::vector<double>{2.0, 6.0}));
  EXPECT_DOUBLE_EQ(d(2.0), 14.0);
}

TEST(TimeFunction, JsonPresets) {
  const auto reg = registry_from_json(nlohmann::json::parse(R"([
    {"name": "f", "kind": "polynomial", "coefficients": [0, 1]},
    {"name": "g", "kind": "constant", "value": 2},
    {"name": "s", "kind": "sinusoid", "amplitude": 1, "frequency": 2}
  ])"));
  EXPECT_DOUBLE_EQ((*reg.at("f"))(3.0), 3.0);
  EXPECT_DOUBLE_EQ((*reg.at("g"))(3.0), 2.0);
  EXPECT_NEAR((*reg.at("s"))(0.0, 1), 2.0, 1e-15);
  EXPECT_THROW(time_function_from_json(nlohmann::json::parse(
                   R"({"name": "f", "kind": "constant", "value": 1, "extra": 0})")),
               std::invalid_argument);
  EXPECT_THROW(time_function_from_json(nlohmann::json::parse(R"({"name": "f", "kind": "gamma"})")),
               std::invalid_argument);
  EXPECT_THROW(registry_from_json(nlohmann::json::parse(R"([
    {"name": "f", "kind": "constant", "value": 1}, {"name": "f", "kind": "constant", "value": 2}
  ])")),
               std::invalid_argument);
}

TEST(CompiledExprs, MatchesTreeEvaluationExactly) {
  const auto f = share(TimeFunction::sinusoid("f", 0.7, 1.3));
  const Expr shared = sin(x * y) + Expr::time_function(f, 1);
  const Expr a = shared * shared / (1.0 + exp(t)) + atan2(y, x + 2.0);
  const Expr b = pow(shared * shared + 1.0, 1.5) - log(2.0 + cos(t * x));
  const std::array<Expr, 3> roots{a, b, a};
  const CompiledExprs program(roots);
  EXPECT_EQ(program.size(), 3u);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Point p{{"t", u(rng)}, {"x", u(rng)}, {"y", u(rng)}};
    const auto v = program.evaluate(p);
    EXPECT_EQ(v[0], a.evaluate(p));
    EXPECT_EQ(v[1], b.evaluate(p));
    EXPECT_EQ(v[2], v[0]);
  }
}

TEST(CompiledExprs, SharedNodesAppearOnce) {
  Expr e = x;
  for (int i = 0; i < 30; ++i) e = sin(e * e);  // 2^30 tree paths, 61 distinct nodes
  const std::array<Expr, 1> roots{e};
  const CompiledExprs program(roots);
  EXPECT_EQ(program.instruction_count(), 1u + 30u * 2u);
  double v = 0.9;
  for (int i = 0; i < 30; ++i) v = std::sin(v * v);
  EXPECT_EQ(program.evaluate({{"x", 0.9}})[0], v);
}

TEST(CompiledExprs, ReportsDomainErrors) {
  const std::array<Expr, 2> roots{x, log(y)};
  const CompiledExprs program(roots);
  try {
    program.evaluate({{"x", 1.0}, {"y", -1.0}});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.point().get("y"), -1.0);
  }
  EXPECT_THROW(program.evaluate({{"y", 1.0}}), DomainError);
  const std::array<Expr, 1> unbound{Expr::time_function_ref("g") + x};
  EXPECT_THROW(CompiledExprs(unbound).evaluate({{"t", 0.0}, {"x", 0.0}}), DomainError);
}

TEST(Differentiate, KeepsSharedSubtreesShared) {
  Expr e = sin(x);
  for (int i = 0; i < 8; ++i) e = e * e;
  const std::array<Expr, 1> d{differentiate(e, "x", 3)};
  // Without memoization the third derivative grows exponentially in the depth.
  EXPECT_LT(CompiledExprs(d).instruction_count(), 2000u);
  const double h = 1e-3, x0 = 0.3;
  const auto at = [&](double v) { return differentiate(e, "x", 2).evaluate({{"x", v}}); };
  EXPECT_NEAR(d[0].evaluate({{"x", x0}}), (at(x0 + h) - at(x0 - h)) / (2.0 * h),
              1e-4 * std::abs(d[0].evaluate({{"x", x0}})) + 1e-6);
}
