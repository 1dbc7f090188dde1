#pragma once

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vortlab/time_function.hpp"

namespace vortlab {

/// Named coordinates of an evaluation point, e.g. {t, x, y}.
class Point {
 public:
  struct Coordinate {
    std::string name;
    double value;
  };

  Point() = default;
  Point(std::initializer_list<Coordinate> coords) : coords_(coords) {}

  /// Inserts or overwrites a coordinate.
  void set(std::string_view name, double value);
  /// Throws std::out_of_range for unknown names.
  double get(std::string_view name) const;
  const double* find(std::string_view name) const noexcept;

  std::span<const Coordinate> coordinates() const noexcept { return coords_; }
  std::string to_string() const;

 private:
  std::vector<Coordinate> coords_;
};

/// Raised when an expression is evaluated outside its domain of definition.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, Point point);
  const Point& point() const noexcept { return point_; }

 private:
  Point point_;
};

/// Immutable expression tree over named real variables.
///
/// Nodes are shared, so copies are cheap. Construction through the free
/// operators folds constants and drops additive zeros and multiplicative ones;
/// no further simplification happens.
class Expr {
 public:
  enum class Op {
    Constant,
    Variable,
    TimeFn,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Atan2,
  };

  Expr();  // the constant 0
  Expr(double value);  // NOLINT(google-explicit-constructor)

  static Expr variable(std::string name);
  /// The order-th derivative of `fn` evaluated at `argument` (default: variable t).
  static Expr time_function(TimeFunctionPtr fn, int order = 0);
  static Expr time_function(TimeFunctionPtr fn, int order, Expr argument);
  /// A time-function leaf bound later by name (see bind()).
  static Expr time_function_ref(std::string name, int order = 0);
  static Expr time_function_ref(std::string name, int order, Expr argument);
  /// Operator node with constant folding (same as the free operators).
  static Expr make(Op op, std::vector<Expr> operands);
  /// Operator node without any folding.
  static Expr raw(Op op, std::vector<Expr> operands);

  Op op() const noexcept;
  bool is_constant() const noexcept { return op() == Op::Constant; }
  bool is_constant(double value) const noexcept;
  double constant_value() const;
  /// Variable or time-function name.
  const std::string& name() const;
  /// Derivative order of a time-function leaf.
  int order() const;
  /// Bound function of a time-function leaf, or nullptr.
  const TimeFunctionPtr& function() const;
  std::span<const Expr> operands() const noexcept;

  /// Structural identity (same shared node).
  bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }
  /// Address of the shared node; stable while any handle is alive.
  const void* identity() const noexcept { return node_.get(); }

  double evaluate(const Point& point) const;
  std::string to_string() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr sqrt(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr atan2(const Expr& y, const Expr& x);

/// Exact partial derivative with respect to `variable`.
Expr differentiate(const Expr& e, std::string_view variable);
Expr differentiate(const Expr& e, std::string_view variable, int times);

/// Simultaneous substitution of variables by expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

bool depends_on(const Expr& e, std::string_view variable);
bool contains_time_functions(const Expr& e);
std::vector<std::string> free_variables(const Expr& e);

/// Binds every unbound time-function leaf from `registry`; throws
/// std::invalid_argument naming the first missing function.
Expr bind(const Expr& e, const TimeFunctionRegistry& registry);

/// Number of nodes, counting shared subtrees once per reference.
std::size_t node_count(const Expr& e);

/// Several expressions flattened into one instruction list in which every
/// shared node appears once, so common subexpressions are evaluated once per
/// point. Results match Expr::evaluate bit for bit.
class CompiledExprs {
 public:
  explicit CompiledExprs(std::span<const Expr> roots);

  std::size_t size() const noexcept { return roots_.size(); }
  std::size_t instruction_count() const noexcept { return code_.size(); }
  /// Values of the roots at `point`. Throws DomainError like Expr::evaluate.
  std::vector<double> evaluate(const Point& point) const;

 private:
  struct Instruction {
    Expr::Op op = Expr::Op::Constant;
    double value = 0.0;
    std::size_t a = 0;
    std::size_t b = 0;
    const TimeFunction* fn = nullptr;
    int order = 0;
    std::string name;
  };
  std::vector<Instruction> code_;
  std::vector<std::size_t> roots_;
};

}  // namespace vortlab
