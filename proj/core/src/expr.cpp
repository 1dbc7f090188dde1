#include "vortlab/expr.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <set>
#include <unordered_map>
#include <sstream>

namespace vortlab {

// ---------------------------------------------------------------------------
// Point

void Point::set(std::string_view name, double value) {
  for (auto& c : coords_) {
    if (c.name == name) {
      c.value = value;
      return;
    }
  }
  coords_.push_back({std::string(name), value});
}

const double* Point::find(std::string_view name) const noexcept {
  for (const auto& c : coords_) {
    if (c.name == name) return &c.value;
  }
  return nullptr;
}

double Point::get(std::string_view name) const {
  if (const double* v = find(name)) return *v;
  throw std::out_of_range("Point: no coordinate named '" + std::string(name) + "'");
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ", ";
    os << coords_[i].name << '=' << coords_[i].value;
  }
  os << ')';
  return os.str();
}

DomainError::DomainError(const std::string& what, Point point)
    : std::domain_error(what + " at " + point.to_string()), point_(std::move(point)) {}

// ---------------------------------------------------------------------------
// Expr nodes

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  std::string name;
  int order = 0;
  TimeFunctionPtr fn;
  std::vector<Expr> args;
};

namespace {

const std::string& empty_name() {
  static const std::string kEmpty;
  return kEmpty;
}

}  // namespace

Expr::Expr() : Expr(0.0) {}

Expr::Expr(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  node_ = std::move(n);
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->name = std::move(name);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::time_function(TimeFunctionPtr fn, int order) {
  return time_function(std::move(fn), order, variable("t"));
}

Expr Expr::time_function(TimeFunctionPtr fn, int order, Expr argument) {
  if (!fn) throw std::invalid_argument("Expr::time_function: null function");
  auto n = std::make_shared<Node>();
  n->op = Op::TimeFn;
  n->name = fn->name();
  n->order = order;
  n->fn = std::move(fn);
  n->args.push_back(std::move(argument));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::time_function_ref(std::string name, int order) {
  return time_function_ref(std::move(name), order, variable("t"));
}

Expr Expr::time_function_ref(std::string name, int order, Expr argument) {
  if (order < 0) throw std::invalid_argument("Expr::time_function_ref: negative order");
  auto n = std::make_shared<Node>();
  n->op = Op::TimeFn;
  n->name = std::move(name);
  n->order = order;
  n->args.push_back(std::move(argument));
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::make(Op op, std::vector<Expr> operands) {
  auto arity_check = [&](std::size_t n) {
    if (operands.size() != n) throw std::invalid_argument("Expr::make: wrong operand count");
  };
  switch (op) {
    case Op::Add: arity_check(2); return operands[0] + operands[1];
    case Op::Sub: arity_check(2); return operands[0] - operands[1];
    case Op::Mul: arity_check(2); return operands[0] * operands[1];
    case Op::Div: arity_check(2); return operands[0] / operands[1];
    case Op::Pow: arity_check(2); return pow(operands[0], operands[1]);
    case Op::Atan2: arity_check(2); return atan2(operands[0], operands[1]);
    case Op::Neg: arity_check(1); return -operands[0];
    case Op::Sin: arity_check(1); return sin(operands[0]);
    case Op::Cos: arity_check(1); return cos(operands[0]);
    case Op::Exp: arity_check(1); return exp(operands[0]);
    case Op::Log: arity_check(1); return log(operands[0]);
    default: throw std::invalid_argument("Expr::make: not an operator");
  }
}

Expr::Op Expr::op() const noexcept { return node_->op; }

bool Expr::is_constant(double value) const noexcept {
  return node_->op == Op::Constant && node_->value == value;
}

double Expr::constant_value() const {
  if (node_->op != Op::Constant) throw std::logic_error("Expr: not a constant");
  return node_->value;
}

const std::string& Expr::name() const {
  if (node_->op != Op::Variable && node_->op != Op::TimeFn) return empty_name();
  return node_->name;
}

int Expr::order() const { return node_->order; }

const TimeFunctionPtr& Expr::function() const { return node_->fn; }

std::span<const Expr> Expr::operands() const noexcept { return node_->args; }

Expr Expr::raw(Op op, std::vector<Expr> operands) {
  if (op == Op::Constant || op == Op::Variable || op == Op::TimeFn) {
    throw std::invalid_argument("Expr::raw: leaf kinds have dedicated factories");
  }
  const std::size_t arity = (op == Op::Neg || op == Op::Sin || op == Op::Cos || op == Op::Exp ||
                             op == Op::Log)
                                ? 1
                                : 2;
  if (operands.size() != arity) throw std::invalid_argument("Expr::raw: wrong operand count");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(operands);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

namespace {

Expr make_node(Expr::Op op, std::vector<Expr> args) { return Expr::raw(op, std::move(args)); }

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() + b.constant_value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return make_node(Expr::Op::Add, {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() - b.constant_value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return make_node(Expr::Op::Sub, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.constant_value() * b.constant_value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return make_node(Expr::Op::Mul, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.constant_value() != 0.0) {
    return Expr(a.constant_value() / b.constant_value());
  }
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr(0.0);
  if (b.is_constant(1.0)) return a;
  return make_node(Expr::Op::Div, {a, b});
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.constant_value());
  if (a.op() == Expr::Op::Neg) return a.operands()[0];
  return make_node(Expr::Op::Neg, {a});
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant(0.0)) return Expr(1.0);
  if (exponent.is_constant(1.0)) return base;
  if (base.is_constant() && exponent.is_constant()) {
    const double v = std::pow(base.constant_value(), exponent.constant_value());
    if (std::isfinite(v)) return Expr(v);
  }
  return make_node(Expr::Op::Pow, {base, exponent});
}

Expr sqrt(const Expr& a) { return pow(a, Expr(0.5)); }

Expr sin(const Expr& a) {
  if (a.is_constant()) return Expr(std::sin(a.constant_value()));
  return make_node(Expr::Op::Sin, {a});
}

Expr cos(const Expr& a) {
  if (a.is_constant()) return Expr(std::cos(a.constant_value()));
  return make_node(Expr::Op::Cos, {a});
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr(std::exp(a.constant_value()));
  return make_node(Expr::Op::Exp, {a});
}

Expr log(const Expr& a) {
  if (a.is_constant() && a.constant_value() > 0.0) return Expr(std::log(a.constant_value()));
  return make_node(Expr::Op::Log, {a});
}

Expr atan2(const Expr& y, const Expr& x) {
  if (y.is_constant() && x.is_constant()) {
    return Expr(std::atan2(y.constant_value(), x.constant_value()));
  }
  return make_node(Expr::Op::Atan2, {y, x});
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const Expr& e, const Point& p) {
  using Op = Expr::Op;
  const auto args = e.operands();
  switch (e.op()) {
    case Op::Constant:
      return e.constant_value();
    case Op::Variable: {
      const double* v = p.find(e.name());
      if (!v) throw DomainError("unbound variable '" + e.name() + "'", p);
      return *v;
    }
    case Op::TimeFn: {
      if (!e.function()) throw DomainError("unbound time function '" + e.name() + "'", p);
      return (*e.function())(eval_node(args[0], p), e.order());
    }
    case Op::Add:
      return eval_node(args[0], p) + eval_node(args[1], p);
    case Op::Sub:
      return eval_node(args[0], p) - eval_node(args[1], p);
    case Op::Mul:
      return eval_node(args[0], p) * eval_node(args[1], p);
    case Op::Div: {
      const double den = eval_node(args[1], p);
      if (den == 0.0) throw DomainError("division by zero", p);
      return eval_node(args[0], p) / den;
    }
    case Op::Pow: {
      const double b = eval_node(args[0], p);
      const double x = eval_node(args[1], p);
      const double v = std::pow(b, x);
      if (!std::isfinite(v)) throw DomainError("power outside its domain", p);
      return v;
    }
    case Op::Neg:
      return -eval_node(args[0], p);
    case Op::Sin:
      return std::sin(eval_node(args[0], p));
    case Op::Cos:
      return std::cos(eval_node(args[0], p));
    case Op::Exp:
      return std::exp(eval_node(args[0], p));
    case Op::Log: {
      const double v = eval_node(args[0], p);
      if (!(v > 0.0)) throw DomainError("logarithm of a non-positive value", p);
      return std::log(v);
    }
    case Op::Atan2: {
      const double y = eval_node(args[0], p);
      const double x = eval_node(args[1], p);
      if (y == 0.0 && x == 0.0) throw DomainError("atan2(0, 0)", p);
      return std::atan2(y, x);
    }
  }
  return 0.0;
}

}  // namespace

double Expr::evaluate(const Point& point) const {
  const double v = eval_node(*this, point);
  if (!std::isfinite(v)) throw DomainError("non-finite value", point);
  return v;
}

// ---------------------------------------------------------------------------
// Printing

std::string Expr::to_string() const {
  using Op = Expr::Op;
  std::ostringstream os;
  os.precision(17);
  const auto args = operands();
  auto bin = [&](const char* sym) {
    os << '(' << args[0].to_string() << ' ' << sym << ' ' << args[1].to_string() << ')';
  };
  auto fn = [&](const char* name) { os << name << '(' << args[0].to_string() << ')'; };
  switch (op()) {
    case Op::Constant: os << constant_value(); break;
    case Op::Variable: os << name(); break;
    case Op::TimeFn:
      os << name() << std::string(static_cast<std::size_t>(order()), '\'') << '('
         << args[0].to_string() << ')';
      break;
    case Op::Add: bin("+"); break;
    case Op::Sub: bin("-"); break;
    case Op::Mul: bin("*"); break;
    case Op::Div: bin("/"); break;
    case Op::Pow: bin("^"); break;
    case Op::Neg: os << "-(" << args[0].to_string() << ')'; break;
    case Op::Sin: fn("sin"); break;
    case Op::Cos: fn("cos"); break;
    case Op::Exp: fn("exp"); break;
    case Op::Log: fn("ln"); break;
    case Op::Atan2:
      os << "atan2(" << args[0].to_string() << ", " << args[1].to_string() << ')';
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

using DerivativeCache = std::unordered_map<const void*, Expr>;

Expr differentiate_node(const Expr& e, std::string_view var, DerivativeCache& cache);

/// Memoized on node identity so that shared subtrees keep shared derivatives.
Expr diff(const Expr& e, std::string_view var, DerivativeCache& cache) {
  if (const auto it = cache.find(e.identity()); it != cache.end()) return it->second;
  Expr d = differentiate_node(e, var, cache);
  cache.emplace(e.identity(), d);
  return d;
}

Expr differentiate_node(const Expr& e, std::string_view var, DerivativeCache& cache) {
  using Op = Expr::Op;
  const auto a = e.operands();
  const auto differentiate = [&](const Expr& u, std::string_view v) { return diff(u, v, cache); };
  switch (e.op()) {
    case Op::Constant:
      return Expr(0.0);
    case Op::Variable:
      return Expr(e.name() == var ? 1.0 : 0.0);
    case Op::TimeFn: {
      const Expr inner = differentiate(a[0], var);
      if (inner.is_constant(0.0)) return Expr(0.0);
      Expr next = e.function() ? Expr::time_function(e.function(), e.order() + 1, a[0])
                               : Expr::time_function_ref(e.name(), e.order() + 1, a[0]);
      return next * inner;
    }
    case Op::Add:
      return differentiate(a[0], var) + differentiate(a[1], var);
    case Op::Sub:
      return differentiate(a[0], var) - differentiate(a[1], var);
    case Op::Neg:
      return -differentiate(a[0], var);
    case Op::Mul:
      return differentiate(a[0], var) * a[1] + a[0] * differentiate(a[1], var);
    case Op::Div: {
      const Expr du = differentiate(a[0], var);
      const Expr dv = differentiate(a[1], var);
      if (dv.is_constant(0.0)) return du / a[1];
      return (du * a[1] - a[0] * dv) / (a[1] * a[1]);
    }
    case Op::Pow: {
      const Expr& u = a[0];
      const Expr& v = a[1];
      const Expr du = differentiate(u, var);
      const Expr dv = differentiate(v, var);
      if (dv.is_constant(0.0)) {
        if (du.is_constant(0.0)) return Expr(0.0);
        return v * pow(u, v - Expr(1.0)) * du;
      }
      if (du.is_constant(0.0)) return e * log(u) * dv;
      return e * (dv * log(u) + v * du / u);
    }
    case Op::Sin:
      return cos(a[0]) * differentiate(a[0], var);
    case Op::Cos:
      return -(sin(a[0]) * differentiate(a[0], var));
    case Op::Exp:
      return e * differentiate(a[0], var);
    case Op::Log:
      return differentiate(a[0], var) / a[0];
    case Op::Atan2: {
      const Expr& y = a[0];
      const Expr& x = a[1];
      const Expr num = x * differentiate(y, var) - y * differentiate(x, var);
      if (num.is_constant(0.0)) return Expr(0.0);
      return num / (x * x + y * y);
    }
  }
  return Expr(0.0);
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) {
  DerivativeCache cache;
  return diff(e, var, cache);
}

Expr differentiate(const Expr& e, std::string_view var, int times) {
  Expr result = e;
  for (int i = 0; i < times; ++i) result = differentiate(result, var);
  return result;
}

// ---------------------------------------------------------------------------
// Structural queries and rewriting

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  if (e.op() == Expr::Op::TimeFn) {
    return e.function() ? Expr::time_function(e.function(), e.order(), std::move(args[0]))
                        : Expr::time_function_ref(e.name(), e.order(), std::move(args[0]));
  }
  return Expr::make(e.op(), std::move(args));
}

template <class Leaf>
Expr transform(const Expr& e, Leaf&& leaf) {
  if (auto replaced = leaf(e)) return *replaced;
  const auto args = e.operands();
  if (args.empty()) return e;
  std::vector<Expr> next;
  next.reserve(args.size());
  bool changed = false;
  for (const auto& arg : args) {
    next.push_back(transform(arg, leaf));
    changed = changed || !next.back().same_node(arg);
  }
  if (!changed) return e;
  return rebuild(e, std::move(next));
}

template <class Visit>
void visit(const Expr& e, Visit&& f) {
  f(e);
  for (const auto& arg : e.operands()) visit(arg, f);
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  return transform(e, [&](const Expr& node) -> std::optional<Expr> {
    if (node.op() != Expr::Op::Variable) return std::nullopt;
    auto it = replacements.find(node.name());
    if (it == replacements.end()) return node;
    return it->second;
  });
}

bool depends_on(const Expr& e, std::string_view var) {
  bool found = false;
  visit(e, [&](const Expr& node) {
    if (node.op() == Expr::Op::Variable && node.name() == var) found = true;
  });
  return found;
}

bool contains_time_functions(const Expr& e) {
  bool found = false;
  visit(e, [&](const Expr& node) {
    if (node.op() == Expr::Op::TimeFn) found = true;
  });
  return found;
}

std::vector<std::string> free_variables(const Expr& e) {
  std::set<std::string> names;
  visit(e, [&](const Expr& node) {
    if (node.op() == Expr::Op::Variable) names.insert(node.name());
  });
  return {names.begin(), names.end()};
}

Expr bind(const Expr& e, const TimeFunctionRegistry& registry) {
  return transform(e, [&](const Expr& node) -> std::optional<Expr> {
    if (node.op() != Expr::Op::TimeFn) return std::nullopt;
    Expr arg = bind(node.operands()[0], registry);
    if (node.function()) return Expr::time_function(node.function(), node.order(), arg);
    auto it = registry.find(node.name());
    if (it == registry.end()) {
      throw std::invalid_argument("unbound time function '" + node.name() + "'");
    }
    return Expr::time_function(it->second, node.order(), arg);
  });
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 0;
  visit(e, [&](const Expr&) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

CompiledExprs::CompiledExprs(std::span<const Expr> roots) {
  std::unordered_map<const void*, std::size_t> slot;
  // Iterative post-order over the DAG.
  std::vector<std::pair<Expr, bool>> stack;
  for (const auto& root : roots) {
    stack.emplace_back(root, false);
    while (!stack.empty()) {
      auto [e, expanded] = stack.back();
      stack.pop_back();
      if (slot.contains(e.identity())) continue;
      const auto args = e.operands();
      if (!expanded) {
        stack.emplace_back(e, true);
        for (auto it = args.rbegin(); it != args.rend(); ++it) {
          if (!slot.contains(it->identity())) stack.emplace_back(*it, false);
        }
        continue;
      }
      Instruction ins;
      ins.op = e.op();
      if (e.op() == Expr::Op::Constant) ins.value = e.constant_value();
      if (e.op() == Expr::Op::Variable || e.op() == Expr::Op::TimeFn) ins.name = e.name();
      if (e.op() == Expr::Op::TimeFn) {
        ins.fn = e.function().get();
        ins.order = e.order();
      }
      if (!args.empty()) ins.a = slot.at(args[0].identity());
      if (args.size() > 1) ins.b = slot.at(args[1].identity());
      slot.emplace(e.identity(), code_.size());
      code_.push_back(std::move(ins));
    }
    roots_.push_back(slot.at(root.identity()));
  }
}

std::vector<double> CompiledExprs::evaluate(const Point& p) const {
  using Op = Expr::Op;
  std::vector<double> v(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instruction& ins = code_[i];
    const double a = v[ins.a];
    const double b = v[ins.b];
    switch (ins.op) {
      case Op::Constant: v[i] = ins.value; break;
      case Op::Variable: {
        const double* x = p.find(ins.name);
        if (!x) throw DomainError("unbound variable '" + ins.name + "'", p);
        v[i] = *x;
        break;
      }
      case Op::TimeFn:
        if (!ins.fn) throw DomainError("unbound time function '" + ins.name + "'", p);
        v[i] = (*ins.fn)(a, ins.order);
        break;
      case Op::Add: v[i] = a + b; break;
      case Op::Sub: v[i] = a - b; break;
      case Op::Mul: v[i] = a * b; break;
      case Op::Div:
        if (b == 0.0) throw DomainError("division by zero", p);
        v[i] = a / b;
        break;
      case Op::Pow:
        v[i] = std::pow(a, b);
        if (!std::isfinite(v[i])) throw DomainError("power outside its domain", p);
        break;
      case Op::Neg: v[i] = -a; break;
      case Op::Sin: v[i] = std::sin(a); break;
      case Op::Cos: v[i] = std::cos(a); break;
      case Op::Exp: v[i] = std::exp(a); break;
      case Op::Log:
        if (!(a > 0.0)) throw DomainError("logarithm of a non-positive value", p);
        v[i] = std::log(a);
        break;
      case Op::Atan2:
        if (a == 0.0 && b == 0.0) throw DomainError("atan2(0, 0)", p);
        v[i] = std::atan2(a, b);
        break;
    }
  }
  std::vector<double> out;
  out.reserve(roots_.size());
  for (auto r : roots_) {
    if (!std::isfinite(v[r])) throw DomainError("non-finite value", p);
    out.push_back(v[r]);
  }
  return out;
}

}  // namespace vortlab
