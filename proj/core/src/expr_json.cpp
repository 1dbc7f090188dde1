#include "vortlab/expr_json.hpp"

#include <set>
#include <stdexcept>

namespace vortlab {

using nlohmann::json;

namespace {

const char* op_symbol(Expr::Op op) {
  switch (op) {
    case Expr::Op::Add: return "+";
    case Expr::Op::Sub: return "-";
    case Expr::Op::Mul: return "*";
    case Expr::Op::Div: return "/";
    case Expr::Op::Pow: return "^";
    case Expr::Op::Neg: return "-";
    case Expr::Op::Sin: return "sin";
    case Expr::Op::Cos: return "cos";
    case Expr::Op::Exp: return "exp";
    case Expr::Op::Log: return "ln";
    case Expr::Op::Atan2: return "atan2";
    default: return "";
  }
}

bool is_t(const Expr& e) { return e.op() == Expr::Op::Variable && e.name() == "t"; }

[[noreturn]] void fail(const std::string& what, const json& j) {
  throw std::invalid_argument("expression JSON: " + what + " in " + j.dump());
}

}  // namespace

json to_json(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::Constant:
      return e.constant_value();
    case Expr::Op::Variable:
      return json::array({"var", e.name()});
    case Expr::Op::TimeFn: {
      json out = json::array({"tf", e.name()});
      const Expr& arg = e.operands()[0];
      if (e.order() != 0 || !is_t(arg)) out.push_back(e.order());
      if (!is_t(arg)) out.push_back(to_json(arg));
      return out;
    }
    default: {
      json out = json::array({op_symbol(e.op())});
      for (const auto& arg : e.operands()) out.push_back(to_json(arg));
      return out;
    }
  }
}

Expr expr_from_json(const json& j, const TimeFunctionRegistry& registry) {
  if (j.is_number()) return Expr(j.get<double>());
  if (!j.is_array() || j.empty() || !j[0].is_string()) fail("expected number or [op, ...]", j);
  const std::string op = j[0].get<std::string>();
  const std::size_t n = j.size() - 1;
  auto arg = [&](std::size_t i) { return expr_from_json(j[i], registry); };
  auto need = [&](std::size_t count) {
    if (n != count) fail("operator '" + op + "' expects " + std::to_string(count) + " operands", j);
  };

  if (op == "const") {
    need(1);
    if (!j[1].is_number()) fail("const expects a number", j);
    return Expr(j[1].get<double>());
  }
  if (op == "var") {
    need(1);
    if (!j[1].is_string()) fail("var expects a name", j);
    return Expr::variable(j[1].get<std::string>());
  }
  if (op == "tf") {
    if (n < 1 || n > 3 || !j[1].is_string()) fail("tf expects [\"tf\", name, order?, arg?]", j);
    const std::string name = j[1].get<std::string>();
    int order = 0;
    if (n >= 2) {
      if (!j[2].is_number_integer() || j[2].get<int>() < 0) fail("tf order must be >= 0", j);
      order = j[2].get<int>();
    }
    Expr argument = n == 3 ? arg(3) : Expr::variable("t");
    if (auto it = registry.find(name); it != registry.end()) {
      return Expr::time_function(it->second, order, argument);
    }
    return Expr::time_function_ref(name, order, argument);
  }
  if (op == "+" || op == "*") {
    if (n < 2) fail("operator '" + op + "' expects at least 2 operands", j);
    Expr acc = arg(1);
    for (std::size_t i = 2; i <= n; ++i) acc = op == "+" ? acc + arg(i) : acc * arg(i);
    return acc;
  }
  if (op == "-") {
    if (n == 1) return -arg(1);
    need(2);
    return arg(1) - arg(2);
  }
  if (op == "/") { need(2); return arg(1) / arg(2); }
  if (op == "^") { need(2); return pow(arg(1), arg(2)); }
  if (op == "atan2") { need(2); return atan2(arg(1), arg(2)); }
  if (op == "sin") { need(1); return sin(arg(1)); }
  if (op == "cos") { need(1); return cos(arg(1)); }
  if (op == "exp") { need(1); return exp(arg(1)); }
  if (op == "ln") { need(1); return log(arg(1)); }
  fail("unknown operator '" + op + "'", j);
}

namespace {

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw std::invalid_argument(std::string("time function: key '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

void check_keys(const json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument("time function: unknown key '" + key + "'");
    }
  }
}

}  // namespace

TimeFunction time_function_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("time function: expected an object");
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw std::invalid_argument("time function: missing key 'name'");
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw std::invalid_argument("time function: missing key 'kind'");
  }
  const auto name = j.at("name").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    check_keys(j, {"name", "kind", "value"});
    return TimeFunction::constant(name, number(j, "value", 0.0));
  }
  if (kind == "polynomial") {
    check_keys(j, {"name", "kind", "coefficients"});
    if (!j.contains("coefficients") || !j.at("coefficients").is_array()) {
      throw std::invalid_argument("time function: key 'coefficients' must be an array");
    }
    return TimeFunction::polynomial(name, j.at("coefficients").get<std::vector<double>>());
  }
  if (kind == "exponential") {
    check_keys(j, {"name", "kind", "rate", "amplitude"});
    return TimeFunction::exponential(name, number(j, "rate", 1.0), number(j, "amplitude", 1.0));
  }
  if (kind == "linear_exponential") {
    check_keys(j, {"name", "kind", "c0", "c1", "rate"});
    return TimeFunction::linear_exponential(name, number(j, "c0", 0.0), number(j, "c1", 0.0),
                                            number(j, "rate", 0.0));
  }
  if (kind == "sinusoid") {
    check_keys(j, {"name", "kind", "amplitude", "frequency", "phase"});
    return TimeFunction::sinusoid(name, number(j, "amplitude", 1.0), number(j, "frequency", 1.0),
                                  number(j, "phase", 0.0));
  }
  if (kind == "abs_power") {
    check_keys(j, {"name", "kind", "exponent"});
    return TimeFunction::abs_power(name, number(j, "exponent", 1.0));
  }
  throw std::invalid_argument("time function: unknown kind '" + kind + "'");
}

TimeFunctionRegistry registry_from_json(const json& array) {
  if (!array.is_array()) throw std::invalid_argument("time functions: expected an array");
  TimeFunctionRegistry registry;
  for (const auto& item : array) {
    auto f = time_function_from_json(item);
    const std::string name = f.name();
    if (!registry.emplace(name, share(std::move(f))).second) {
      throw std::invalid_argument("time functions: duplicate name '" + name + "'");
    }
  }
  return registry;
}

}  // namespace vortlab
