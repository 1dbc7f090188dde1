#include "vortlab/optimal_system.hpp"

#include <cmath>
#include <stdexcept>

namespace vortlab::optimal_system {

namespace {

using namespace generators;

Expr tvar() { return Expr::variable("t"); }

/// |t|^p as an expression; derivatives are exact for t != 0.
Expr abs_power(double p) {
  return Expr::time_function(share(TimeFunction::abs_power("|t|^" + Expr(p).to_string(), p)));
}

std::string num(double v) { return Expr(v).to_string(); }

SubalgebraSpec make(std::string family, std::vector<GeneratorField> gens) {
  SubalgebraSpec s;
  s.family = std::move(family);
  s.generators = std::move(gens);
  return s;
}

TimeFunctionPtr require(const TimeFunctionPtr& f, const char* name) {
  if (!f) throw std::invalid_argument(std::string("optimal_system: missing function ") + name);
  return f;
}

}  // namespace

SubalgebraSpec dilation() { return make("<D>", {generators::dilation()}); }

SubalgebraSpec time_translation(double c) {
  if (c != 0.0 && c != 1.0 && c != -1.0) {
    throw std::invalid_argument("optimal_system: c must be 0 or +-1");
  }
  auto g = generators::time_translation() + c * generators::y_translation();
  SubalgebraSpec s = make("<d_t + c d_y>", {g.with_label("d_t + " + num(c) + " d_y")});
  s.c = c;
  return s;
}

SubalgebraSpec y_translation(TimeFunctionPtr f) {
  require(f, "f");
  return make("<d_y + X(f)>", {(generators::y_translation() + x_shift(f))
                                   .with_label("d_y + X(" + f->name() + ")")});
}

SubalgebraSpec shift(TimeFunctionPtr f, TimeFunctionPtr g) {
  require(f, "f");
  require(g, "g");
  return make("<X(f) + Z(g)>",
              {(x_shift(f) + psi_shift(g)).with_label("X(" + f->name() + ") + Z(" + g->name() + ")")});
}

SubalgebraSpec dilation_time() {
  return make("<D, d_t>", {generators::dilation(), generators::time_translation()});
}

SubalgebraSpec dilation_y(double a) {
  SubalgebraSpec s = make("<D, d_y + a X(1)>",
                          {generators::dilation(), generators::y_translation() + a * x_shift(Expr(1.0))});
  s.a = a;
  return s;
}

SubalgebraSpec dilation_shift(double a, double c) {
  SubalgebraSpec s = make("<D, X(|t|^a) + c Z(|t|^(a-2))>",
                          {generators::dilation(), x_shift(abs_power(a)) + c * psi_shift(abs_power(a - 2.0))});
  s.a = a;
  s.c = c;
  return s;
}

SubalgebraSpec dilation_psi(double a) {
  SubalgebraSpec s = make("<D, Z(|t|^(a-2))>", {generators::dilation(), psi_shift(abs_power(a - 2.0))});
  s.a = a;
  return s;
}

SubalgebraSpec time_exponential_shift(double a, double b, double c) {
  const Expr growth = exp(Expr(a) * tvar());
  const Expr z = (Expr(a * b) * tvar() + Expr(c)) * growth;
  SubalgebraSpec s = make("<d_t + b d_y, X(e^{at}) + Z((abt + c) e^{at})>",
                          {generators::time_translation() + b * generators::y_translation(),
                           x_shift(growth) + psi_shift(z)});
  s.a = a;
  s.b = b;
  s.c = c;
  s.requires_abc_zero = true;
  s.validate();
  return s;
}

SubalgebraSpec time_exponential_psi(double a, double b, double c) {
  const Expr z = (Expr(a * b) * tvar() + Expr(c)) * exp(Expr(a) * tvar());
  SubalgebraSpec s = make("<d_t + b d_y, Z((abt + c) e^{at})>",
                          {generators::time_translation() + b * generators::y_translation(),
                           psi_shift(z)});
  s.a = a;
  s.b = b;
  s.c = c;
  s.requires_abc_zero = true;
  s.validate();
  return s;
}

SubalgebraSpec y_translation_shift(TimeFunctionPtr f1, TimeFunctionPtr g2) {
  require(f1, "f1");
  require(g2, "g2");
  return make("<d_y + X(f1), X(1) + Z(g2)>",
              {generators::y_translation() + x_shift(f1), x_shift(Expr(1.0)) + psi_shift(g2)});
}

SubalgebraSpec y_translation_psi(TimeFunctionPtr f1, TimeFunctionPtr g2) {
  require(f1, "f1");
  require(g2, "g2");
  return make("<d_y + X(f1), Z(g2)>", {generators::y_translation() + x_shift(f1), psi_shift(g2)});
}

SubalgebraSpec shift_pair(TimeFunctionPtr f1, TimeFunctionPtr g1, TimeFunctionPtr f2,
                          TimeFunctionPtr g2) {
  require(f1, "f1");
  require(g1, "g1");
  require(f2, "f2");
  require(g2, "g2");
  return make("<X(f1) + Z(g1), X(f2) + Z(g2)>",
              {x_shift(f1) + psi_shift(g1), x_shift(f2) + psi_shift(g2)});
}

// ---------------------------------------------------------------------------

namespace {

struct Functions {
  TimeFunctionPtr one = share(TimeFunction::constant("1", 1.0));
  TimeFunctionPtr t = share(TimeFunction::polynomial("t", {0.0, 1.0}));
  TimeFunctionPtr t2 = share(TimeFunction::polynomial("t^2", {0.0, 0.0, 1.0}));
  TimeFunctionPtr cubic = share(TimeFunction::polynomial("1-t+t^3/2", {1.0, -1.0, 0.0, 0.5}));
  TimeFunctionPtr sine = share(TimeFunction::sinusoid("sin t", 1.0, 1.0));
  TimeFunctionPtr expo = share(TimeFunction::exponential("e^{t/2}", 0.5));
};

}  // namespace

std::vector<SubalgebraSpec> one_dimensional_instances() {
  const Functions fn;
  std::vector<SubalgebraSpec> out{dilation()};
  for (double c : {-1.0, 0.0, 1.0}) out.push_back(time_translation(c));
  for (const auto& f : {fn.one, fn.t, fn.t2, fn.sine}) out.push_back(y_translation(f));
  out.push_back(shift(fn.one, fn.t));
  out.push_back(shift(fn.sine, fn.cubic));
  out.push_back(shift(fn.expo, fn.t2));
  return out;
}

std::vector<SubalgebraSpec> two_dimensional_instances() {
  const Functions fn;
  std::vector<SubalgebraSpec> out{dilation_time()};
  for (double a : {0.0, 1.0, -2.5}) out.push_back(dilation_y(a));
  for (auto [a, c] : {std::pair{0.5, 1.0}, {2.0, -1.0}, {-1.5, 0.0}, {3.0, 2.0}}) {
    out.push_back(dilation_shift(a, c));
  }
  for (double a : {0.5, 2.0, -1.0}) out.push_back(dilation_psi(a));
  // abc = 0 branches on which the entries are subalgebras.
  for (auto [a, b, c] : {std::tuple{0.0, 1.0, 2.0}, {1.5, 0.0, -1.0}, {-0.7, 0.0, 0.0},
                         {0.0, -2.0, 0.0}}) {
    out.push_back(time_exponential_shift(a, b, c));
  }
  for (auto [a, b, c] : {std::tuple{0.0, 1.0, 2.0}, {1.5, 0.0, -1.0}, {-0.7, 0.0, 0.5},
                         {0.0, -2.0, 3.0}}) {
    out.push_back(time_exponential_psi(a, b, c));
  }
  // The c = 0 branch with ab != 0 is closed for the first entry only.
  out.push_back(time_exponential_shift(0.8, 1.5, 0.0));
  out.push_back(y_translation_shift(fn.t, fn.one));
  out.push_back(y_translation_shift(fn.sine, fn.t2));
  out.push_back(y_translation_psi(fn.t, fn.one));
  out.push_back(y_translation_psi(fn.cubic, fn.sine));
  out.push_back(shift_pair(fn.one, fn.t, fn.t2, fn.sine));
  out.push_back(shift_pair(fn.expo, fn.one, fn.sine, fn.cubic));
  return out;
}

}  // namespace vortlab::optimal_system
