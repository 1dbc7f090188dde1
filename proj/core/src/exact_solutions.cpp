#include "vortlab/exact_solutions.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace vortlab {

namespace {

Expr variable(std::string_view name) { return Expr::variable(std::string(name)); }

}  // namespace

double rossby_frequency(double k, double l, double beta) {
  const double k2 = k * k + l * l;
  if (!(k2 > 0.0)) throw std::invalid_argument("rossby wave: k = l = 0");
  return -beta * k / k2;
}

AnalyticField rossby_wave(double amplitude, double k, double l, double beta) {
  const double sigma = rossby_frequency(k, l, beta);
  const Expr phase = Expr(k) * variable(var::x) + Expr(l) * variable(var::y) -
                     Expr(sigma) * variable(var::t);
  return AnalyticField(Expr(amplitude) * sin(phase), Frame::Cartesian);
}

// ---------------------------------------------------------------------------

KGSolutionSpec KGSolutionSpec::harmonic(double amplitude, double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("KGSolutionSpec: alpha must be finite and nonzero");
  }
  KGSolutionSpec s;
  s.kind = Kind::Harmonic;
  s.amplitude = amplitude;
  s.alpha = alpha;
  return s;
}

KGSolutionSpec KGSolutionSpec::custom(Expr field) {
  for (const auto& v : free_variables(field)) {
    if (v != "p" && v != "q") {
      throw std::invalid_argument("KGSolutionSpec: custom field uses variable '" + v +
                                  "' (only p and q allowed)");
    }
  }
  KGSolutionSpec s;
  s.kind = Kind::Custom;
  s.field = std::move(field);
  return s;
}

double KGSolutionSpec::gamma(double beta) const { return beta / alpha; }

namespace {

struct GaussLegendre {
  static constexpr int kNodes = 32;
  std::array<double, kNodes> nodes{};
  std::array<double, kNodes> weights{};

  GaussLegendre() {
    for (int i = 0; i < kNodes; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kNodes + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int n = 2; n <= kNodes; ++n) {
          const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
          p0 = p1;
          p1 = p2;
        }
        dp = kNodes * (x * p1 - p0) / (x * x - 1.0);
        const double step = p1 / dp;
        x -= step;
        if (std::abs(step) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

/// integral_0^t w(s) ds over panels of width <= 1.
double integrate_panels(const std::function<double(double)>& w, double t) {
  if (t == 0.0) return 0.0;
  const auto& rule = gauss_legendre();
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(t))));
  const double h = t / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    double panel = 0.0;
    for (int i = 0; i < GaussLegendre::kNodes; ++i) {
      panel += rule.weights[static_cast<std::size_t>(i)] *
               w(mid + 0.5 * h * rule.nodes[static_cast<std::size_t>(i)]);
    }
    sum += 0.5 * h * panel;
  }
  return sum;
}

class QuadratureCache {
 public:
  explicit QuadratureCache(TimeFunctionPtr f) : f_(std::move(f)) {}

  double operator()(double t) {
    {
      std::lock_guard lock(mutex_);
      if (const auto it = cache_.find(t); it != cache_.end()) return it->second;
    }
    const auto& f = *f_;
    const double value = integrate_panels(
        [&f](double s) {
          const double v = f(s);
          return 1.0 / (1.0 + v * v);
        },
        t);
    std::lock_guard lock(mutex_);
    cache_.emplace(t, value);
    return value;
  }

 private:
  TimeFunctionPtr f_;
  std::mutex mutex_;
  std::map<double, double> cache_;
};

}  // namespace

TimeFunctionPtr reduced_time(TimeFunctionPtr f) {
  if (!f) throw std::invalid_argument("reduced_time: missing f");
  std::function<double(double)> value;
  const auto& poly = f->polynomial_coefficients();
  if (poly && poly->size() <= 1) {
    const double c = poly->empty() ? 0.0 : (*poly)[0];
    value = [c](double t) { return t / (1.0 + c * c); };
  } else if (poly && poly->size() == 2 && (*poly)[1] != 0.0) {
    const double a = (*poly)[0], b = (*poly)[1];
    value = [a, b](double t) { return (std::atan(a + b * t) - std::atan(a)) / b; };
  } else {
    auto cache = std::make_shared<QuadratureCache>(f);
    value = [cache](double t) { return (*cache)(t); };
  }
  auto d1 = [f](double t) {
    const double v = (*f)(t);
    return 1.0 / (1.0 + v * v);
  };
  auto d2 = [f](double t) {
    const double v = (*f)(t), v1 = (*f)(t, 1);
    const double s = 1.0 + v * v;
    return -2.0 * v * v1 / (s * s);
  };
  auto d3 = [f](double t) {
    const double v = (*f)(t), v1 = (*f)(t, 1), v2 = (*f)(t, 2);
    const double s = 1.0 + v * v;
    return -2.0 * (v1 * v1 + v * v2) / (s * s) + 8.0 * v * v * v1 * v1 / (s * s * s);
  };
  return share(TimeFunction::from_derivatives("q~[" + f->name() + "]", {value, d1, d2, d3}));
}

AnalyticField klein_gordon_lift(TimeFunctionPtr f, TimeFunctionPtr h, double beta,
                                const KGSolutionSpec& spec) {
  if (beta == 0.0) {
    throw std::invalid_argument("klein_gordon_lift: beta = 0 makes the reduction singular");
  }
  if (!f) throw std::invalid_argument("klein_gordon_lift: missing f");
  const Expr x = variable(var::x);
  const Expr y = variable(var::y);
  const Expr f0 = Expr::time_function(f, 0);
  const Expr f1 = Expr::time_function(f, 1);
  const Expr f2 = Expr::time_function(f, 2);
  const Expr f3 = Expr::time_function(f, 3);
  const Expr q = Expr::time_function(reduced_time(f));
  const Expr p = x - f0 * y;
  const Expr metric = Expr(1.0) + f0 * f0;

  Expr v;
  if (spec.kind == KGSolutionSpec::Kind::Harmonic) {
    v = Expr(spec.amplitude) * sin(Expr(spec.alpha) * p + Expr(spec.gamma(beta)) * q);
  } else {
    v = substitute(spec.field, {{"p", p}, {"q", q}});
  }
  Expr psi = v / metric + f2 / Expr(beta) * p -
             (Expr(2.0) * f0 * f1 * f2 + metric * f3) / Expr(beta * beta) -
             Expr(0.5) * f1 * y * y;
  if (h) psi = psi - Expr::time_function(h) / Expr(beta);
  return AnalyticField(psi, Frame::Cartesian);
}

// ---------------------------------------------------------------------------

PartialInvariantSpec PartialInvariantSpec::eta_constant(Expr harmonic, double eta) {
  PartialInvariantSpec s;
  s.kind = Case::EtaConstant;
  s.harmonic = std::move(harmonic);
  s.eta = Expr(eta);
  return s;
}

PartialInvariantSpec PartialInvariantSpec::eta_time_dependent(Expr harmonic, Expr eta) {
  for (const auto& v : free_variables(eta)) {
    if (v != var::t) throw std::invalid_argument("eta may only depend on t");
  }
  PartialInvariantSpec s;
  s.kind = Case::EtaConstant;
  s.harmonic = std::move(harmonic);
  s.eta = std::move(eta);
  return s;
}

PartialInvariantSpec PartialInvariantSpec::eta_general(Expr profile, TimeFunctionPtr g1,
                                                       TimeFunctionPtr g0, TimeFunctionPtr f1,
                                                       TimeFunctionPtr f0) {
  for (const auto& v : free_variables(profile)) {
    if (v != "omega") {
      throw std::invalid_argument("profile F may only depend on omega, found '" + v + "'");
    }
  }
  PartialInvariantSpec s;
  s.kind = Case::EtaGeneral;
  s.profile = std::move(profile);
  s.g1 = std::move(g1);
  s.g0 = std::move(g0);
  s.f1 = std::move(f1);
  s.f0 = std::move(f0);
  return s;
}

namespace {

void check_harmonic(const Expr& harmonic) {
  const AnalyticField field(harmonic, Frame::Cartesian);
  const Expr laplacian = vorticity_of(field, EquationKind::Cartesian).expr();
  double worst = 0.0;
  Grid::cartesian_default().for_each(
      [&](const Point& p) { worst = std::max(worst, std::abs(laplacian.evaluate(p))); });
  if (worst > 1e-10) {
    throw std::invalid_argument("partially_invariant: Psi is not harmonic (max |Laplacian| = " +
                                std::to_string(worst) + ")");
  }
}

void check_nonvanishing(const TimeFunction& g1, double a, double b) {
  const auto samples = Grid::linspace(a, b, 401);
  double first = g1(samples.front());
  for (double t : samples) {
    const double v = g1(t);
    if (std::abs(v) < 1e-12 || (v > 0.0) != (first > 0.0)) {
      throw std::domain_error("partially_invariant: g1 vanishes on the window near t = " +
                              std::to_string(t));
    }
  }
}

Expr optional_tf(const TimeFunctionPtr& f, int order = 0) {
  return f ? Expr::time_function(f, order) : Expr(0.0);
}

}  // namespace

AnalyticField partially_invariant(const PartialInvariantSpec& spec, double beta) {
  const Expr y = variable(var::y);
  const Expr cubic = Expr(beta / 6.0) * y * y * y;
  if (spec.kind == PartialInvariantSpec::Case::EtaConstant) {
    check_harmonic(spec.harmonic);
    return AnalyticField(spec.harmonic - cubic + Expr(0.5) * spec.eta * y * y, Frame::Cartesian);
  }
  if (!spec.g1) throw std::invalid_argument("partially_invariant: missing g1");
  if (!(spec.window_end >= spec.window_begin)) {
    throw std::invalid_argument("partially_invariant: empty window");
  }
  check_nonvanishing(*spec.g1, spec.window_begin, spec.window_end);
  const Expr x = variable(var::x);
  const Expr g1 = Expr::time_function(spec.g1);
  const Expr g1t = Expr::time_function(spec.g1, 1);
  const Expr g0 = optional_tf(spec.g0);
  const Expr g0t = optional_tf(spec.g0, 1);
  const Expr omega = g1 * y + g0;
  const Expr profile = substitute(spec.profile, {{"omega", omega}});
  const Expr psi = profile / (g1 * g1) - cubic - (g1t * y + g0t) / g1 * x +
                   optional_tf(spec.f1) * y + optional_tf(spec.f0);
  return AnalyticField(psi, Frame::Cartesian);
}

}  // namespace vortlab
