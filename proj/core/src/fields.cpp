#include "vortlab/fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vortlab {

std::array<std::string_view, 3> coordinate_names(Frame frame) {
  if (frame == Frame::Spherical) return {var::t, var::lambda, var::mu};
  return {var::t, var::x, var::y};
}

std::string_view frame_name(Frame frame) {
  return frame == Frame::Spherical ? "spherical" : "cartesian";
}

std::string_view equation_kind_name(EquationKind kind) {
  switch (kind) {
    case EquationKind::Cartesian: return "cartesian";
    case EquationKind::Spherical: return "spherical";
    case EquationKind::Potential: return "potential";
  }
  return "";
}

AnalyticField::AnalyticField(Expr expr, Frame frame) : expr_(std::move(expr)), frame_(frame) {
  const auto names = coordinate_names(frame_);
  for (const auto& v : free_variables(expr_)) {
    if (std::find(names.begin(), names.end(), v) == names.end()) {
      throw std::invalid_argument("AnalyticField: variable '" + v + "' is not a " +
                                  std::string(frame_name(frame_)) + " coordinate");
    }
  }
}

AnalyticField AnalyticField::derivative(std::string_view variable, int times) const {
  return AnalyticField(differentiate(expr_, variable, times), frame_);
}

double eval_derivatives(const AnalyticField& f, const Point& point, DerivativeOrders orders) {
  if (orders.t < 0 || orders.first < 0 || orders.second < 0) {
    throw std::invalid_argument("eval_derivatives: negative derivative order");
  }
  if (orders.total() > 3) {
    throw std::invalid_argument("eval_derivatives: total derivative order exceeds 3");
  }
  const auto names = coordinate_names(f.frame());
  Expr e = differentiate(f.expr(), names[0], orders.t);
  e = differentiate(e, names[1], orders.first);
  e = differentiate(e, names[2], orders.second);
  return e.evaluate(point);
}

// ---------------------------------------------------------------------------

EquationParams EquationParams::cartesian(double beta) {
  EquationParams p;
  p.kind = EquationKind::Cartesian;
  p.beta = beta;
  p.validate();
  return p;
}

EquationParams EquationParams::spherical(double omega, double radius) {
  EquationParams p;
  p.kind = EquationKind::Spherical;
  p.omega = omega;
  p.radius = radius;
  p.validate();
  return p;
}

EquationParams EquationParams::potential(double beta, double deformation) {
  EquationParams p;
  p.kind = EquationKind::Potential;
  p.beta = beta;
  p.deformation = deformation;
  p.validate();
  return p;
}

void EquationParams::validate() const {
  if (!std::isfinite(beta) || !std::isfinite(omega) || !std::isfinite(radius) ||
      !std::isfinite(deformation)) {
    throw std::invalid_argument("EquationParams: non-finite parameter");
  }
  if (kind == EquationKind::Spherical && !(radius > 0.0)) {
    throw std::invalid_argument("EquationParams: radius a must be > 0");
  }
  if (kind == EquationKind::Potential && !(deformation > 0.0)) {
    throw std::invalid_argument("EquationParams: F must be > 0 for the potential equation");
  }
}

// ---------------------------------------------------------------------------

AnalyticField vorticity_of(const AnalyticField& psi, EquationKind kind, double radius) {
  const bool spherical = kind == EquationKind::Spherical;
  if (spherical != (psi.frame() == Frame::Spherical)) {
    throw std::invalid_argument("vorticity_of: field frame does not match the equation kind");
  }
  if (!spherical) {
    const auto& e = psi.expr();
    return AnalyticField(differentiate(e, var::x, 2) + differentiate(e, var::y, 2), psi.frame());
  }
  if (!(radius > 0.0)) throw std::invalid_argument("vorticity_of: radius must be > 0");
  const Expr mu = Expr::variable(std::string(var::mu));
  const Expr metric = Expr(1.0) - mu * mu;
  const auto& e = psi.expr();
  const Expr zonal = differentiate(metric * differentiate(e, var::mu), var::mu);
  const Expr azimuthal = differentiate(e, var::lambda, 2) / metric;
  return AnalyticField((azimuthal + zonal) / Expr(radius * radius), Frame::Spherical);
}

// ---------------------------------------------------------------------------

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("Grid: no axes");
  for (const auto& axis : axes_) {
    if (axis.samples.empty()) throw std::invalid_argument("Grid: axis '" + axis.name + "' is empty");
    for (std::size_t i = 1; i < axis.samples.size(); ++i) {
      if (!(axis.samples[i] > axis.samples[i - 1])) {
        throw std::invalid_argument("Grid: axis '" + axis.name + "' is not strictly increasing");
      }
    }
    if (axis.name == var::mu) {
      for (double m : axis.samples) {
        if (std::abs(m) >= 1.0) {
          throw std::domain_error("Grid: mu = " + std::to_string(m) +
                                  " reaches a pole (|mu| must be < 1)");
        }
      }
    }
  }
}

std::vector<double> Grid::linspace(double a, double b, std::size_t n, bool include_end) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double denom = include_end ? static_cast<double>(n - 1) : static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / denom;
  return out;
}

Grid Grid::cartesian_default() {
  const auto s = linspace(-1.0, 1.0, 11);
  return Grid({{"t", s}, {"x", s}, {"y", s}});
}

Grid Grid::spherical_default() {
  return Grid({{"t", linspace(0.0, 1.0, 5)},
               {"lambda", linspace(0.0, 2.0 * std::numbers::pi, 16, false)},
               {"mu", linspace(-0.9, 0.9, 13)}});
}

Grid Grid::default_for(Frame frame) {
  return frame == Frame::Spherical ? spherical_default() : cartesian_default();
}

std::size_t Grid::size() const noexcept {
  std::size_t n = 1;
  for (const auto& axis : axes_) n *= axis.samples.size();
  return n;
}

bool Grid::has_axis(std::string_view name) const noexcept {
  return std::any_of(axes_.begin(), axes_.end(), [&](const Axis& a) { return a.name == name; });
}

void Grid::for_each(const std::function<void(const Point&)>& visit) const {
  Point p;
  for (const auto& axis : axes_) p.set(axis.name, axis.samples.front());
  std::vector<std::size_t> idx(axes_.size(), 0);
  const std::size_t total = size();
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t a = 0; a < axes_.size(); ++a) p.set(axes_[a].name, axes_[a].samples[idx[a]]);
    visit(p);
    for (std::size_t a = axes_.size(); a-- > 0;) {
      if (++idx[a] < axes_[a].samples.size()) break;
      idx[a] = 0;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

/// Derivative fields entering the residual, built once per call.
struct ResidualTerms {
  Expr psi_t, psi_1, psi_2, zeta_t, zeta_1, zeta_2;

  CompiledExprs compile() const {
    const std::array<Expr, 6> all{psi_t, psi_1, psi_2, zeta_t, zeta_1, zeta_2};
    return CompiledExprs(all);
  }
};

ResidualTerms build_terms(const AnalyticField& psi, const EquationParams& params) {
  params.validate();
  if (psi.frame() != params.frame()) {
    throw std::invalid_argument("residual: field frame does not match the equation kind");
  }
  const auto names = coordinate_names(psi.frame());
  const Expr zeta = vorticity_of(psi, params.kind, params.radius).expr();
  ResidualTerms terms;
  if (params.kind == EquationKind::Potential) terms.psi_t = differentiate(psi.expr(), names[0]);
  terms.psi_1 = differentiate(psi.expr(), names[1]);
  terms.psi_2 = differentiate(psi.expr(), names[2]);
  terms.zeta_t = differentiate(zeta, names[0]);
  terms.zeta_1 = differentiate(zeta, names[1]);
  terms.zeta_2 = differentiate(zeta, names[2]);
  return terms;
}

double evaluate_terms(const CompiledExprs& r, const EquationParams& params, const Point& p) {
  const auto v = r.evaluate(p);
  const double psi_t = v[0], psi_1 = v[1], psi_2 = v[2];
  const double zeta_t = v[3], zeta_1 = v[4], zeta_2 = v[5];
  const double jacobian = psi_1 * zeta_2 - psi_2 * zeta_1;
  switch (params.kind) {
    case EquationKind::Cartesian:
      return zeta_t + jacobian + params.beta * psi_1;
    case EquationKind::Potential:
      return zeta_t - params.deformation * psi_t + jacobian + params.beta * psi_1;
    case EquationKind::Spherical: {
      const double a2 = params.radius * params.radius;
      return zeta_t + jacobian / a2 + 2.0 * params.omega * psi_1 / a2;
    }
  }
  return 0.0;
}

void check_pole(const EquationParams& params, const Point& p) {
  if (params.kind != EquationKind::Spherical) return;
  if (const double* mu = p.find(var::mu); mu && std::abs(*mu) >= 1.0) {
    throw DomainError("pole proximity: |mu| >= 1", p);
  }
}

}  // namespace

double residual_at(const AnalyticField& psi, const EquationParams& params, const Point& point) {
  check_pole(params, point);
  return evaluate_terms(build_terms(psi, params).compile(), params, point);
}

ResidualReport residual(const AnalyticField& psi, const EquationParams& params, const Grid& grid) {
  const auto names = coordinate_names(psi.frame());
  for (const auto& n : names) {
    if (!grid.has_axis(n)) {
      throw std::invalid_argument("residual: grid lacks coordinate '" + std::string(n) + "'");
    }
  }
  const CompiledExprs terms = build_terms(psi, params).compile();
  ResidualReport report;
  double sum_sq = 0.0;
  bool first = true;
  grid.for_each([&](const Point& p) {
    check_pole(params, p);
    const double r = std::abs(evaluate_terms(terms, params, p));
    sum_sq += r * r;
    ++report.n_points;
    if (first || r > report.max_abs) {
      report.max_abs = r;
      report.worst_point = p;
      first = false;
    }
  });
  report.rms = std::sqrt(sum_sq / static_cast<double>(report.n_points));
  return report;
}

}  // namespace vortlab
