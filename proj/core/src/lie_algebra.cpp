#include "vortlab/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "vortlab/expr_json.hpp"

namespace vortlab {

namespace {

Expr tvar() { return Expr::variable(std::string(var::t)); }

std::array<Expr, 4> jet_exprs(Frame frame) {
  const auto names = jet_variables(frame);
  return {Expr::variable(std::string(names[0])), Expr::variable(std::string(names[1])),
          Expr::variable(std::string(names[2])), Expr::variable(std::string(names[3]))};
}

void require_variables(const Expr& e, std::span<const std::string_view> allowed,
                       const char* what) {
  for (const auto& v : free_variables(e)) {
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      throw std::invalid_argument(std::string("GeneratorField: ") + what + " uses variable '" + v +
                                  "'");
    }
  }
}

Point time_point(double t) {
  Point p;
  p.set(var::t, t);
  return p;
}

const std::array<double, 5> kProbeTimes{-1.3, -0.45, 0.35, 1.2, 2.1};

/// (value at 0, slope) when `e` is numerically affine in t on the probe times.
std::optional<std::pair<double, double>> affine_in_t(const Expr& e) {
  if (e.is_constant()) return std::make_pair(e.constant_value(), 0.0);
  for (const auto& v : free_variables(e)) {
    if (v != var::t) return std::nullopt;
  }
  std::array<double, kProbeTimes.size()> values{};
  try {
    for (std::size_t i = 0; i < kProbeTimes.size(); ++i) {
      values[i] = e.evaluate(time_point(kProbeTimes[i]));
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const double slope = (values[4] - values[0]) / (kProbeTimes[4] - kProbeTimes[0]);
  const double at_zero = values[0] - slope * kProbeTimes[0];
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < kProbeTimes.size(); ++i) {
    if (std::abs(at_zero + slope * kProbeTimes[i] - values[i]) > 1e-12 * scale) return std::nullopt;
  }
  return std::make_pair(at_zero, slope);
}

std::string combine_labels(const std::string& a, const std::string& op, const std::string& b) {
  if (a.empty() || b.empty()) return {};
  return "(" + a + ")" + op + "(" + b + ")";
}

}  // namespace

Expr Coefficient::full(Frame frame) const {
  const auto z = jet_exprs(frame);
  return affine[0] + affine[1] * z[1] + affine[2] * z[2] + affine[3] * z[3] + shape;
}

GeneratorField::GeneratorField(Frame frame, double time_constant, double time_linear,
                               std::array<Coefficient, 3> components, std::string label)
    : frame_(frame),
      time_constant_(time_constant),
      time_linear_(time_linear),
      components_(std::move(components)),
      label_(std::move(label)) {
  if (!std::isfinite(time_constant_) || !std::isfinite(time_linear_)) {
    throw std::invalid_argument("GeneratorField: non-finite time coefficient");
  }
  const std::array<std::string_view, 1> time_only{var::t};
  const auto jet = jet_variables(frame_);
  for (const auto& c : components_) {
    for (const auto& a : c.affine) require_variables(a, time_only, "affine coefficient");
    require_variables(c.shape, jet, "shape");
  }
}

bool GeneratorField::has_shape() const noexcept {
  return std::any_of(components_.begin(), components_.end(),
                     [](const Coefficient& c) { return c.has_shape(); });
}

std::array<Expr, 4> GeneratorField::full_components() const {
  return {Expr(time_constant_) + Expr(time_linear_) * tvar(), components_[0].full(frame_),
          components_[1].full(frame_), components_[2].full(frame_)};
}

std::array<double, 4> GeneratorField::evaluate(const Point& p) const {
  const auto full = full_components();
  return {full[0].evaluate(p), full[1].evaluate(p), full[2].evaluate(p), full[3].evaluate(p)};
}

GeneratorField GeneratorField::with_label(std::string label) const {
  GeneratorField out = *this;
  out.label_ = std::move(label);
  return out;
}

GeneratorField GeneratorField::with_rotation(SphericalRotation rotation) const {
  if (frame_ != Frame::Spherical) {
    throw std::invalid_argument("GeneratorField: rotations live on the sphere");
  }
  if (rotation.axis != 2 && rotation.axis != 3) {
    throw std::invalid_argument("GeneratorField: rotation axis must be 2 or 3");
  }
  GeneratorField out = *this;
  out.rotation_ = rotation;
  return out;
}

GeneratorField operator+(const GeneratorField& v, const GeneratorField& w) {
  if (v.frame() != w.frame()) throw std::invalid_argument("GeneratorField: frame mismatch");
  std::array<Coefficient, 3> c;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      c[k].affine[i] = v.component(k).affine[i] + w.component(k).affine[i];
    }
    c[k].shape = v.component(k).shape + w.component(k).shape;
  }
  return GeneratorField(v.frame(), v.time_constant() + w.time_constant(),
                        v.time_linear() + w.time_linear(), std::move(c),
                        combine_labels(v.label(), " + ", w.label()));
}

GeneratorField operator*(double s, const GeneratorField& v) {
  std::array<Coefficient, 3> c;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 4; ++i) c[k].affine[i] = Expr(s) * v.component(k).affine[i];
    c[k].shape = Expr(s) * v.component(k).shape;
  }
  std::string label = v.label().empty() ? "" : (s == 1.0 ? v.label() : Expr(s).to_string() + "*(" + v.label() + ")");
  GeneratorField out(v.frame(), s * v.time_constant(), s * v.time_linear(), std::move(c),
                     std::move(label));
  if (v.rotation()) {
    SphericalRotation r = *v.rotation();
    r.scale *= s;
    out = out.with_rotation(r);
  }
  return out;
}

GeneratorField operator-(const GeneratorField& v, const GeneratorField& w) {
  GeneratorField out = v + (-1.0) * w;
  return out.with_label(combine_labels(v.label(), " - ", w.label()));
}

// ---------------------------------------------------------------------------

namespace generators {

namespace {

Expr derivative_t(const Expr& e) { return differentiate(e, var::t); }

Expr require_function(const TimeFunctionPtr& f, const char* which) {
  if (!f) throw std::invalid_argument(std::string("missing parameter function ") + which);
  return Expr::time_function(f);
}

std::string function_label(const Expr& e) { return e.to_string(); }

}  // namespace

GeneratorField dilation() {
  std::array<Coefficient, 3> c;
  c[0].affine[1] = Expr(-1.0);
  c[1].affine[2] = Expr(-1.0);
  c[2].affine[3] = Expr(-3.0);
  return GeneratorField(Frame::Cartesian, 0.0, 1.0, std::move(c), "D");
}

GeneratorField time_translation() {
  return GeneratorField(Frame::Cartesian, 1.0, 0.0, {}, "d_t");
}

GeneratorField y_translation() {
  std::array<Coefficient, 3> c;
  c[1].affine[0] = Expr(1.0);
  return GeneratorField(Frame::Cartesian, 0.0, 0.0, std::move(c), "d_y");
}

GeneratorField x_shift(const Expr& f) {
  std::array<Coefficient, 3> c;
  c[0].affine[0] = f;
  c[2].affine[2] = -derivative_t(f);
  return GeneratorField(Frame::Cartesian, 0.0, 0.0, std::move(c), "X(" + function_label(f) + ")");
}

GeneratorField x_shift(TimeFunctionPtr f) { return x_shift(require_function(f, "f")); }

GeneratorField psi_shift(const Expr& g) {
  std::array<Coefficient, 3> c;
  c[2].affine[0] = g;
  return GeneratorField(Frame::Cartesian, 0.0, 0.0, std::move(c), "Z(" + function_label(g) + ")");
}

GeneratorField psi_shift(TimeFunctionPtr g) { return psi_shift(require_function(g, "g")); }

GeneratorField spherical_dilation(double omega, double radius) {
  std::array<Coefficient, 3> c;
  c[0].affine[0] = Expr(-omega) * tvar();
  c[2].affine[2] = Expr(omega * radius * radius);
  c[2].affine[3] = Expr(-1.0);
  return GeneratorField(Frame::Spherical, 0.0, 1.0, std::move(c), "D");
}

GeneratorField spherical_time_translation() {
  return GeneratorField(Frame::Spherical, 1.0, 0.0, {}, "d_t");
}

GeneratorField spherical_psi_shift(const Expr& g) {
  std::array<Coefficient, 3> c;
  c[2].affine[0] = g;
  return GeneratorField(Frame::Spherical, 0.0, 0.0, std::move(c), "Z(" + function_label(g) + ")");
}

GeneratorField spherical_psi_shift(TimeFunctionPtr g) {
  return spherical_psi_shift(require_function(g, "g"));
}

GeneratorField rotation_j1() {
  std::array<Coefficient, 3> c;
  c[0].affine[0] = Expr(1.0);
  return GeneratorField(Frame::Spherical, 0.0, 0.0, std::move(c), "J1");
}

namespace {

GeneratorField sphere_rotation(int axis, double omega, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("rotation: radius must be > 0");
  const Expr lambda = Expr::variable(std::string(var::lambda));
  const Expr mu = Expr::variable(std::string(var::mu));
  const Expr phase = lambda + Expr(omega) * tvar();
  const Expr root = sqrt(Expr(1.0) - mu * mu);
  // J2: mu sin(L)/r d_lambda + cos(L) r d_mu + Omega a^2 cos(L) r d_psi
  // J3: mu cos(L)/r d_lambda - sin(L) r d_mu - Omega a^2 sin(L) r d_psi
  const Expr along = axis == 2 ? sin(phase) : cos(phase);
  const Expr across = axis == 2 ? cos(phase) : -sin(phase);
  std::array<Coefficient, 3> c;
  c[0].shape = mu * along / root;
  c[1].shape = across * root;
  c[2].shape = Expr(omega * radius * radius) * across * root;
  GeneratorField g(Frame::Spherical, 0.0, 0.0, std::move(c), axis == 2 ? "J2" : "J3");
  return g.with_rotation({axis, omega, radius, 1.0});
}

}  // namespace

GeneratorField rotation_j2(double omega, double radius) { return sphere_rotation(2, omega, radius); }
GeneratorField rotation_j3(double omega, double radius) { return sphere_rotation(3, omega, radius); }

}  // namespace generators

std::vector<GeneratorField> catalog(Frame frame, const CatalogParameters& params) {
  using namespace generators;
  if (frame == Frame::Cartesian) {
    if (!params.f) throw std::invalid_argument("catalog: missing parameter function f for X(f)");
    if (!params.g) throw std::invalid_argument("catalog: missing parameter function g for Z(g)");
    return {dilation(), time_translation(), y_translation(),
            x_shift(params.f).with_label("X(" + params.f->name() + ")"),
            psi_shift(params.g).with_label("Z(" + params.g->name() + ")")};
  }
  if (!params.g) throw std::invalid_argument("catalog: missing parameter function g for Z(g)");
  return {spherical_dilation(params.omega, params.radius),
          spherical_time_translation(),
          spherical_psi_shift(params.g).with_label("Z(" + params.g->name() + ")"),
          rotation_j1(),
          rotation_j2(params.omega, params.radius),
          rotation_j3(params.omega, params.radius)};
}

// ---------------------------------------------------------------------------

GeneratorField lie_bracket(const GeneratorField& v, const GeneratorField& w) {
  if (v.frame() != w.frame()) throw std::invalid_argument("lie_bracket: frame mismatch");
  const Frame frame = v.frame();
  const auto names = jet_variables(frame);
  const Expr tau_v = Expr(v.time_constant()) + Expr(v.time_linear()) * tvar();
  const Expr tau_w = Expr(w.time_constant()) + Expr(w.time_linear()) * tvar();

  // Affine part: V_aff(A_W^k) - W_aff(A_V^k), coefficient by coefficient.
  auto apply_affine = [](const GeneratorField& a, const Expr& tau_a, const GeneratorField& b,
                         std::size_t k, std::size_t i) {
    Expr out = tau_a * differentiate(b.component(k).affine[i], var::t);
    for (std::size_t j = 0; j < 3; ++j) {
      out = out + a.component(j).affine[i] * b.component(k).affine[j + 1];
    }
    return out;
  };

  std::array<Coefficient, 3> c;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      c[k].affine[i] = apply_affine(v, tau_v, w, k, i) - apply_affine(w, tau_w, v, k, i);
    }
  }

  if (v.has_shape() || w.has_shape()) {
    const auto full_v = v.full_components();
    const auto full_w = w.full_components();
    auto affine_of = [&](const GeneratorField& g, const Expr& tau, std::size_t j) {
      if (j == 0) return tau;
      Coefficient a = g.component(j - 1);
      a.shape = Expr();
      return a.full(frame);
    };
    auto shape_of = [](const GeneratorField& g, std::size_t j) {
      return j == 0 ? Expr() : g.component(j - 1).shape;
    };
    // Terms of V(W^k) - W(V^k) that involve at least one shape.
    auto shape_terms = [&](const GeneratorField& a, const Expr& tau_a, const GeneratorField& b,
                           const std::array<Expr, 4>& full_b, std::size_t k) {
      Expr out;
      const Expr sb = shape_of(b, k);
      for (std::size_t j = 0; j < 4; ++j) {
        if (!sb.is_constant(0.0)) out = out + affine_of(a, tau_a, j) * differentiate(sb, names[j]);
        const Expr sa = shape_of(a, j);
        if (!sa.is_constant(0.0)) out = out + sa * differentiate(full_b[k], names[j]);
      }
      return out;
    };
    for (std::size_t k = 1; k < 4; ++k) {
      c[k - 1].shape = shape_terms(v, tau_v, w, full_w, k) - shape_terms(w, tau_w, v, full_v, k);
    }
  }

  const double a = v.time_constant() * w.time_linear() - w.time_constant() * v.time_linear();
  return GeneratorField(frame, a, 0.0, std::move(c),
                        v.label().empty() || w.label().empty()
                            ? std::string{}
                            : "[" + v.label() + ", " + w.label() + "]");
}

// ---------------------------------------------------------------------------

namespace {

PointTransformation rotation_flow(const GeneratorField& v, double eps) {
  const SphericalRotation& r = *v.rotation();
  const auto z = jet_exprs(Frame::Spherical);
  const Expr& t = z[0];
  const Expr& lambda = z[1];
  const Expr& mu = z[2];
  const Expr& psi = z[3];

  auto build = [&](double angle) {
    // J2 is minus the rotation about y, J3 minus the rotation about x.
    const double th = -angle * r.scale;
    const Expr phase = lambda + Expr(r.omega) * t;
    const Expr root = sqrt(Expr(1.0) - mu * mu);
    const Expr X = root * cos(phase);
    const Expr Y = root * sin(phase);
    const Expr& Z = mu;
    Expr X2, Y2, Z2;
    if (r.axis == 2) {
      X2 = X * Expr(std::cos(th)) + Z * Expr(std::sin(th));
      Y2 = Y;
      Z2 = Z * Expr(std::cos(th)) - X * Expr(std::sin(th));
    } else {
      X2 = X;
      Y2 = Y * Expr(std::cos(th)) - Z * Expr(std::sin(th));
      Z2 = Y * Expr(std::sin(th)) + Z * Expr(std::cos(th));
    }
    const Expr turn = atan2(X * Y2 - Y * X2, X * X2 + Y * Y2);
    PointTransformation::Map m{t, lambda + turn, Z2,
                               psi + Expr(r.omega * r.radius * r.radius) * (Z2 - mu)};
    return m;
  };
  return PointTransformation(Frame::Spherical, TransformKind::Flow, build(eps), build(-eps),
                             "exp(" + Expr(eps).to_string() + " " + v.label() + ")");
}

using Matrix5 = Eigen::Matrix<double, 5, 5>;

std::optional<Matrix5> constant_generator_matrix(const GeneratorField& v) {
  Matrix5 m = Matrix5::Zero();
  m(0, 0) = v.time_linear();
  m(0, 4) = v.time_constant();
  for (std::size_t k = 0; k < 3; ++k) {
    const auto c0 = affine_in_t(v.component(k).affine[0]);
    if (!c0) return std::nullopt;
    m(k + 1, 0) = c0->second;
    m(k + 1, 4) = c0->first;
    for (std::size_t i = 1; i < 4; ++i) {
      const auto ci = affine_in_t(v.component(k).affine[i]);
      if (!ci || ci->second != 0.0) return std::nullopt;
      m(k + 1, i) = ci->first;
    }
  }
  return m;
}

PointTransformation::Map linear_map(Frame frame, const Matrix5& e) {
  const auto z = jet_exprs(frame);
  PointTransformation::Map out;
  for (int i = 0; i < 4; ++i) {
    Expr row(e(i, 4));
    for (int j = 0; j < 4; ++j) {
      if (e(i, j) != 0.0) row = row + Expr(e(i, j)) * z[j];
    }
    out[i] = row;
  }
  return out;
}

using ExprMatrix = std::array<std::array<Expr, 4>, 4>;

ExprMatrix multiply(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix out;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      Expr s;
      for (std::size_t k = 0; k < 4; ++k) {
        if (!a[i][k].is_constant(0.0) && !b[k][j].is_constant(0.0)) s = s + a[i][k] * b[k][j];
      }
      out[i][j] = s;
    }
  }
  return out;
}

/// Flow of a t-frozen field with nilpotent linear part over (s1, s2, psi, 1).
std::optional<PointTransformation> nilpotent_flow(const GeneratorField& v, double eps) {
  ExprMatrix m;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 1; i < 4; ++i) m[k][i - 1] = v.component(k).affine[i];
    m[k][3] = v.component(k).affine[0];
  }
  const ExprMatrix m2 = multiply(m, m);
  const ExprMatrix m3 = multiply(m2, m);
  const ExprMatrix m4 = multiply(m3, m);
  try {
    for (double t : kProbeTimes) {
      const Point p = time_point(t);
      double scale = 1.0;
      double top = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          scale = std::max(scale, std::abs(m[i][j].evaluate(p)));
          top = std::max(top, std::abs(m4[i][j].evaluate(p)));
        }
      }
      if (top > 1e-12 * std::pow(scale, 4)) return std::nullopt;
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const auto z = jet_exprs(v.frame());
  auto build = [&](double s) {
    PointTransformation::Map out;
    out[0] = z[0];
    for (std::size_t k = 0; k < 3; ++k) {
      Expr row = z[k + 1];
      for (std::size_t j = 0; j < 4; ++j) {
        const Expr coeff = Expr(s) * m[k][j] + Expr(s * s / 2.0) * m2[k][j] +
                           Expr(s * s * s / 6.0) * m3[k][j];
        if (coeff.is_constant(0.0)) continue;
        row = row + (j < 3 ? coeff * z[j + 1] : coeff);
      }
      out[k + 1] = row;
    }
    return out;
  };
  return PointTransformation(v.frame(), TransformKind::Flow, build(eps), build(-eps),
                             "exp(" + Expr(eps).to_string() + " " + v.label() + ")");
}

}  // namespace

PointTransformation flow(const GeneratorField& v, double eps) {
  if (!std::isfinite(eps)) throw std::invalid_argument("flow: non-finite parameter");
  if (v.rotation()) return rotation_flow(v, eps);
  if (v.has_shape()) {
    throw std::domain_error("flow: no closed form available for '" + v.label() + "'");
  }
  if (const auto m = constant_generator_matrix(v)) {
    const Matrix5 forward = (eps * *m).exp();
    const Matrix5 backward = (-eps * *m).exp();
    return PointTransformation(v.frame(), TransformKind::Flow, linear_map(v.frame(), forward),
                               linear_map(v.frame(), backward),
                               "exp(" + Expr(eps).to_string() + " " + v.label() + ")");
  }
  if (v.time_constant() == 0.0 && v.time_linear() == 0.0) {
    if (auto t = nilpotent_flow(v, eps)) return *std::move(t);
  }
  throw std::domain_error("flow: no closed form available for '" + v.label() + "'");
}

// ---------------------------------------------------------------------------

std::vector<Point> generic_samples(Frame frame, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(0.4, 1.6);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> lat(-0.8, 0.8);
  const auto names = jet_variables(frame);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Point p;
    p.set(names[0], time(rng));
    if (frame == Frame::Spherical) {
      p.set(names[1], angle(rng));
      p.set(names[2], lat(rng));
    } else {
      p.set(names[1], unit(rng));
      p.set(names[2], unit(rng));
    }
    p.set(names[3], unit(rng));
    out.push_back(std::move(p));
  }
  return out;
}

double max_difference(const GeneratorField& v, const GeneratorField& w,
                      std::span<const Point> samples) {
  double worst = 0.0;
  for (const auto& p : samples) {
    const auto a = v.evaluate(p);
    const auto b = w.evaluate(p);
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

bool in_cartesian_algebra(const GeneratorField& v, double tolerance) {
  if (v.frame() != Frame::Cartesian || v.has_shape()) return false;
  const double b = v.time_linear();
  const auto& cx = v.component(0).affine;
  const auto& cy = v.component(1).affine;
  const auto& cp = v.component(2).affine;
  const Expr f_prime = differentiate(cx[0], var::t);
  std::optional<double> y_shift;
  for (const auto& sample : generic_samples(Frame::Cartesian, 8, 7)) {
    const Point p = time_point(sample.get(var::t));
    auto off = [&](const Expr& e, double expected) {
      return std::abs(e.evaluate(p) - expected) > tolerance;
    };
    if (off(cx[1], -b) || off(cx[2], 0.0) || off(cx[3], 0.0)) return false;
    if (off(cy[1], 0.0) || off(cy[2], -b) || off(cy[3], 0.0)) return false;
    if (off(cp[1], 0.0) || off(cp[3], -3.0 * b)) return false;
    if (off(cp[2], -f_prime.evaluate(p))) return false;
    const double c3 = cy[0].evaluate(p);
    if (!y_shift) y_shift = c3;
    if (std::abs(c3 - *y_shift) > tolerance) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

void SubalgebraSpec::validate() const {
  if (generators.empty()) throw std::invalid_argument("SubalgebraSpec '" + family + "': empty");
  for (const auto& g : generators) {
    if (g.frame() != generators.front().frame()) {
      throw std::invalid_argument("SubalgebraSpec '" + family + "': mixed frames");
    }
  }
  if (requires_abc_zero) {
    const double prod = a.value_or(0.0) * b.value_or(0.0) * c.value_or(0.0);
    if (prod != 0.0) {
      throw std::invalid_argument("SubalgebraSpec '" + family + "': parameters require abc = 0");
    }
  }
}

SubalgebraReport verify_subalgebra(const SubalgebraSpec& spec, double tolerance,
                                   std::size_t sample_count) {
  spec.validate();
  const auto& gens = spec.generators;
  const std::size_t n = gens.size();
  const Frame frame = gens.front().frame();

  SubalgebraReport report;
  if (frame == Frame::Cartesian) {
    report.members_in_algebra = std::all_of(gens.begin(), gens.end(), [&](const GeneratorField& g) {
      return in_cartesian_algebra(g, tolerance);
    });
  }

  std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
  std::vector<GeneratorField> brackets;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      index_pairs.emplace_back(i, j);
      brackets.push_back(lie_bracket(gens[i], gens[j]));
    }
  }

  const std::size_t count = std::max<std::size_t>(sample_count, 8);
  for (int attempt = 1; attempt <= 3; ++attempt) {
    report.attempts = attempt;
    const auto samples = generic_samples(frame, count, 0x5eedULL + static_cast<std::uint64_t>(attempt));
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(4 * count), static_cast<Eigen::Index>(n));
    std::vector<Eigen::VectorXd> targets(brackets.size(),
                                         Eigen::VectorXd(static_cast<Eigen::Index>(4 * count)));
    try {
      for (std::size_t s = 0; s < count; ++s) {
        for (std::size_t g = 0; g < n; ++g) {
          const auto val = gens[g].evaluate(samples[s]);
          for (std::size_t c = 0; c < 4; ++c) {
            basis(static_cast<Eigen::Index>(4 * s + c), static_cast<Eigen::Index>(g)) = val[c];
          }
        }
        for (std::size_t b = 0; b < brackets.size(); ++b) {
          const auto val = brackets[b].evaluate(samples[s]);
          for (std::size_t c = 0; c < 4; ++c) targets[b](static_cast<Eigen::Index>(4 * s + c)) = val[c];
        }
      }
    } catch (const DomainError&) {
      continue;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(n)) continue;

    report.independent = true;
    report.max_fit_residual = 0.0;
    report.pairs.clear();
    for (std::size_t b = 0; b < brackets.size(); ++b) {
      const Eigen::VectorXd coeff = qr.solve(targets[b]);
      const double res = (basis * coeff - targets[b]).cwiseAbs().maxCoeff();
      SubalgebraReport::PairFit fit;
      fit.i = index_pairs[b].first;
      fit.j = index_pairs[b].second;
      fit.coefficients.assign(coeff.data(), coeff.data() + coeff.size());
      fit.residual = res;
      report.pairs.push_back(std::move(fit));
      report.max_fit_residual = std::max(report.max_fit_residual, res);
    }
    report.closed = report.max_fit_residual <= tolerance;
    return report;
  }
  throw std::runtime_error("verify_subalgebra '" + spec.family +
                           "': degenerate sample configuration after 3 attempts");
}

// ---------------------------------------------------------------------------

namespace {

std::array<std::string, 3> component_keys(Frame frame) {
  if (frame == Frame::Spherical) return {"dlambda", "dmu", "dpsi"};
  return {"dx", "dy", "dpsi"};
}

nlohmann::json coefficient_json(const Expr& e) {
  if (e.is_constant()) return e.constant_value();
  if (e.op() == Expr::Op::TimeFn && e.order() == 0 && e.operands().empty()) return e.name();
  return to_json(e);
}

Expr coefficient_from_json(const nlohmann::json& j, const TimeFunctionRegistry& registry,
                           const std::string& key) {
  if (j.is_number()) return Expr(j.get<double>());
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    int order = 0;
    while (!name.empty() && name.back() == '\'') {
      name.pop_back();
      ++order;
    }
    const auto it = registry.find(name);
    if (it == registry.end()) {
      throw std::invalid_argument("generator: unknown time function '" + name + "' in '" + key + "'");
    }
    return Expr::time_function(it->second, order);
  }
  return vortlab::bind(expr_from_json(j, registry), registry);
}

}  // namespace

nlohmann::json to_json(const GeneratorField& v) {
  nlohmann::json j;
  j["frame"] = std::string(frame_name(v.frame()));
  if (!v.label().empty()) j["label"] = v.label();
  j["dt"] = {v.time_constant(), v.time_linear()};
  const auto keys = component_keys(v.frame());
  static const std::array<const char*, 4> slots{"c0", "c1", "c2", "c3"};
  for (std::size_t k = 0; k < 3; ++k) {
    nlohmann::json c = nlohmann::json::object();
    for (std::size_t i = 0; i < 4; ++i) {
      if (!v.component(k).affine[i].is_constant(0.0)) {
        c[slots[i]] = coefficient_json(v.component(k).affine[i]);
      }
    }
    if (v.component(k).has_shape()) c["shape"] = to_json(v.component(k).shape);
    if (!c.empty()) j[keys[k]] = std::move(c);
  }
  if (v.rotation()) {
    const auto& r = *v.rotation();
    j["rotation"] = {{"axis", r.axis}, {"omega", r.omega}, {"radius", r.radius}, {"scale", r.scale}};
  }
  return j;
}

GeneratorField generator_from_json(const nlohmann::json& j, const TimeFunctionRegistry& registry) {
  if (!j.is_object()) throw std::invalid_argument("generator: expected a JSON object");
  Frame frame = Frame::Cartesian;
  if (const auto it = j.find("frame"); it != j.end()) {
    const auto name = it->get<std::string>();
    if (name == "spherical") {
      frame = Frame::Spherical;
    } else if (name != "cartesian") {
      throw std::invalid_argument("generator: unknown frame '" + name + "'");
    }
  }
  const auto keys = component_keys(frame);
  for (const auto& [key, value] : j.items()) {
    if (key == "frame" || key == "label" || key == "dt" || key == "rotation") continue;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument("generator: unknown key '" + key + "'");
    }
  }
  double a = 0.0, b = 0.0;
  if (const auto it = j.find("dt"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw std::invalid_argument("generator: 'dt' must be [a, b]");
    }
    a = (*it)[0].get<double>();
    b = (*it)[1].get<double>();
  }
  std::array<Coefficient, 3> comps;
  static const std::array<const char*, 4> slots{"c0", "c1", "c2", "c3"};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto it = j.find(keys[k]);
    if (it == j.end()) continue;
    if (!it->is_object()) throw std::invalid_argument("generator: '" + keys[k] + "' must be an object");
    for (const auto& [key, value] : it->items()) {
      const auto slot = std::find_if(slots.begin(), slots.end(),
                                     [&](const char* s) { return key == s; });
      if (slot != slots.end()) {
        comps[k].affine[static_cast<std::size_t>(slot - slots.begin())] =
            coefficient_from_json(value, registry, keys[k] + "." + key);
      } else if (key == "shape") {
        comps[k].shape = vortlab::bind(expr_from_json(value, registry), registry);
      } else {
        throw std::invalid_argument("generator: unknown key '" + keys[k] + "." + key + "'");
      }
    }
  }
  GeneratorField g(frame, a, b, std::move(comps), j.value("label", std::string{}));
  if (const auto it = j.find("rotation"); it != j.end()) {
    SphericalRotation r;
    for (const auto& [key, value] : it->items()) {
      if (key == "axis") r.axis = value.get<int>();
      else if (key == "omega") r.omega = value.get<double>();
      else if (key == "radius") r.radius = value.get<double>();
      else if (key == "scale") r.scale = value.get<double>();
      else throw std::invalid_argument("generator: unknown key 'rotation." + key + "'");
    }
    g = g.with_rotation(r);
  }
  return g;
}

}  // namespace vortlab
