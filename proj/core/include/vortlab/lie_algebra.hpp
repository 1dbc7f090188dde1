#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vortlab/expr.hpp"
#include "vortlab/fields.hpp"
#include "vortlab/point_transformation.hpp"
#include "vortlab/time_function.hpp"

namespace vortlab {

/// One coefficient of a generator:
///   c0(t) + c1(t) s1 + c2(t) s2 + c3(t) psi + shape(t, s1, s2, psi).
/// The affine coefficients are expressions in t only. `shape` carries the
/// closed-form non-affine parts of the spherical rotations and is 0 otherwise.
struct Coefficient {
  std::array<Expr, 4> affine{};
  Expr shape;

  bool has_shape() const noexcept { return !shape.is_constant(0.0); }
  Expr full(Frame frame) const;
};

/// Sphere rotation whose flow is known in closed form (J2 or J3, scaled).
struct SphericalRotation {
  int axis = 2;  // 2 or 3
  double omega = 0.0;
  double radius = 1.0;
  double scale = 1.0;
};

/// Lie point symmetry generator
///   (a + b t) d_t + X^1 d_s1 + X^2 d_s2 + X^psi d_psi.
class GeneratorField {
 public:
  GeneratorField(Frame frame, double time_constant, double time_linear,
                 std::array<Coefficient, 3> components, std::string label = {});

  Frame frame() const noexcept { return frame_; }
  double time_constant() const noexcept { return time_constant_; }
  double time_linear() const noexcept { return time_linear_; }
  /// 0: first spatial, 1: second spatial, 2: psi.
  const Coefficient& component(std::size_t i) const { return components_.at(i); }
  const std::array<Coefficient, 3>& components() const noexcept { return components_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<SphericalRotation>& rotation() const noexcept { return rotation_; }

  bool has_shape() const noexcept;
  /// Coefficients of (d_t, d_s1, d_s2, d_psi) as expressions.
  std::array<Expr, 4> full_components() const;
  /// Coefficients at a point carrying t, s1, s2 and psi.
  std::array<double, 4> evaluate(const Point& p) const;

  GeneratorField with_label(std::string label) const;
  GeneratorField with_rotation(SphericalRotation rotation) const;

 private:
  Frame frame_;
  double time_constant_;
  double time_linear_;
  std::array<Coefficient, 3> components_;
  std::string label_;
  std::optional<SphericalRotation> rotation_;
};

GeneratorField operator+(const GeneratorField& v, const GeneratorField& w);
GeneratorField operator-(const GeneratorField& v, const GeneratorField& w);
GeneratorField operator*(double s, const GeneratorField& v);

namespace generators {

// Cartesian algebra B_beta (independent of beta).
GeneratorField dilation();  // D = t d_t - x d_x - y d_y - 3 psi d_psi
GeneratorField time_translation();
GeneratorField y_translation();
GeneratorField x_shift(const Expr& f);  // X(f) = f d_x - f' y d_psi
GeneratorField x_shift(TimeFunctionPtr f);
GeneratorField psi_shift(const Expr& g);  // Z(g) = g d_psi
GeneratorField psi_shift(TimeFunctionPtr g);

// Spherical algebra g_Omega on a sphere of radius a.
GeneratorField spherical_dilation(double omega, double radius = 1.0);
GeneratorField spherical_time_translation();
GeneratorField spherical_psi_shift(const Expr& g);
GeneratorField spherical_psi_shift(TimeFunctionPtr g);
GeneratorField rotation_j1();
GeneratorField rotation_j2(double omega, double radius = 1.0);
GeneratorField rotation_j3(double omega, double radius = 1.0);

}  // namespace generators

struct CatalogParameters {
  double beta = 0.0;  // the Cartesian algebra does not depend on beta
  double omega = 0.0;
  double radius = 1.0;
  TimeFunctionPtr f;  // X(f)
  TimeFunctionPtr g;  // Z(g)
};

/// Cartesian: {D, d_t, d_y, X(f), Z(g)}; spherical: {D, d_t, Z(g), J1, J2, J3}.
/// Throws std::invalid_argument when a required parameter function is missing.
std::vector<GeneratorField> catalog(Frame frame, const CatalogParameters& params);

/// Commutator [V, W]^i = V(W^i) - W(V^i).
GeneratorField lie_bracket(const GeneratorField& v, const GeneratorField& w);

/// Time-eps flow of `v`. Closed forms cover every catalog member and
/// combinations whose flow is linear with constant coefficients, or whose
/// time coefficient vanishes with a nilpotent linear part. Other fields throw
/// std::domain_error.
PointTransformation flow(const GeneratorField& v, double eps);

/// Deterministic generic sample points (t kept away from 0).
std::vector<Point> generic_samples(Frame frame, std::size_t count, std::uint64_t seed);

/// max over samples and components of |v - w|.
double max_difference(const GeneratorField& v, const GeneratorField& w,
                      std::span<const Point> samples);

/// True when `v` has the form c1 D + c2 d_t + c3 d_y + X(f) + Z(g).
bool in_cartesian_algebra(const GeneratorField& v, double tolerance = 1e-10);

/// A subalgebra from the optimal-system lists with instantiated parameters.
struct SubalgebraSpec {
  std::string family;
  std::vector<GeneratorField> generators;
  std::optional<double> a, b, c;
  bool requires_abc_zero = false;

  /// Throws std::invalid_argument when abc = 0 is required but violated.
  void validate() const;
};

struct SubalgebraReport {
  struct PairFit {
    std::size_t i = 0;
    std::size_t j = 0;
    std::vector<double> coefficients;  // [g_i, g_j] = sum_k c_k g_k
    double residual = 0.0;
  };

  bool closed = false;
  bool independent = false;
  bool members_in_algebra = true;
  double max_fit_residual = 0.0;
  int attempts = 0;
  std::vector<PairFit> pairs;
};

/// Fits every pairwise bracket as a constant combination of the generators
/// by least squares over generic sample points. Degenerate samples are
/// redrawn up to three times before std::runtime_error is thrown.
SubalgebraReport verify_subalgebra(const SubalgebraSpec& spec, double tolerance = 1e-10,
                                   std::size_t sample_count = 8);

// Serialization: {"frame": "cartesian", "label": "...", "dt": [a, b],
//   "dx": {"c0": ..., "c1": ..., "c2": ..., "c3": ..., "shape": ...}, "dy": ..., "dpsi": ...}
// Coefficients are numbers, registered time-function names, or s-expressions.
nlohmann::json to_json(const GeneratorField& v);
GeneratorField generator_from_json(const nlohmann::json& j, const TimeFunctionRegistry& registry);

}  // namespace vortlab
