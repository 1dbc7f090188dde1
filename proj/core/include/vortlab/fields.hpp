#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "vortlab/expr.hpp"

namespace vortlab {

/// Coordinate system of a stream-function field: (t, x, y) on the beta-plane
/// or (t, lambda, mu) on the sphere with mu = sin(latitude).
enum class Frame { Cartesian, Spherical };

namespace var {
inline constexpr std::string_view t = "t";
inline constexpr std::string_view x = "x";
inline constexpr std::string_view y = "y";
inline constexpr std::string_view lambda = "lambda";
inline constexpr std::string_view mu = "mu";
inline constexpr std::string_view psi = "psi";
}  // namespace var

/// (t, first spatial, second spatial) names for a frame.
std::array<std::string_view, 3> coordinate_names(Frame frame);
std::string_view frame_name(Frame frame);

/// Closed-form scalar field over a frame's coordinates with exact derivatives.
class AnalyticField {
 public:
  /// Throws std::invalid_argument when `expr` uses variables outside the frame.
  AnalyticField(Expr expr, Frame frame = Frame::Cartesian);

  const Expr& expr() const noexcept { return expr_; }
  Frame frame() const noexcept { return frame_; }

  double operator()(const Point& p) const { return expr_.evaluate(p); }
  AnalyticField derivative(std::string_view variable, int times = 1) const;

 private:
  Expr expr_;
  Frame frame_;
};

/// Derivative orders with respect to (t, first spatial, second spatial).
struct DerivativeOrders {
  int t = 0;
  int first = 0;
  int second = 0;

  int total() const noexcept { return t + first + second; }
};

/// Exact partial derivative of total order <= 3 at `point`.
double eval_derivatives(const AnalyticField& f, const Point& point, DerivativeOrders orders);

enum class EquationKind { Cartesian, Spherical, Potential };

std::string_view equation_kind_name(EquationKind kind);

/// Parameters of the three vorticity equations:
///   cartesian:  zeta_t + psi_x zeta_y - psi_y zeta_x + beta psi_x = 0
///   spherical:  zeta_t + (psi_l zeta_m - psi_m zeta_l)/a^2 + 2 Omega psi_l / a^2 = 0
///   potential:  zeta_t - F psi_t + psi_x zeta_y - psi_y zeta_x + beta psi_x = 0
struct EquationParams {
  EquationKind kind = EquationKind::Cartesian;
  double beta = 0.0;
  double omega = 0.0;
  double radius = 1.0;
  double deformation = 0.0;  // F

  static EquationParams cartesian(double beta);
  static EquationParams spherical(double omega, double radius = 1.0);
  static EquationParams potential(double beta, double deformation);

  Frame frame() const noexcept {
    return kind == EquationKind::Spherical ? Frame::Spherical : Frame::Cartesian;
  }
  /// Throws std::invalid_argument for a <= 0, F <= 0 or non-finite values.
  void validate() const;
};

/// Vorticity of `psi`: the Cartesian Laplacian (also for the potential kind),
/// or the spherical operator with its 1/a^2 factor.
AnalyticField vorticity_of(const AnalyticField& psi, EquationKind kind, double radius = 1.0);

/// Tensor-product sample grid over named coordinates.
class Grid {
 public:
  struct Axis {
    std::string name;
    std::vector<double> samples;
  };

  /// Axes must be nonempty with strictly increasing samples. An axis named
  /// "mu" must stay inside (-1, 1).
  explicit Grid(std::vector<Axis> axes);

  /// t, x, y each 11 points over [-1, 1].
  static Grid cartesian_default();
  /// t: 5 points over [0, 1]; lambda: 16 points over [0, 2 pi); mu: 13 points over [-0.9, 0.9].
  static Grid spherical_default();
  static Grid default_for(Frame frame);

  static std::vector<double> linspace(double a, double b, std::size_t n, bool include_end = true);

  std::span<const Axis> axes() const noexcept { return axes_; }
  std::size_t size() const noexcept;
  bool has_axis(std::string_view name) const noexcept;

  void for_each(const std::function<void(const Point&)>& visit) const;

 private:
  std::vector<Axis> axes_;
};

struct ResidualReport {
  double max_abs = 0.0;
  double rms = 0.0;
  Point worst_point;
  std::size_t n_points = 0;

  bool passes(double tolerance) const noexcept { return max_abs <= tolerance; }
};

/// Default absolute tolerance for residuals of exact solutions.
inline constexpr double kResidualTolerance = 1e-11;

/// Pointwise left-hand side of the selected equation for `psi`.
double residual_at(const AnalyticField& psi, const EquationParams& params, const Point& point);

/// Left-hand side of the selected equation evaluated on `grid`.
ResidualReport residual(const AnalyticField& psi, const EquationParams& params, const Grid& grid);

}  // namespace vortlab
