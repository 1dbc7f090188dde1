#include "vortlab/equivalence_maps.hpp"

#include <cmath>
#include <stdexcept>

namespace vortlab {

namespace {

Expr variable(std::string_view name) { return Expr::variable(std::string(name)); }

std::string number(double v) { return Expr(v).to_string(); }

}  // namespace

PointTransformation spherical_derotation(double omega, double radius) {
  if (!std::isfinite(omega)) throw std::invalid_argument("spherical_derotation: non-finite Omega");
  if (!(radius > 0.0)) throw std::invalid_argument("spherical_derotation: radius must be > 0");
  const Expr t = variable(var::t);
  const Expr lambda = variable(var::lambda);
  const Expr mu = variable(var::mu);
  const Expr psi = variable(var::psi);
  const double shift = omega * radius * radius;
  PointTransformation::Map forward{t, lambda + Expr(omega) * t, mu, psi - Expr(shift) * mu};
  PointTransformation::Map inverse{t, lambda - Expr(omega) * t, mu, psi + Expr(shift) * mu};
  return PointTransformation(Frame::Spherical, TransformKind::SphericalDerotation,
                             std::move(forward), std::move(inverse),
                             "spherical_derotation(Omega=" + number(omega) + ", a=" +
                                 number(radius) + ")");
}

PointTransformation potential_translation(double beta, double deformation) {
  if (deformation == 0.0) throw std::invalid_argument("potential_translation: F = 0");
  if (!std::isfinite(beta) || !std::isfinite(deformation)) {
    throw std::invalid_argument("potential_translation: non-finite parameter");
  }
  const double r = beta / deformation;
  const Expr t = variable(var::t);
  const Expr x = variable(var::x);
  const Expr y = variable(var::y);
  const Expr psi = variable(var::psi);
  PointTransformation::Map forward{t, x + Expr(r) * t, y, psi - Expr(r) * y};
  PointTransformation::Map inverse{t, x - Expr(r) * t, y, psi + Expr(r) * y};
  return PointTransformation(Frame::Cartesian, TransformKind::PotentialTranslation,
                             std::move(forward), std::move(inverse),
                             "potential_translation(beta=" + number(beta) + ", F=" +
                                 number(deformation) + ")");
}

PointTransformation build_map(MapKind kind, const MapParams& params) {
  if (kind == MapKind::SphericalDerotation) {
    return spherical_derotation(params.omega, params.radius);
  }
  return potential_translation(params.beta, params.deformation);
}

AnalyticField transport_solution(const PointTransformation& transform, const AnalyticField& psi,
                                 Direction direction) {
  if (psi.frame() != transform.frame()) {
    throw std::invalid_argument("transport_solution: field and map use different variables");
  }
  return direction == Direction::Forward ? map_solution(transform, psi)
                                         : map_solution(transform.inverse(), psi);
}

EquivalenceReport verify_equivalence(const PointTransformation& transform,
                                     const AnalyticField& psi,
                                     const EquationParams& rotating,
                                     const EquationParams& nonrotating, const Grid& grid,
                                     double tolerance) {
  if (rotating.kind != nonrotating.kind) {
    throw std::invalid_argument("verify_equivalence: equation kinds differ");
  }
  EquivalenceReport report;
  report.tolerance = tolerance;
  report.nonrotating = residual(psi, nonrotating, grid);
  report.rotating = residual(transport_solution(transform, psi, Direction::Inverse), rotating, grid);
  report.passed = report.nonrotating.passes(tolerance) && report.rotating.passes(tolerance);
  return report;
}

}  // namespace vortlab
