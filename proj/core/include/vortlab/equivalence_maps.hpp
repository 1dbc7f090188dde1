#pragma once

#include "vortlab/fields.hpp"
#include "vortlab/point_transformation.hpp"

namespace vortlab {

/// Earth-like constants for demos.
inline constexpr double kEarthRotationRate = 7.292e-5;  // 1/s
inline constexpr double kEarthRadius = 6.371e6;         // m

/// (t, lambda, mu, psi) -> (t, lambda + Omega t, mu, psi - Omega a^2 mu).
/// Forward maps the rotating frame to the non-rotating one.
PointTransformation spherical_derotation(double omega, double radius = 1.0);

/// (t, x, y, psi) -> (t, x + (beta/F) t, y, psi - (beta/F) y).
/// Throws std::invalid_argument for F = 0.
PointTransformation potential_translation(double beta, double deformation);

enum class MapKind { SphericalDerotation, PotentialTranslation };

struct MapParams {
  double omega = 0.0;
  double radius = 1.0;
  double beta = 0.0;
  double deformation = 0.0;  // F
};

PointTransformation build_map(MapKind kind, const MapParams& params);

enum class Direction { Forward, Inverse };

/// Forward carries a rotating-frame solution to a non-rotating one; Inverse
/// carries a non-rotating solution into the rotating frame.
AnalyticField transport_solution(const PointTransformation& transform, const AnalyticField& psi,
                                 Direction direction);

struct EquivalenceReport {
  ResidualReport nonrotating;  // psi under the non-rotating equation
  ResidualReport rotating;     // inverse-transported psi under the rotating equation
  double tolerance = 1e-10;
  bool passed = false;
};

/// `psi` is a candidate non-rotating solution. PASS iff both residuals are
/// within `tolerance`.
EquivalenceReport verify_equivalence(const PointTransformation& transform,
                                     const AnalyticField& psi,
                                     const EquationParams& rotating,
                                     const EquationParams& nonrotating, const Grid& grid,
                                     double tolerance = 1e-10);

}  // namespace vortlab
