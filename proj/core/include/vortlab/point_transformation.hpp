#pragma once

#include <array>
#include <span>
#include <string>

#include "vortlab/expr.hpp"
#include "vortlab/fields.hpp"

namespace vortlab {

enum class TransformKind { SphericalDerotation, PotentialTranslation, Flow, Composition, Identity };

std::string_view transform_kind_name(TransformKind kind);

/// Names of (t, first spatial, second spatial, psi) for a frame.
std::array<std::string_view, 4> jet_variables(Frame frame);

/// Invertible point map (t, s1, s2, psi) -> (t~, s1~, s2~, psi~) with a
/// closed-form inverse. Both directions are stored as expressions in the
/// untransformed variable names. The base part (first three images) must not
/// depend on psi, so that the map acts on graphs of functions.
class PointTransformation {
 public:
  using Map = std::array<Expr, 4>;
  using Coords = std::array<double, 4>;

  PointTransformation(Frame frame, TransformKind kind, Map forward, Map inverse, std::string label);

  static PointTransformation identity(Frame frame);

  Frame frame() const noexcept { return frame_; }
  TransformKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  const Map& forward_map() const noexcept { return forward_; }
  const Map& inverse_map() const noexcept { return inverse_; }

  Coords apply(const Coords& coords) const;
  Coords apply_inverse(const Coords& coords) const;
  PointTransformation inverse() const;

  /// Largest |inverse(forward(p)) - p| component over the samples.
  double roundtrip_error(std::span<const Coords> samples) const;

 private:
  Frame frame_;
  TransformKind kind_;
  Map forward_;
  Map inverse_;
  std::string label_;
};

/// outer o inner: apply `inner` first.
PointTransformation compose(const PointTransformation& outer, const PointTransformation& inner);

/// Image of the graph of `psi` under `transform`: returns psi~ with
/// psi~(T_base(p)) = T_psi(p, psi(p)).
AnalyticField map_solution(const PointTransformation& transform, const AnalyticField& psi);

}  // namespace vortlab
