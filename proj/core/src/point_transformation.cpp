#include "vortlab/point_transformation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortlab {

std::string_view transform_kind_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::SphericalDerotation: return "spherical_derotation";
    case TransformKind::PotentialTranslation: return "potential_translation";
    case TransformKind::Flow: return "flow";
    case TransformKind::Composition: return "composition";
    case TransformKind::Identity: return "identity";
  }
  return "";
}

std::array<std::string_view, 4> jet_variables(Frame frame) {
  const auto c = coordinate_names(frame);
  return {c[0], c[1], c[2], var::psi};
}

namespace {

Point to_point(Frame frame, const PointTransformation::Coords& c) {
  const auto names = jet_variables(frame);
  Point p;
  for (std::size_t i = 0; i < 4; ++i) p.set(names[i], c[i]);
  return p;
}

PointTransformation::Coords apply_map(Frame frame, const PointTransformation::Map& map,
                                      const PointTransformation::Coords& c) {
  const Point p = to_point(frame, c);
  PointTransformation::Coords out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = map[i].evaluate(p);
  return out;
}

std::map<std::string, Expr, std::less<>> as_substitution(Frame frame,
                                                         const PointTransformation::Map& map) {
  const auto names = jet_variables(frame);
  std::map<std::string, Expr, std::less<>> subs;
  for (std::size_t i = 0; i < 4; ++i) subs.emplace(std::string(names[i]), map[i]);
  return subs;
}

}  // namespace

PointTransformation::PointTransformation(Frame frame, TransformKind kind, Map forward, Map inverse,
                                         std::string label)
    : frame_(frame),
      kind_(kind),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      label_(std::move(label)) {
  const auto names = jet_variables(frame_);
  for (std::size_t i = 0; i < 3; ++i) {
    if (depends_on(forward_[i], var::psi) || depends_on(inverse_[i], var::psi)) {
      throw std::invalid_argument("PointTransformation '" + label_ +
                                  "': base coordinates depend on psi (not a map of graphs)");
    }
  }
  for (const auto& m : {forward_, inverse_}) {
    for (const auto& e : m) {
      for (const auto& v : free_variables(e)) {
        if (std::find(names.begin(), names.end(), v) == names.end()) {
          throw std::invalid_argument("PointTransformation '" + label_ + "': unknown variable '" +
                                      v + "'");
        }
      }
    }
  }
}

PointTransformation PointTransformation::identity(Frame frame) {
  const auto names = jet_variables(frame);
  Map id;
  for (std::size_t i = 0; i < 4; ++i) id[i] = Expr::variable(std::string(names[i]));
  return PointTransformation(frame, TransformKind::Identity, id, id, "identity");
}

PointTransformation::Coords PointTransformation::apply(const Coords& coords) const {
  return apply_map(frame_, forward_, coords);
}

PointTransformation::Coords PointTransformation::apply_inverse(const Coords& coords) const {
  return apply_map(frame_, inverse_, coords);
}

PointTransformation PointTransformation::inverse() const {
  return PointTransformation(frame_, kind_, inverse_, forward_, "inverse(" + label_ + ")");
}

double PointTransformation::roundtrip_error(std::span<const Coords> samples) const {
  double worst = 0.0;
  for (const auto& s : samples) {
    const auto back = apply_inverse(apply(s));
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(back[i] - s[i]));
  }
  return worst;
}

PointTransformation compose(const PointTransformation& outer, const PointTransformation& inner) {
  if (outer.frame() != inner.frame()) {
    throw std::invalid_argument("compose: transformations act on different frames");
  }
  const Frame frame = outer.frame();
  const auto inner_fwd = as_substitution(frame, inner.forward_map());
  const auto outer_inv = as_substitution(frame, outer.inverse_map());
  PointTransformation::Map forward;
  PointTransformation::Map inverse;
  for (std::size_t i = 0; i < 4; ++i) {
    forward[i] = substitute(outer.forward_map()[i], inner_fwd);
    inverse[i] = substitute(inner.inverse_map()[i], outer_inv);
  }
  return PointTransformation(frame, TransformKind::Composition, forward, inverse,
                             outer.label() + " o " + inner.label());
}

AnalyticField map_solution(const PointTransformation& transform, const AnalyticField& psi) {
  if (transform.frame() != psi.frame()) {
    throw std::invalid_argument("map_solution: transformation and field use different frames");
  }
  const auto names = jet_variables(psi.frame());
  // Preimage of the new base point, then the graph value there.
  std::map<std::string, Expr, std::less<>> base;
  for (std::size_t i = 0; i < 3; ++i) base.emplace(std::string(names[i]), transform.inverse_map()[i]);
  const Expr psi_at_preimage = substitute(psi.expr(), base);
  auto full = base;
  full.emplace(std::string(names[3]), psi_at_preimage);
  return AnalyticField(substitute(transform.forward_map()[3], full), psi.frame());
}

}  // namespace vortlab
