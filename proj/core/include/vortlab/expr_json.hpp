#pragma once

#include <nlohmann/json.hpp>

#include "vortlab/expr.hpp"
#include "vortlab/time_function.hpp"

namespace vortlab {

/// S-expression encoding of expression trees:
///   2.5 | ["const", 2.5] | ["var", "x"] | ["tf", "f"] | ["tf", "f", order]
///   ["tf", "f", order, <argument>] | ["+", a, b, ...] | ["-", a] | ["-", a, b]
///   ["*", a, b, ...] | ["/", a, b] | ["^", a, b] | ["sin", a] | ["cos", a]
///   ["exp", a] | ["ln", a] | ["atan2", y, x]
nlohmann::json to_json(const Expr& e);

/// Parses the s-expression encoding. Time-function leaves are bound from
/// `registry` when present there and left unbound otherwise.
Expr expr_from_json(const nlohmann::json& j, const TimeFunctionRegistry& registry = {});

/// Time-function presets as JSON:
///   {"name": "f", "kind": "polynomial", "coefficients": [0, 1]}
///   {"name": "g", "kind": "constant", "value": 2}
///   {"name": "h", "kind": "exponential", "rate": 1, "amplitude": 1}
///   {"name": "u", "kind": "linear_exponential", "c0": 1, "c1": 0, "rate": 1}
///   {"name": "s", "kind": "sinusoid", "amplitude": 1, "frequency": 1, "phase": 0}
///   {"name": "w", "kind": "abs_power", "exponent": 1.5}
/// Throws std::invalid_argument on unknown kinds or keys.
TimeFunction time_function_from_json(const nlohmann::json& j);
TimeFunctionRegistry registry_from_json(const nlohmann::json& array);

}  // namespace vortlab
