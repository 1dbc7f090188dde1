#include "schema.hpp"

#include <cmath>
#include <fstream>

#include "vortlab/expr_json.hpp"

namespace vortlab::cli {

Section::Section(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {
  if (!j.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
}

std::string Section::key_path(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool Section::has(std::string_view key) const { return j_->contains(key); }

const nlohmann::json& Section::raw(std::string_view key) {
  const auto* v = optional(key);
  if (!v) throw SchemaError(key_path(key), "missing");
  return *v;
}

const nlohmann::json* Section::optional(std::string_view key) {
  const auto it = j_->find(key);
  if (it == j_->end()) return nullptr;
  used_.emplace(key);
  return &*it;
}

double Section::number(std::string_view key) {
  const auto& v = raw(key);
  if (!v.is_number()) throw SchemaError(key_path(key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(key_path(key), "expected a finite number");
  return d;
}

double Section::number(std::string_view key, double fallback) {
  return has(key) ? number(key) : fallback;
}

std::string Section::string(std::string_view key) {
  const auto& v = raw(key);
  if (!v.is_string()) throw SchemaError(key_path(key), "expected a string");
  return v.get<std::string>();
}

std::string Section::string(std::string_view key, std::string fallback) {
  return has(key) ? string(key) : fallback;
}

std::size_t Section::count(std::string_view key, std::size_t fallback) {
  if (!has(key)) return fallback;
  const auto& v = raw(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw SchemaError(key_path(key), "expected a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> Section::numbers(std::string_view key) {
  const auto& v = raw(key);
  if (!v.is_array()) throw SchemaError(key_path(key), "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw SchemaError(key_path(key), "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Section Section::object(std::string_view key) { return Section(raw(key), key_path(key)); }

void Section::finish() const {
  for (const auto& [key, value] : j_->items()) {
    if (!used_.contains(key)) throw SchemaError(key_path(key), "unknown key");
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("<root>", std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

TimeFunctionPtr time_function_at(Section& s, std::string_view key) {
  try {
    return share(time_function_from_json(s.raw(key)));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(s.key_path(key), e.what());
  }
}

TimeFunctionRegistry registry_at(Section& s, std::string_view key) {
  if (!s.has(key)) return {};
  try {
    return registry_from_json(s.raw(key));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(s.key_path(key), e.what());
  }
}

Expr expr_at(Section& s, std::string_view key, const TimeFunctionRegistry& registry) {
  try {
    return expr_from_json(s.raw(key), registry);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(s.key_path(key), e.what());
  }
}

EquationParams equation_at(Section& s, std::string_view key) {
  Section e = s.object(key);
  const std::string kind = e.string("kind");
  EquationParams p;
  if (kind == "cartesian") {
    p = EquationParams::cartesian(e.number("beta", 0.0));
  } else if (kind == "spherical") {
    const double omega = e.number("omega", 0.0);
    p = EquationParams::spherical(omega, e.number("radius", 1.0));
  } else if (kind == "potential") {
    const double beta = e.number("beta", 0.0);
    p = EquationParams::potential(beta, e.number("F"));
  } else {
    throw SchemaError(e.key_path("kind"), "unknown equation kind '" + kind + "'");
  }
  e.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& ex) {
    throw SchemaError(s.key_path(key), ex.what());
  }
  return p;
}

nlohmann::json to_json(const EquationParams& p) {
  switch (p.kind) {
    case EquationKind::Cartesian:
      return {{"kind", "cartesian"}, {"beta", p.beta}};
    case EquationKind::Spherical:
      return {{"kind", "spherical"}, {"omega", p.omega}, {"radius", p.radius}};
    case EquationKind::Potential:
      return {{"kind", "potential"}, {"beta", p.beta}, {"F", p.deformation}};
  }
  return {};
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json worst = nlohmann::json::object();
  for (const auto& c : r.worst_point.coordinates()) worst[c.name] = c.value;
  return {{"max_abs", r.max_abs}, {"rms", r.rms}, {"n_points", r.n_points}, {"worst_point", worst}};
}

}  // namespace vortlab::cli
