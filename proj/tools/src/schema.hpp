#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vortlab/cli.hpp"
#include "vortlab/expr.hpp"
#include "vortlab/fields.hpp"
#include "vortlab/time_function.hpp"

namespace vortlab::cli {

/// Read-once view of a JSON object that remembers which keys were consumed.
class Section {
 public:
  Section(const nlohmann::json& j, std::string path);

  const std::string& path() const noexcept { return path_; }
  std::string key_path(std::string_view key) const;
  bool has(std::string_view key) const;

  const nlohmann::json& raw(std::string_view key);
  const nlohmann::json* optional(std::string_view key);

  double number(std::string_view key);
  double number(std::string_view key, double fallback);
  std::string string(std::string_view key);
  std::string string(std::string_view key, std::string fallback);
  std::size_t count(std::string_view key, std::size_t fallback);
  std::vector<double> numbers(std::string_view key);
  Section object(std::string_view key);

  /// Throws SchemaError naming the first key that was never read.
  void finish() const;

 private:
  const nlohmann::json* j_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

nlohmann::json read_json_file(const std::string& path);

TimeFunctionPtr time_function_at(Section& s, std::string_view key);
TimeFunctionRegistry registry_at(Section& s, std::string_view key);
Expr expr_at(Section& s, std::string_view key, const TimeFunctionRegistry& registry = {});

/// {"kind": "cartesian", "beta": b} | {"kind": "spherical", "omega": w, "radius": a}
/// | {"kind": "potential", "beta": b, "F": f}
EquationParams equation_at(Section& s, std::string_view key);
nlohmann::json to_json(const EquationParams& params);
nlohmann::json to_json(const ResidualReport& report);

}  // namespace vortlab::cli
