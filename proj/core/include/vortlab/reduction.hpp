#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vortlab/spectral.hpp"
#include "vortlab/subgroups.hpp"

namespace vortlab {

/// d a_target / dt += coefficient * a_first * a_second (first <= second).
struct QuadraticTerm {
  std::size_t target = 0;
  double coefficient = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Finite-mode model obtained by restricting the truncated dynamics to a
/// fixed subspace.
struct ReducedModel {
  std::vector<std::string> amplitudes;
  std::vector<std::string> coordinates;  // full-model coordinate of each amplitude
  std::vector<QuadraticTerm> terms;

  std::string subgroup;
  std::vector<ModeIndex> modes;
  double k = 1.0;
  double l = 1.0;
  Eigen::MatrixXd embedding;  // amplitudes -> full real coordinates

  std::size_t dimension() const noexcept { return amplitudes.size(); }
  Eigen::VectorXd rhs(const Eigen::VectorXd& a) const;
  Eigen::VectorXd embed(const Eigen::VectorXd& a) const { return embedding * a; }
  /// Coefficient of a_first a_second in d a_target/dt (0 when absent).
  double coefficient(std::string_view target, std::string_view first,
                     std::string_view second) const;
  std::size_t amplitude_index(std::string_view name) const;
};

/// Thrown when a fixed subspace is not invariant under the dynamics.
class InvarianceError : public std::runtime_error {
 public:
  InvarianceError(const std::string& what, Eigen::VectorXd direction)
      : std::runtime_error(what), direction_(std::move(direction)) {}
  const Eigen::VectorXd& direction() const noexcept { return direction_; }

 private:
  Eigen::VectorXd direction_;
};

/// Coefficients below this fraction of the largest one are dropped.
inline constexpr double kTermCutoff = 1e-12;

ReducedModel reduce_model(const Subgroup& subgroup, const TruncationPtr& truncation);

/// The three-component model in amplitudes A = A[0,1], F = A[1,0], G = A[1,-1].
ReducedModel lorenz1960(double k, double l);

/// Closed-form coefficients of the three-component model:
/// {FG in dA, AG in dF, AF in dG}.
std::array<double, 3> lorenz1960_coefficients(double k, double l);

// {"amplitudes": [...], "coordinates": [...], "terms": [{"target", "coeff", "factors"}],
//  "provenance": {"subgroup", "modes", "k", "l"}}
nlohmann::json to_json(const ReducedModel& model);
/// Throws std::invalid_argument on schema violations.
ReducedModel reduced_model_from_json(const nlohmann::json& j);

}  // namespace vortlab
