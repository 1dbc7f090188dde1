#pragma once

#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vortlab/reduction.hpp"
#include "vortlab/spectral.hpp"
#include "vortlab/subgroups.hpp"

namespace vortlab {

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t stride = 1;

  /// Throws std::invalid_argument unless 0 < dt <= t_end and stride >= 1.
  void validate() const;
  /// round(t_end / dt)
  std::size_t steps() const;
};

/// Autonomous quadratic ODE system in real coordinates with its two
/// quadratic invariants.
class OdeModel {
 public:
  using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  /// Full truncated spectral system.
  static OdeModel spectral(TruncationPtr truncation);
  /// A reduced model; invariants evaluated through its embedding.
  static OdeModel reduced(ReducedModel model);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& coordinates() const noexcept { return coordinates_; }
  std::size_t dimension() const noexcept { return coordinates_.size(); }
  Eigen::VectorXd rhs(const Eigen::VectorXd& x) const { return rhs_(x); }
  /// E = sum over pairs (A^2 + B^2)/|m^|^2, Z = sum over pairs (A^2 + B^2).
  double energy(const Eigen::VectorXd& x) const;
  double enstrophy(const Eigen::VectorXd& x) const;

 private:
  std::string name_;
  std::vector<std::string> coordinates_;
  Rhs rhs_;
  Eigen::VectorXd weights_;     // 1/|m^|^2 per full coordinate
  Eigen::MatrixXd embedding_;   // identity for the full system
};

/// Raised when the state stops being finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

struct Trajectory {
  std::string model;
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  /// RFC-4180 CSV with header "t,<names...>".
  void write_csv(std::ostream& out) const;
};

/// One classical fourth-order Runge-Kutta step.
Eigen::VectorXd rk4_step(const OdeModel& model, const Eigen::VectorXd& x, double dt);

/// Records the initial state and every `stride`-th step.
Trajectory integrate(const OdeModel& model, const Eigen::VectorXd& initial,
                     const IntegratorConfig& config);

struct DriftReport {
  double energy0 = 0.0;
  double enstrophy0 = 0.0;
  double energy_drift = 0.0;     // max |E(t) - E(0)| / |E(0)| (absolute when E(0) = 0)
  double enstrophy_drift = 0.0;
};

DriftReport invariant_drift(const Trajectory& trajectory, const OdeModel& model);
nlohmann::json to_json(const DriftReport& report);

/// Integrates the full truncated system from a state in the fixed subspace
/// of `subgroup` and returns the largest distance from that subspace.
/// Throws std::invalid_argument when the initial state is off the subspace
/// by more than 1e-14.
double subspace_preservation(const TruncationPtr& truncation, const Subgroup& subgroup,
                             const Eigen::VectorXd& initial, const IntegratorConfig& config);

/// Same measurement without the precondition, for perturbed starts.
double subspace_deviation(const TruncationPtr& truncation, const Subgroup& subgroup,
                          const Eigen::VectorXd& initial, const IntegratorConfig& config);

}  // namespace vortlab
