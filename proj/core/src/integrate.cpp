#include "vortlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace vortlab {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integrator: dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("integrator: t_end must be > 0");
  }
  if (dt > t_end) throw std::invalid_argument("integrator: dt must not exceed t_end");
  if (stride < 1) throw std::invalid_argument("integrator: stride must be >= 1");
}

std::size_t IntegratorConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

// ---------------------------------------------------------------------------

namespace {

Eigen::VectorXd pair_weights(const Truncation& trunc) {
  const auto reps = trunc.representatives();
  const auto n = static_cast<Eigen::Index>(reps.size());
  Eigen::VectorXd w(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i) = w(n + i) = 1.0 / trunc.wavenumber_squared(reps[static_cast<std::size_t>(i)]);
  }
  return w;
}

}  // namespace

OdeModel OdeModel::spectral(TruncationPtr truncation) {
  if (!truncation) throw std::invalid_argument("OdeModel: missing truncation");
  OdeModel m;
  m.name_ = "spectral(" + std::to_string(truncation->modes().size()) + " modes)";
  for (std::size_t i = 0; i < truncation->real_dimension(); ++i) {
    m.coordinates_.push_back(truncation->coordinate_name(i));
  }
  m.weights_ = pair_weights(*truncation);
  const auto n = static_cast<Eigen::Index>(truncation->real_dimension());
  m.embedding_ = Eigen::MatrixXd::Identity(n, n);
  m.rhs_ = [truncation](const Eigen::VectorXd& x) { return spectral_rhs_real(truncation, x); };
  return m;
}

OdeModel OdeModel::reduced(ReducedModel model) {
  OdeModel m;
  m.name_ = "reduced(" + model.subgroup + ")";
  m.coordinates_ = model.amplitudes;
  if (!model.modes.empty() && model.embedding.size() > 0) {
    const Truncation trunc(model.modes, model.k, model.l);
    m.weights_ = pair_weights(trunc);
    m.embedding_ = model.embedding;
  }
  auto shared = std::make_shared<const ReducedModel>(std::move(model));
  m.rhs_ = [shared](const Eigen::VectorXd& x) { return shared->rhs(x); };
  return m;
}

double OdeModel::energy(const Eigen::VectorXd& x) const {
  if (embedding_.size() == 0) throw std::logic_error("OdeModel: no invariants for this model");
  const Eigen::VectorXd full = embedding_ * x;
  return (weights_.array() * full.array().square()).sum();
}

double OdeModel::enstrophy(const Eigen::VectorXd& x) const {
  if (embedding_.size() == 0) throw std::logic_error("OdeModel: no invariants for this model");
  return (embedding_ * x).squaredNorm();
}

// ---------------------------------------------------------------------------

Eigen::VectorXd rk4_step(const OdeModel& model, const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd k1 = model.rhs(x);
  const Eigen::VectorXd k2 = model.rhs(x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = model.rhs(x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = model.rhs(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate(const OdeModel& model, const Eigen::VectorXd& initial,
                     const IntegratorConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(initial.size()) != model.dimension()) {
    throw std::invalid_argument("integrate: initial state has " + std::to_string(initial.size()) +
                                " entries, model expects " + std::to_string(model.dimension()));
  }
  if (!initial.allFinite()) throw std::invalid_argument("integrate: non-finite initial state");
  Trajectory traj;
  traj.model = model.name();
  traj.names = model.coordinates();
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  Eigen::VectorXd x = initial;
  const std::size_t n = config.steps();
  for (std::size_t step = 1; step <= n; ++step) {
    x = rk4_step(model, x, config.dt);
    const double t = static_cast<double>(step) * config.dt;
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "integrate: state became non-finite at t = " << t;
      throw BlowUpError(os.str(), t);
    }
    if (step % config.stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

void Trajectory::write_csv(std::ostream& out) const {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  out << "t";
  for (const auto& n : names) out << "," << quote(n);
  out << "\r\n";
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t i = 0; i < times.size(); ++i) {
    line.str({});
    line << times[i];
    for (Eigen::Index j = 0; j < states[i].size(); ++j) line << "," << states[i](j);
    out << line.str() << "\r\n";
  }
}

// ---------------------------------------------------------------------------

DriftReport invariant_drift(const Trajectory& trajectory, const OdeModel& model) {
  DriftReport r;
  if (trajectory.states.empty()) return r;
  r.energy0 = model.energy(trajectory.states.front());
  r.enstrophy0 = model.enstrophy(trajectory.states.front());
  const double e_scale = r.energy0 != 0.0 ? std::abs(r.energy0) : 1.0;
  const double z_scale = r.enstrophy0 != 0.0 ? std::abs(r.enstrophy0) : 1.0;
  for (const auto& s : trajectory.states) {
    r.energy_drift = std::max(r.energy_drift, std::abs(model.energy(s) - r.energy0) / e_scale);
    r.enstrophy_drift =
        std::max(r.enstrophy_drift, std::abs(model.enstrophy(s) - r.enstrophy0) / z_scale);
  }
  return r;
}

nlohmann::json to_json(const DriftReport& report) {
  return {{"E0", report.energy0},
          {"Z0", report.enstrophy0},
          {"E_drift", report.energy_drift},
          {"Z_drift", report.enstrophy_drift}};
}

double subspace_deviation(const TruncationPtr& truncation, const Subgroup& subgroup,
                          const Eigen::VectorXd& initial, const IntegratorConfig& config) {
  config.validate();
  const FixedSubspace space = fixed_subspace(subgroup, truncation);
  const OdeModel model = OdeModel::spectral(truncation);
  if (static_cast<std::size_t>(initial.size()) != model.dimension()) {
    throw std::invalid_argument("subspace_deviation: initial state has wrong size");
  }
  double worst = space.distance(initial);
  Eigen::VectorXd x = initial;
  const std::size_t n = config.steps();
  for (std::size_t step = 1; step <= n; ++step) {
    x = rk4_step(model, x, config.dt);
    if (!x.allFinite()) {
      const double t = static_cast<double>(step) * config.dt;
      throw BlowUpError("subspace_deviation: state became non-finite", t);
    }
    worst = std::max(worst, space.distance(x));
  }
  return worst;
}

double subspace_preservation(const TruncationPtr& truncation, const Subgroup& subgroup,
                             const Eigen::VectorXd& initial, const IntegratorConfig& config) {
  const FixedSubspace space = fixed_subspace(subgroup, truncation);
  if (static_cast<std::size_t>(initial.size()) != truncation->real_dimension()) {
    throw std::invalid_argument("subspace_preservation: initial state has wrong size");
  }
  const double d0 = space.distance(initial);
  if (d0 > 1e-14) {
    std::ostringstream os;
    os << "subspace_preservation: initial state is " << d0 << " away from the fixed subspace of '"
       << subgroup.word() << "'";
    throw std::invalid_argument(os.str());
  }
  return subspace_deviation(truncation, subgroup, initial, config);
}

}  // namespace vortlab
