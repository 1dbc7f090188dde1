#include "vortlab/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <stdexcept>

namespace vortlab {

Eigen::VectorXd ReducedModel::rhs(const Eigen::VectorXd& a) const {
  if (static_cast<std::size_t>(a.size()) != amplitudes.size()) {
    throw std::invalid_argument("ReducedModel::rhs: wrong state size");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size());
  for (const auto& t : terms) {
    out(static_cast<Eigen::Index>(t.target)) +=
        t.coefficient * a(static_cast<Eigen::Index>(t.first)) * a(static_cast<Eigen::Index>(t.second));
  }
  return out;
}

std::size_t ReducedModel::amplitude_index(std::string_view name) const {
  const auto it = std::find(amplitudes.begin(), amplitudes.end(), name);
  if (it == amplitudes.end()) {
    throw std::out_of_range("ReducedModel: unknown amplitude '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - amplitudes.begin());
}

double ReducedModel::coefficient(std::string_view target, std::string_view first,
                                 std::string_view second) const {
  const std::size_t t = amplitude_index(target);
  std::size_t a = amplitude_index(first), b = amplitude_index(second);
  if (a > b) std::swap(a, b);
  double sum = 0.0;
  for (const auto& term : terms) {
    if (term.target == t && term.first == a && term.second == b) sum += term.coefficient;
  }
  return sum;
}

namespace {

std::vector<Complex> complex_of(const TruncationPtr& trunc, const Eigen::VectorXd& real) {
  const auto s = SpectralState::from_real(trunc, real);
  return {s.coefficients().begin(), s.coefficients().end()};
}

/// Real coordinates of a coefficient vector known to satisfy reality.
Eigen::VectorXd real_of(const TruncationPtr& trunc, std::vector<Complex> c) {
  return SpectralState(trunc, std::move(c)).to_real();
}

}  // namespace

ReducedModel reduce_model(const Subgroup& subgroup, const TruncationPtr& truncation) {
  const FixedSubspace space = fixed_subspace(subgroup, truncation);
  const auto d = static_cast<Eigen::Index>(space.dimension());
  const Eigen::MatrixXd& P = space.parametrization;

  // Dynamic invariance at random subspace points.
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 5 && d > 0; ++trial) {
    Eigen::VectorXd a(d);
    for (Eigen::Index i = 0; i < d; ++i) a(i) = unit(rng);
    const Eigen::VectorXd x = P * a;
    const Eigen::VectorXd f = spectral_rhs_real(truncation, x);
    Eigen::VectorXd free(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      free(i) = f(static_cast<Eigen::Index>(space.free_coordinates[static_cast<std::size_t>(i)]));
    }
    const Eigen::VectorXd off = f - P * free;
    const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
    if (off.cwiseAbs().maxCoeff() > 1e-12 * scale) {
      Eigen::Index worst = 0;
      off.cwiseAbs().maxCoeff(&worst);
      throw InvarianceError("reduce_model: subspace of '" + subgroup.word() +
                                "' is not invariant; the dynamics leave it along " +
                                truncation->coordinate_name(static_cast<std::size_t>(worst)),
                            off);
    }
  }

  ReducedModel model;
  model.subgroup = subgroup.word();
  model.modes.assign(truncation->modes().begin(), truncation->modes().end());
  model.k = truncation->k();
  model.l = truncation->l();
  model.embedding = P;
  for (auto c : space.free_coordinates) {
    model.coordinates.push_back(truncation->coordinate_name(c));
    model.amplitudes.push_back(truncation->coordinate_name(c));
  }

  std::vector<std::vector<Complex>> columns;
  for (Eigen::Index j = 0; j < d; ++j) columns.push_back(complex_of(truncation, P.col(j)));

  std::vector<QuadraticTerm> raw;
  double largest = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      auto ab = spectral_bilinear(*truncation, columns[static_cast<std::size_t>(a)],
                                  columns[static_cast<std::size_t>(b)]);
      if (a != b) {
        const auto ba = spectral_bilinear(*truncation, columns[static_cast<std::size_t>(b)],
                                          columns[static_cast<std::size_t>(a)]);
        for (std::size_t i = 0; i < ab.size(); ++i) ab[i] += ba[i];
      }
      const Eigen::VectorXd r = real_of(truncation, std::move(ab));
      for (Eigen::Index t = 0; t < d; ++t) {
        const double c =
            r(static_cast<Eigen::Index>(space.free_coordinates[static_cast<std::size_t>(t)]));
        if (c == 0.0) continue;
        raw.push_back({static_cast<std::size_t>(t), c, static_cast<std::size_t>(a),
                       static_cast<std::size_t>(b)});
        largest = std::max(largest, std::abs(c));
      }
    }
  }
  for (const auto& t : raw) {
    if (std::abs(t.coefficient) > kTermCutoff * largest) model.terms.push_back(t);
  }
  std::sort(model.terms.begin(), model.terms.end(), [](const QuadraticTerm& x, const QuadraticTerm& y) {
    return std::tie(x.target, x.first, x.second) < std::tie(y.target, y.first, y.second);
  });
  return model;
}

ReducedModel lorenz1960(double k, double l) {
  const auto trunc = std::make_shared<const Truncation>(Truncation::eight_mode(k, l));
  ReducedModel m = reduce_model(lorenz_subgroup(), trunc);
  if (m.dimension() != 3) {
    throw std::logic_error("lorenz1960: expected a three-dimensional fixed subspace");
  }
  // Reorder to (A, F, G) = (A[0,1], A[1,0], A[1,-1]).
  const std::array<std::string, 3> order{"A[0,1]", "A[1,0]", "A[1,-1]"};
  const std::array<std::string, 3> names{"A", "F", "G"};
  std::array<std::size_t, 3> to_new{};
  Eigen::MatrixXd embedding(m.embedding.rows(), 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t old = m.amplitude_index(order[i]);
    to_new[old] = i;
    embedding.col(static_cast<Eigen::Index>(i)) = m.embedding.col(static_cast<Eigen::Index>(old));
  }
  for (auto& t : m.terms) {
    t.target = to_new[t.target];
    t.first = to_new[t.first];
    t.second = to_new[t.second];
    if (t.first > t.second) std::swap(t.first, t.second);
  }
  std::sort(m.terms.begin(), m.terms.end(), [](const QuadraticTerm& x, const QuadraticTerm& y) {
    return std::tie(x.target, x.first, x.second) < std::tie(y.target, y.first, y.second);
  });
  m.coordinates.assign(order.begin(), order.end());
  m.amplitudes.assign(names.begin(), names.end());
  m.embedding = std::move(embedding);
  return m;
}

std::array<double, 3> lorenz1960_coefficients(double k, double l) {
  const double k2 = k * k, l2 = l * l, s = k2 + l2;
  return {-(1.0 / k2 - 1.0 / s) * k * l, (1.0 / l2 - 1.0 / s) * k * l,
          -0.5 * (1.0 / l2 - 1.0 / k2) * k * l};
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const ReducedModel& model) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : model.terms) {
    terms.push_back({{"target", model.amplitudes[t.target]},
                     {"coeff", t.coefficient},
                     {"factors", {model.amplitudes[t.first], model.amplitudes[t.second]}}});
  }
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : model.modes) modes.push_back({m.m1, m.m2});
  nlohmann::json embedding = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.embedding.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < model.embedding.cols(); ++c) row.push_back(model.embedding(r, c) + 0.0);
    embedding.push_back(std::move(row));
  }
  return {{"amplitudes", model.amplitudes},
          {"coordinates", model.coordinates},
          {"terms", std::move(terms)},
          {"provenance",
           {{"subgroup", model.subgroup},
            {"modes", std::move(modes)},
            {"k", model.k},
            {"l", model.l},
            {"embedding", std::move(embedding)}}}};
}

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace

ReducedModel reduced_model_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"amplitudes", "coordinates", "terms", "provenance"}, "ReducedModel");
  ReducedModel m;
  try {
    m.amplitudes = j.at("amplitudes").get<std::vector<std::string>>();
    m.coordinates = j.value("coordinates", std::vector<std::string>{});
    for (const auto& t : j.at("terms")) {
      reject_unknown(t, {"target", "coeff", "factors"}, "ReducedModel.terms");
      const auto factors = t.at("factors").get<std::vector<std::string>>();
      if (factors.size() != 2) throw std::invalid_argument("ReducedModel.terms: need two factors");
      QuadraticTerm q;
      q.target = m.amplitude_index(t.at("target").get<std::string>());
      q.coefficient = t.at("coeff").get<double>();
      q.first = m.amplitude_index(factors[0]);
      q.second = m.amplitude_index(factors[1]);
      if (q.first > q.second) std::swap(q.first, q.second);
      m.terms.push_back(q);
    }
    if (const auto it = j.find("provenance"); it != j.end()) {
      const auto& p = *it;
      reject_unknown(p, {"subgroup", "modes", "k", "l", "embedding"}, "ReducedModel.provenance");
      m.subgroup = p.value("subgroup", std::string{});
      m.k = p.value("k", 1.0);
      m.l = p.value("l", 1.0);
      for (const auto& mode : p.value("modes", nlohmann::json::array())) {
        m.modes.push_back({mode.at(0).get<int>(), mode.at(1).get<int>()});
      }
      if (const auto e = p.find("embedding"); e != p.end() && !e->empty()) {
        const auto rows = static_cast<Eigen::Index>(e->size());
        const auto cols = static_cast<Eigen::Index>(e->at(0).size());
        m.embedding.resize(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index c = 0; c < cols; ++c) {
            m.embedding(r, c) = e->at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
          }
        }
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("ReducedModel: ") + ex.what());
  } catch (const std::out_of_range& ex) {
    throw std::invalid_argument(std::string("ReducedModel: ") + ex.what());
  }
  return m;
}

}  // namespace vortlab
