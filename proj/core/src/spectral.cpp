#include "vortlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace vortlab {

std::string ModeIndex::to_string() const {
  return "[" + std::to_string(m1) + "," + std::to_string(m2) + "]";
}

ModeIndex operator+(ModeIndex a, ModeIndex b) noexcept { return {a.m1 + b.m1, a.m2 + b.m2}; }
ModeIndex operator-(ModeIndex a, ModeIndex b) noexcept { return {a.m1 - b.m1, a.m2 - b.m2}; }

double interaction_term(ModeIndex mprime, ModeIndex m, double k, double l) {
  if (mprime.is_zero()) throw std::invalid_argument("interaction_term: m' = (0,0)");
  const double ax = mprime.m1 * k, ay = mprime.m2 * l;
  const double bx = m.m1 * k, by = m.m2 * l;
  return -(ax * by - ay * bx) / (ax * ax + ay * ay);
}

// ---------------------------------------------------------------------------

Truncation::Truncation(std::vector<ModeIndex> modes, double k, double l)
    : modes_(std::move(modes)), k_(k), l_(l) {
  if (!(k_ > 0.0) || !(l_ > 0.0) || !std::isfinite(k_) || !std::isfinite(l_)) {
    throw std::invalid_argument("Truncation: k and l must be finite and > 0");
  }
  std::sort(modes_.begin(), modes_.end());
  if (std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end()) {
    throw std::invalid_argument("Truncation: duplicate mode");
  }
  for (const auto& m : modes_) {
    if (m.is_zero()) throw std::invalid_argument("Truncation: mode (0,0) is excluded");
    if (std::abs(m.m1) > 3 || std::abs(m.m2) > 3) {
      throw std::invalid_argument("Truncation: mode " + m.to_string() + " exceeds |m| <= 3");
    }
    if (!std::binary_search(modes_.begin(), modes_.end(), -m)) {
      throw std::invalid_argument("Truncation: not closed under negation (missing " +
                                  (-m).to_string() + ")");
    }
    if (m.is_representative()) representatives_.push_back(m);
  }

  // Triads of -m mirror those of m term by term, so conjugate states give
  // exactly conjugate sums.
  triads_.resize(modes_.size());
  for (const auto& m : representatives_) {
    std::vector<Triad> pos, neg;
    for (const auto& mp : modes_) {
      const ModeIndex rest = m - mp;
      if (!contains(rest)) continue;
      const double c = interaction_term(mp, m, k_, l_);
      pos.push_back({position(mp), position(rest), c});
      neg.push_back({position(-mp), position(-rest), interaction_term(-mp, -m, k_, l_)});
    }
    triads_[position(m)] = std::move(pos);
    triads_[position(-m)] = std::move(neg);
  }
}

Truncation Truncation::box(int n, double k, double l) {
  if (n < 1 || n > 3) throw std::invalid_argument("Truncation::box: n must be 1, 2 or 3");
  std::vector<ModeIndex> modes;
  for (int a = -n; a <= n; ++a) {
    for (int b = -n; b <= n; ++b) {
      if (a != 0 || b != 0) modes.push_back({a, b});
    }
  }
  return Truncation(std::move(modes), k, l);
}

bool Truncation::contains(ModeIndex m) const noexcept {
  return std::binary_search(modes_.begin(), modes_.end(), m);
}

std::size_t Truncation::position(ModeIndex m) const {
  const auto it = std::lower_bound(modes_.begin(), modes_.end(), m);
  if (it == modes_.end() || *it != m) {
    throw std::out_of_range("Truncation: mode " + m.to_string() + " not in truncation");
  }
  return static_cast<std::size_t>(it - modes_.begin());
}

std::string Truncation::coordinate_name(std::size_t i) const {
  const std::size_t n = representatives_.size();
  if (i >= 2 * n) throw std::out_of_range("Truncation: coordinate index out of range");
  return (i < n ? "A" : "B") + representatives_[i % n].to_string();
}

double Truncation::wavenumber_squared(ModeIndex m) const noexcept {
  const double a = m.m1 * k_, b = m.m2 * l_;
  return a * a + b * b;
}

// ---------------------------------------------------------------------------

double reality_defect(const Truncation& truncation, std::span<const Complex> coefficients) {
  double worst = 0.0;
  const auto modes = truncation.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::size_t j = truncation.position(-modes[i]);
    worst = std::max(worst, std::abs(coefficients[j] - std::conj(coefficients[i])));
  }
  return worst;
}

SpectralState::SpectralState(TruncationPtr truncation, std::vector<Complex> coefficients)
    : truncation_(std::move(truncation)), coefficients_(std::move(coefficients)) {
  if (!truncation_) throw std::invalid_argument("SpectralState: missing truncation");
  if (coefficients_.size() != truncation_->modes().size()) {
    throw std::invalid_argument("SpectralState: coefficient count does not match the truncation");
  }
  for (const auto& c : coefficients_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("SpectralState: non-finite coefficient");
    }
  }
  if (reality_defect(*truncation_, coefficients_) != 0.0) {
    throw std::invalid_argument("SpectralState: reality constraint C_{-m} = conj(C_m) violated");
  }
}

SpectralState SpectralState::zero(TruncationPtr truncation) {
  const std::size_t n = truncation ? truncation->modes().size() : 0;
  return SpectralState(std::move(truncation), std::vector<Complex>(n));
}

SpectralState SpectralState::from_real(TruncationPtr truncation, const Eigen::VectorXd& real) {
  if (!truncation) throw std::invalid_argument("SpectralState: missing truncation");
  const auto reps = truncation->representatives();
  const auto n = static_cast<Eigen::Index>(reps.size());
  if (real.size() != 2 * n) {
    throw std::invalid_argument("SpectralState: expected " + std::to_string(2 * n) +
                                " real coordinates");
  }
  std::vector<Complex> c(truncation->modes().size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex value(0.5 * real(i), -0.5 * real(n + i));
    const auto& m = reps[static_cast<std::size_t>(i)];
    c[truncation->position(m)] = value;
    c[truncation->position(-m)] = std::conj(value);
  }
  return SpectralState(std::move(truncation), std::move(c));
}

Complex SpectralState::coefficient(ModeIndex m) const {
  return coefficients_[truncation_->position(m)];
}

Eigen::VectorXd SpectralState::to_real() const {
  const auto reps = truncation_->representatives();
  const auto n = static_cast<Eigen::Index>(reps.size());
  Eigen::VectorXd out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex c = coefficient(reps[static_cast<std::size_t>(i)]);
    out(i) = 2.0 * c.real();
    out(n + i) = -2.0 * c.imag();
  }
  return out;
}

double SpectralState::energy() const {
  double e = 0.0;
  const auto modes = truncation_->modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    e += std::norm(coefficients_[i]) / truncation_->wavenumber_squared(modes[i]);
  }
  return e;
}

double SpectralState::enstrophy() const {
  double z = 0.0;
  for (const auto& c : coefficients_) z += std::norm(c);
  return z;
}

std::vector<Complex> spectral_bilinear(const Truncation& truncation, std::span<const Complex> u,
                                       std::span<const Complex> v) {
  const std::size_t n = truncation.modes().size();
  if (u.size() != n || v.size() != n) {
    throw std::invalid_argument("spectral_bilinear: size mismatch");
  }
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex sum = 0.0;
    for (const auto& t : truncation.triads(i)) {
      sum += 0.5 * t.coefficient * (u[t.source] * v[t.partner] + v[t.source] * u[t.partner]);
    }
    out[i] = sum;
  }
  return out;
}

SpectralState spectral_rhs(const SpectralState& state) {
  return SpectralState(state.truncation_ptr(),
                       spectral_bilinear(state.truncation(), state.coefficients(),
                                         state.coefficients()));
}

Eigen::VectorXd spectral_rhs_real(const TruncationPtr& truncation, const Eigen::VectorXd& real) {
  return spectral_rhs(SpectralState::from_real(truncation, real)).to_real();
}

// ---------------------------------------------------------------------------

ModeIndex CoefficientMap::source(ModeIndex m) const noexcept {
  return {reflect1 ? -m.m1 : m.m1, reflect2 ? -m.m2 : m.m2};
}

double CoefficientMap::factor(ModeIndex m) const noexcept {
  int parity = 0;
  if (parity1) parity += std::abs(m.m1);
  if (parity2) parity += std::abs(m.m2);
  return (parity % 2 == 0 ? 1.0 : -1.0) * sign;
}

SpectralState CoefficientMap::apply(const SpectralState& state) const {
  const auto& trunc = state.truncation();
  const auto modes = trunc.modes();
  std::vector<Complex> out(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeIndex src = source(modes[i]);
    if (!trunc.contains(src)) {
      throw std::domain_error("CoefficientMap: mode " + src.to_string() +
                              " is outside the truncation");
    }
    out[i] = factor(modes[i]) * state.coefficients()[trunc.position(src)];
  }
  return SpectralState(state.truncation_ptr(), std::move(out));
}

Eigen::MatrixXd CoefficientMap::real_matrix(const TruncationPtr& truncation) const {
  const auto n = static_cast<Eigen::Index>(truncation->real_dimension());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m.col(j) = apply(SpectralState::from_real(truncation, Eigen::VectorXd::Unit(n, j))).to_real();
  }
  return m;
}

CoefficientMap CoefficientMap::compose(const CoefficientMap& other) const noexcept {
  CoefficientMap out;
  out.sign = sign * other.sign;
  out.parity1 = parity1 != other.parity1;
  out.parity2 = parity2 != other.parity2;
  out.reflect1 = reflect1 != other.reflect1;
  out.reflect2 = reflect2 != other.reflect2;
  out.time_reversal = time_reversal != other.time_reversal;
  return out;
}

CoefficientMap induced_symmetry(std::string_view name) {
  CoefficientMap m;
  if (name == "e1") {
    m.sign = -1;
    m.reflect2 = true;
  } else if (name == "e2") {
    m.sign = -1;
    m.reflect1 = true;
  } else if (name == "e3") {
    m.sign = -1;
    m.time_reversal = true;
  } else if (name == "p") {
    m.parity1 = true;
  } else if (name == "q") {
    m.parity2 = true;
  } else {
    throw std::invalid_argument("induced_symmetry: unknown name '" + std::string(name) + "'");
  }
  return m;
}

}  // namespace vortlab
