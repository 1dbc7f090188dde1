#pragma once

#include <compare>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vortlab {

using Complex = std::complex<double>;

/// Fourier mode m = m1 i + m2 j with wavevector (m1 k, m2 l).
struct ModeIndex {
  int m1 = 0;
  int m2 = 0;

  auto operator<=>(const ModeIndex&) const = default;
  ModeIndex operator-() const noexcept { return {-m1, -m2}; }
  bool is_zero() const noexcept { return m1 == 0 && m2 == 0; }
  /// Lexicographically positive: m1 > 0, or m1 = 0 and m2 > 0.
  bool is_representative() const noexcept { return m1 > 0 || (m1 == 0 && m2 > 0); }
  std::string to_string() const;  // "[1,-1]"
};

ModeIndex operator+(ModeIndex a, ModeIndex b) noexcept;
ModeIndex operator-(ModeIndex a, ModeIndex b) noexcept;

/// -(m' x m)_z / |m'|^2 with m' = (m1' k, m2' l), m = (m1 k, m2 l).
/// Throws std::invalid_argument for m' = 0.
double interaction_term(ModeIndex mprime, ModeIndex m, double k, double l);

/// Finite mode set closed under negation, without (0,0), |m1|, |m2| <= 3.
///
/// Real coordinates are ordered as all A_m, then all B_m, over the
/// representatives sorted lexicographically, with C_m = (A_m - i B_m)/2.
class Truncation {
 public:
  struct Triad {
    std::size_t source;   // m'
    std::size_t partner;  // m - m'
    double coefficient;   // interaction_term(m', m)
  };

  Truncation(std::vector<ModeIndex> modes, double k, double l);

  /// All modes with |m1|, |m2| <= n except (0,0).
  static Truncation box(int n, double k, double l);
  /// The 8-mode truncation over {-1, 0, 1}^2.
  static Truncation eight_mode(double k, double l) { return box(1, k, l); }

  double k() const noexcept { return k_; }
  double l() const noexcept { return l_; }
  std::span<const ModeIndex> modes() const noexcept { return modes_; }
  std::span<const ModeIndex> representatives() const noexcept { return representatives_; }
  bool contains(ModeIndex m) const noexcept;
  /// Position in modes(); throws std::out_of_range.
  std::size_t position(ModeIndex m) const;
  std::size_t real_dimension() const noexcept { return 2 * representatives_.size(); }
  /// "A[0,1]" or "B[1,-1]".
  std::string coordinate_name(std::size_t i) const;
  /// |m^|^2 = (m1 k)^2 + (m2 l)^2
  double wavenumber_squared(ModeIndex m) const noexcept;
  /// Galerkin triads feeding mode modes()[i].
  std::span<const Triad> triads(std::size_t i) const { return triads_.at(i); }

 private:
  std::vector<ModeIndex> modes_;
  std::vector<ModeIndex> representatives_;
  double k_;
  double l_;
  std::vector<std::vector<Triad>> triads_;
};

using TruncationPtr = std::shared_ptr<const Truncation>;

/// Vorticity coefficients C_m satisfying C_{-m} = conj(C_m) exactly.
class SpectralState {
 public:
  /// Coefficients ordered as truncation->modes(). Throws std::invalid_argument
  /// when the reality constraint is violated.
  SpectralState(TruncationPtr truncation, std::vector<Complex> coefficients);

  static SpectralState zero(TruncationPtr truncation);
  /// From real coordinates (A..., B...).
  static SpectralState from_real(TruncationPtr truncation, const Eigen::VectorXd& real);

  const Truncation& truncation() const noexcept { return *truncation_; }
  const TruncationPtr& truncation_ptr() const noexcept { return truncation_; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  Complex coefficient(ModeIndex m) const;
  Eigen::VectorXd to_real() const;

  /// Sum over all m of |C_m|^2 / |m^|^2 and of |C_m|^2.
  double energy() const;
  double enstrophy() const;

 private:
  TruncationPtr truncation_;
  std::vector<Complex> coefficients_;
};

/// max over m of |C_{-m} - conj(C_m)|.
double reality_defect(const Truncation& truncation, std::span<const Complex> coefficients);

/// dC_m/dt = sum over m' of interaction_term(m', m) C_{m'} C_{m-m'}, with both
/// m' and m - m' in the truncation.
SpectralState spectral_rhs(const SpectralState& state);

/// The same right-hand side in real coordinates.
Eigen::VectorXd spectral_rhs_real(const TruncationPtr& truncation, const Eigen::VectorXd& real);

/// Symmetric bilinear form B(u, v) whose diagonal is the right-hand side, in
/// complex coefficients ordered as modes().
std::vector<Complex> spectral_bilinear(const Truncation& truncation, std::span<const Complex> u,
                                       std::span<const Complex> v);

/// C'_m = sign (-1)^{parity1 m1 + parity2 m2} C_{(+-m1, +-m2)}, optionally
/// reversing time.
struct CoefficientMap {
  int sign = 1;
  bool parity1 = false;
  bool parity2 = false;
  bool reflect1 = false;
  bool reflect2 = false;
  bool time_reversal = false;

  bool operator==(const CoefficientMap&) const = default;

  ModeIndex source(ModeIndex m) const noexcept;
  double factor(ModeIndex m) const noexcept;
  /// Throws std::domain_error when a source mode leaves the truncation.
  SpectralState apply(const SpectralState& state) const;
  /// Matrix acting on real coordinates.
  Eigen::MatrixXd real_matrix(const TruncationPtr& truncation) const;
  /// (*this) o other
  CoefficientMap compose(const CoefficientMap& other) const noexcept;
};

/// "e1", "e2", "e3", "p" or "q"; throws std::invalid_argument otherwise.
CoefficientMap induced_symmetry(std::string_view name);

}  // namespace vortlab
