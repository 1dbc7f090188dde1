#pragma once

#include <string>

#include "vortlab/expr.hpp"
#include "vortlab/fields.hpp"
#include "vortlab/time_function.hpp"

namespace vortlab {

/// sigma = -beta k / (k^2 + l^2) for psi = A sin(kx + ly - sigma t).
double rossby_frequency(double k, double l, double beta);

/// psi = A sin(kx + ly - sigma t). Throws std::invalid_argument for k = l = 0.
AnalyticField rossby_wave(double amplitude, double k, double l, double beta);

/// Solution of the Klein-Gordon equation v_pq + beta v = 0 to lift back.
struct KGSolutionSpec {
  enum class Kind { Harmonic, Custom };

  Kind kind = Kind::Harmonic;
  double amplitude = 1.0;
  double alpha = 1.0;  // harmonic: v = A sin(alpha p + (beta / alpha) q)
  Expr field;          // custom: expression in the variables "p" and "q"

  static KGSolutionSpec harmonic(double amplitude, double alpha);
  static KGSolutionSpec custom(Expr field);

  /// The wavenumber gamma = beta / alpha that makes alpha gamma = beta.
  double gamma(double beta) const;
};

/// q(t) = integral_0^t ds / (1 + f(s)^2) with derivatives up to order 3.
/// Closed forms for constant and linear polynomial f, cached Gauss-Legendre
/// quadrature (32 nodes per unit interval) otherwise.
TimeFunctionPtr reduced_time(TimeFunctionPtr f);

/// psi = v(x - f y, q(t)) / (1 + f^2) + (f''/beta)(x - f y) - h/beta
///       - ((1 + f^2) f'')'/beta^2 - f' y^2 / 2.
/// `h` may be null (h = 0). Throws std::invalid_argument for beta = 0.
AnalyticField klein_gordon_lift(TimeFunctionPtr f, TimeFunctionPtr h, double beta,
                                const KGSolutionSpec& spec);

/// Partially invariant families built from a vorticity ansatz zeta = zeta(t, y).
struct PartialInvariantSpec {
  enum class Case { EtaConstant, EtaGeneral };

  Case kind = Case::EtaConstant;

  // eta_constant: psi = Psi - beta y^3/6 + eta y^2/2 with Psi harmonic.
  Expr harmonic;
  Expr eta;  // a constant, or a t-only expression (then not a solution in general)

  // eta_general: psi = F(w)/g1^2 - beta y^3/6 - ((g1' y + g0')/g1) x + f1 y + f0,
  // w = g1 y + g0.
  Expr profile;  // expression in the variable "omega"
  TimeFunctionPtr g1, g0, f1, f0;
  double window_begin = -1.0;
  double window_end = 1.0;

  static PartialInvariantSpec eta_constant(Expr harmonic, double eta);
  static PartialInvariantSpec eta_time_dependent(Expr harmonic, Expr eta);
  static PartialInvariantSpec eta_general(Expr profile, TimeFunctionPtr g1, TimeFunctionPtr g0,
                                          TimeFunctionPtr f1 = nullptr,
                                          TimeFunctionPtr f0 = nullptr);
};

/// Assembles the family member. Throws std::domain_error when g1 vanishes on
/// the window, std::invalid_argument when Psi is not harmonic.
AnalyticField partially_invariant(const PartialInvariantSpec& spec, double beta);

}  // namespace vortlab
