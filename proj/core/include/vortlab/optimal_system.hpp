#pragma once

#include <vector>

#include "vortlab/lie_algebra.hpp"

/// Optimal systems of one- and two-dimensional subalgebras of the Cartesian
/// symmetry algebra, with caller-supplied constants and time functions.
namespace vortlab::optimal_system {

// One-dimensional.
SubalgebraSpec dilation();                                   // <D>
SubalgebraSpec time_translation(double c);                   // <d_t + c d_y>, c in {-1, 0, 1}
SubalgebraSpec y_translation(TimeFunctionPtr f);             // <d_y + X(f)>
SubalgebraSpec shift(TimeFunctionPtr f, TimeFunctionPtr g);  // <X(f) + Z(g)>

// Two-dimensional.
SubalgebraSpec dilation_time();                              // <D, d_t>
SubalgebraSpec dilation_y(double a);                         // <D, d_y + a X(1)>
SubalgebraSpec dilation_shift(double a, double c);           // <D, X(|t|^a) + c Z(|t|^(a-2))>
SubalgebraSpec dilation_psi(double a);                       // <D, Z(|t|^(a-2))>
/// <d_t + b d_y, X(e^{at}) + Z((abt + c) e^{at})>, abc = 0
SubalgebraSpec time_exponential_shift(double a, double b, double c);
/// <d_t + b d_y, Z((abt + c) e^{at})>, abc = 0
SubalgebraSpec time_exponential_psi(double a, double b, double c);
/// <d_y + X(f1), X(1) + Z(g2)>
SubalgebraSpec y_translation_shift(TimeFunctionPtr f1, TimeFunctionPtr g2);
/// <d_y + X(f1), Z(g2)>
SubalgebraSpec y_translation_psi(TimeFunctionPtr f1, TimeFunctionPtr g2);
/// <X(f1) + Z(g1), X(f2) + Z(g2)> with (f1, g1), (f2, g2) independent
SubalgebraSpec shift_pair(TimeFunctionPtr f1, TimeFunctionPtr g1, TimeFunctionPtr f2,
                          TimeFunctionPtr g2);

/// Every one-dimensional family, instantiated over a fixed parameter sample.
std::vector<SubalgebraSpec> one_dimensional_instances();
/// Every two-dimensional family, instantiated over a fixed parameter sample
/// that respects abc = 0.
std::vector<SubalgebraSpec> two_dimensional_instances();

}  // namespace vortlab::optimal_system
