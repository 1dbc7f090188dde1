#pragma once

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vortlab {

/// A smooth real function of time together with its derivatives.
///
/// Presets (polynomial, exponential, sinusoid, |t|^a, ...) supply derivatives
/// of every order in closed form. User-supplied closures are limited to the
/// orders they provide, which is at most 3.
class TimeFunction {
 public:
  /// Returns d^order/dt^order of the function at t.
  using Evaluator = std::function<double(double t, int order)>;

  static constexpr int kUnboundedOrder = std::numeric_limits<int>::max();

  TimeFunction(std::string name, Evaluator evaluator, int max_order = 3);

  static TimeFunction constant(std::string name, double value);
  /// Coefficients in ascending powers of t.
  static TimeFunction polynomial(std::string name, std::vector<double> coefficients);
  /// amplitude * exp(rate * t)
  static TimeFunction exponential(std::string name, double rate, double amplitude = 1.0);
  /// (c0 + c1 t) * exp(rate * t)
  static TimeFunction linear_exponential(std::string name, double c0, double c1, double rate);
  /// amplitude * sin(frequency * t + phase)
  static TimeFunction sinusoid(std::string name, double amplitude, double frequency,
                               double phase = 0.0);
  /// |t|^exponent; derivatives are undefined at t = 0 for non-integer exponents.
  static TimeFunction abs_power(std::string name, double exponent);
  /// value, first, second and third derivative closures.
  static TimeFunction from_derivatives(std::string name,
                                       std::array<std::function<double(double)>, 4> derivatives);

  double operator()(double t, int order = 0) const;

  const std::string& name() const noexcept { return name_; }
  int max_order() const noexcept { return max_order_; }

  /// Polynomial coefficients when the function is a known polynomial preset.
  const std::optional<std::vector<double>>& polynomial_coefficients() const noexcept {
    return polynomial_;
  }

  /// The first derivative as a function in its own right, named "<name>'".
  TimeFunction derivative() const;

 private:
  std::string name_;
  Evaluator evaluator_;
  int max_order_;
  std::optional<std::vector<double>> polynomial_;
};

using TimeFunctionPtr = std::shared_ptr<const TimeFunction>;
using TimeFunctionRegistry = std::map<std::string, TimeFunctionPtr, std::less<>>;

inline TimeFunctionPtr share(TimeFunction f) {
  return std::make_shared<const TimeFunction>(std::move(f));
}

}  // namespace vortlab
