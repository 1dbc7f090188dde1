#include "vortlab/time_function.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace vortlab {

namespace {

double falling_factorial(double a, int n) {
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= (a - i);
  return result;
}

}  // namespace

TimeFunction::TimeFunction(std::string name, Evaluator evaluator, int max_order)
    : name_(std::move(name)), evaluator_(std::move(evaluator)), max_order_(max_order) {
  if (!evaluator_) throw std::invalid_argument("TimeFunction '" + name_ + "': empty evaluator");
  if (max_order_ < 0) throw std::invalid_argument("TimeFunction '" + name_ + "': negative max order");
}

double TimeFunction::operator()(double t, int order) const {
  if (order < 0) throw std::invalid_argument("TimeFunction: negative derivative order");
  if (order > max_order_) {
    throw std::domain_error("TimeFunction '" + name_ + "': derivative of order " +
                            std::to_string(order) + " not available (max " +
                            std::to_string(max_order_) + ")");
  }
  return evaluator_(t, order);
}

TimeFunction TimeFunction::constant(std::string name, double value) {
  auto f = polynomial(std::move(name), {value});
  return f;
}

TimeFunction TimeFunction::polynomial(std::string name, std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  auto eval = [c = coefficients](double t, int order) {
    // Horner on the order-th derivative coefficients.
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > static_cast<std::size_t>(order);) {
      acc = acc * t + c[i] * falling_factorial(static_cast<double>(i), order);
    }
    return acc;
  };
  TimeFunction f(std::move(name), eval, kUnboundedOrder);
  f.polynomial_ = std::move(coefficients);
  return f;
}

TimeFunction TimeFunction::exponential(std::string name, double rate, double amplitude) {
  return TimeFunction(
      std::move(name),
      [rate, amplitude](double t, int order) {
        return amplitude * std::pow(rate, order) * std::exp(rate * t);
      },
      kUnboundedOrder);
}

TimeFunction TimeFunction::linear_exponential(std::string name, double c0, double c1, double rate) {
  // d^n/dt^n (c0 + c1 t) e^{rt} = e^{rt} (r^n (c0 + c1 t) + n r^{n-1} c1)
  return TimeFunction(
      std::move(name),
      [c0, c1, rate](double t, int order) {
        const double e = std::exp(rate * t);
        double value = std::pow(rate, order) * (c0 + c1 * t);
        if (order > 0) value += order * std::pow(rate, order - 1) * c1;
        return e * value;
      },
      kUnboundedOrder);
}

TimeFunction TimeFunction::sinusoid(std::string name, double amplitude, double frequency,
                                    double phase) {
  return TimeFunction(
      std::move(name),
      [amplitude, frequency, phase](double t, int order) {
        // sin^{(n)}(u) = sin(u + n pi/2)
        const double shift = order * 1.5707963267948966;
        return amplitude * std::pow(frequency, order) * std::sin(frequency * t + phase + shift);
      },
      kUnboundedOrder);
}

TimeFunction TimeFunction::abs_power(std::string name, double exponent) {
  return TimeFunction(
      std::move(name),
      [exponent](double t, int order) {
        const double magnitude = std::abs(t);
        const double sign = (t < 0.0 && order % 2 == 1) ? -1.0 : 1.0;
        return sign * falling_factorial(exponent, order) * std::pow(magnitude, exponent - order);
      },
      kUnboundedOrder);
}

TimeFunction TimeFunction::from_derivatives(
    std::string name, std::array<std::function<double(double)>, 4> derivatives) {
  for (const auto& d : derivatives) {
    if (!d) throw std::invalid_argument("TimeFunction '" + name + "': missing derivative closure");
  }
  return TimeFunction(
      std::move(name),
      [d = std::move(derivatives)](double t, int order) {
        return d[static_cast<std::size_t>(order)](t);
      },
      3);
}

TimeFunction TimeFunction::derivative() const {
  if (max_order_ < 1) {
    throw std::domain_error("TimeFunction '" + name_ + "': no first derivative available");
  }
  const int reduced = max_order_ == kUnboundedOrder ? kUnboundedOrder : max_order_ - 1;
  TimeFunction d(
      name_ + "'",
      [eval = evaluator_](double t, int order) { return eval(t, order + 1); }, reduced);
  if (polynomial_) {
    std::vector<double> coeffs;
    for (std::size_t i = 1; i < polynomial_->size(); ++i) {
      coeffs.push_back((*polynomial_)[i] * static_cast<double>(i));
    }
    if (coeffs.empty()) coeffs.push_back(0.0);
    d.polynomial_ = std::move(coeffs);
  }
  return d;
}

}  // namespace vortlab
