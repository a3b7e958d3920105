#include "pinnls/activation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pinnls {

Activation Activation::from_name(std::string_view name) {
  if (name == "tanh") return Activation(ActivationKind::Tanh);
  if (name == "sigmoid" || name == "logistic") {
    return Activation(ActivationKind::LogisticSigmoid);
  }
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "' (expected tanh or sigmoid)");
}

std::string_view Activation::name() const {
  return kind_ == ActivationKind::Tanh ? "tanh" : "sigmoid";
}

std::array<double, 4> Activation::derivatives(double t) const {
  if (kind_ == ActivationKind::Tanh) {
    const double s = std::tanh(t);
    const double q = 1.0 - s * s;  // sech^2
    return {s, q, -2.0 * s * q, q * (6.0 * s * s - 2.0)};
  }
  // Numerically stable logistic for large |t|.
  const double s = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                            : std::exp(t) / (1.0 + std::exp(t));
  const double p = s * (1.0 - s);
  return {s, p, p * (1.0 - 2.0 * s), p * (1.0 - 6.0 * s + 6.0 * s * s)};
}

double Activation::value(double t) const { return derivatives(t)[0]; }
double Activation::first(double t) const { return derivatives(t)[1]; }
double Activation::second(double t) const { return derivatives(t)[2]; }
double Activation::third(double t) const { return derivatives(t)[3]; }

double Activation::derivative(double t, int order) const {
  if (order < 0 || order > 3) {
    throw std::out_of_range("activation derivative order must be in [0, 3]");
  }
  return derivatives(t)[static_cast<std::size_t>(order)];
}

}  // namespace pinnls
