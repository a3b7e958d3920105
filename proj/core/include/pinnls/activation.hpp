#pragma once

#include <array>
#include <string_view>

namespace pinnls {

enum class ActivationKind { LogisticSigmoid, Tanh };

/// Smooth scalar activation with closed-form derivatives up to third order.
///
/// The third derivative is required because the parameter gradient of a
/// second-order spatial derivative differentiates sigma'' once more.
class Activation {
 public:
  constexpr explicit Activation(ActivationKind kind = ActivationKind::Tanh)
      : kind_(kind) {}

  static Activation from_name(std::string_view name);

  ActivationKind kind() const { return kind_; }
  std::string_view name() const;

  double value(double t) const;
  double first(double t) const;
  double second(double t) const;
  double third(double t) const;

  /// {sigma, sigma', sigma'', sigma'''} sharing a single transcendental call.
  std::array<double, 4> derivatives(double t) const;

  /// sigma^(order)(t) for order in [0, 3].
  double derivative(double t, int order) const;

  friend bool operator==(Activation, Activation) = default;

 private:
  ActivationKind kind_;
};

}  // namespace pinnls
