#include <cmath>
#include <numbers>

#include "pinnls/errors.hpp"
#include "pinnls/problem.hpp"

namespace pinnls {
namespace {

using std::numbers::pi;

// d^k/dx^k sin(c x)
double sin_derivative(double c, double x, int k) {
  return std::pow(c, k) * std::sin(c * x + k * pi / 2.0);
}

void require_order(const MultiIndex& alpha) {
  if (alpha.order() > 2) {
    throw UnsupportedOrderError("exact solutions provide derivatives up to order 2");
  }
}

DifferentiableField sine_1d() {
  return [](PointView x, const MultiIndex& alpha) {
    require_order(alpha);
    return sin_derivative(pi, x[0], alpha[0]);
  };
}

ScalarField zero_field() {
  return [](PointView) { return 0.0; };
}

EllipticProblem poisson1d_sin() {
  const Domain omega = Domain::unit_interval();
  return EllipticProblem(
      "poisson1d-sin", omega, EllipticOperator::negative_laplacian(1),
      BoundaryOperator::dirichlet(1),
      [](PointView x) { return pi * pi * std::sin(pi * x[0]); }, zero_field(), sine_1d());
}

// u = tanh(5x - 2): a single tanh unit with W = 5, b = -2, a = 1.
EllipticProblem poisson1d_tanh() {
  const Domain omega = Domain::unit_interval();
  DifferentiableField u = [](PointView x, const MultiIndex& alpha) {
    require_order(alpha);
    const double s = std::tanh(5.0 * x[0] - 2.0);
    const double sech2 = 1.0 - s * s;
    switch (alpha[0]) {
      case 0: return s;
      case 1: return 5.0 * sech2;
      default: return -50.0 * s * sech2;
    }
  };
  return EllipticProblem(
      "poisson1d-tanh", omega, EllipticOperator::negative_laplacian(1),
      BoundaryOperator::dirichlet(1),
      [](PointView x) {
        const double s = std::tanh(5.0 * x[0] - 2.0);
        return 50.0 * s * (1.0 - s * s);
      },
      [](PointView x) { return std::tanh(5.0 * x[0] - 2.0); }, u);
}

EllipticProblem poisson2d_sin() {
  const Domain omega = Domain::unit_square();
  DifferentiableField u = [](PointView x, const MultiIndex& alpha) {
    require_order(alpha);
    return sin_derivative(pi, x[0], alpha[0]) * sin_derivative(pi, x[1], alpha[1]);
  };
  return EllipticProblem(
      "poisson2d-sin", omega, EllipticOperator::negative_laplacian(2),
      BoundaryOperator::dirichlet(2),
      [](PointView x) { return 2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]); },
      zero_field(), u);
}

// -u'' + u = (pi^2 + 1) sin(pi x)
EllipticProblem reaction1d() {
  const Domain omega = Domain::unit_interval();
  EllipticOperator op(1,
                      {{MultiIndex({2}), [](PointView) { return -1.0; }},
                       {MultiIndex({0}), [](PointView) { return 1.0; }}},
                      1.0);
  return EllipticProblem(
      "reaction1d", omega, std::move(op), BoundaryOperator::dirichlet(1),
      [](PointView x) { return (pi * pi + 1.0) * std::sin(pi * x[0]); }, zero_field(),
      sine_1d());
}

// -u'' = -2 with u = x^2.
EllipticProblem poisson1d_quadratic() {
  const Domain omega = Domain::unit_interval();
  DifferentiableField u = [](PointView x, const MultiIndex& alpha) {
    require_order(alpha);
    switch (alpha[0]) {
      case 0: return x[0] * x[0];
      case 1: return 2.0 * x[0];
      default: return 2.0;
    }
  };
  return EllipticProblem(
      "poisson1d-quadratic", omega, EllipticOperator::negative_laplacian(1),
      BoundaryOperator::dirichlet(1), [](PointView) { return -2.0; },
      [](PointView x) { return x[0] * x[0]; }, u);
}

// -(1 + x) u'' + u = f, u + du/dn = g, with u = sin(pi x).
EllipticProblem robin1d_varcoef() {
  const Domain omega = Domain::unit_interval();
  EllipticOperator op(1,
                      {{MultiIndex({2}), [](PointView x) { return -(1.0 + x[0]); }},
                       {MultiIndex({0}), [](PointView) { return 1.0; }}},
                      2.0);
  return EllipticProblem(
      "robin1d-varcoef", omega, std::move(op), BoundaryOperator::robin_normal(omega, 1.0),
      [](PointView x) { return ((1.0 + x[0]) * pi * pi + 1.0) * std::sin(pi * x[0]); },
      [omega](PointView x) {
        const double n = omega.outward_normal(x)[0];
        return std::sin(pi * x[0]) + n * pi * std::cos(pi * x[0]);
      },
      sine_1d());
}

}  // namespace

std::vector<std::string> builtin_problem_names() {
  return {"poisson1d-sin",      "poisson1d-tanh",      "poisson2d-sin",
          "reaction1d",         "poisson1d-quadratic", "robin1d-varcoef"};
}

EllipticProblem builtin_problem(const std::string& name) {
  if (name == "poisson1d-sin") return poisson1d_sin();
  if (name == "poisson1d-tanh") return poisson1d_tanh();
  if (name == "poisson2d-sin") return poisson2d_sin();
  if (name == "reaction1d") return reaction1d();
  if (name == "poisson1d-quadratic") return poisson1d_quadratic();
  if (name == "robin1d-varcoef") return robin1d_varcoef();
  std::string valid;
  for (const auto& n : builtin_problem_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw CatalogError("unknown problem '" + name + "'; valid names: " + valid);
}

}  // namespace pinnls
