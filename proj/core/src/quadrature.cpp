#include "pinnls/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pinnls {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre_value_and_slope(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const auto kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
    p0 = p1;
    p1 = p2;
  }
  const auto nn = static_cast<double>(n);
  return {p1, nn * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendreRule gauss_legendre(std::size_t order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be at least 1");
  GaussLegendreRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  if (order == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  const auto n = static_cast<double>(order);
  // Newton on P_n from cos(pi (i + 3/4) / (n + 1/2)); roots are symmetric.
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_value_and_slope(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double dp = legendre_value_and_slope(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

WeightedNodes interior_quadrature(const Domain& domain, std::size_t order) {
  const auto rule = gauss_legendre(order);
  WeightedNodes out{PointSet(domain.dimension()), {}};
  auto map = [&](std::size_t axis, double t) {
    return domain.lower(axis) + 0.5 * (t + 1.0) * domain.extent(axis);
  };
  if (domain.dimension() == 1) {
    for (std::size_t i = 0; i < order; ++i) {
      const double x = map(0, rule.nodes[i]);
      out.points.push_back({&x, 1});
      out.weights.push_back(0.5 * rule.weights[i]);
    }
    return out;
  }
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j) {
      const double p[2] = {map(0, rule.nodes[i]), map(1, rule.nodes[j])};
      out.points.push_back(p);
      out.weights.push_back(0.25 * rule.weights[i] * rule.weights[j]);
    }
  }
  return out;
}

WeightedNodes boundary_quadrature(const Domain& domain, std::size_t order) {
  WeightedNodes out{PointSet(domain.dimension()), {}};
  if (domain.dimension() == 1) {
    const double lo = domain.lower(0), hi = domain.upper(0);
    out.points.push_back({&lo, 1});
    out.points.push_back({&hi, 1});
    out.weights = {0.5, 0.5};
    return out;
  }
  const auto rule = gauss_legendre(order);
  const double perimeter = domain.boundary_measure();
  // Edges in perimeter order: bottom, right, top, left.
  const double lengths[4] = {domain.extent(0), domain.extent(1), domain.extent(0),
                             domain.extent(1)};
  double offset = 0.0;
  for (double len : lengths) {
    for (std::size_t i = 0; i < order; ++i) {
      const double t = offset + 0.5 * (rule.nodes[i] + 1.0) * len;
      const auto p = domain.perimeter_point(t);
      out.points.push_back(p);
      out.weights.push_back(0.5 * rule.weights[i] * len / perimeter);
    }
    offset += len;
  }
  return out;
}

double mean_value(const Domain& domain, const ScalarField& h, std::size_t order) {
  const auto q = interior_quadrature(domain, order);
  double s = 0.0;
  for (std::size_t i = 0; i < q.weights.size(); ++i) s += q.weights[i] * h(q.points[i]);
  return s;
}

double l2_norm(const Domain& domain, const ScalarField& v, std::size_t order) {
  const double mean_sq = mean_value(
      domain, [&](PointView x) { const double y = v(x); return y * y; }, order);
  return std::sqrt(domain.volume() * mean_sq);
}

}  // namespace pinnls
