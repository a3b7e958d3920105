#pragma once

#include <cstddef>
#include <vector>

#include "pinnls/domain.hpp"
#include "pinnls/field.hpp"
#include "pinnls/point_set.hpp"

namespace pinnls {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t order);

/// Weighted node set. Weights are those of the uniform probability measure
/// on the region (they sum to 1), matching the normalization of the
/// discrete scalar product with gamma = 1.
struct WeightedNodes {
  PointSet points;
  std::vector<double> weights;
};

/// Tensor Gauss-Legendre rule on the domain interior.
WeightedNodes interior_quadrature(const Domain& domain, std::size_t order);

/// Boundary rule: the two endpoints (weight 1/2 each) for an interval, a
/// Gauss-Legendre rule of the given order on each edge for a rectangle.
WeightedNodes boundary_quadrature(const Domain& domain, std::size_t order);

/// Integral of h against the uniform probability measure on the domain.
double mean_value(const Domain& domain, const ScalarField& h, std::size_t order = 64);

/// Lebesgue L2(Omega) norm of v by tensor Gauss-Legendre quadrature.
double l2_norm(const Domain& domain, const ScalarField& v, std::size_t order = 32);

}  // namespace pinnls
