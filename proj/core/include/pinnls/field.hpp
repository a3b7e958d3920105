#pragma once

#include <functional>

#include "pinnls/multi_index.hpp"
#include "pinnls/network.hpp"
#include "pinnls/point_set.hpp"

namespace pinnls {

/// x -> value
using ScalarField = std::function<double(PointView)>;

/// (x, alpha) -> d^alpha v(x), for |alpha| <= 2.
using DifferentiableField = std::function<double(PointView, const MultiIndex&)>;

/// Element of Y = A(Omega) x B(dOmega): an interior and a boundary function.
struct ResidualPair {
  ScalarField interior;
  ScalarField boundary;
};

/// Wraps a network (copied) as a DifferentiableField.
DifferentiableField as_field(const ShallowNetwork& net);

/// u - v, derivative by derivative.
DifferentiableField difference(DifferentiableField u, DifferentiableField v);

/// u + scale * v
DifferentiableField add_scaled(DifferentiableField u, double scale, DifferentiableField v);

}  // namespace pinnls
