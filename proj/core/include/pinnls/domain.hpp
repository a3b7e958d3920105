#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "pinnls/point_set.hpp"
#include "pinnls/random.hpp"

namespace pinnls {

enum class DomainKind { Interval, Rectangle };

/// Axis-aligned interval (d = 1) or rectangle (d = 2).
///
/// Boundary measure: the interval boundary is the two-point set {lo, hi}
/// with counting measure; the rectangle boundary is its perimeter.
class Domain {
 public:
  static Domain interval(double lo, double hi);
  static Domain rectangle(double lo_x, double hi_x, double lo_y, double hi_y);
  static Domain unit_interval() { return interval(0.0, 1.0); }
  static Domain unit_square() { return rectangle(0.0, 1.0, 0.0, 1.0); }

  DomainKind kind() const { return kind_; }
  std::size_t dimension() const { return kind_ == DomainKind::Interval ? 1 : 2; }
  double lower(std::size_t axis) const { return lo_[axis]; }
  double upper(std::size_t axis) const { return hi_[axis]; }
  double extent(std::size_t axis) const { return hi_[axis] - lo_[axis]; }

  double volume() const;
  double boundary_measure() const;

  /// Closed-domain membership with tolerance.
  bool contains(PointView x, double tol = 1e-12) const;
  bool on_boundary(PointView x, double tol = 1e-12) const;

  /// Outward unit normal at a boundary point. At rectangle corners the
  /// normal of the first matching edge (x-faces before y-faces) is used.
  std::vector<double> outward_normal(PointView x) const;

  /// Uniform sample in the domain.
  void sample_interior(Rng& rng, std::span<double> out) const;
  /// Uniform sample on the boundary (by perimeter for rectangles; each
  /// endpoint with probability 1/2 for intervals).
  void sample_boundary(Rng& rng, std::span<double> out) const;

  /// Map t in [0, boundary_measure()) onto the rectangle perimeter,
  /// counter-clockwise from (lo_x, lo_y).
  std::array<double, 2> perimeter_point(double t) const;

  std::string describe() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(DomainKind kind, std::array<double, 2> lo, std::array<double, 2> hi);

  DomainKind kind_;
  std::array<double, 2> lo_;
  std::array<double, 2> hi_;
};

}  // namespace pinnls
