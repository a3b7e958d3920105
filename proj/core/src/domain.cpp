#include "pinnls/domain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pinnls/errors.hpp"

namespace pinnls {

Domain::Domain(DomainKind kind, std::array<double, 2> lo, std::array<double, 2> hi)
    : kind_(kind), lo_(lo), hi_(hi) {
  for (std::size_t k = 0; k < dimension(); ++k) {
    if (!(lo_[k] < hi_[k])) throw std::invalid_argument("domain requires lo < hi");
  }
}

Domain Domain::interval(double lo, double hi) {
  return Domain(DomainKind::Interval, {lo, 0.0}, {hi, 0.0});
}

Domain Domain::rectangle(double lo_x, double hi_x, double lo_y, double hi_y) {
  return Domain(DomainKind::Rectangle, {lo_x, lo_y}, {hi_x, hi_y});
}

double Domain::volume() const {
  return kind_ == DomainKind::Interval ? extent(0) : extent(0) * extent(1);
}

double Domain::boundary_measure() const {
  return kind_ == DomainKind::Interval ? 2.0 : 2.0 * (extent(0) + extent(1));
}

bool Domain::contains(PointView x, double tol) const {
  if (x.size() != dimension()) throw InputShapeError("point dimension does not match domain");
  for (std::size_t k = 0; k < dimension(); ++k) {
    if (x[k] < lo_[k] - tol || x[k] > hi_[k] + tol) return false;
  }
  return true;
}

bool Domain::on_boundary(PointView x, double tol) const {
  if (!contains(x, tol)) return false;
  for (std::size_t k = 0; k < dimension(); ++k) {
    if (std::abs(x[k] - lo_[k]) <= tol || std::abs(x[k] - hi_[k]) <= tol) return true;
  }
  return false;
}

std::vector<double> Domain::outward_normal(PointView x) const {
  if (!on_boundary(x)) throw DomainError("outward normal requested off the boundary");
  std::vector<double> n(dimension(), 0.0);
  for (std::size_t k = 0; k < dimension(); ++k) {
    if (std::abs(x[k] - lo_[k]) <= 1e-12) {
      n[k] = -1.0;
      return n;
    }
    if (std::abs(x[k] - hi_[k]) <= 1e-12) {
      n[k] = 1.0;
      return n;
    }
  }
  return n;
}

void Domain::sample_interior(Rng& rng, std::span<double> out) const {
  for (std::size_t k = 0; k < dimension(); ++k) out[k] = uniform(rng, lo_[k], hi_[k]);
}

void Domain::sample_boundary(Rng& rng, std::span<double> out) const {
  if (kind_ == DomainKind::Interval) {
    out[0] = (rng() >> 63) ? hi_[0] : lo_[0];
    return;
  }
  const auto p = perimeter_point(uniform01(rng) * boundary_measure());
  out[0] = p[0];
  out[1] = p[1];
}

std::array<double, 2> Domain::perimeter_point(double t) const {
  const double wx = extent(0);
  const double wy = extent(1);
  if (t < wx) return {lo_[0] + t, lo_[1]};
  t -= wx;
  if (t < wy) return {hi_[0], lo_[1] + t};
  t -= wy;
  if (t < wx) return {hi_[0] - t, hi_[1]};
  t -= wx;
  return {lo_[0], std::max(lo_[1], hi_[1] - t)};
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (kind_ == DomainKind::Interval) {
    os << "interval(" << lo_[0] << ", " << hi_[0] << ")";
  } else {
    os << "rectangle(" << lo_[0] << ", " << hi_[0] << ") x (" << lo_[1] << ", " << hi_[1]
       << ")";
  }
  return os.str();
}

}  // namespace pinnls
