#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pinnls {

/// Point in R^d, viewed as a contiguous span of coordinates.
using PointView = std::span<const double>;

/// Dense list of points of a common dimension, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coordinates);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  PointView operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> mutable_point(std::size_t i) {
    return {coords_.data() + i * dim_, dim_};
  }

  void push_back(PointView p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }
  void resize(std::size_t n) { coords_.resize(n * dim_); }

  const std::vector<double>& coordinates() const { return coords_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

}  // namespace pinnls
