#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace pinnls {

/// Spatial derivative multi-index alpha = (alpha_1, ..., alpha_d).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> orders);

  static MultiIndex zero(std::size_t dim);
  /// d/dx_axis
  static MultiIndex unit(std::size_t dim, std::size_t axis);
  /// d^2/(dx_i dx_j); i == j gives a pure second derivative.
  static MultiIndex second(std::size_t dim, std::size_t i, std::size_t j);

  std::size_t dimension() const { return orders_.size(); }
  int order() const { return order_; }
  int operator[](std::size_t k) const { return orders_[k]; }
  const std::vector<int>& orders() const { return orders_; }

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.orders_ <=> b.orders_;
  }

 private:
  std::vector<int> orders_;
  int order_ = 0;
};

}  // namespace pinnls
