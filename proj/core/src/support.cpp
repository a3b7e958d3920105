#include <numeric>
#include <sstream>

#include "pinnls/errors.hpp"
#include "pinnls/multi_index.hpp"
#include "pinnls/point_set.hpp"

namespace pinnls {

MultiIndex::MultiIndex(std::vector<int> orders) : orders_(std::move(orders)) {
  for (int o : orders_) {
    if (o < 0) throw std::invalid_argument("multi-index entries must be non-negative");
  }
  order_ = std::accumulate(orders_.begin(), orders_.end(), 0);
}

MultiIndex MultiIndex::zero(std::size_t dim) {
  return MultiIndex(std::vector<int>(dim, 0));
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t axis) {
  std::vector<int> o(dim, 0);
  o.at(axis) = 1;
  return MultiIndex(std::move(o));
}

MultiIndex MultiIndex::second(std::size_t dim, std::size_t i, std::size_t j) {
  std::vector<int> o(dim, 0);
  o.at(i) += 1;
  o.at(j) += 1;
  return MultiIndex(std::move(o));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    if (k) os << ',';
    os << orders_[k];
  }
  os << ')';
  return os.str();
}

PointSet::PointSet(std::size_t dim, std::vector<double> coordinates)
    : dim_(dim), coords_(std::move(coordinates)) {
  if (dim_ == 0 || coords_.size() % dim_ != 0) {
    throw InputShapeError("point coordinates do not divide into the dimension");
  }
}

void PointSet::push_back(PointView p) {
  if (p.size() != dim_) throw InputShapeError("point dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

}  // namespace pinnls
