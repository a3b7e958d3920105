#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "pinnls/activation.hpp"
#include "pinnls/multi_index.hpp"
#include "pinnls/point_set.hpp"

namespace pinnls {

/// Flat parameter vector of a ShallowNetwork, packed as
/// [a_0 .. a_{N-1}, W row-major (W_00 .. W_0(d-1), W_10 ..), b_0 .. b_{N-1}].
using ParameterVector = Eigen::VectorXd;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct InitOptions {
  double weight_range = 1.0;  // W ~ U[-r, r]
  double bias_range = 1.0;    // b ~ U[-1, 1]
};

/// One-hidden-layer network u(x) = sum_j a_j sigma(W_j . x + b_j), scalar
/// output and no output bias. Immutable: parameter updates produce a new
/// network.
class ShallowNetwork {
 public:
  ShallowNetwork(Eigen::MatrixXd inner_weights, Eigen::VectorXd inner_biases,
                 Eigen::VectorXd outer_coeffs, Activation activation,
                 double l1_bound = kUnbounded);

  static ShallowNetwork zeros(std::size_t input_dim, std::size_t width,
                              Activation activation,
                              double l1_bound = kUnbounded);

  /// W ~ U[-r, r], b ~ U[-1, 1], a ~ U[-1/N, 1/N].
  static ShallowNetwork random(std::size_t input_dim, std::size_t width,
                               Activation activation, std::uint64_t seed,
                               const InitOptions& init = {},
                               double l1_bound = kUnbounded);

  std::size_t input_dim() const { return static_cast<std::size_t>(weights_.cols()); }
  std::size_t width() const { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t parameter_count() const { return width() * (input_dim() + 2); }

  const Eigen::MatrixXd& inner_weights() const { return weights_; }
  const Eigen::VectorXd& inner_biases() const { return biases_; }
  const Eigen::VectorXd& outer_coeffs() const { return outer_; }
  Activation activation() const { return activation_; }

  double l1_bound() const { return l1_bound_; }
  bool is_bounded() const { return l1_bound_ < kUnbounded; }
  double l1_norm() const { return outer_.lpNorm<1>(); }

  ParameterVector parameters() const;
  ShallowNetwork with_parameters(const ParameterVector& theta) const;
  ShallowNetwork with_outer_coeffs(Eigen::VectorXd a) const;

  double forward(PointView x) const;

  /// d^alpha u(x) = sum_j a_j (prod_k W_jk^alpha_k) sigma^(|alpha|)(W_j . x + b_j)
  double derivative(PointView x, const MultiIndex& alpha) const;

  /// Gradient of derivative(x, alpha) with respect to the packed parameters.
  ParameterVector parameter_gradient(PointView x, const MultiIndex& alpha) const;

  /// sum_t coeffs[t] * d^{alphas[t]} u(x), evaluating sigma once per unit.
  double combination(PointView x, std::span<const MultiIndex> alphas,
                     std::span<const double> coeffs) const;

  /// As combination(), also writing the parameter gradient of the
  /// combination into `grad` (overwritten, length parameter_count()).
  double combination_gradient(PointView x, std::span<const MultiIndex> alphas,
                              std::span<const double> coeffs,
                              Eigen::Ref<Eigen::VectorXd> grad) const;

 private:
  void check_point(PointView x) const;
  void check_alpha(const MultiIndex& alpha) const;

  Eigen::MatrixXd weights_;  // N x d
  Eigen::VectorXd biases_;   // N
  Eigen::VectorXd outer_;    // N
  Activation activation_;
  double l1_bound_;
};

/// Euclidean projection of v onto the l1 ball of the given radius.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

/// Projects the outer coefficients onto the l1 ball of radius l1_bound().
/// Identity for unbounded networks or when already inside the ball.
ShallowNetwork l1_project(const ShallowNetwork& net);

/// Plain-text model record: a header block of `key value` lines followed by
/// one parameter per line in ParameterVector order.
void write_network(std::ostream& out, const ShallowNetwork& net);
ShallowNetwork read_network(std::istream& in);
void save_network(const std::string& path, const ShallowNetwork& net);
ShallowNetwork load_network(const std::string& path);

}  // namespace pinnls
