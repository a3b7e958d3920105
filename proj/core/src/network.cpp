#include "pinnls/network.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "pinnls/errors.hpp"
#include "pinnls/random.hpp"

namespace pinnls {
namespace {

constexpr int kMaxOrder = 2;

// prod_k w_k^alpha_k, optionally with d/dw_l applied.
double monomial(const Eigen::MatrixXd& w, Eigen::Index row,
                const MultiIndex& alpha, Eigen::Index diff_axis = -1) {
  double p = 1.0;
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    int e = alpha[static_cast<std::size_t>(k)];
    if (k == diff_axis) {
      if (e == 0) return 0.0;
      p *= e;
      --e;
    }
    for (int r = 0; r < e; ++r) p *= w(row, k);
  }
  return p;
}

}  // namespace

ShallowNetwork::ShallowNetwork(Eigen::MatrixXd inner_weights,
                               Eigen::VectorXd inner_biases,
                               Eigen::VectorXd outer_coeffs,
                               Activation activation, double l1_bound)
    : weights_(std::move(inner_weights)),
      biases_(std::move(inner_biases)),
      outer_(std::move(outer_coeffs)),
      activation_(activation),
      l1_bound_(l1_bound) {
  if (weights_.rows() == 0 || weights_.cols() == 0) {
    throw InputShapeError("network needs width >= 1 and input_dim >= 1");
  }
  if (biases_.size() != weights_.rows() || outer_.size() != weights_.rows()) {
    throw InputShapeError("bias and outer coefficient lengths must equal the width");
  }
  if (!(l1_bound_ > 0.0)) throw std::invalid_argument("l1 bound must be positive");
}

ShallowNetwork ShallowNetwork::zeros(std::size_t input_dim, std::size_t width,
                                     Activation activation, double l1_bound) {
  const auto n = static_cast<Eigen::Index>(width);
  return ShallowNetwork(Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(input_dim)),
                        Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
                        activation, l1_bound);
}

ShallowNetwork ShallowNetwork::random(std::size_t input_dim, std::size_t width,
                                      Activation activation, std::uint64_t seed,
                                      const InitOptions& init, double l1_bound) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(width);
  const auto d = static_cast<Eigen::Index>(input_dim);
  Eigen::MatrixXd w(n, d);
  Eigen::VectorXd b(n), a(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      w(j, k) = uniform(rng, -init.weight_range, init.weight_range);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) b(j) = uniform(rng, -init.bias_range, init.bias_range);
  const double a_range = 1.0 / static_cast<double>(width);
  for (Eigen::Index j = 0; j < n; ++j) a(j) = uniform(rng, -a_range, a_range);
  return ShallowNetwork(std::move(w), std::move(b), std::move(a), activation, l1_bound);
}

ParameterVector ShallowNetwork::parameters() const {
  const auto n = weights_.rows();
  const auto d = weights_.cols();
  ParameterVector theta(n * (d + 2));
  theta.head(n) = outer_;
  for (Eigen::Index j = 0; j < n; ++j) {
    theta.segment(n + j * d, d) = weights_.row(j).transpose();
  }
  theta.tail(n) = biases_;
  return theta;
}

ShallowNetwork ShallowNetwork::with_parameters(const ParameterVector& theta) const {
  const auto n = weights_.rows();
  const auto d = weights_.cols();
  if (theta.size() != n * (d + 2)) {
    throw InputShapeError("parameter vector length " + std::to_string(theta.size()) +
                          " does not match network (expected " +
                          std::to_string(n * (d + 2)) + ")");
  }
  Eigen::MatrixXd w(n, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    w.row(j) = theta.segment(n + j * d, d).transpose();
  }
  return ShallowNetwork(std::move(w), theta.tail(n), theta.head(n), activation_, l1_bound_);
}

ShallowNetwork ShallowNetwork::with_outer_coeffs(Eigen::VectorXd a) const {
  return ShallowNetwork(weights_, biases_, std::move(a), activation_, l1_bound_);
}

void ShallowNetwork::check_point(PointView x) const {
  if (x.size() != input_dim()) {
    throw InputShapeError("point has dimension " + std::to_string(x.size()) +
                          ", network expects " + std::to_string(input_dim()));
  }
}

void ShallowNetwork::check_alpha(const MultiIndex& alpha) const {
  if (alpha.dimension() != input_dim()) {
    throw InputShapeError("multi-index dimension " + std::to_string(alpha.dimension()) +
                          " does not match network input dimension " +
                          std::to_string(input_dim()));
  }
  if (alpha.order() > kMaxOrder) {
    throw UnsupportedOrderError("derivative order " + std::to_string(alpha.order()) +
                                " exceeds the supported maximum of 2");
  }
}

double ShallowNetwork::forward(PointView x) const {
  check_point(x);
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  double u = 0.0;
  for (Eigen::Index j = 0; j < weights_.rows(); ++j) {
    u += outer_(j) * activation_.value(weights_.row(j).dot(xv) + biases_(j));
  }
  return u;
}

double ShallowNetwork::derivative(PointView x, const MultiIndex& alpha) const {
  const double one = 1.0;
  return combination(x, {&alpha, 1}, {&one, 1});
}

ParameterVector ShallowNetwork::parameter_gradient(PointView x,
                                                   const MultiIndex& alpha) const {
  const double one = 1.0;
  ParameterVector grad(static_cast<Eigen::Index>(parameter_count()));
  combination_gradient(x, {&alpha, 1}, {&one, 1}, grad);
  return grad;
}

double ShallowNetwork::combination(PointView x, std::span<const MultiIndex> alphas,
                                   std::span<const double> coeffs) const {
  check_point(x);
  for (const auto& alpha : alphas) check_alpha(alpha);
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  double u = 0.0;
  for (Eigen::Index j = 0; j < weights_.rows(); ++j) {
    const auto s = activation_.derivatives(weights_.row(j).dot(xv) + biases_(j));
    double unit = 0.0;
    for (std::size_t t = 0; t < alphas.size(); ++t) {
      unit += coeffs[t] * monomial(weights_, j, alphas[t]) *
              s[static_cast<std::size_t>(alphas[t].order())];
    }
    u += outer_(j) * unit;
  }
  return u;
}

double ShallowNetwork::combination_gradient(PointView x,
                                            std::span<const MultiIndex> alphas,
                                            std::span<const double> coeffs,
                                            Eigen::Ref<Eigen::VectorXd> grad) const {
  check_point(x);
  for (const auto& alpha : alphas) check_alpha(alpha);
  if (grad.size() != static_cast<Eigen::Index>(parameter_count())) {
    throw InputShapeError("gradient buffer has the wrong length");
  }
  const auto n = weights_.rows();
  const auto d = weights_.cols();
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), d);
  double u = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto s = activation_.derivatives(weights_.row(j).dot(xv) + biases_(j));
    const double aj = outer_(j);
    double d_a = 0.0;
    double d_b = 0.0;
    for (Eigen::Index l = 0; l < d; ++l) grad(n + j * d + l) = 0.0;
    for (std::size_t t = 0; t < alphas.size(); ++t) {
      const auto m = static_cast<std::size_t>(alphas[t].order());
      const double c = coeffs[t];
      const double p = monomial(weights_, j, alphas[t]);
      d_a += c * p * s[m];
      d_b += c * aj * p * s[m + 1];
      for (Eigen::Index l = 0; l < d; ++l) {
        const double dp = monomial(weights_, j, alphas[t], l);
        grad(n + j * d + l) += c * aj * (dp * s[m] + p * s[m + 1] * xv(l));
      }
    }
    grad(j) = d_a;
    grad(n * (d + 1) + j) = d_b;
    u += aj * d_a;
  }
  return u;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("l1 radius must be positive");
  if (v.lpNorm<1>() <= radius) return v;
  // Active-set iteration on the soft threshold tau: drop entries with
  // |v_i| <= tau until the active set stops shrinking.
  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::vector<double> active = mags;
  double tau = 0.0;
  while (true) {
    double sum = 0.0;
    for (double m : active) sum += m;
    tau = (sum - radius) / static_cast<double>(active.size());
    std::vector<double> kept;
    kept.reserve(active.size());
    for (double m : active) {
      if (m > tau) kept.push_back(m);
    }
    if (kept.size() == active.size()) break;
    active = std::move(kept);
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::max(std::abs(v(i)) - tau, 0.0);
    out(i) = v(i) < 0.0 ? -m : m;
  }
  return out;
}

ShallowNetwork l1_project(const ShallowNetwork& net) {
  if (!net.is_bounded() || net.l1_norm() <= net.l1_bound()) return net;
  return net.with_outer_coeffs(project_l1_ball(net.outer_coeffs(), net.l1_bound()));
}

void write_network(std::ostream& out, const ShallowNetwork& net) {
  out << "# pinnls shallow network\n";
  out << "input_dim " << net.input_dim() << '\n';
  out << "width " << net.width() << '\n';
  out << "activation " << net.activation().name() << '\n';
  out << "l1_bound ";
  if (net.is_bounded()) {
    out << std::setprecision(17) << net.l1_bound() << '\n';
  } else {
    out << "inf\n";
  }
  out << "packing a,W_row_major,b\n";
  const ParameterVector theta = net.parameters();
  out << "parameters " << theta.size() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < theta.size(); ++i) out << theta(i) << '\n';
}

ShallowNetwork read_network(std::istream& in) {
  std::size_t dim = 0, width = 0, count = 0;
  Activation activation;
  double bound = kUnbounded;
  bool have_count = false;
  std::string line;
  while (!have_count && std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, value;
    ls >> key >> value;
    if (key == "input_dim") {
      dim = std::stoul(value);
    } else if (key == "width") {
      width = std::stoul(value);
    } else if (key == "activation") {
      activation = Activation::from_name(value);
    } else if (key == "l1_bound") {
      bound = value == "inf" ? kUnbounded : std::stod(value);
    } else if (key == "packing") {
      if (value != "a,W_row_major,b") {
        throw std::runtime_error("unsupported parameter packing '" + value + "'");
      }
    } else if (key == "parameters") {
      count = std::stoul(value);
      have_count = true;
    } else {
      throw std::runtime_error("unknown model header key '" + key + "'");
    }
  }
  if (!have_count || dim == 0 || width == 0) {
    throw std::runtime_error("incomplete model header");
  }
  if (count != width * (dim + 2)) {
    throw InputShapeError("parameter count does not match width and input_dim");
  }
  ParameterVector theta(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("model file truncated");
    theta(i) = std::stod(line);
  }
  return ShallowNetwork::zeros(dim, width, activation, bound).with_parameters(theta);
}

void save_network(const std::string& path, const ShallowNetwork& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_network(out, net);
}

ShallowNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_network(in);
}

}  // namespace pinnls
