#pragma once

// Test-only oracles: finite differences and random generators. Nothing here
// calls into the closed-form derivative code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pinnls/collocation.hpp"
#include "pinnls/network.hpp"

namespace pinnls::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double draw(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Central difference of a scalar function of one variable.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Central-difference gradient of f: R^n -> R.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// max_i |a_i - b_i| / max(scale, max_i |b_i|)
inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                             double scale = 1.0) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(scale, b.cwiseAbs().maxCoeff());
}

inline double relative_error(double a, double b, double scale = 1.0) {
  return std::abs(a - b) / std::max(scale, std::abs(b));
}

/// Random network with weights in [-2, 2], biases in [-1, 1], a in [-1, 1].
inline ShallowNetwork random_network(std::mt19937_64& rng, std::size_t d, std::size_t n,
                                     Activation act) {
  Eigen::MatrixXd w(n, d);
  Eigen::VectorXd b(n), a(n);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(d); ++k) w(j, k) = draw(rng, -2, 2);
    b(j) = draw(rng, -1, 1);
    a(j) = draw(rng, -1, 1);
  }
  return ShallowNetwork(w, b, a, act);
}

/// Sort-based Euclidean projection onto the l1 ball (simplex projection of
/// |v| followed by sign restoration).
inline Eigen::VectorXd sort_based_l1_projection(const Eigen::VectorXd& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  std::vector<double> u(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - radius) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::max(std::abs(v(i)) - theta, 0.0);
    out(i) = v(i) < 0 ? -m : m;
  }
  return out;
}

/// Collocation pairing by explicit summation over both point sets.
inline double direct_pairing(const ResidualPair& p, const ResidualPair& q,
                             const CollocationSet& pts) {
  const double ni = static_cast<double>(pts.interior().size());
  const double nb = static_cast<double>(pts.boundary().size());
  double si = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < pts.interior().size(); ++i)
    si += p.interior(pts.interior()[i]) * q.interior(pts.interior()[i]);
  for (std::size_t i = 0; i < pts.boundary().size(); ++i)
    sb += p.boundary(pts.boundary()[i]) * q.boundary(pts.boundary()[i]);
  return std::pow(ni, -pts.gamma1()) * si + std::pow(nb, -pts.gamma2()) * sb;
}

/// pinv(A^T A) A^T b through a symmetric eigendecomposition.
inline Eigen::VectorXd normal_equations_pinv(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double cutoff = 1e-12 * lambda.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > cutoff) inv(i) = 1.0 / lambda(i);
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() *
         (a.transpose() * b);
}

}  // namespace pinnls::testing
