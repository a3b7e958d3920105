#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "pinnls/domain.hpp"
#include "pinnls/field.hpp"
#include "pinnls/network.hpp"
#include "pinnls/point_set.hpp"
#include "pinnls/problem.hpp"

namespace pinnls {

struct CollocationOptions {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  /// Points kept verbatim at the head of the interior/boundary lists in every
  /// sampled or resampled set (unisolvency points).
  PointSet pinned_interior;
  PointSet pinned_boundary;
};

/// Interior points omega_i and boundary points beta_i, with the exponents of
/// the discrete scalar product
///   (p, q)_h = N_int^-gamma1 sum p(omega_i) q(omega_i)
///            + N_bd^-gamma2  sum p(beta_i)  q(beta_i).
class CollocationSet {
 public:
  CollocationSet(Domain domain, PointSet interior, PointSet boundary,
                 std::uint64_t seed, double gamma1 = 1.0, double gamma2 = 1.0,
                 std::size_t pinned_interior = 0, std::size_t pinned_boundary = 0);

  const Domain& domain() const { return domain_; }
  const PointSet& interior() const { return interior_; }
  const PointSet& boundary() const { return boundary_; }
  std::uint64_t seed() const { return seed_; }
  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }
  std::size_t pinned_interior() const { return pinned_interior_; }
  std::size_t pinned_boundary() const { return pinned_boundary_; }

  double interior_weight() const;  // N_int^-gamma1
  double boundary_weight() const;  // N_bd^-gamma2

  friend bool operator==(const CollocationSet&, const CollocationSet&) = default;

 private:
  Domain domain_;
  PointSet interior_;
  PointSet boundary_;
  std::uint64_t seed_;
  double gamma1_;
  double gamma2_;
  std::size_t pinned_interior_;
  std::size_t pinned_boundary_;
};

/// i.i.d. uniform points on the domain and its boundary; deterministic in seed.
/// Pinned points count towards n_interior / n_boundary.
CollocationSet sample(const Domain& domain, std::size_t n_interior, std::size_t n_boundary,
                      std::uint64_t seed, const CollocationOptions& options = {});

/// Fresh set with seed' = seed XOR mix64(epoch); epoch 0 reproduces `pts`.
/// Counts, exponents and pinned points are retained.
CollocationSet resample(const CollocationSet& pts, std::uint64_t epoch);

double discrete_pairing(const ResidualPair& p, const ResidualPair& q,
                        const CollocationSet& pts);

/// PINN loss: (r, r)_h with r = residual(problem, net).
double loss(const EllipticProblem& problem, const ShallowNetwork& net,
            const CollocationSet& pts);

ParameterVector loss_gradient(const EllipticProblem& problem, const ShallowNetwork& net,
                              const CollocationSet& pts);

/// Loss and its gradient in one pass over the points. `grad` is resized.
double loss_and_gradient(const EllipticProblem& problem, const ShallowNetwork& net,
                         const CollocationSet& pts, ParameterVector& grad);

/// sqrt((Qv, Qv)_h) with Qv = (L v, B v).
double discrete_energy_norm(const EllipticProblem& problem, const DifferentiableField& v,
                            const CollocationSet& pts);

struct UnisolvencyReport {
  std::size_t rank = 0;
  std::size_t dimension = 0;  // parameter count
  std::size_t rows = 0;       // N_int + N_bd
  double largest_singular_value = 0.0;
  double smallest_singular_value = 0.0;
  bool full_rank() const { return rank == dimension; }
  bool underdetermined() const { return rows < dimension; }
};

/// Rank of the weighted matrix with rows sqrt(w) * d/dtheta (Q u_h)(x_i).
/// Numerical rank threshold: 1e-10 * largest singular value.
UnisolvencyReport check_unisolvency(const EllipticProblem& problem,
                                    const ShallowNetwork& net, const CollocationSet& pts);

/// Tangent-space matrix used by check_unisolvency (rows weighted).
Eigen::MatrixXd tangent_matrix(const EllipticProblem& problem, const ShallowNetwork& net,
                               const CollocationSet& pts);

/// CSV with header `kind,x0[,x1]`, one row per point.
void write_collocation_csv(std::ostream& out, const CollocationSet& pts);
CollocationSet read_collocation_csv(std::istream& in, const Domain& domain,
                                    std::uint64_t seed = 0, double gamma1 = 1.0,
                                    double gamma2 = 1.0);

}  // namespace pinnls
