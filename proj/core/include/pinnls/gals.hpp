#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "pinnls/collocation.hpp"
#include "pinnls/domain.hpp"
#include "pinnls/field.hpp"
#include "pinnls/problem.hpp"
#include "pinnls/quadrature.hpp"

namespace pinnls {

enum class BasisKind { LegendreTensor, SineTensor };

BasisKind basis_kind_from_name(const std::string& name);
std::string to_string(BasisKind kind);

/// Fixed linear trial space on an interval or rectangle.
///
/// LegendreTensor(p): Legendre polynomials P_0..P_p mapped to each axis,
/// tensorized; (p+1)^d functions. SineTensor(n): sin(k pi (x - lo) / width)
/// for k = 1..n, tensorized; n^d functions. Index order is row-major over
/// the per-axis indices.
class LinearBasis {
 public:
  static LinearBasis legendre(const Domain& domain, std::size_t degree);
  static LinearBasis sine(const Domain& domain, std::size_t count);
  static LinearBasis make(BasisKind kind, const Domain& domain, std::size_t parameter);

  BasisKind kind() const { return kind_; }
  std::size_t parameter() const { return parameter_; }
  const Domain& domain() const { return domain_; }
  std::size_t size() const;

  /// d^alpha phi_k(x), |alpha| <= 2.
  double evaluate(std::size_t k, PointView x, const MultiIndex& alpha) const;

  DifferentiableField function(std::size_t k) const;
  /// sum_k c_k phi_k
  DifferentiableField combination(const Eigen::VectorXd& coefficients) const;

 private:
  LinearBasis(BasisKind kind, const Domain& domain, std::size_t parameter);
  std::size_t per_axis() const;
  double axis_value(std::size_t index, std::size_t axis, double x, int order) const;

  BasisKind kind_;
  Domain domain_;
  std::size_t parameter_;
};

enum class GalsMode { Quadrature, Collocation };

std::string to_string(GalsMode mode);

/// Interior and boundary nodes with pairing weights.
struct EvaluationNodes {
  WeightedNodes interior;
  WeightedNodes boundary;
};

/// Gauss-Legendre nodes of the given order per axis (continuous surrogate).
EvaluationNodes quadrature_nodes(const Domain& domain, std::size_t order = 32);

/// Collocation points with weights N^-gamma.
EvaluationNodes collocation_nodes(const CollocationSet& pts);

/// Weighted least-squares system: rows sqrt(w_i) (Q phi_k)(x_i), rhs sqrt(w_i) F(x_i).
struct LeastSquaresSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

LeastSquaresSystem assemble(const EllipticProblem& problem, const LinearBasis& basis,
                            const EvaluationNodes& nodes);

struct LeastSquaresSolution {
  Eigen::VectorXd coefficients;
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

/// Minimum-norm least-squares solution by complete orthogonal decomposition.
LeastSquaresSolution solve_least_squares(const LeastSquaresSystem& system);

struct GalsSolution {
  Eigen::VectorXd coefficients;
  LinearBasis basis;
  double residual_norm = 0.0;  // ||A c - r||, i.e. sqrt(J) or sqrt(J^h)
  GalsMode mode = GalsMode::Quadrature;
  Eigen::Index rank = 0;
  bool rank_deficient = false;

  DifferentiableField field() const { return basis.combination(coefficients); }
};

GalsSolution assemble_and_solve(const EllipticProblem& problem, const LinearBasis& basis,
                                const EvaluationNodes& nodes, GalsMode mode);
GalsSolution assemble_and_solve(const EllipticProblem& problem, const LinearBasis& basis,
                                std::size_t quadrature_order = 32);
GalsSolution assemble_and_solve(const EllipticProblem& problem, const LinearBasis& basis,
                                const CollocationSet& pts);

/// max_k |a(u_h, phi_k) - G(phi_k)| with a(u, v) = (Qu, Qv)_Y and
/// G(v) = (F, Qv)_Y evaluated on `nodes`.
double variational_residual(const GalsSolution& solution, const EllipticProblem& problem,
                            const EvaluationNodes& nodes);

/// CSV `index,coefficient`.
void write_solution_csv(std::ostream& out, const GalsSolution& solution);

}  // namespace pinnls
