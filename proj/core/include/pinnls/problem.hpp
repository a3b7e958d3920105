#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinnls/domain.hpp"
#include "pinnls/field.hpp"
#include "pinnls/multi_index.hpp"
#include "pinnls/network.hpp"

namespace pinnls {

struct OperatorTerm {
  MultiIndex alpha;
  ScalarField coefficient;
};

/// L u = sum_{|alpha| <= 2} a_alpha(x) d^alpha u, with declared bound
/// |a_alpha| <= coefficient_bound on the domain.
class EllipticOperator {
 public:
  EllipticOperator(std::size_t dim, std::vector<OperatorTerm> terms,
                   double coefficient_bound);

  /// -Laplacian in the given dimension.
  static EllipticOperator negative_laplacian(std::size_t dim);

  std::size_t dimension() const { return dim_; }
  const std::vector<MultiIndex>& alphas() const { return alphas_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  double coefficient_bound() const { return bound_; }

  /// Coefficient values a_alpha(x), in alphas() order.
  void coefficients_at(PointView x, std::span<double> out) const;

  double apply(const DifferentiableField& v, PointView x) const;
  double apply(const ShallowNetwork& net, PointView x) const;

 private:
  std::size_t dim_;
  std::vector<OperatorTerm> terms_;
  std::vector<MultiIndex> alphas_;
  double bound_;
};

enum class BoundaryKind { Dirichlet, Robin };

/// B u = sum_{|alpha| <= 1} b_alpha(x) d^alpha u on the boundary.
class BoundaryOperator {
 public:
  static BoundaryOperator dirichlet(std::size_t dim);
  /// Robin terms must have |alpha| <= 1.
  static BoundaryOperator robin(std::size_t dim, std::vector<OperatorTerm> terms,
                                double coefficient_bound);
  /// u + kappa * du/dn with the outward normal of `domain`.
  static BoundaryOperator robin_normal(const Domain& domain, double kappa);

  BoundaryKind kind() const { return kind_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<MultiIndex>& alphas() const { return alphas_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }
  double coefficient_bound() const { return bound_; }

  void coefficients_at(PointView x, std::span<double> out) const;

  double apply(const DifferentiableField& v, PointView x) const;
  double apply(const ShallowNetwork& net, PointView x) const;

 private:
  BoundaryOperator(BoundaryKind kind, std::size_t dim, std::vector<OperatorTerm> terms,
                   double bound);

  BoundaryKind kind_;
  std::size_t dim_;
  std::vector<OperatorTerm> terms_;
  std::vector<MultiIndex> alphas_;
  double bound_;
};

struct ProblemDiagnostics {
  double max_interior_coefficient = 0.0;  // sampled max |a_alpha|
  double max_boundary_coefficient = 0.0;  // sampled max |b_alpha|
  bool coefficients_within_bounds = true;
  /// Max |L u - f| and |B u - g| over the samples; 0 without an exact solution.
  double manufactured_interior_defect = 0.0;
  double manufactured_boundary_defect = 0.0;
};

/// Q u = F with Q = (L, B) and F = (f, g) on a domain, optionally with the
/// exact (manufactured) solution and its derivatives.
class EllipticProblem {
 public:
  EllipticProblem(std::string name, Domain domain, EllipticOperator interior,
                  BoundaryOperator boundary, ScalarField source, ScalarField boundary_data,
                  std::optional<DifferentiableField> exact = std::nullopt);

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }
  const EllipticOperator& interior_op() const { return interior_; }
  const BoundaryOperator& boundary_op() const { return boundary_; }
  const ScalarField& source() const { return source_; }
  const ScalarField& boundary_data() const { return boundary_data_; }
  const std::optional<DifferentiableField>& exact_solution() const { return exact_; }
  bool has_exact_solution() const { return exact_.has_value(); }
  std::size_t dimension() const { return domain_.dimension(); }

  /// Samples coefficients against their declared bounds and, when an exact
  /// solution is present, checks Q u = F pointwise.
  ProblemDiagnostics diagnose(std::size_t samples = 100, std::uint64_t seed = 0) const;

 private:
  std::string name_;
  Domain domain_;
  EllipticOperator interior_;
  BoundaryOperator boundary_;
  ScalarField source_;
  ScalarField boundary_data_;
  std::optional<DifferentiableField> exact_;
};

/// L u_h(x); x must lie in the (closed) domain.
double apply_interior(const EllipticProblem& problem, const ShallowNetwork& net, PointView x);
double apply_interior(const EllipticProblem& problem, const DifferentiableField& v, PointView x);

/// B u_h(x); x must lie on the boundary.
double apply_boundary(const EllipticProblem& problem, const ShallowNetwork& net, PointView x);
double apply_boundary(const EllipticProblem& problem, const DifferentiableField& v, PointView x);

/// (x -> L u_h(x) - f(x), x -> B u_h(x) - g(x)). The network is captured by
/// value; the problem is referenced and must outlive the pair.
ResidualPair residual(const EllipticProblem& problem, const ShallowNetwork& net);
ResidualPair residual(const EllipticProblem& problem, const DifferentiableField& v);

/// Manufactured-solution catalog. Names: poisson1d-sin, poisson1d-tanh,
/// poisson2d-sin, reaction1d, poisson1d-quadratic, robin1d-varcoef.
EllipticProblem builtin_problem(const std::string& name);
std::vector<std::string> builtin_problem_names();

}  // namespace pinnls
