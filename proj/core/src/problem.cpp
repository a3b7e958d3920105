#include "pinnls/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "pinnls/errors.hpp"
#include "pinnls/random.hpp"

namespace pinnls {

DifferentiableField as_field(const ShallowNetwork& net) {
  return [net](PointView x, const MultiIndex& alpha) { return net.derivative(x, alpha); };
}

DifferentiableField difference(DifferentiableField u, DifferentiableField v) {
  return [u = std::move(u), v = std::move(v)](PointView x, const MultiIndex& alpha) {
    return u(x, alpha) - v(x, alpha);
  };
}

DifferentiableField add_scaled(DifferentiableField u, double scale, DifferentiableField v) {
  return [u = std::move(u), scale, v = std::move(v)](PointView x, const MultiIndex& alpha) {
    return u(x, alpha) + scale * v(x, alpha);
  };
}

namespace {

std::vector<MultiIndex> collect_alphas(const std::vector<OperatorTerm>& terms) {
  std::vector<MultiIndex> alphas;
  alphas.reserve(terms.size());
  for (const auto& t : terms) alphas.push_back(t.alpha);
  return alphas;
}

void check_terms(std::size_t dim, const std::vector<OperatorTerm>& terms, int max_order) {
  for (const auto& t : terms) {
    if (t.alpha.dimension() != dim) {
      throw InputShapeError("operator term " + t.alpha.to_string() +
                            " has the wrong dimension");
    }
    if (t.alpha.order() > max_order) {
      throw UnsupportedOrderError("operator term " + t.alpha.to_string() +
                                  " exceeds order " + std::to_string(max_order));
    }
    if (!t.coefficient) throw std::invalid_argument("operator term without coefficient");
  }
}

template <class Op>
double apply_field(const Op& op, const DifferentiableField& v, PointView x) {
  double s = 0.0;
  for (const auto& t : op.terms()) s += t.coefficient(x) * v(x, t.alpha);
  return s;
}

template <class Op>
double apply_net(const Op& op, const ShallowNetwork& net, PointView x) {
  constexpr std::size_t kInline = 8;
  const std::size_t n = op.terms().size();
  std::array<double, kInline> small{};
  std::vector<double> large;
  std::span<double> coeffs;
  if (n <= kInline) {
    coeffs = {small.data(), n};
  } else {
    large.resize(n);
    coeffs = large;
  }
  op.coefficients_at(x, coeffs);
  return net.combination(x, op.alphas(), coeffs);
}

}  // namespace

EllipticOperator::EllipticOperator(std::size_t dim, std::vector<OperatorTerm> terms,
                                   double coefficient_bound)
    : dim_(dim), terms_(std::move(terms)), bound_(coefficient_bound) {
  check_terms(dim_, terms_, 2);
  if (!(bound_ > 0.0)) throw std::invalid_argument("coefficient bound must be positive");
  alphas_ = collect_alphas(terms_);
}

EllipticOperator EllipticOperator::negative_laplacian(std::size_t dim) {
  std::vector<OperatorTerm> terms;
  for (std::size_t k = 0; k < dim; ++k) {
    terms.push_back({MultiIndex::second(dim, k, k), [](PointView) { return -1.0; }});
  }
  return EllipticOperator(dim, std::move(terms), 1.0);
}

void EllipticOperator::coefficients_at(PointView x, std::span<double> out) const {
  for (std::size_t t = 0; t < terms_.size(); ++t) out[t] = terms_[t].coefficient(x);
}

double EllipticOperator::apply(const DifferentiableField& v, PointView x) const {
  return apply_field(*this, v, x);
}

double EllipticOperator::apply(const ShallowNetwork& net, PointView x) const {
  return apply_net(*this, net, x);
}

BoundaryOperator::BoundaryOperator(BoundaryKind kind, std::size_t dim,
                                   std::vector<OperatorTerm> terms, double bound)
    : kind_(kind), dim_(dim), terms_(std::move(terms)), bound_(bound) {
  check_terms(dim_, terms_, 1);
  if (!(bound_ > 0.0)) throw std::invalid_argument("coefficient bound must be positive");
  alphas_ = collect_alphas(terms_);
}

BoundaryOperator BoundaryOperator::dirichlet(std::size_t dim) {
  return BoundaryOperator(BoundaryKind::Dirichlet, dim,
                          {{MultiIndex::zero(dim), [](PointView) { return 1.0; }}}, 1.0);
}

BoundaryOperator BoundaryOperator::robin(std::size_t dim, std::vector<OperatorTerm> terms,
                                         double coefficient_bound) {
  return BoundaryOperator(BoundaryKind::Robin, dim, std::move(terms), coefficient_bound);
}

BoundaryOperator BoundaryOperator::robin_normal(const Domain& domain, double kappa) {
  const std::size_t dim = domain.dimension();
  std::vector<OperatorTerm> terms;
  terms.push_back({MultiIndex::zero(dim), [](PointView) { return 1.0; }});
  for (std::size_t k = 0; k < dim; ++k) {
    terms.push_back({MultiIndex::unit(dim, k), [domain, kappa, k](PointView x) {
                       return kappa * domain.outward_normal(x)[k];
                     }});
  }
  return robin(dim, std::move(terms), std::max(1.0, std::abs(kappa)));
}

void BoundaryOperator::coefficients_at(PointView x, std::span<double> out) const {
  for (std::size_t t = 0; t < terms_.size(); ++t) out[t] = terms_[t].coefficient(x);
}

double BoundaryOperator::apply(const DifferentiableField& v, PointView x) const {
  if (kind_ == BoundaryKind::Dirichlet) return v(x, MultiIndex::zero(dim_));
  return apply_field(*this, v, x);
}

double BoundaryOperator::apply(const ShallowNetwork& net, PointView x) const {
  if (kind_ == BoundaryKind::Dirichlet) return net.forward(x);
  return apply_net(*this, net, x);
}

EllipticProblem::EllipticProblem(std::string name, Domain domain, EllipticOperator interior,
                                 BoundaryOperator boundary, ScalarField source,
                                 ScalarField boundary_data,
                                 std::optional<DifferentiableField> exact)
    : name_(std::move(name)),
      domain_(domain),
      interior_(std::move(interior)),
      boundary_(std::move(boundary)),
      source_(std::move(source)),
      boundary_data_(std::move(boundary_data)),
      exact_(std::move(exact)) {
  if (interior_.dimension() != domain_.dimension() ||
      boundary_.dimension() != domain_.dimension()) {
    throw InputShapeError("operator dimension does not match the domain");
  }
  if (!source_ || !boundary_data_) throw std::invalid_argument("problem data missing");
}

ProblemDiagnostics EllipticProblem::diagnose(std::size_t samples, std::uint64_t seed) const {
  ProblemDiagnostics diag;
  Rng rng(seed);
  const std::size_t d = dimension();
  std::vector<double> x(d);
  std::vector<double> ci(interior_.terms().size());
  std::vector<double> cb(boundary_.terms().size());
  for (std::size_t s = 0; s < samples; ++s) {
    domain_.sample_interior(rng, x);
    interior_.coefficients_at(x, ci);
    for (double c : ci) diag.max_interior_coefficient = std::max(diag.max_interior_coefficient, std::abs(c));
    if (exact_) {
      const double defect = std::abs(interior_.apply(*exact_, x) - source_(x));
      diag.manufactured_interior_defect = std::max(diag.manufactured_interior_defect, defect);
    }
    domain_.sample_boundary(rng, x);
    boundary_.coefficients_at(x, cb);
    for (double c : cb) diag.max_boundary_coefficient = std::max(diag.max_boundary_coefficient, std::abs(c));
    if (exact_) {
      const double defect = std::abs(boundary_.apply(*exact_, x) - boundary_data_(x));
      diag.manufactured_boundary_defect = std::max(diag.manufactured_boundary_defect, defect);
    }
  }
  diag.coefficients_within_bounds =
      diag.max_interior_coefficient <= interior_.coefficient_bound() &&
      diag.max_boundary_coefficient <= boundary_.coefficient_bound();
  return diag;
}

namespace {

void require_interior(const EllipticProblem& problem, PointView x) {
  if (!problem.domain().contains(x)) {
    throw DomainError("point lies outside " + problem.domain().describe());
  }
}

void require_boundary(const EllipticProblem& problem, PointView x) {
  if (!problem.domain().on_boundary(x)) {
    throw DomainError("point is not on the boundary of " + problem.domain().describe());
  }
}

}  // namespace

double apply_interior(const EllipticProblem& problem, const ShallowNetwork& net, PointView x) {
  require_interior(problem, x);
  return problem.interior_op().apply(net, x);
}

double apply_interior(const EllipticProblem& problem, const DifferentiableField& v,
                      PointView x) {
  require_interior(problem, x);
  return problem.interior_op().apply(v, x);
}

double apply_boundary(const EllipticProblem& problem, const ShallowNetwork& net, PointView x) {
  require_boundary(problem, x);
  return problem.boundary_op().apply(net, x);
}

double apply_boundary(const EllipticProblem& problem, const DifferentiableField& v,
                      PointView x) {
  require_boundary(problem, x);
  return problem.boundary_op().apply(v, x);
}

ResidualPair residual(const EllipticProblem& problem, const ShallowNetwork& net) {
  return {[&problem, net](PointView x) {
            return apply_interior(problem, net, x) - problem.source()(x);
          },
          [&problem, net](PointView x) {
            return apply_boundary(problem, net, x) - problem.boundary_data()(x);
          }};
}

ResidualPair residual(const EllipticProblem& problem, const DifferentiableField& v) {
  return {[&problem, v](PointView x) {
            return apply_interior(problem, v, x) - problem.source()(x);
          },
          [&problem, v](PointView x) {
            return apply_boundary(problem, v, x) - problem.boundary_data()(x);
          }};
}

}  // namespace pinnls
