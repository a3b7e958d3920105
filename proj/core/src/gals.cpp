#include "pinnls/gals.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "pinnls/errors.hpp"

namespace pinnls {

BasisKind basis_kind_from_name(const std::string& name) {
  if (name == "legendre") return BasisKind::LegendreTensor;
  if (name == "sine") return BasisKind::SineTensor;
  throw std::invalid_argument("unknown basis kind '" + name + "' (expected legendre or sine)");
}

std::string to_string(BasisKind kind) {
  return kind == BasisKind::LegendreTensor ? "legendre" : "sine";
}

std::string to_string(GalsMode mode) {
  return mode == GalsMode::Quadrature ? "quadrature" : "collocation";
}

LinearBasis::LinearBasis(BasisKind kind, const Domain& domain, std::size_t parameter)
    : kind_(kind), domain_(domain), parameter_(parameter) {
  if (kind_ == BasisKind::SineTensor && parameter_ < 1) {
    throw std::invalid_argument("sine basis needs at least one mode");
  }
}

LinearBasis LinearBasis::legendre(const Domain& domain, std::size_t degree) {
  return LinearBasis(BasisKind::LegendreTensor, domain, degree);
}

LinearBasis LinearBasis::sine(const Domain& domain, std::size_t count) {
  return LinearBasis(BasisKind::SineTensor, domain, count);
}

LinearBasis LinearBasis::make(BasisKind kind, const Domain& domain, std::size_t parameter) {
  return LinearBasis(kind, domain, parameter);
}

std::size_t LinearBasis::per_axis() const {
  return kind_ == BasisKind::LegendreTensor ? parameter_ + 1 : parameter_;
}

std::size_t LinearBasis::size() const {
  const std::size_t n = per_axis();
  return domain_.dimension() == 1 ? n : n * n;
}

double LinearBasis::axis_value(std::size_t index, std::size_t axis, double x, int order) const {
  const double width = domain_.extent(axis);
  const double xi = x - domain_.lower(axis);
  if (kind_ == BasisKind::SineTensor) {
    const double c = static_cast<double>(index + 1) * std::numbers::pi / width;
    return std::pow(c, order) * std::sin(c * xi + order * std::numbers::pi / 2.0);
  }
  const double t = 2.0 * xi / width - 1.0;
  const double scale = std::pow(2.0 / width, order);
  // P, P', P'' up to `index` by recurrence.
  double p_prev = 1.0, p = t;
  double d_prev = 0.0, d = 1.0;
  double s_prev = 0.0, s = 0.0;
  if (index == 0) {
    p = 1.0;
    d = 0.0;
  }
  for (std::size_t n = 1; n < index; ++n) {
    const auto nn = static_cast<double>(n);
    const double p_next = ((2.0 * nn + 1.0) * t * p - nn * p_prev) / (nn + 1.0);
    const double d_next = d_prev + (2.0 * nn + 1.0) * p;
    const double s_next = s_prev + (2.0 * nn + 1.0) * d;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    s_prev = s;
    s = s_next;
  }
  switch (order) {
    case 0: return p;
    case 1: return scale * d;
    case 2: return scale * s;
    default: throw UnsupportedOrderError("basis derivatives are available up to order 2");
  }
}

double LinearBasis::evaluate(std::size_t k, PointView x, const MultiIndex& alpha) const {
  if (k >= size()) throw std::out_of_range("basis index out of range");
  if (alpha.order() > 2) throw UnsupportedOrderError("basis derivatives are available up to order 2");
  if (x.size() != domain_.dimension() || alpha.dimension() != domain_.dimension()) {
    throw InputShapeError("point or multi-index dimension does not match the basis");
  }
  if (domain_.dimension() == 1) return axis_value(k, 0, x[0], alpha[0]);
  const std::size_t n = per_axis();
  return axis_value(k / n, 0, x[0], alpha[0]) * axis_value(k % n, 1, x[1], alpha[1]);
}

DifferentiableField LinearBasis::function(std::size_t k) const {
  return [basis = *this, k](PointView x, const MultiIndex& alpha) {
    return basis.evaluate(k, x, alpha);
  };
}

DifferentiableField LinearBasis::combination(const Eigen::VectorXd& coefficients) const {
  if (static_cast<std::size_t>(coefficients.size()) != size()) {
    throw InputShapeError("coefficient count does not match the basis size");
  }
  return [basis = *this, c = coefficients](PointView x, const MultiIndex& alpha) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      s += c(k) * basis.evaluate(static_cast<std::size_t>(k), x, alpha);
    }
    return s;
  };
}

EvaluationNodes quadrature_nodes(const Domain& domain, std::size_t order) {
  return {interior_quadrature(domain, order), boundary_quadrature(domain, order)};
}

EvaluationNodes collocation_nodes(const CollocationSet& pts) {
  EvaluationNodes nodes;
  nodes.interior.points = pts.interior();
  nodes.interior.weights.assign(pts.interior().size(), pts.interior_weight());
  nodes.boundary.points = pts.boundary();
  nodes.boundary.weights.assign(pts.boundary().size(), pts.boundary_weight());
  return nodes;
}

namespace {

template <class Op>
void fill_rows(const Op& op, const ScalarField& data, const LinearBasis& basis,
               const WeightedNodes& nodes, Eigen::Index row0, LeastSquaresSystem& sys) {
  std::vector<double> coeffs(op.alphas().size());
  for (std::size_t i = 0; i < nodes.points.size(); ++i) {
    const auto x = nodes.points[i];
    const double sw = std::sqrt(nodes.weights[i]);
    op.coefficients_at(x, coeffs);
    const auto row = row0 + static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      double v = 0.0;
      for (std::size_t t = 0; t < coeffs.size(); ++t) {
        v += coeffs[t] * basis.evaluate(k, x, op.alphas()[t]);
      }
      sys.matrix(row, static_cast<Eigen::Index>(k)) = sw * v;
    }
    sys.rhs(row) = sw * data(x);
  }
}

}  // namespace

LeastSquaresSystem assemble(const EllipticProblem& problem, const LinearBasis& basis,
                            const EvaluationNodes& nodes) {
  if (!(basis.domain() == problem.domain())) {
    throw std::invalid_argument("basis and problem live on different domains");
  }
  const auto n_int = static_cast<Eigen::Index>(nodes.interior.points.size());
  const auto n_bd = static_cast<Eigen::Index>(nodes.boundary.points.size());
  LeastSquaresSystem sys{Eigen::MatrixXd(n_int + n_bd, static_cast<Eigen::Index>(basis.size())),
                         Eigen::VectorXd(n_int + n_bd)};
  fill_rows(problem.interior_op(), problem.source(), basis, nodes.interior, 0, sys);
  fill_rows(problem.boundary_op(), problem.boundary_data(), basis, nodes.boundary, n_int, sys);
  return sys;
}

LeastSquaresSolution solve_least_squares(const LeastSquaresSystem& system) {
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system.matrix);
  LeastSquaresSolution out;
  out.coefficients = cod.solve(system.rhs);
  out.rank = cod.rank();
  out.rank_deficient = out.rank < system.matrix.cols();
  return out;
}

GalsSolution assemble_and_solve(const EllipticProblem& problem, const LinearBasis& basis,
                                const EvaluationNodes& nodes, GalsMode mode) {
  const auto sys = assemble(problem, basis, nodes);
  auto ls = solve_least_squares(sys);
  GalsSolution sol{std::move(ls.coefficients), basis, 0.0, mode, ls.rank, ls.rank_deficient};
  sol.residual_norm = (sys.matrix * sol.coefficients - sys.rhs).norm();
  return sol;
}

GalsSolution assemble_and_solve(const EllipticProblem& problem, const LinearBasis& basis,
                                std::size_t quadrature_order) {
  return assemble_and_solve(problem, basis, quadrature_nodes(problem.domain(), quadrature_order),
                            GalsMode::Quadrature);
}

GalsSolution assemble_and_solve(const EllipticProblem& problem, const LinearBasis& basis,
                                const CollocationSet& pts) {
  return assemble_and_solve(problem, basis, collocation_nodes(pts), GalsMode::Collocation);
}

double variational_residual(const GalsSolution& solution, const EllipticProblem& problem,
                            const EvaluationNodes& nodes) {
  const auto sys = assemble(problem, solution.basis, nodes);
  // a(u_h, phi_k) - G(phi_k) = [A^T (A c - r)]_k
  const Eigen::VectorXd g = sys.matrix.transpose() * (sys.matrix * solution.coefficients - sys.rhs);
  return g.cwiseAbs().maxCoeff();
}

void write_solution_csv(std::ostream& out, const GalsSolution& solution) {
  out << "index,coefficient\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < solution.coefficients.size(); ++k) {
    out << k << ',' << solution.coefficients(k) << '\n';
  }
}

}  // namespace pinnls
