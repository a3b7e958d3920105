#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "pinnls/collocation.hpp"
#include "pinnls/gals.hpp"
#include "pinnls/quadrature.hpp"
#include "pinnls/rate_fit.hpp"
#include "test_support.hpp"

using namespace pinnls;
using pinnls::testing::draw;
using pinnls::testing::make_rng;
using pinnls::testing::normal_equations_pinv;
using pinnls::testing::relative_error;

namespace {

// Weighted sums of (Q v)(x) * (Q w)(x) and F(x) * (Q w)(x) over nodes.
double pairing_on_nodes(const EllipticProblem& problem, const EvaluationNodes& nodes,
                        const DifferentiableField& v, const DifferentiableField& w,
                        bool data_instead_of_v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.interior.points.size(); ++i) {
    const auto x = nodes.interior.points[i];
    const double left = data_instead_of_v ? problem.source()(x) : apply_interior(problem, v, x);
    sum += nodes.interior.weights[i] * left * apply_interior(problem, w, x);
  }
  for (std::size_t i = 0; i < nodes.boundary.points.size(); ++i) {
    const auto x = nodes.boundary.points[i];
    const double left =
        data_instead_of_v ? problem.boundary_data()(x) : apply_boundary(problem, v, x);
    sum += nodes.boundary.weights[i] * left * apply_boundary(problem, w, x);
  }
  return sum;
}

double y_norm_error(const EllipticProblem& problem, const EvaluationNodes& nodes,
                    const DifferentiableField& uh) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.interior.points.size(); ++i) {
    const auto x = nodes.interior.points[i];
    const double r = apply_interior(problem, uh, x) - problem.source()(x);
    sum += nodes.interior.weights[i] * r * r;
  }
  for (std::size_t i = 0; i < nodes.boundary.points.size(); ++i) {
    const auto x = nodes.boundary.points[i];
    const double r = apply_boundary(problem, uh, x) - problem.boundary_data()(x);
    sum += nodes.boundary.weights[i] * r * r;
  }
  return std::sqrt(sum);
}

EllipticProblem zero_data_problem() {
  return EllipticProblem("zero", Domain::unit_interval(), EllipticOperator::negative_laplacian(1),
                         BoundaryOperator::dirichlet(1), [](PointView) { return 0.0; },
                         [](PointView) { return 0.0; });
}

}  // namespace

TEST_CASE("gauss-legendre rules") {
  for (std::size_t order : {1u, 2u, 5u, 32u, 64u}) {
    const auto rule = gauss_legendre(order);
    REQUIRE(rule.nodes.size() == order);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for x^(2 order - 2).
    double moment = 0.0;
    for (std::size_t i = 0; i < order; ++i)
      moment += rule.weights[i] * std::pow(rule.nodes[i], 2.0 * static_cast<double>(order) - 2.0);
    CHECK(moment == doctest::Approx(2.0 / (2.0 * static_cast<double>(order) - 1.0)).epsilon(1e-13));
  }
  const auto nodes = interior_quadrature(Domain::unit_square(), 8);
  double total = 0.0;
  for (double w : nodes.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean_value(Domain::interval(0, 2), [](PointView x) { return x[0] * x[0]; }) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(l2_norm(Domain::unit_interval(), [](PointView x) { return x[0]; }) ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  const auto bd = boundary_quadrature(Domain::unit_square(), 4);
  CHECK(bd.points.size() == 16);
}

TEST_CASE("basis derivatives match finite differences") {
  const std::vector<LinearBasis> bases = {LinearBasis::legendre(Domain::interval(-0.5, 2.0), 6),
                                          LinearBasis::sine(Domain::unit_interval(), 5),
                                          LinearBasis::legendre(Domain::unit_square(), 3),
                                          LinearBasis::sine(Domain::rectangle(0, 2, 0, 1), 3)};
  auto rng = make_rng(1);
  for (const auto& basis : bases) {
    const auto& dom = basis.domain();
    const std::size_t d = dom.dimension();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x(d);
        for (std::size_t a = 0; a < d; ++a) x[a] = draw(rng, dom.lower(a), dom.upper(a));
        for (std::size_t a = 0; a < d; ++a) {
          const double h = 1e-6;
          auto xp = x, xm = x;
          xp[a] += h;
          xm[a] -= h;
          const auto first = MultiIndex::unit(d, a);
          const double fd1 = (basis.evaluate(k, xp, MultiIndex::zero(d)) -
                              basis.evaluate(k, xm, MultiIndex::zero(d))) / (2 * h);
          CHECK(relative_error(basis.evaluate(k, x, first), fd1) < 1e-7);
          for (std::size_t b = 0; b < d; ++b) {
            const auto up = MultiIndex::unit(d, b);
            const double fd2 = (basis.evaluate(k, xp, up) - basis.evaluate(k, xm, up)) / (2 * h);
            CHECK(relative_error(basis.evaluate(k, x, MultiIndex::second(d, a, b)), fd2,
                                 std::max(1.0, std::abs(fd2))) < 1e-7);
          }
        }
      }
    }
  }
  CHECK(LinearBasis::legendre(Domain::unit_square(), 3).size() == 16);
  CHECK(LinearBasis::sine(Domain::unit_square(), 3).size() == 9);
  CHECK(basis_kind_from_name("legendre") == BasisKind::LegendreTensor);
  CHECK_THROWS(basis_kind_from_name("fourier"));
}

TEST_CASE("sine basis recovers the sine solution") {
  const auto p1 = builtin_problem("poisson1d-sin");
  const auto sol = assemble_and_solve(p1, LinearBasis::sine(p1.domain(), 1));
  REQUIRE(sol.coefficients.size() == 1);
  CHECK(std::abs(sol.coefficients(0) - 1.0) <= 1e-12);
  CHECK(sol.residual_norm <= 1e-10);
  CHECK(sol.mode == GalsMode::Quadrature);
  CHECK_FALSE(sol.rank_deficient);
}

TEST_CASE("quadratic solution is in the Legendre span") {
  const auto problem = builtin_problem("poisson1d-quadratic");
  const auto sol = assemble_and_solve(problem, LinearBasis::legendre(problem.domain(), 2));
  CHECK(sol.residual_norm <= 1e-10);
  const auto u = sol.field();
  for (double x : {0.0, 0.3, 0.9}) {
    CHECK(u(std::vector<double>{x}, MultiIndex::zero(1)) == doctest::Approx(x * x).epsilon(1e-12));
  }
  const auto pts = sample(problem.domain(), 20, 4, 3);
  CHECK(assemble_and_solve(problem, LinearBasis::legendre(problem.domain(), 2), pts).residual_norm <=
        1e-10);
}

TEST_CASE("least squares matches the pseudoinverse oracle") {
  auto rng = make_rng(2);
  for (int trial = 0; trial < 25; ++trial) {
    LeastSquaresSystem sys{Eigen::MatrixXd(12, 5), Eigen::VectorXd(12)};
    for (int i = 0; i < 12; ++i) {
      sys.rhs(i) = draw(rng, -1, 1);
      for (int j = 0; j < 5; ++j) sys.matrix(i, j) = draw(rng, -1, 1);
    }
    const auto got = solve_least_squares(sys);
    CHECK((got.coefficients - normal_equations_pinv(sys.matrix, sys.rhs)).cwiseAbs().maxCoeff() <=
          1e-9);
    CHECK(got.rank == 5);
  }
  // Assembled collocation system on the sine problem.
  const auto p1 = builtin_problem("poisson1d-sin");
  const auto basis = LinearBasis::legendre(p1.domain(), 4);
  const auto pts = sample(p1.domain(), 10, 2, 5);
  const auto sys = assemble(p1, basis, collocation_nodes(pts));
  CHECK(sys.matrix.rows() == 12);
  CHECK(sys.matrix.cols() == 5);
  const auto sol = assemble_and_solve(p1, basis, pts);
  CHECK((sol.coefficients - normal_equations_pinv(sys.matrix, sys.rhs)).cwiseAbs().maxCoeff() <=
        1e-9);
}

TEST_CASE("rank-deficient systems give the minimum-norm solution") {
  LeastSquaresSystem sys{Eigen::MatrixXd(4, 3), Eigen::VectorXd(4)};
  sys.matrix << 1, 2, 3, 2, 4, 6, 1, 0, 1, 0, 1, 1;
  sys.matrix.col(2) = sys.matrix.col(0) + sys.matrix.col(1);
  sys.rhs << 1, 2, 3, 4;
  const auto got = solve_least_squares(sys);
  CHECK(got.rank_deficient);
  CHECK(got.rank == 2);
  const Eigen::VectorXd expected =
      sys.matrix.completeOrthogonalDecomposition().pseudoInverse() * sys.rhs;
  CHECK((got.coefficients - expected).norm() < 1e-12);
  CHECK((got.coefficients - normal_equations_pinv(sys.matrix, sys.rhs)).norm() < 1e-9);

  // More basis functions than collocation rows.
  const auto p1 = builtin_problem("poisson1d-sin");
  const auto sol = assemble_and_solve(p1, LinearBasis::legendre(p1.domain(), 8),
                                      sample(p1.domain(), 3, 2, 1));
  CHECK(sol.rank_deficient);
  CHECK(sol.coefficients.allFinite());
}

TEST_CASE("variational residual certifies optimality") {
  for (const auto& name : builtin_problem_names()) {
    const auto problem = builtin_problem(name);
    const auto nodes = quadrature_nodes(problem.domain(), 32);
    for (std::size_t p : {1u, 3u, 5u}) {
      const auto basis = LinearBasis::legendre(problem.domain(), p);
      const auto sol = assemble_and_solve(problem, basis, nodes, GalsMode::Quadrature);
      const double vr = variational_residual(sol, problem, nodes);
      CHECK_MESSAGE(vr <= 1e-8, name);
      // Independent evaluation of max_k |a(u_h, phi_k) - G(phi_k)|.
      double worst = 0.0;
      const auto uh = sol.field();
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto phi = basis.function(k);
        worst = std::max(worst, std::abs(pairing_on_nodes(problem, nodes, uh, phi, false) -
                                         pairing_on_nodes(problem, nodes, uh, phi, true)));
      }
      CHECK(worst <= 1e-8);
    }
  }
}

TEST_CASE("perturbing a coefficient raises the variational residual linearly") {
  const auto p4 = builtin_problem("reaction1d");
  const auto basis = LinearBasis::legendre(p4.domain(), 4);
  const auto nodes = quadrature_nodes(p4.domain(), 32);
  auto sol = assemble_and_solve(p4, basis, nodes, GalsMode::Quadrature);
  const double base = variational_residual(sol, p4, nodes);
  const auto sys = assemble(p4, basis, nodes);
  const Eigen::MatrixXd gram = sys.matrix.transpose() * sys.matrix;
  for (Eigen::Index k = 0; k < 5; ++k) {
    auto perturbed = sol;
    perturbed.coefficients(k) += 1e-3;
    const double vr = variational_residual(perturbed, p4, nodes);
    CHECK(vr > base);
    CHECK(vr == doctest::Approx(1e-3 * gram.col(k).cwiseAbs().maxCoeff()).epsilon(1e-4));
  }
}

TEST_CASE("zero data gives the zero solution") {
  const auto problem = zero_data_problem();
  const auto nodes = quadrature_nodes(problem.domain(), 32);
  const auto sol = assemble_and_solve(problem, LinearBasis::legendre(problem.domain(), 4), nodes,
                                      GalsMode::Quadrature);
  CHECK(sol.coefficients.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sol.residual_norm == 0.0);
  CHECK(variational_residual(sol, problem, nodes) == 0.0);
}

TEST_CASE("best approximation error does not grow under nesting") {
  for (const char* name : {"poisson1d-sin", "reaction1d", "robin1d-varcoef", "poisson2d-sin"}) {
    const auto problem = builtin_problem(name);
    const auto nodes = quadrature_nodes(problem.domain(), 32);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= 8; ++p) {
      const auto sol = assemble_and_solve(problem, LinearBasis::legendre(problem.domain(), p),
                                          nodes, GalsMode::Quadrature);
      const double err = y_norm_error(problem, nodes, sol.field());
      CHECK(err == doctest::Approx(sol.residual_norm).epsilon(1e-6).scale(1e-12));
      CHECK_MESSAGE(err <= previous * (1.0 + 1e-9) + 1e-13, name << " degree " << p);
      previous = err;
    }
  }
  // Sine nesting on the square.
  const auto p3 = builtin_problem("poisson2d-sin");
  const auto nodes = quadrature_nodes(p3.domain(), 32);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 4; ++n) {
    const double err = assemble_and_solve(p3, LinearBasis::sine(p3.domain(), n), nodes,
                                          GalsMode::Quadrature).residual_norm;
    CHECK(err <= previous + 1e-13);
    previous = err;
  }
}

TEST_CASE("collocation solutions converge to the quadrature solution") {
  const auto p1 = builtin_problem("poisson1d-sin");
  const auto basis = LinearBasis::legendre(p1.domain(), 4);
  const Eigen::VectorXd reference = assemble_and_solve(p1, basis, 32).coefficients;
  std::vector<double> counts, distances;
  for (int e = 6; e <= 14; ++e) {
    const std::size_t n = std::size_t{1} << e;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto pts = sample(p1.domain(), n, std::max<std::size_t>(2, n / 4), 1000 + seed);
      total += (assemble_and_solve(p1, basis, pts).coefficients - reference).norm();
    }
    counts.push_back(static_cast<double>(n));
    distances.push_back(total / 50.0);
  }
  const auto fit = fit_rate(counts, distances);
  MESSAGE("collocation-to-quadrature slope " << fit.slope);
  CHECK(fit.slope <= -0.35);
}

TEST_CASE("solution CSV") {
  const auto p1 = builtin_problem("poisson1d-sin");
  const auto sol = assemble_and_solve(p1, LinearBasis::sine(p1.domain(), 2));
  std::ostringstream out;
  write_solution_csv(out, sol);
  CHECK(out.str().rfind("index,coefficient\n0,", 0) == 0);
}
