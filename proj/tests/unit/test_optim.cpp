#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "pinnls/collocation.hpp"
#include "pinnls/errors.hpp"
#include "pinnls/optim.hpp"
#include "test_support.hpp"

using namespace pinnls;
using pinnls::testing::draw;
using pinnls::testing::make_rng;

namespace {

struct Quadratic {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
    g = a * x - b;
    return 0.5 * x.dot(a * x) - b.dot(x) + 10.0;
  }
};

Quadratic random_quadratic(std::uint64_t seed, int n) {
  auto rng = make_rng(seed);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = draw(rng, -1, 1);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = draw(rng, -1, 1);
  return {m.transpose() * m + Eigen::MatrixXd::Identity(n, n), b};
}

double rosenbrock(const Eigen::VectorXd& x, Eigen::VectorXd& g) {
  const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
  g.resize(2);
  g(0) = -2.0 * a - 400.0 * x(0) * b;
  g(1) = 200.0 * b;
  return a * a + 100.0 * b * b;
}

OptimizerConfig tight(OptimizerKind kind) {
  OptimizerConfig c;
  c.kind = kind;
  c.loss_tol = 1e-300;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.beta1 = 0.9995;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.history_size = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(optimizer_kind_from_name("adam") == OptimizerKind::Adam);
  CHECK(to_string(OptimizerKind::LBFGS) == "lbfgs");
  CHECK_THROWS(optimizer_kind_from_name("sgd"));
}

TEST_CASE("adam with zero gradient only decays the moments") {
  OptimizerConfig c;
  AdamState state = AdamState::zeros(3);
  state.first_moment << 1, 2, 3;
  state.second_moment << 4, 5, 6;
  state.step = 4;
  Eigen::VectorXd theta(3);
  theta << 0.1, 0.2, 0.3;
  const Eigen::VectorXd grad = Eigen::VectorXd::Zero(3);
  AdamState zero_state = AdamState::zeros(3);
  CHECK(adam_step(theta, grad, zero_state, c) == theta);
  CHECK(zero_state.step == 1);
  adam_step(theta, grad, state, c);
  CHECK(state.first_moment(1) == doctest::Approx(0.9 * 2));
  CHECK(state.second_moment(2) == doctest::Approx(0.999 * 6));
}

TEST_CASE("adam first step by hand") {
  // g = 2, m = 0.2, v = 0.004, m_hat = 2, v_hat = 4: 1 - 0.1 * 2 / (2 + 1e-8).
  OptimizerConfig c;
  c.learning_rate = 0.1;
  AdamState state = AdamState::zeros(1);
  const Eigen::VectorXd theta = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd next = adam_step(theta, 2.0 * theta, state, c);
  CHECK(next(0) == doctest::Approx(0.9000000005).epsilon(1e-15));
  Eigen::VectorXd bad = Eigen::VectorXd::Ones(1);
  bad(0) = std::nan("");
  CHECK_THROWS_AS(adam_step(theta, bad, state, c), NumericalAbort);
}

namespace {

// Independent transcription of the bias-corrected update.
Eigen::VectorXd reference_adam_run(Eigen::VectorXd theta, int steps, double lr,
                                   std::vector<double>& losses) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size()), v = m;
  for (int k = 1; k <= steps; ++k) {
    const Eigen::VectorXd g = 2.0 * theta;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      m(i) = 0.9 * m(i) + 0.1 * g(i);
      v(i) = 0.999 * v(i) + 0.001 * g(i) * g(i);
      const double mh = m(i) / (1.0 - std::pow(0.9, k));
      const double vh = v(i) / (1.0 - std::pow(0.999, k));
      theta(i) -= lr * mh / (std::sqrt(vh) + 1e-8);
    }
    losses.push_back(theta.squaredNorm());
  }
  return theta;
}

std::vector<double> library_adam_run(Eigen::VectorXd theta, int steps, double lr) {
  OptimizerConfig c;
  c.learning_rate = lr;
  AdamState state = AdamState::zeros(theta.size());
  std::vector<double> losses;
  for (int k = 0; k < steps; ++k) {
    theta = adam_step(theta, 2.0 * theta, state, c);
    losses.push_back(theta.squaredNorm());
  }
  return losses;
}

Eigen::VectorXd random_start(std::uint64_t seed) {
  auto rng = make_rng(seed);
  Eigen::VectorXd theta(10);
  for (int i = 0; i < 10; ++i) theta(i) = draw(rng, -1, 1);
  return theta;
}

}  // namespace

TEST_CASE("adam on a squared norm follows the reference run") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<double> expected;
    reference_adam_run(random_start(seed), 50, 0.1, expected);
    const auto got = library_adam_run(random_start(seed), 50, 0.1);
    for (std::size_t k = 0; k < got.size(); ++k)
      CHECK(std::abs(got[k] - expected[k]) <= 1e-13 * std::max(1.0, expected[k]));
  }
  int small = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    small += library_adam_run(random_start(seed), 50, 0.1).back() < 1e-2;
  CHECK(small >= 16);
}

TEST_CASE("adam on a squared norm decreases monotonically after step 5" *
          doctest::should_fail()) {
  const auto losses = library_adam_run(random_start(2), 50, 0.1);
  bool monotone = true;
  for (std::size_t k = 5; k + 1 < losses.size(); ++k) monotone &= losses[k + 1] <= losses[k];
  CHECK(monotone);
  CHECK(losses.back() < 1e-2);
}

TEST_CASE("lbfgs history") {
  LbfgsHistory h(2);
  const Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(3, 1, 3);
  CHECK(h.apply_inverse_hessian(g) == g);
  CHECK_FALSE(h.push(Eigen::VectorXd::Unit(3, 0), -Eigen::VectorXd::Unit(3, 0)));
  CHECK(h.empty());
  CHECK(h.push(Eigen::VectorXd::Unit(3, 0), Eigen::VectorXd::Unit(3, 0)));
  CHECK(h.push(Eigen::VectorXd::Unit(3, 1), Eigen::VectorXd::Unit(3, 1)));
  CHECK(h.push(Eigen::VectorXd::Unit(3, 2), Eigen::VectorXd::Unit(3, 2)));
  CHECK(h.size() == 2);

  // Secant condition: H y = s for the newest pair.
  LbfgsHistory one(5);
  Eigen::VectorXd s(3), y(3);
  s << 1, 0.5, -0.2;
  y << 2, 0.7, 0.1;
  one.push(s, y);
  CHECK((one.apply_inverse_hessian(y) - s).norm() < 1e-14);
}

TEST_CASE("lbfgs first step is steepest descent") {
  const auto q = random_quadratic(3, 4);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd g;
  const double f0 = q(x0, g);
  LbfgsHistory history(10);
  const auto step = lbfgs_step(x0, f0, g, history, OptimizerConfig{}, q);
  REQUIRE(step.success);
  const Eigen::VectorXd moved = step.theta - x0;
  const Eigen::VectorXd unit = -g / g.norm();
  CHECK((moved / moved.norm() - unit).norm() < 1e-14);
  CHECK(step.value <= f0 + kArmijoC1 * step.step_length * g.dot(moved / step.step_length));
  CHECK(history.size() == 1);
}

TEST_CASE("lbfgs line search failure") {
  Objective up = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = Eigen::VectorXd::Ones(x.size());
    return x.sum() < 0 ? 1e300 * 1e300 : 1.0;
  };
  LbfgsHistory history(3);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2), g = Eigen::VectorXd::Ones(2);
  const auto step = lbfgs_step(x, 1.0, g, history, OptimizerConfig{}, up);
  CHECK_FALSE(step.success);
  CHECK(step.backtracks == kMaxBacktracks);
  CHECK(minimize(up, x, OptimizerConfig{}).status == TrainingStatus::LineSearchFailure);
}

TEST_CASE("lbfgs solves a convex quadratic") {
  const auto q = random_quadratic(4, 5);
  auto c = tight(OptimizerKind::LBFGS);
  c.max_iters = 30;
  const auto result = minimize(q, Eigen::VectorXd::Zero(5), c);
  CHECK(result.status == TrainingStatus::Converged);
  CHECK(result.grad_norm < 1e-8);
  CHECK(result.iterations <= 30);
  const Eigen::VectorXd exact = q.a.ldlt().solve(q.b);
  CHECK((result.theta - exact).norm() < 1e-7);
}

TEST_CASE("lbfgs on Rosenbrock") {
  auto c = tight(OptimizerKind::LBFGS);
  c.max_iters = 200;
  c.grad_tol = 1e-10;
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  const auto result = minimize(rosenbrock, x0, c);
  CHECK(result.iterations <= 200);
  CHECK(std::abs(result.theta(0) - 1.0) < 1e-5);
  CHECK(std::abs(result.theta(1) - 1.0) < 1e-5);
}

TEST_CASE("adam and lbfgs agree on a quadratic") {
  const auto q = random_quadratic(5, 5);
  auto lb = tight(OptimizerKind::LBFGS);
  lb.grad_tol = 1e-12;
  auto ad = tight(OptimizerKind::Adam);
  ad.learning_rate = 1e-2;
  ad.max_iters = 50000;
  ad.grad_tol = 1e-9;
  const auto r1 = minimize(q, Eigen::VectorXd::Zero(5), lb);
  const auto r2 = minimize(q, Eigen::VectorXd::Zero(5), ad);
  CHECK((r1.theta - r2.theta).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("minimize aborts on a non-finite objective") {
  Objective nan_objective = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = x;
    return std::nan("");
  };
  CHECK(minimize(nan_objective, Eigen::VectorXd::Ones(2), OptimizerConfig{}).status ==
        TrainingStatus::Aborted);
}

TEST_CASE("training from a zero-loss point converges immediately") {
  const auto p2 = builtin_problem("poisson1d-tanh");
  const ShallowNetwork exact(Eigen::MatrixXd::Constant(1, 1, 5.0), Eigen::VectorXd::Constant(1, -2.0),
                             Eigen::VectorXd::Ones(1), Activation(ActivationKind::Tanh));
  const auto pts = sample(p2.domain(), 64, 8, 1);
  const auto result = train(p2, exact, pts, OptimizerConfig{});
  CHECK(result.trace.status == TrainingStatus::Converged);
  CHECK(result.trace.records.size() == 1);
  CHECK(result.trace.records.front().iteration == 0);
  CHECK(result.net.parameters() == exact.parameters());
}

TEST_CASE("training the sine problem reaches a small loss") {
  const auto p1 = builtin_problem("poisson1d-sin");
  OptimizerConfig c;
  c.max_iters = 3000;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto net = ShallowNetwork::random(1, 16, Activation(ActivationKind::Tanh), seed);
    const auto pts = sample(p1.domain(), 256, 2, seed);
    const auto result = train(p1, net, pts, c);
    good += result.trace.best_loss <= 1e-6;
  }
  CHECK(good >= 8);
}

TEST_CASE("trace properties") {
  const auto p4 = builtin_problem("reaction1d");
  const auto net = ShallowNetwork::random(1, 6, Activation(ActivationKind::Tanh), 3);
  const auto pts = sample(p4.domain(), 40, 4, 3);
  OptimizerConfig c;
  c.max_iters = 150;
  for (auto kind : {OptimizerKind::LBFGS, OptimizerKind::Adam}) {
    c.kind = kind;
    c.learning_rate = 1e-2;
    const auto result = train(p4, net, pts, c);
    const auto& records = result.trace.records;
    REQUIRE_FALSE(records.empty());
    double best = records.front().loss;
    int best_iter = records.front().iteration;
    for (const auto& r : records) {
      CHECK(std::isfinite(r.loss));
      CHECK(r.seconds == 0.0);
      if (r.loss < best) {
        best = r.loss;
        best_iter = r.iteration;
      }
    }
    CHECK(result.trace.best_loss == best);
    CHECK(result.trace.best_iteration == best_iter);
    CHECK(loss(p4, result.net, pts) == doctest::Approx(best).epsilon(1e-12));
    CHECK(best <= records.front().loss);
  }
}

TEST_CASE("l1 projection holds on every iterate") {
  const auto p1 = builtin_problem("poisson1d-sin");
  const double bound = 0.5;
  const auto net = ShallowNetwork::random(1, 8, Activation(ActivationKind::Tanh), 9, {}, bound);
  const auto pts = sample(p1.domain(), 64, 4, 9);
  for (auto kind : {OptimizerKind::LBFGS, OptimizerKind::Adam}) {
    OptimizerConfig c;
    c.kind = kind;
    c.learning_rate = 1e-2;
    c.max_iters = 200;
    c.l1_projection = true;
    const auto result = train(p1, net, pts, c);
    for (const auto& r : result.trace.records) CHECK(r.l1_norm <= bound + 1e-12);
    CHECK(result.net.l1_norm() <= bound + 1e-12);
  }
}

TEST_CASE("training is deterministic") {
  const auto p3 = builtin_problem("poisson2d-sin");
  const auto net = ShallowNetwork::random(2, 5, Activation(ActivationKind::Tanh), 4);
  const auto pts = sample(p3.domain(), 50, 20, 4);
  OptimizerConfig c;
  c.max_iters = 60;
  TrainOptions opts;
  opts.resample_every = 20;
  const auto a = train(p3, net, pts, c, opts);
  const auto b = train(p3, net, pts, c, opts);
  CHECK(a.net.parameters() == b.net.parameters());
  std::ostringstream sa, sb;
  write_trace_csv(sa, a.trace);
  write_trace_csv(sb, b.trace);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("iteration,loss,grad_norm,l1_norm,seconds\n", 0) == 0);
}
