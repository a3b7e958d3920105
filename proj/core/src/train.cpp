#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "pinnls/errors.hpp"
#include "pinnls/optim.hpp"

namespace pinnls {

void write_trace_csv(std::ostream& out, const TrainingTrace& trace) {
  out << "iteration,loss,grad_norm,l1_norm,seconds\n" << std::setprecision(17);
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << r.loss << ',' << r.grad_norm << ',' << r.l1_norm << ','
        << r.seconds << '\n';
  }
}

TrainResult train(const EllipticProblem& problem, const ShallowNetwork& net,
                  const CollocationSet& pts, const OptimizerConfig& config,
                  const TrainOptions& options) {
  config.validate();
  const auto width = static_cast<Eigen::Index>(net.width());
  const bool project = config.l1_projection && net.is_bounded();
  const auto start = std::chrono::steady_clock::now();

  CollocationSet current = pts;
  std::uint64_t epoch = 0;
  const Objective objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    return loss_and_gradient(problem, net.with_parameters(theta), current, grad);
  };
  auto project_theta = [&](Eigen::VectorXd& theta) {
    if (!project || theta.head(width).lpNorm<1>() <= net.l1_bound()) return false;
    theta.head(width) = project_l1_ball(theta.head(width), net.l1_bound());
    return true;
  };

  Eigen::VectorXd theta = net.parameters();
  project_theta(theta);
  Eigen::VectorXd grad(theta.size());
  double value = objective(theta, grad);

  TrainingTrace trace;
  Eigen::VectorXd best_theta = theta;
  double best_loss = std::numeric_limits<double>::infinity();
  AdamState adam = AdamState::zeros(theta.size());
  LbfgsHistory history(config.history_size);

  for (int iter = 0;; ++iter) {
    if (!std::isfinite(value) || !grad.allFinite()) {
      trace.status = TrainingStatus::Aborted;
      trace.message = "non-finite loss or gradient at iteration " + std::to_string(iter);
      break;
    }
    TraceRecord rec;
    rec.iteration = iter;
    rec.loss = value;
    rec.grad_norm = grad.norm();
    rec.l1_norm = theta.head(width).lpNorm<1>();
    if (options.record_timing) {
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    trace.records.push_back(rec);
    if (value < best_loss) {
      best_loss = value;
      best_theta = theta;
      trace.best_iteration = iter;
    }
    if (value <= config.loss_tol || rec.grad_norm <= config.grad_tol) {
      trace.status = TrainingStatus::Converged;
      break;
    }
    if (iter >= config.max_iters) {
      trace.status = TrainingStatus::MaxIters;
      break;
    }

    if (config.kind == OptimizerKind::Adam) {
      try {
        theta = adam_step(theta, grad, adam, config);
      } catch (const NumericalAbort& e) {
        trace.status = TrainingStatus::Aborted;
        trace.message = e.what();
        break;
      }
      project_theta(theta);
      value = objective(theta, grad);
    } else {
      auto step = lbfgs_step(theta, value, grad, history, config, objective);
      if (!step.success) {
        trace.status = TrainingStatus::LineSearchFailure;
        trace.message = "Armijo backtracking exhausted at iteration " + std::to_string(iter);
        break;
      }
      theta = std::move(step.theta);
      value = step.value;
      grad = std::move(step.grad);
      if (project_theta(theta)) value = objective(theta, grad);
    }

    if (options.resample_every > 0 && (iter + 1) % options.resample_every == 0) {
      current = resample(pts, ++epoch);
      history.clear();
      value = objective(theta, grad);
    }
  }

  trace.best_loss = trace.records.empty() ? value : best_loss;
  return {net.with_parameters(best_theta), std::move(trace)};
}

}  // namespace pinnls
