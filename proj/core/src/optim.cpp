#include "pinnls/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pinnls/errors.hpp"

namespace pinnls {

OptimizerKind optimizer_kind_from_name(const std::string& name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "lbfgs") return OptimizerKind::LBFGS;
  throw std::invalid_argument("unknown optimizer '" + name + "' (expected adam or lbfgs)");
}

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "lbfgs";
}

std::string to_string(TrainingStatus status) {
  switch (status) {
    case TrainingStatus::Converged: return "Converged";
    case TrainingStatus::MaxIters: return "MaxIters";
    case TrainingStatus::LineSearchFailure: return "LineSearchFailure";
    case TrainingStatus::Aborted: return "Aborted";
  }
  return "Unknown";
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(beta1 > 0.0 && beta1 < beta2 && beta2 < 1.0)) {
    throw std::invalid_argument("beta1/beta2 must satisfy 0 < beta1 < beta2 < 1");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (history_size < 1) throw std::invalid_argument("history_size must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (!(loss_tol > 0.0)) throw std::invalid_argument("loss_tol must be positive");
}

ParameterVector adam_step(const ParameterVector& theta, const ParameterVector& grad,
                          AdamState& state, const OptimizerConfig& config) {
  if (!grad.allFinite()) throw NumericalAbort("non-finite gradient in Adam step");
  if (state.first_moment.size() != theta.size()) {
    throw InputShapeError("Adam state size does not match the parameters");
  }
  state.first_moment = config.beta1 * state.first_moment + (1.0 - config.beta1) * grad;
  state.second_moment =
      config.beta2 * state.second_moment + (1.0 - config.beta2) * grad.cwiseProduct(grad);
  ++state.step;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  const Eigen::ArrayXd m_hat = state.first_moment.array() / c1;
  const Eigen::ArrayXd v_hat = state.second_moment.array() / c2;
  return theta.array() - config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
}

LbfgsHistory::LbfgsHistory(int capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("L-BFGS history capacity must be >= 1");
}

bool LbfgsHistory::push(Eigen::VectorXd s, Eigen::VectorXd y) {
  const double sy = s.dot(y);
  // s'y > 0, with a relative floor so that rho = 1 / s'y stays finite.
  if (!(sy > std::numeric_limits<double>::epsilon() * y.squaredNorm())) return false;
  if (static_cast<int>(pairs_.size()) == capacity_) pairs_.pop_front();
  pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
  return true;
}

Eigen::VectorXd LbfgsHistory::apply_inverse_hessian(const Eigen::VectorXd& grad) const {
  Eigen::VectorXd q = grad;
  std::vector<double> alpha(pairs_.size());
  for (std::size_t k = pairs_.size(); k-- > 0;) {
    alpha[k] = pairs_[k].rho * pairs_[k].s.dot(q);
    q -= alpha[k] * pairs_[k].y;
  }
  if (!pairs_.empty()) {
    const auto& last = pairs_.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const double beta = pairs_[k].rho * pairs_[k].y.dot(q);
    q += (alpha[k] - beta) * pairs_[k].s;
  }
  return q;
}

namespace {

Eigen::VectorXd steepest_descent(const Eigen::VectorXd& grad) {
  const double norm = grad.norm();
  return norm > 1.0 ? Eigen::VectorXd(-grad / norm) : Eigen::VectorXd(-grad);
}

}  // namespace

LbfgsStepResult lbfgs_step(const ParameterVector& theta, double value,
                           const ParameterVector& grad, LbfgsHistory& history,
                           const OptimizerConfig& /*config*/, const Objective& objective) {
  Eigen::VectorXd direction =
      history.empty() ? steepest_descent(grad) : Eigen::VectorXd(-history.apply_inverse_hessian(grad));
  double slope = grad.dot(direction);
  if (!(slope < 0.0)) {
    history.clear();
    direction = steepest_descent(grad);
    slope = grad.dot(direction);
  }

  LbfgsStepResult result;
  result.grad.resize(theta.size());
  double t = 1.0;
  for (int k = 0; k <= kMaxBacktracks; ++k) {
    Eigen::VectorXd trial = theta + t * direction;
    const double f = objective(trial, result.grad);
    if (std::isfinite(f) && f <= value + kArmijoC1 * t * slope) {
      result.theta = std::move(trial);
      result.value = f;
      result.step_length = t;
      result.backtracks = k;
      result.success = true;
      history.push(result.theta - theta, result.grad - grad);
      return result;
    }
    t *= 0.5;
  }
  result.theta = theta;
  result.value = value;
  result.grad = grad;
  result.backtracks = kMaxBacktracks;
  return result;
}

MinimizeResult minimize(const Objective& objective, Eigen::VectorXd theta0,
                        const OptimizerConfig& config) {
  config.validate();
  MinimizeResult out;
  out.theta = std::move(theta0);
  Eigen::VectorXd grad(out.theta.size());
  out.value = objective(out.theta, grad);
  AdamState adam = AdamState::zeros(out.theta.size());
  LbfgsHistory history(config.history_size);
  for (int iter = 0;; ++iter) {
    out.iterations = iter;
    out.grad_norm = grad.norm();
    if (!std::isfinite(out.value) || !grad.allFinite()) {
      out.status = TrainingStatus::Aborted;
      return out;
    }
    if (out.grad_norm <= config.grad_tol || out.value <= config.loss_tol) {
      out.status = TrainingStatus::Converged;
      return out;
    }
    if (iter >= config.max_iters) {
      out.status = TrainingStatus::MaxIters;
      return out;
    }
    if (config.kind == OptimizerKind::Adam) {
      out.theta = adam_step(out.theta, grad, adam, config);
      out.value = objective(out.theta, grad);
    } else {
      auto step = lbfgs_step(out.theta, out.value, grad, history, config, objective);
      if (!step.success) {
        out.status = TrainingStatus::LineSearchFailure;
        return out;
      }
      out.theta = std::move(step.theta);
      out.value = step.value;
      grad = std::move(step.grad);
    }
  }
}

}  // namespace pinnls
