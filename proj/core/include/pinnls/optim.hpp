#pragma once

#include <deque>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pinnls/collocation.hpp"
#include "pinnls/network.hpp"
#include "pinnls/problem.hpp"

namespace pinnls {

enum class OptimizerKind { Adam, LBFGS };

OptimizerKind optimizer_kind_from_name(const std::string& name);
std::string to_string(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::LBFGS;
  double learning_rate = 1e-3;  // Adam
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int history_size = 10;  // L-BFGS
  int max_iters = 1000;
  double grad_tol = 1e-8;
  double loss_tol = 1e-12;
  bool l1_projection = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// ---------------------------------------------------------------- Adam

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  long step = 0;

  static AdamState zeros(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
  }
};

/// Bias-corrected Adam update; advances `state`. Throws NumericalAbort on a
/// non-finite gradient.
ParameterVector adam_step(const ParameterVector& theta, const ParameterVector& grad,
                          AdamState& state, const OptimizerConfig& config);

// ---------------------------------------------------------------- L-BFGS

/// f(theta) with its gradient written to `grad`.
using Objective = std::function<double(const Eigen::VectorXd& theta, Eigen::VectorXd& grad)>;

/// Limited-memory curvature pairs (s, y) with s'y > 0.
class LbfgsHistory {
 public:
  explicit LbfgsHistory(int capacity = 10);

  /// Stores the pair unless it fails the curvature test; returns whether it
  /// was kept. The oldest pair is evicted at capacity.
  bool push(Eigen::VectorXd s, Eigen::VectorXd y);
  void clear() { pairs_.clear(); }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  int capacity() const { return capacity_; }

  /// Two-loop recursion: returns H * grad (so the search direction is its
  /// negation). With no pairs, H is the identity.
  Eigen::VectorXd apply_inverse_hessian(const Eigen::VectorXd& grad) const;

 private:
  struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
  };
  int capacity_;
  std::deque<Pair> pairs_;
};

struct LbfgsStepResult {
  ParameterVector theta;
  double value = 0.0;
  ParameterVector grad;
  double step_length = 0.0;
  int backtracks = 0;
  bool success = false;
};

inline constexpr double kArmijoC1 = 1e-4;
inline constexpr int kMaxBacktracks = 40;

/// One L-BFGS iteration from (theta, value, grad): two-loop direction
/// (steepest descent, scaled to unit length when longer, if the history is
/// empty), then Armijo backtracking with halving. On success the new
/// curvature pair is pushed into `history`.
LbfgsStepResult lbfgs_step(const ParameterVector& theta, double value,
                           const ParameterVector& grad, LbfgsHistory& history,
                           const OptimizerConfig& config, const Objective& objective);

enum class TrainingStatus { Converged, MaxIters, LineSearchFailure, Aborted };

std::string to_string(TrainingStatus status);

struct MinimizeResult {
  Eigen::VectorXd theta;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  TrainingStatus status = TrainingStatus::MaxIters;
};

/// Generic driver for either optimizer on an arbitrary objective.
MinimizeResult minimize(const Objective& objective, Eigen::VectorXd theta0,
                        const OptimizerConfig& config);

// ---------------------------------------------------------------- training

struct TraceRecord {
  int iteration = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double l1_norm = 0.0;
  double seconds = 0.0;
};

struct TrainingTrace {
  std::vector<TraceRecord> records;
  TrainingStatus status = TrainingStatus::MaxIters;
  std::string message;
  int best_iteration = 0;
  double best_loss = 0.0;
};

/// CSV `iteration,loss,grad_norm,l1_norm,seconds`.
void write_trace_csv(std::ostream& out, const TrainingTrace& trace);

struct TrainOptions {
  /// Resample collocation points every k iterations (0: never).
  int resample_every = 0;
  /// Wall-clock seconds in the trace; off keeps traces byte-reproducible.
  bool record_timing = false;
};

struct TrainResult {
  ShallowNetwork net;
  TrainingTrace trace;
};

/// Minimizes the collocation loss over the network parameters. Returns the
/// best-loss iterate seen, not the last one.
TrainResult train(const EllipticProblem& problem, const ShallowNetwork& net,
                  const CollocationSet& pts, const OptimizerConfig& config,
                  const TrainOptions& options = {});

}  // namespace pinnls
