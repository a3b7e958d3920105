#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pinnls/collocation.hpp"
#include "pinnls/field.hpp"
#include "pinnls/network.hpp"
#include "pinnls/optim.hpp"
#include "pinnls/problem.hpp"
#include "pinnls/rate_fit.hpp"

namespace pinnls {

/// One row of a study CSV.
struct ExperimentRecord {
  std::string study;
  std::size_t n = 0;  // independent variable: width, N_int, or sample count
  int trial = 0;
  std::uint64_t seed = 0;
  double loss = 0.0;
  double err_h = 0.0;    // discrete energy norm of u - u_h on the training points
  double err_l2 = 0.0;   // L2(Omega) error, Gauss-Legendre quadrature
  double err_max = 0.0;  // max pointwise error on a uniform probe grid
  double l1_norm = 0.0;
  double seconds = 0.0;
  std::string flags;  // '|'-separated: aborted, linesearch, underdetermined, rank_deficient
};

inline constexpr const char* kRecordCsvHeader =
    "study,n,trial,seed,loss,err_h,err_l2,err_max,l1_norm,seconds,flags";

/// Writes the header and the records sorted by (n, trial).
void write_records_csv(std::ostream& out, std::vector<ExperimentRecord> records);

struct StudyResult {
  std::vector<ExperimentRecord> records;
  std::vector<double> xs;  // distinct n, ascending
  std::vector<double> ys;  // aggregate per n (median or mean, per study)
  std::optional<RateFit> fit;  // absent when ys has a non-positive entry
};

struct TrainingStudyOptions {
  Activation activation{ActivationKind::Tanh};
  InitOptions init;
  double l1_bound = kUnbounded;
  OptimizerConfig optimizer;
  int resample_every = 0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  std::uint64_t base_seed = 0;
  int trials = 10;
  unsigned threads = 1;
  /// neuron_sweep: N_int = max(min_interior, interior_per_width_sq * N^2).
  std::size_t min_interior = 64;
  double interior_per_width_sq = 1.0;
  /// N_bd = max(min_boundary, round(boundary_ratio * N_int)).
  double boundary_ratio = 0.25;
  std::size_t min_boundary = 8;
  std::size_t quadrature_order = 32;
  std::size_t probe_per_axis = 201;
  bool record_timing = false;
};

struct ErrorMetrics {
  double err_h = 0.0;
  double err_l2 = 0.0;
  double err_max = 0.0;
};

/// Errors of u_h against the problem's exact solution.
ErrorMetrics evaluate_errors(const EllipticProblem& problem, const ShallowNetwork& net,
                             const CollocationSet& pts, std::size_t quadrature_order = 32,
                             std::size_t probe_per_axis = 201);

/// L2(Omega) error of u_h against the exact solution.
double l2_error(const EllipticProblem& problem, const ShallowNetwork& net,
                std::size_t quadrature_order = 32);

std::size_t boundary_count(std::size_t n_interior, const TrainingStudyOptions& options);

/// Trains one network per (width, trial); fit of median err_l2 against width.
StudyResult neuron_sweep(const EllipticProblem& problem, const std::vector<std::size_t>& widths,
                         const TrainingStudyOptions& options);

/// Trains one width-N network per (N_int, trial); fit of median err_l2
/// against N_int.
StudyResult collocation_sweep(const EllipticProblem& problem, std::size_t width,
                              const std::vector<std::size_t>& counts,
                              const TrainingStudyOptions& options);

/// |sample mean of h - reference mean| over uniform samples; fit of the
/// per-count trial mean. Reference from Gauss-Legendre order 64.
StudyResult quadrature_study(const Domain& domain, const ScalarField& h,
                             const std::vector<std::size_t>& counts, int trials,
                             std::uint64_t base_seed);

/// Monte-Carlo estimate of E_xi max_k |(1/N) sum_i xi_i h_k(x_i)| for a finite
/// family given as rows of `values` (family member x point). A lower bound
/// on the Rademacher complexity of any class containing the family.
double rademacher_estimate(const Eigen::MatrixXd& values, int sign_draws, std::uint64_t seed);

/// As above with h_k = (L u_k - f)^2 at the interior collocation points.
/// Every member must have a finite l1 bound that it satisfies.
double rademacher_estimate(const std::vector<ShallowNetwork>& family,
                           const EllipticProblem& problem, const CollocationSet& pts,
                           int sign_draws, std::uint64_t seed);

struct RademacherStudyOptions {
  std::size_t family_size = 16;
  std::size_t width = 8;
  double l1_bound = 1.0;
  int sign_draws = 200;
  int trials = 10;
  std::uint64_t base_seed = 0;
  Activation activation{ActivationKind::Tanh};
};

/// Finite-family estimate against N_int; fit of the trial mean.
StudyResult rademacher_study(const EllipticProblem& problem,
                             const std::vector<std::size_t>& counts,
                             const RademacherStudyOptions& options);

struct ConsistencyOptions {
  int trials = 20;
  std::uint64_t base_seed = 0;
  double boundary_ratio = 1.0;
  std::size_t min_boundary = 1;
  std::size_t quadrature_order = 64;
  /// Candidate solution; defaults to the problem's exact solution.
  std::optional<DifferentiableField> solution;
};

/// For each count: max over v of |(Qu - F, Qv)_h - (Qu - F, Qv)_Y| / ||v||_h,
/// averaged over trials; fit of the trial mean against N_int.
StudyResult consistency_estimate(const EllipticProblem& problem,
                                 const std::vector<DifferentiableField>& v_family,
                                 const std::vector<std::size_t>& counts,
                                 const ConsistencyOptions& options);

/// Median of a non-empty sample.
double median(std::vector<double> values);

}  // namespace pinnls
