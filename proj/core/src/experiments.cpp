#include "pinnls/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "pinnls/errors.hpp"
#include "pinnls/quadrature.hpp"
#include "pinnls/random.hpp"

namespace pinnls {
namespace {

// Runs task(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own output slot, so results do not depend on scheduling.
template <class Task>
void parallel_for(std::size_t n, unsigned threads, Task&& task) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    const auto workers = std::min<std::size_t>(threads, n);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void add_flag(std::string& flags, const char* flag) {
  if (!flags.empty()) flags += '|';
  flags += flag;
}

bool has_flag(const std::string& flags, const char* flag) {
  return flags.find(flag) != std::string::npos;
}

const DifferentiableField& require_exact(const EllipticProblem& problem) {
  if (!problem.exact_solution()) {
    throw std::invalid_argument("problem '" + problem.name() + "' has no exact solution");
  }
  return *problem.exact_solution();
}

// Distinct n ascending with the aggregate of `metric` over usable records.
template <class Metric, class Aggregate>
void aggregate(StudyResult& result, Metric metric, Aggregate agg) {
  std::map<std::size_t, std::vector<double>> groups;
  for (const auto& r : result.records) {
    if (has_flag(r.flags, "error")) continue;
    groups[r.n].push_back(metric(r));
  }
  result.xs.clear();
  result.ys.clear();
  for (auto& [n, values] : groups) {
    result.xs.push_back(static_cast<double>(n));
    result.ys.push_back(agg(std::move(values)));
  }
  const bool positive = std::all_of(result.ys.begin(), result.ys.end(),
                                    [](double y) { return y > 0.0 && std::isfinite(y); });
  if (result.xs.size() >= 2 && positive) result.fit = fit_rate(result.xs, result.ys);
}

double mean(std::vector<double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

struct TrainingTask {
  std::size_t n;          // recorded independent variable
  std::size_t width;
  std::size_t n_interior;
  std::size_t n_boundary;
  int trial;
};

ExperimentRecord run_training_task(const EllipticProblem& problem, const std::string& study,
                                   const TrainingTask& task,
                                   const TrainingStudyOptions& options) {
  ExperimentRecord rec;
  rec.study = study;
  rec.n = task.n;
  rec.trial = task.trial;
  rec.seed = options.base_seed + static_cast<std::uint64_t>(task.trial);
  const auto start = std::chrono::steady_clock::now();
  try {
    CollocationOptions copts;
    copts.gamma1 = options.gamma1;
    copts.gamma2 = options.gamma2;
    const auto pts = sample(problem.domain(), task.n_interior, task.n_boundary,
                            derive_seed(rec.seed, 1), copts);
    const auto init = ShallowNetwork::random(problem.dimension(), task.width,
                                             options.activation,
                                             derive_seed(rec.seed, 2),
                                             options.init, options.l1_bound);
    TrainOptions topts;
    topts.resample_every = options.resample_every;
    const auto result = train(problem, init, pts, options.optimizer, topts);
    if (result.trace.status == TrainingStatus::Aborted) add_flag(rec.flags, "aborted");
    if (result.trace.status == TrainingStatus::LineSearchFailure) add_flag(rec.flags, "linesearch");
    const auto report = check_unisolvency(problem, result.net, pts);
    if (report.underdetermined()) add_flag(rec.flags, "underdetermined");
    if (!report.full_rank()) add_flag(rec.flags, "rank_deficient");
    rec.loss = result.trace.best_loss;
    const auto m = evaluate_errors(problem, result.net, pts, options.quadrature_order,
                                   options.probe_per_axis);
    rec.err_h = m.err_h;
    rec.err_l2 = m.err_l2;
    rec.err_max = m.err_max;
    rec.l1_norm = result.net.l1_norm();
    if (!std::isfinite(rec.loss) || !std::isfinite(rec.err_l2) || !std::isfinite(rec.err_h) ||
        !std::isfinite(rec.err_max)) {
      rec.loss = rec.err_h = rec.err_l2 = rec.err_max = 0.0;
      add_flag(rec.flags, "error");
    }
  } catch (const std::exception&) {
    rec.loss = rec.err_h = rec.err_l2 = rec.err_max = rec.l1_norm = 0.0;
    add_flag(rec.flags, "error");
  }
  if (options.record_timing) {
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

StudyResult run_training_study(const EllipticProblem& problem, const std::string& study,
                               const std::vector<TrainingTask>& tasks,
                               const TrainingStudyOptions& options) {
  StudyResult result;
  result.records.resize(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    result.records[i] = run_training_task(problem, study, tasks[i], options);
  });
  aggregate(result, [](const ExperimentRecord& r) { return r.err_l2; },
            [](std::vector<double> v) { return median(std::move(v)); });
  return result;
}

void require_increasing(const std::vector<std::size_t>& values, const char* what) {
  if (values.size() < 2) {
    throw std::invalid_argument(std::string(what) + " needs at least 2 entries");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw std::invalid_argument(std::string(what) + " must be strictly increasing");
    }
  }
  if (values.front() < 1) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_records_csv(std::ostream& out, std::vector<ExperimentRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.n != b.n ? a.n < b.n : a.trial < b.trial;
  });
  out << kRecordCsvHeader << '\n' << std::setprecision(17);
  for (const auto& r : records) {
    out << r.study << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << r.loss << ','
        << r.err_h << ',' << r.err_l2 << ',' << r.err_max << ',' << r.l1_norm << ','
        << r.seconds << ',' << r.flags << '\n';
  }
}

double l2_error(const EllipticProblem& problem, const ShallowNetwork& net,
                std::size_t quadrature_order) {
  const auto& u = require_exact(problem);
  const MultiIndex zero = MultiIndex::zero(problem.dimension());
  return l2_norm(problem.domain(),
                 [&](PointView x) { return u(x, zero) - net.forward(x); }, quadrature_order);
}

ErrorMetrics evaluate_errors(const EllipticProblem& problem, const ShallowNetwork& net,
                             const CollocationSet& pts, std::size_t quadrature_order,
                             std::size_t probe_per_axis) {
  const auto& u = require_exact(problem);
  ErrorMetrics m;
  m.err_h = discrete_energy_norm(problem, difference(u, as_field(net)), pts);
  m.err_l2 = l2_error(problem, net, quadrature_order);
  const Domain& omega = problem.domain();
  const MultiIndex zero = MultiIndex::zero(problem.dimension());
  const std::size_t n = std::max<std::size_t>(probe_per_axis, 2);
  auto coord = [&](std::size_t axis, std::size_t i) {
    return omega.lower(axis) + omega.extent(axis) * static_cast<double>(i) /
                                   static_cast<double>(n - 1);
  };
  if (omega.dimension() == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = coord(0, i);
      m.err_max = std::max(m.err_max, std::abs(u({&x, 1}, zero) - net.forward({&x, 1})));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double x[2] = {coord(0, i), coord(1, j)};
        m.err_max = std::max(m.err_max, std::abs(u(x, zero) - net.forward(x)));
      }
    }
  }
  return m;
}

std::size_t boundary_count(std::size_t n_interior, const TrainingStudyOptions& options) {
  const auto scaled = static_cast<std::size_t>(
      std::llround(options.boundary_ratio * static_cast<double>(n_interior)));
  return std::max<std::size_t>({options.min_boundary, scaled, 1});
}

StudyResult neuron_sweep(const EllipticProblem& problem, const std::vector<std::size_t>& widths,
                         const TrainingStudyOptions& options) {
  require_increasing(widths, "widths");
  if (options.trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::vector<TrainingTask> tasks;
  for (std::size_t w : widths) {
    const auto scaled = static_cast<std::size_t>(std::llround(
        options.interior_per_width_sq * static_cast<double>(w) * static_cast<double>(w)));
    const std::size_t n_int = std::max(options.min_interior, scaled);
    for (int t = 0; t < options.trials; ++t) {
      tasks.push_back({w, w, n_int, boundary_count(n_int, options), t});
    }
  }
  return run_training_study(problem, "neurons", tasks, options);
}

StudyResult collocation_sweep(const EllipticProblem& problem, std::size_t width,
                              const std::vector<std::size_t>& counts,
                              const TrainingStudyOptions& options) {
  require_increasing(counts, "counts");
  if (width < 1) throw std::invalid_argument("width must be at least 1");
  if (options.trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::vector<TrainingTask> tasks;
  for (std::size_t n : counts) {
    for (int t = 0; t < options.trials; ++t) {
      tasks.push_back({n, width, n, boundary_count(n, options), t});
    }
  }
  return run_training_study(problem, "collocation", tasks, options);
}

StudyResult quadrature_study(const Domain& domain, const ScalarField& h,
                             const std::vector<std::size_t>& counts, int trials,
                             std::uint64_t base_seed) {
  require_increasing(counts, "counts");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const double reference = mean_value(domain, h, 64);
  StudyResult result;
  std::vector<double> x(domain.dimension());
  for (std::size_t n : counts) {
    for (int t = 0; t < trials; ++t) {
      ExperimentRecord rec;
      rec.study = "quadrature";
      rec.n = n;
      rec.trial = t;
      rec.seed = base_seed + static_cast<std::uint64_t>(t);
      Rng rng(derive_seed(rec.seed, n));
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        domain.sample_interior(rng, x);
        s += h(x);
      }
      const double err = std::abs(s / static_cast<double>(n) - reference);
      rec.err_h = rec.err_l2 = rec.err_max = err;
      result.records.push_back(std::move(rec));
    }
  }
  aggregate(result, [](const ExperimentRecord& r) { return r.err_l2; }, mean);
  return result;
}

double rademacher_estimate(const Eigen::MatrixXd& values, int sign_draws, std::uint64_t seed) {
  if (values.rows() < 1) throw std::invalid_argument("Rademacher family must be non-empty");
  if (sign_draws < 1) throw std::invalid_argument("sign_draws must be at least 1");
  const auto n = values.cols();
  Rng rng(seed);
  Eigen::VectorXd xi(n);
  double total = 0.0;
  for (int draw = 0; draw < sign_draws; ++draw) {
    for (Eigen::Index i = 0; i < n; ++i) xi(i) = (rng() >> 63) ? 1.0 : -1.0;
    total += (values * xi).cwiseAbs().maxCoeff() / static_cast<double>(n);
  }
  return total / static_cast<double>(sign_draws);
}

double rademacher_estimate(const std::vector<ShallowNetwork>& family,
                           const EllipticProblem& problem, const CollocationSet& pts,
                           int sign_draws, std::uint64_t seed) {
  if (family.empty()) throw std::invalid_argument("Rademacher family must be non-empty");
  const std::size_t n = pts.interior().size();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(family.size()), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& net = family[k];
    if (!net.is_bounded() || net.l1_norm() > net.l1_bound() * (1.0 + 1e-12)) {
      throw std::invalid_argument("family members must lie in a bounded l1 class");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = pts.interior()[i];
      const double r = problem.interior_op().apply(net, x) - problem.source()(x);
      values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = r * r;
    }
  }
  return rademacher_estimate(values, sign_draws, seed);
}

StudyResult rademacher_study(const EllipticProblem& problem,
                             const std::vector<std::size_t>& counts,
                             const RademacherStudyOptions& options) {
  require_increasing(counts, "counts");
  if (options.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (options.family_size < 1) throw std::invalid_argument("family_size must be at least 1");
  // Fixed family: random networks projected into the l1 ball of radius M.
  std::vector<ShallowNetwork> family;
  for (std::size_t k = 0; k < options.family_size; ++k) {
    InitOptions init;
    auto net = ShallowNetwork::random(problem.dimension(), options.width, options.activation,
                                      derive_seed(options.base_seed, 1000 + k), init,
                                      options.l1_bound);
    Rng rng(derive_seed(options.base_seed, 5000 + k));
    Eigen::VectorXd a(static_cast<Eigen::Index>(options.width));
    for (Eigen::Index j = 0; j < a.size(); ++j) a(j) = uniform(rng, -1.0, 1.0);
    family.push_back(l1_project(net.with_outer_coeffs(a)));
  }
  StudyResult result;
  for (std::size_t n : counts) {
    for (int t = 0; t < options.trials; ++t) {
      ExperimentRecord rec;
      rec.study = "rademacher";
      rec.n = n;
      rec.trial = t;
      rec.seed = options.base_seed + static_cast<std::uint64_t>(t);
      const auto pts = sample(problem.domain(), n, 1, derive_seed(rec.seed, n));
      const double r = rademacher_estimate(family, problem, pts, options.sign_draws,
                                           derive_seed(rec.seed, n + 1));
      rec.err_h = rec.err_l2 = rec.err_max = r;
      rec.l1_norm = options.l1_bound;
      result.records.push_back(std::move(rec));
    }
  }
  aggregate(result, [](const ExperimentRecord& r) { return r.err_l2; }, mean);
  return result;
}

StudyResult consistency_estimate(const EllipticProblem& problem,
                                 const std::vector<DifferentiableField>& v_family,
                                 const std::vector<std::size_t>& counts,
                                 const ConsistencyOptions& options) {
  require_increasing(counts, "counts");
  if (v_family.empty()) throw std::invalid_argument("consistency needs a non-empty v family");
  if (options.trials < 1) throw std::invalid_argument("trials must be at least 1");
  const DifferentiableField u = options.solution ? *options.solution : require_exact(problem);
  const ResidualPair r = residual(problem, u);

  // Continuous pairings (Qu - F, Qv)_Y against the uniform probability
  // measures, by Gauss-Legendre quadrature.
  const auto quad_int = interior_quadrature(problem.domain(), options.quadrature_order);
  const auto quad_bd = boundary_quadrature(problem.domain(), options.quadrature_order);
  std::vector<ResidualPair> qv;
  std::vector<double> continuous;
  for (const auto& v : v_family) {
    ResidualPair q{[&problem, v](PointView x) { return apply_interior(problem, v, x); },
                   [&problem, v](PointView x) { return apply_boundary(problem, v, x); }};
    double c = 0.0;
    for (std::size_t i = 0; i < quad_int.weights.size(); ++i) {
      const auto x = quad_int.points[i];
      c += quad_int.weights[i] * r.interior(x) * q.interior(x);
    }
    for (std::size_t i = 0; i < quad_bd.weights.size(); ++i) {
      const auto x = quad_bd.points[i];
      c += quad_bd.weights[i] * r.boundary(x) * q.boundary(x);
    }
    continuous.push_back(c);
    qv.push_back(std::move(q));
  }

  StudyResult result;
  for (std::size_t n : counts) {
    const std::size_t n_bd = std::max<std::size_t>(
        {options.min_boundary, 1,
         static_cast<std::size_t>(std::llround(options.boundary_ratio * static_cast<double>(n)))});
    for (int t = 0; t < options.trials; ++t) {
      ExperimentRecord rec;
      rec.study = "consistency";
      rec.n = n;
      rec.trial = t;
      rec.seed = options.base_seed + static_cast<std::uint64_t>(t);
      const auto pts = sample(problem.domain(), n, n_bd, derive_seed(rec.seed, n));
      double worst = 0.0;
      for (std::size_t k = 0; k < qv.size(); ++k) {
        const double norm_h = std::sqrt(std::max(0.0, discrete_pairing(qv[k], qv[k], pts)));
        if (norm_h == 0.0) continue;
        const double gap = std::abs(discrete_pairing(r, qv[k], pts) - continuous[k]);
        worst = std::max(worst, gap / norm_h);
      }
      rec.err_h = rec.err_l2 = rec.err_max = worst;
      result.records.push_back(std::move(rec));
    }
  }
  aggregate(result, [](const ExperimentRecord& r) { return r.err_l2; }, mean);
  return result;
}

}  // namespace pinnls
