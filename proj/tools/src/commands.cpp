#include "pinnls_cli/commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>

#include "pinnls/collocation.hpp"
#include "pinnls/errors.hpp"
#include "pinnls/experiments.hpp"
#include "pinnls/gals.hpp"
#include "pinnls/quadrature.hpp"
#include "pinnls/random.hpp"

namespace pinnls::cli {
namespace {

namespace fs = std::filesystem;

// Shortest round-trip decimal form.
std::string fmt(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

EllipticProblem load_problem(const RunConfig& config) {
  if (config.problem.empty()) throw ConfigError("problem", "missing problem name");
  try {
    return builtin_problem(config.problem);
  } catch (const CatalogError& e) {
    throw ConfigError("problem", e.what());
  }
}

fs::path prepare_output(const RunConfig& config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("output_dir", "cannot create directory '" + config.output_dir + "'");
  }
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

CollocationSet training_points(const EllipticProblem& problem, const RunConfig& config) {
  CollocationOptions copts;
  copts.gamma1 = config.gamma1;
  copts.gamma2 = config.gamma2;
  return sample(problem.domain(), config.n_interior, config.n_boundary,
                derive_seed(config.seed, 1), copts);
}

TrainingStudyOptions study_options(const RunConfig& c) {
  TrainingStudyOptions o;
  o.activation = Activation::from_name(c.activation);
  o.init.weight_range = c.init_range;
  o.l1_bound = c.l1_bound;
  o.optimizer = c.optimizer;
  o.resample_every = c.resample_every;
  o.gamma1 = c.gamma1;
  o.gamma2 = c.gamma2;
  o.base_seed = c.seed;
  o.trials = c.trials;
  o.threads = c.threads;
  o.min_interior = c.min_interior;
  o.interior_per_width_sq = c.interior_per_width_sq;
  o.boundary_ratio = c.boundary_ratio;
  o.min_boundary = c.min_boundary;
  o.quadrature_order = c.quadrature_order;
  o.probe_per_axis = c.probe_per_axis;
  o.record_timing = c.record_timing;
  return o;
}

ScalarField test_function(const RunConfig& c) {
  using std::numbers::pi;
  if (c.test_function == "x") return [](PointView x) { return x[0]; };
  if (c.test_function == "sin2pi") return [](PointView x) { return std::sin(2.0 * pi * x[0]); };
  if (c.test_function == "const") return [](PointView) { return 1.0; };
  if (c.quad_domain != "square") throw ConfigError("test_function", "xy needs quad_domain = square");
  return [](PointView x) { return x[0] * x[1]; };
}

std::vector<DifferentiableField> basis_family(const EllipticProblem& problem, const RunConfig& c) {
  const auto basis = LinearBasis::make(basis_kind_from_name(c.basis), problem.domain(), c.basis_size);
  std::vector<DifferentiableField> out;
  for (std::size_t k = 0; k < basis.size(); ++k) out.push_back(basis.function(k));
  return out;
}

// u + amplitude * prod_k sin(3 pi x_k)
DifferentiableField perturbed(const DifferentiableField& u, double amplitude) {
  using std::numbers::pi;
  DifferentiableField bump = [](PointView x, const MultiIndex& alpha) {
    const double c = 3.0 * pi;
    double v = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      v *= std::pow(c, alpha[k]) * std::sin(c * x[k] + alpha[k] * pi / 2.0);
    }
    return v;
  };
  return add_scaled(u, amplitude, bump);
}

void print_fit(std::ostream& out, const std::string& study, const StudyResult& result) {
  out << "study=" << study << " records=" << result.records.size();
  if (result.fit) {
    out << " slope=" << fmt(result.fit->slope) << " intercept=" << fmt(result.fit->intercept)
        << " r_squared=" << fmt(result.fit->r_squared) << '\n';
  } else {
    out << " slope=unavailable\n";
  }
  for (std::size_t i = 0; i < result.xs.size(); ++i) {
    out << "  n=" << result.xs[i] << " aggregate=" << fmt(result.ys[i]) << '\n';
  }
}

}  // namespace

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"neurons", "collocation", "quadrature", "rademacher",
                                              "consistency"};
  return names;
}

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto problem = load_problem(config);
  const auto dir = prepare_output(config);
  InitOptions init;
  init.weight_range = config.init_range;
  const auto net = ShallowNetwork::random(problem.dimension(), config.width,
                                          Activation::from_name(config.activation),
                                          derive_seed(config.seed, 2), init, config.l1_bound);
  const auto pts = training_points(problem, config);
  {
    auto f = open_output(dir / "collocation.csv");
    write_collocation_csv(f, pts);
  }
  TrainOptions topts;
  topts.resample_every = config.resample_every;
  topts.record_timing = config.record_timing;
  const auto result = train(problem, net, pts, config.optimizer, topts);
  {
    auto f = open_output(dir / "trace.csv");
    write_trace_csv(f, result.trace);
  }
  save_network((dir / "model.txt").string(), result.net);

  out << "status=" << to_string(result.trace.status)
      << " iterations=" << (result.trace.records.empty() ? 0 : result.trace.records.back().iteration)
      << " loss=" << fmt(result.trace.best_loss) << " l1_norm=" << fmt(result.net.l1_norm());
  if (problem.has_exact_solution()) {
    const auto m = evaluate_errors(problem, result.net, pts, config.quadrature_order,
                                   config.probe_per_axis);
    out << " err_h=" << fmt(m.err_h) << " err_l2=" << fmt(m.err_l2) << " err_max=" << fmt(m.err_max);
  }
  out << '\n';
  if (result.trace.status == TrainingStatus::Aborted) {
    err << "training aborted: " << result.trace.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_gals(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const auto problem = load_problem(config);
  const auto dir = prepare_output(config);
  const auto basis =
      LinearBasis::make(basis_kind_from_name(config.basis), problem.domain(), config.basis_size);
  const auto reference = quadrature_nodes(problem.domain(), config.quadrature_order);

  auto report = [&](const GalsSolution& sol, const std::string& file) {
    auto f = open_output(dir / file);
    write_solution_csv(f, sol);
    out << "mode=" << to_string(sol.mode) << " basis=" << config.basis
        << " size=" << sol.coefficients.size() << " residual_norm=" << fmt(sol.residual_norm)
        << " rank=" << sol.rank << " rank_deficient=" << (sol.rank_deficient ? "true" : "false");
    if (sol.mode == GalsMode::Quadrature) {
      out << " variational_residual=" << fmt(variational_residual(sol, problem, reference));
    }
    if (problem.has_exact_solution()) {
      const auto uh = sol.field();
      const auto& u = *problem.exact_solution();
      const MultiIndex zero = MultiIndex::zero(problem.dimension());
      const double e = l2_norm(
          problem.domain(), [&](PointView x) { return u(x, zero) - uh(x, zero); },
          config.quadrature_order);
      out << " err_l2=" << fmt(e);
    }
    out << '\n';
    if (!sol.coefficients.allFinite()) throw NumericalAbort("non-finite GaLS coefficients");
  };

  std::optional<GalsSolution> quad, coll;
  if (config.gals_mode != "collocation") {
    quad = assemble_and_solve(problem, basis, reference, GalsMode::Quadrature);
    report(*quad, "solution_quadrature.csv");
  }
  if (config.gals_mode != "quadrature") {
    coll = assemble_and_solve(problem, basis, training_points(problem, config));
    report(*coll, "solution_collocation.csv");
  }
  if (quad && coll) {
    out << "coefficient_difference="
        << fmt((quad->coefficients - coll->coefficients).cwiseAbs().maxCoeff()) << '\n';
  }
  return kExitOk;
}

int cmd_study(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const auto& names = study_names();
  if (std::find(names.begin(), names.end(), config.study) == names.end()) {
    std::string valid;
    for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("study", "unknown study '" + config.study + "'; valid studies: " + valid);
  }
  StudyResult result;
  if (config.study == "quadrature") {
    const Domain domain =
        config.quad_domain == "square" ? Domain::unit_square() : Domain::unit_interval();
    result = quadrature_study(domain, test_function(config), config.counts, config.trials,
                              config.seed);
  } else {
    const auto problem = load_problem(config);
    if (config.study == "neurons") {
      if (config.widths.size() < 2) throw ConfigError("widths", "needs at least 2 entries");
      result = neuron_sweep(problem, config.widths, study_options(config));
    } else if (config.study == "collocation") {
      if (config.counts.size() < 2) throw ConfigError("counts", "needs at least 2 entries");
      result = collocation_sweep(problem, config.width, config.counts, study_options(config));
    } else if (config.study == "rademacher") {
      RademacherStudyOptions o;
      o.family_size = config.family_size;
      o.width = config.width;
      o.l1_bound = config.family_l1_bound;
      o.sign_draws = config.sign_draws;
      o.trials = config.trials;
      o.base_seed = config.seed;
      o.activation = Activation::from_name(config.activation);
      result = rademacher_study(problem, config.counts, o);
    } else {
      ConsistencyOptions o;
      o.trials = config.trials;
      o.base_seed = config.seed;
      if (config.perturbation != 0.0) {
        if (!problem.has_exact_solution()) {
          throw ConfigError("problem", "consistency study needs an exact solution");
        }
        o.solution = perturbed(*problem.exact_solution(), config.perturbation);
      }
      result = consistency_estimate(problem, basis_family(problem, config), config.counts, o);
    }
  }
  const auto dir = prepare_output(config);
  {
    auto f = open_output(dir / (config.study + ".csv"));
    write_records_csv(f, result.records);
  }
  print_fit(out, config.study, result);
  return kExitOk;
}

int cmd_problems(std::ostream& out) {
  for (const auto& name : builtin_problem_names()) {
    const auto p = builtin_problem(name);
    out << name << "  " << p.domain().describe()
        << (p.boundary_op().kind() == BoundaryKind::Robin ? "  robin" : "  dirichlet") << '\n';
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shallow PINN least-squares collocation and GaLS baseline.\n"
               "Settings: defaults < --config file (`key = value` lines) < --key flags."};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "configuration file of `key = value` lines");

  std::vector<std::pair<const ConfigKey*, CLI::Option*>> key_options;
  std::map<std::string, std::string> flag_values;
  const RunConfig defaults;
  for (const auto& key : config_keys()) {
    std::string names = "--" + key.name;
    std::string dashed = key.name;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (dashed != key.name) names += ",--" + dashed;
    const std::string help =
        key.description + " [default: " + key.get(defaults) + "] (" + key.units + ")";
    auto* opt = app.add_option(names, flag_values[key.name], help)
                    ->type_name("VALUE")
                    ->group("Configuration keys");
    key_options.emplace_back(&key, opt);
  }

  auto* train_cmd = app.add_subcommand("train", "train a network, write model.txt and trace.csv");
  auto* gals_cmd = app.add_subcommand("gals", "solve the GaLS baseline, write solution CSVs");
  auto* study_cmd = app.add_subcommand("study", "run a convergence study, write <study>.csv");
  std::string study_name;
  study_cmd->add_option("name", study_name,
                        "neurons | collocation | quadrature | rademacher | consistency");
  auto* problems_cmd = app.add_subcommand("problems", "list catalog problems");

  std::vector<std::string> argv_storage(args.begin(), args.end());
  if (argv_storage.empty()) argv_storage.emplace_back("pinnls");
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for the list of keys\n";
    return kExitConfig;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config", "cannot open '" + config_path + "'");
      apply_settings(config, parse_config_text(in));
    }
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : key_options) {
      if (opt->count() > 0) flags[key->name] = flag_values[key->name];
    }
    apply_settings(config, flags);
    if (!study_name.empty()) config.study = study_name;
    validate(config);

    if (problems_cmd->parsed()) return cmd_problems(out);
    if (train_cmd->parsed()) return cmd_train(config, out, err);
    if (gals_cmd->parsed()) return cmd_gals(config, out, err);
    return cmd_study(config, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace pinnls::cli
