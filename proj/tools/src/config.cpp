#include "pinnls_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace pinnls::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "unbounded") return kUnbounded;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || std::isnan(out)) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& text) {
  std::string v = text;
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream in(v);
  std::vector<std::size_t> out;
  std::string item;
  while (in >> item) out.push_back(static_cast<std::size_t>(parse_unsigned(key, item)));
  if (out.empty()) throw ConfigError(key, "list must not be empty");
  return out;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string one_of(const std::string& key, const std::string& text,
                   std::initializer_list<const char*> choices) {
  const std::string v = trim(text);
  std::string valid;
  for (const char* c : choices) {
    if (v == c) return v;
    valid += (valid.empty() ? "" : ", ") + std::string(c);
  }
  throw ConfigError(key, "expected one of " + valid + ", got '" + text + "'");
}

template <class Access>
ConfigKey text_key(std::string name, std::string units, std::string description, Access access) {
  return {name, std::move(units), std::move(description),
          [access](RunConfig& c, const std::string& v) { access(c) = trim(v); },
          [access](const RunConfig& c) { return access(c); }};
}

template <class Access>
ConfigKey choice_key(std::string name, std::string description,
                     std::initializer_list<const char*> choices, Access access) {
  std::string units;
  for (const char* c : choices) units += (units.empty() ? "" : "|") + std::string(c);
  std::vector<const char*> list(choices);
  return {name, units, std::move(description),
          [name, list, access](RunConfig& c, const std::string& v) {
            const std::string t = trim(v);
            if (std::find_if(list.begin(), list.end(), [&](const char* s) { return t == s; }) ==
                list.end()) {
              std::string valid;
              for (const char* s : list) valid += (valid.empty() ? "" : ", ") + std::string(s);
              throw ConfigError(name, "expected one of " + valid + ", got '" + v + "'");
            }
            access(c) = t;
          },
          [access](const RunConfig& c) { return access(c); }};
}

template <class Access>
ConfigKey real_key(std::string name, std::string units, std::string description, Access access) {
  return {name, std::move(units), std::move(description),
          [name, access](RunConfig& c, const std::string& v) { access(c) = parse_double(name, v); },
          [access](const RunConfig& c) { return format_double(access(c)); }};
}

template <class Access>
ConfigKey count_key(std::string name, std::string units, std::string description, Access access) {
  return {name, std::move(units), std::move(description),
          [name, access](RunConfig& c, const std::string& v) {
            using T = std::remove_reference_t<decltype(access(c))>;
            const auto raw = parse_unsigned(name, v);
            if (raw > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
              throw ConfigError(name, "value out of range");
            }
            access(c) = static_cast<T>(raw);
          },
          [access](const RunConfig& c) { return std::to_string(access(c)); }};
}

template <class Access>
ConfigKey flag_key(std::string name, std::string description, Access access) {
  return {name, "bool", std::move(description),
          [name, access](RunConfig& c, const std::string& v) { access(c) = parse_bool(name, v); },
          [access](const RunConfig& c) { return std::string(access(c) ? "true" : "false"); }};
}

template <class Access>
ConfigKey list_key(std::string name, std::string units, std::string description, Access access) {
  return {name, std::move(units), std::move(description),
          [name, access](RunConfig& c, const std::string& v) { access(c) = parse_list(name, v); },
          [access](const RunConfig& c) { return format_list(access(c)); }};
}

std::vector<ConfigKey> make_keys() {
  std::vector<ConfigKey> k;
  k.push_back(text_key("problem", "name", "catalog problem (see `pinnls problems`)",
                       [](auto& c) -> auto& { return c.problem; }));
  k.push_back(count_key("seed", "integer", "base seed; trial t uses seed + t",
                        [](auto& c) -> auto& { return c.seed; }));
  k.push_back(text_key("output_dir", "path", "directory receiving every output file",
                       [](auto& c) -> auto& { return c.output_dir; }));
  k.push_back(count_key("threads", "count", "concurrent trials in studies",
                        [](auto& c) -> auto& { return c.threads; }));
  k.push_back(flag_key("record_timing", "write wall-clock seconds (breaks byte-identical CSVs)",
                       [](auto& c) -> auto& { return c.record_timing; }));

  k.push_back(count_key("width", "neurons", "hidden-layer width N",
                        [](auto& c) -> auto& { return c.width; }));
  k.push_back(choice_key("activation", "hidden-layer activation", {"tanh", "sigmoid"},
                         [](auto& c) -> auto& { return c.activation; }));
  k.push_back(real_key("init_range", "1", "inner weights drawn from U[-r, r]",
                       [](auto& c) -> auto& { return c.init_range; }));
  k.push_back(real_key("l1_bound", "1", "bound M on the l1 norm of the outer coefficients",
                       [](auto& c) -> auto& { return c.l1_bound; }));

  k.push_back(count_key("n_interior", "points", "interior collocation points",
                        [](auto& c) -> auto& { return c.n_interior; }));
  k.push_back(count_key("n_boundary", "points", "boundary collocation points",
                        [](auto& c) -> auto& { return c.n_boundary; }));
  k.push_back(real_key("gamma1", "1", "interior pairing exponent",
                       [](auto& c) -> auto& { return c.gamma1; }));
  k.push_back(real_key("gamma2", "1", "boundary pairing exponent",
                       [](auto& c) -> auto& { return c.gamma2; }));
  k.push_back(count_key("resample_every", "iterations", "resample collocation points (0: never)",
                        [](auto& c) -> auto& { return c.resample_every; }));

  k.push_back({"optimizer", "adam|lbfgs", "training algorithm",
               [](RunConfig& c, const std::string& v) {
                 c.optimizer.kind =
                     optimizer_kind_from_name(one_of("optimizer", v, {"adam", "lbfgs"}));
               },
               [](const RunConfig& c) { return to_string(c.optimizer.kind); }});
  k.push_back(real_key("learning_rate", "1", "Adam step size",
                       [](auto& c) -> auto& { return c.optimizer.learning_rate; }));
  k.push_back(real_key("beta1", "1", "Adam first-moment decay",
                       [](auto& c) -> auto& { return c.optimizer.beta1; }));
  k.push_back(real_key("beta2", "1", "Adam second-moment decay",
                       [](auto& c) -> auto& { return c.optimizer.beta2; }));
  k.push_back(real_key("epsilon", "1", "Adam denominator guard",
                       [](auto& c) -> auto& { return c.optimizer.epsilon; }));
  k.push_back(count_key("history_size", "pairs", "L-BFGS curvature pairs kept",
                        [](auto& c) -> auto& { return c.optimizer.history_size; }));
  k.push_back(count_key("max_iters", "iterations", "iteration cap",
                        [](auto& c) -> auto& { return c.optimizer.max_iters; }));
  k.push_back(real_key("grad_tol", "1", "stop when the gradient norm falls below this",
                       [](auto& c) -> auto& { return c.optimizer.grad_tol; }));
  k.push_back(real_key("loss_tol", "1", "stop when the loss falls below this",
                       [](auto& c) -> auto& { return c.optimizer.loss_tol; }));
  k.push_back(flag_key("l1_projection", "project outer coefficients onto the l1 ball",
                       [](auto& c) -> auto& { return c.optimizer.l1_projection; }));

  k.push_back(choice_key("basis", "GaLS basis family", {"legendre", "sine"},
                         [](auto& c) -> auto& { return c.basis; }));
  k.push_back(count_key("basis_size", "degree|count",
                        "Legendre degree per axis, or sine functions per axis",
                        [](auto& c) -> auto& { return c.basis_size; }));
  k.push_back(choice_key("gals_mode", "GaLS evaluation nodes", {"quadrature", "collocation", "both"},
                         [](auto& c) -> auto& { return c.gals_mode; }));
  k.push_back(count_key("quadrature_order", "nodes per axis",
                        "Gauss-Legendre order for reference integrals",
                        [](auto& c) -> auto& { return c.quadrature_order; }));

  k.push_back(text_key("study", "name",
                       "study to run: neurons, collocation, quadrature, rademacher, consistency",
                       [](auto& c) -> auto& { return c.study; }));
  k.push_back(count_key("trials", "count", "independent trials per study point",
                        [](auto& c) -> auto& { return c.trials; }));
  k.push_back(list_key("widths", "neurons", "widths for the neurons study",
                       [](auto& c) -> auto& { return c.widths; }));
  k.push_back(list_key("counts", "points", "sample counts for the other studies",
                       [](auto& c) -> auto& { return c.counts; }));
  k.push_back(count_key("min_interior", "points", "neurons study: floor on interior points",
                        [](auto& c) -> auto& { return c.min_interior; }));
  k.push_back(real_key("interior_per_width_sq", "points/neuron^2",
                       "neurons study: interior points per N^2",
                       [](auto& c) -> auto& { return c.interior_per_width_sq; }));
  k.push_back(real_key("boundary_ratio", "1", "training studies: boundary/interior point ratio",
                       [](auto& c) -> auto& { return c.boundary_ratio; }));
  k.push_back(count_key("min_boundary", "points", "training studies: floor on boundary points",
                        [](auto& c) -> auto& { return c.min_boundary; }));
  k.push_back(count_key("probe_per_axis", "points", "probe grid for the max-norm error",
                        [](auto& c) -> auto& { return c.probe_per_axis; }));
  k.push_back(choice_key("test_function", "quadrature study integrand",
                         {"x", "sin2pi", "const", "xy"},
                         [](auto& c) -> auto& { return c.test_function; }));
  k.push_back(choice_key("quad_domain", "quadrature study domain", {"interval", "square"},
                         [](auto& c) -> auto& { return c.quad_domain; }));
  k.push_back(count_key("family_size", "networks", "rademacher study: family members",
                        [](auto& c) -> auto& { return c.family_size; }));
  k.push_back(real_key("family_l1_bound", "1", "rademacher study: l1 bound of the family",
                       [](auto& c) -> auto& { return c.family_l1_bound; }));
  k.push_back(count_key("sign_draws", "draws", "rademacher study: sign vectors per estimate",
                        [](auto& c) -> auto& { return c.sign_draws; }));
  k.push_back(real_key("perturbation", "1",
                       "consistency study: amplitude of the sin(3 pi x) added to u",
                       [](auto& c) -> auto& { return c.perturbation; }));
  return k;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = make_keys();
  return keys;
}

std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(number) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = config_keys();
    if (std::none_of(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == key; })) {
      throw ConfigError(key, "unknown key (line " + std::to_string(number) + ")");
    }
    if (!out.emplace(key, value).second) throw ConfigError(key, "key given twice");
  }
  return out;
}

void apply_settings(RunConfig& config, const std::map<std::string, std::string>& values) {
  const auto& keys = config_keys();
  for (const auto& [name, value] : values) {
    const auto it =
        std::find_if(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == name; });
    if (it == keys.end()) throw ConfigError(name, "unknown key");
    try {
      it->set(config, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(name, e.what());
    }
  }
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* key, const char* message) {
    if (!ok) throw ConfigError(key, message);
  };
  require(c.width >= 1, "width", "must be at least 1");
  require(c.init_range > 0.0, "init_range", "must be positive");
  require(c.l1_bound > 0.0, "l1_bound", "must be positive");
  require(c.n_interior >= 1, "n_interior", "must be at least 1");
  require(c.n_boundary >= 1, "n_boundary", "must be at least 1");
  require(c.gamma1 > 0.0, "gamma1", "must be positive");
  require(c.gamma2 > 0.0, "gamma2", "must be positive");
  require(c.threads >= 1, "threads", "must be at least 1");
  require(c.trials >= 1, "trials", "must be at least 1");
  require(c.quadrature_order >= 1, "quadrature_order", "must be at least 1");
  require(c.probe_per_axis >= 2, "probe_per_axis", "must be at least 2");
  require(c.boundary_ratio >= 0.0, "boundary_ratio", "must be non-negative");
  require(c.family_size >= 1, "family_size", "must be at least 1");
  require(c.family_l1_bound > 0.0, "family_l1_bound", "must be positive");
  require(c.sign_draws >= 1, "sign_draws", "must be at least 1");
  require(std::adjacent_find(c.widths.begin(), c.widths.end(), std::greater_equal<>()) ==
              c.widths.end(),
          "widths", "must be strictly increasing");
  require(std::adjacent_find(c.counts.begin(), c.counts.end(), std::greater_equal<>()) ==
              c.counts.end(),
          "counts", "must be strictly increasing");
  try {
    c.optimizer.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    std::string key = "optimizer";
    for (const char* name : {"learning_rate", "beta1", "epsilon", "history_size", "max_iters",
                             "grad_tol", "loss_tol"}) {
      if (msg.find(name) != std::string::npos) {
        key = name;
        break;
      }
    }
    throw ConfigError(key, msg);
  }
}

std::string render_config(const RunConfig& config) {
  std::string out;
  for (const auto& k : config_keys()) out += k.name + " = " + k.get(config) + "\n";
  return out;
}

}  // namespace pinnls::cli
