#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinnls/network.hpp"
#include "pinnls/optim.hpp"

namespace pinnls::cli {

/// Bad configuration; key() names the offending key when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Every setting of a run. Values come from defaults, then a `key = value`
/// file, then `--key value` flags.
struct RunConfig {
  std::string problem;
  std::uint64_t seed = 0;
  std::string output_dir = "pinnls-out";
  unsigned threads = 1;
  bool record_timing = false;

  // network
  std::size_t width = 16;
  std::string activation = "tanh";
  double init_range = 1.0;
  double l1_bound = kUnbounded;

  // collocation
  std::size_t n_interior = 256;
  std::size_t n_boundary = 8;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  int resample_every = 0;

  OptimizerConfig optimizer;

  // gals
  std::string basis = "legendre";
  std::size_t basis_size = 4;
  std::string gals_mode = "quadrature";
  std::size_t quadrature_order = 32;

  // studies
  std::string study;
  int trials = 10;
  std::vector<std::size_t> widths{4, 8, 16, 32};
  std::vector<std::size_t> counts{16, 32, 64, 128, 256, 512, 1024};
  std::size_t min_interior = 64;
  double interior_per_width_sq = 1.0;
  double boundary_ratio = 0.25;
  std::size_t min_boundary = 8;
  std::size_t probe_per_axis = 201;
  std::string test_function = "x";
  std::string quad_domain = "interval";
  std::size_t family_size = 16;
  double family_l1_bound = 1.0;
  int sign_draws = 200;
  double perturbation = 0.0;
};

struct ConfigKey {
  std::string name;
  std::string units;
  std::string description;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

/// All recognised keys, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// repeated keys are rejected.
std::map<std::string, std::string> parse_config_text(std::istream& in);

/// Applies key/value pairs on top of `config`, validating each value.
void apply_settings(RunConfig& config, const std::map<std::string, std::string>& values);

/// Cross-field checks (optimizer constants, list ordering, ranges).
void validate(const RunConfig& config);

/// Canonical `key = value` rendering of every key.
std::string render_config(const RunConfig& config);

}  // namespace pinnls::cli
