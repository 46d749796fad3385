#pragma once

// Experiment configuration: a flat `key = value` file, '#' starts a comment.
// Every key has a default; unknown keys are rejected.

#include "dalorenz/flowint.hpp"
#include "dalorenz/model3d.hpp"
#include "dalorenz/skew4d.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dalorenz::lab {

struct ExperimentConfig {
  model3d::LorenzParams lorenz;
  model3d::ClassicalParams classical;
  skew4d::SkewParams skew;
  flowint::IntegratorConfig integrator;
  double on_leaf_tol = 1e-10;

  // return-map
  int grid_x1 = 200;
  int grid_x2 = 200;
  int grid_s = 5;
  int hist_bins = 40;

  // cones
  int cones_grid = 100;          // cones_grid^2 section points
  int cones_near_l = 2000;       // random points with |x2| < near_l_width
  double cones_near_l_width = 1e-3;

  // curves
  int curves_count = 100;
  double curves_length = 1e-3;
  double curves_eps0 = 0.2;
  int curves_k_max = 200;
  double curves_alpha = 1.0;
  bool curves_continue_to_crossing = true;

  // exponents
  int exponents_orbits = 10;
  int exponents_returns = 1000;
  int exponents_warmup = 50;     // returns discarded before sampling
  double exponents_burn_in = 20.0;
  double exponents_window = 5.0;

  // sectional
  int sectional_orbits = 10;
  double sectional_horizon = 100.0;
  double sectional_window = 1.0;
  double sectional_burn_in = 20.0;

  // surgery
  std::vector<double> surgery_deltas{0.0, 0.05, 0.1};
  int periodic_periods = 80;     // tiled periods for measurements on P, Q

  // classical-xcheck
  double classical_horizon = 1e4;
  double classical_transient = 100.0;
  double classical_renorm_dt = 0.5;
  double classical_alt_rel_tol = 1e-8;

  std::uint64_t seed = 1;
  int jobs = 1;
};

/// Parse the file contents on top of `base`. Throws Error(Config) naming the
/// offending key or line.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Apply one `key=value` override.
void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Range checks on the experiment options (not the model inequalities, which
/// the validate suite reports). Throws Error(Config) naming the key.
void check_config(const ExperimentConfig& cfg);

/// The full configuration in the file format, keys in a fixed order.
std::string echo_config(const ExperimentConfig& cfg);

std::vector<std::string> config_keys();

}  // namespace dalorenz::lab
