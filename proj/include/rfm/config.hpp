#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rfm {

// One experiment description, loaded from a flat TOML file (key = value
// lines) or a JSON object.  Unknown keys are configuration errors; every
// field below has a desk-scale default so minimal configs stay short.
struct ExperimentConfig {
  std::string kind;  // linear_equivalence_curve | alignment_theta_heatmap |
                     // polynomial_equivalence_curve | activation_comparison |
                     // training_error_curves

  int n = 200;
  int m = 250;
  int k = 0;                      // 0 means "derive from k_over_m"
  std::vector<double> k_over_m;   // curve grids; defaults per experiment
  std::vector<int> m_grid;        // activation_comparison sweep = "m"
  std::vector<double> alpha_grid; // heatmap / sweep = "alpha"
  std::vector<double> beta_grid;  // heatmap / sweep = "beta"

  std::string signals = "aligned";  // "aligned" (exact alpha) or "random"
  double alpha = 1.0;
  double theta_c = 1.0;
  double theta_beta = 0.5;
  double lambda = 1e-2;

  std::vector<std::string> activations{"relu"};  // feature nonlinearities sigma
  std::vector<std::string> targets{"relu"};      // label functions sigma_*
  std::vector<std::string> families;             // activation_comparison models
  std::string sweep = "m";                       // activation_comparison axis

  int replicates = 25;
  std::uint64_t master_seed = 1;
  int l_max = 4;       // polynomial surrogate degree cap
  int m_test = 2500;   // held-out samples per generalization estimate
  int m_cov = 0;       // diagnose covariance sample count; 0 means 20 k

  int budget = 300;    // optimizer evaluations per search
  int opt_seeds = 8;   // seeds averaged inside the search objective
  std::string coefficient_mode = "per-point";  // or "shared"

  double c_threshold = 1.0;  // degree rule constant
  double boundary_c = 2.0;   // heatmap boundary level in units of n^{-1/2}

  std::string out;  // optional output directory; CLI --out overrides
};

// Parses the flat TOML subset used by the configs: `key = value` lines with
// strings, numbers, booleans and one-line arrays; '#' comments.  Returns a
// JSON object for uniform downstream handling.
nlohmann::json parse_toml_subset(const std::string& text);

// Loads .toml (subset above) or .json by extension.
nlohmann::json load_config_file(const std::string& path);

// Validates keys and ranges; throws ConfigError with a message naming the
// offending key.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace rfm
