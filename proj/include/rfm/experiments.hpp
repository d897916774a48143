#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rfm/config.hpp"

namespace rfm {

// One output row: a (grid point, model family) pair with replicate-averaged
// training and generalization errors.  The per-replicate samples ride along
// for paired significance work but are not serialized.
struct ResultRow {
  std::string grid_param;
  double grid_value = 0.0;
  std::string family;
  std::string activation;
  std::string target;
  int n = 0;
  int m = 0;
  int k = 0;
  double lambda = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  int replicates = 0;
  double train_mean = 0.0;
  double train_se = 0.0;
  double gen_mean = 0.0;
  double gen_se = 0.0;
  std::vector<double> train_samples;
  std::vector<double> gen_samples;
};

// Heatmap cell summary: paired percentage gap between the feature model and
// its noisy linear surrogate, plus the realized signal alignment.
struct GapRow {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  std::string activation;
  double pct_mean = 0.0;
  double pct_se = 0.0;
  double eta_mean = 0.0;
  int recommended_degree = 0;
  int replicates = 0;
};

// Equivalence-boundary locus: for each beta, the alignment at which the
// typical eta scale crosses boundary_c * n^{-1/2} (NaN when it never does).
struct BoundaryRow {
  double beta = 0.0;
  double theta = 0.0;
  double alpha_star = std::nan("");
};

// Searched coefficients for the optimal families of the comparison runs.
struct CoeffRow {
  std::string grid_param;
  double grid_value = 0.0;
  std::string family;
  std::vector<double> coeffs;
  double objective = 0.0;
  bool budget_exhausted = false;
};

struct RunResult {
  std::vector<ResultRow> rows;
  std::vector<GapRow> gaps;
  std::vector<BoundaryRow> boundary;
  std::vector<CoeffRow> coeffs;
  double wall_seconds = 0.0;
};

// Executes the configured experiment on `threads` workers.  Output is
// byte-identical for a fixed (config, master_seed) regardless of the worker
// count: every replicate derives its own seeds and writes an indexed slot.
RunResult run_experiment(const ExperimentConfig& cfg, int threads);

// Shortest round-trippable decimal form, used for every floating CSV field.
std::string format_double(double v);

// Main table in the fixed schema:
// experiment,grid_param,grid_value,family,activation,target,n,m,k,lambda,
// theta,alpha,replicates,train_mean,train_se,gen_mean,gen_se,seed
std::string result_csv(const RunResult& result, const ExperimentConfig& cfg);
std::string gap_csv(const RunResult& result);
std::string boundary_csv(const RunResult& result);
std::string coeff_csv(const RunResult& result);

// Writes the tables for this experiment kind under out_dir (created if
// needed); returns the file paths in write order.
std::vector<std::string> write_outputs(const RunResult& result, const ExperimentConfig& cfg,
                                       const std::string& out_dir);

}  // namespace rfm
