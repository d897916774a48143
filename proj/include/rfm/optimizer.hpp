#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfm/activations.hpp"

namespace rfm {

// Fixed learning problem for a coefficient search.  The datasets behind the
// objective are fully determined by master_seed, so every candidate sees the
// same draws (common random numbers).
struct Scenario {
  int n = 200;
  int m = 250;
  int k = 250;
  int m_test = 2500;
  double lambda = 1e-2;
  double theta_c = 1.0;
  double theta_beta = 0.5;
  std::string signals = "aligned";  // "aligned" or "random"
  double alpha = 1.0;
  Activation target = make_relu();
  std::uint64_t master_seed = 1;
  int num_seeds = 8;
};

enum class CoeffFamily { kLinear, kCubic };

// a0 + a1 x for kLinear; b0..b3 Hermite coefficients plus noise level b4 for
// kCubic (only b4^2 matters, so candidates carry it unsigned internally).
Activation family_activation(CoeffFamily family, const std::vector<double>& coeffs);

int family_dim(CoeffFamily family);

// Warm start from the target's own Hermite coefficients.
std::vector<double> family_initial_guess(CoeffFamily family, const Activation& target);

// Precomputed per-seed datasets: preactivations and labels for train and test
// splits, plus frozen noise matrices for the candidate's noise channel.
struct ObjectiveData {
  struct SeedData {
    Eigen::MatrixXd preacts_train;  // m x k
    Eigen::MatrixXd preacts_test;   // m_test x k
    Eigen::VectorXd y_train;
    Eigen::VectorXd y_test;
    Eigen::MatrixXd noise_train;    // unit normal draws, scaled by b4 on use
    Eigen::MatrixXd noise_test;
  };
  std::vector<SeedData> seeds;
};

ObjectiveData make_objective_data(const Scenario& scenario);

// Mean over seeds of the Monte Carlo generalization error of the ridge fit
// with the candidate activation.  Bit-deterministic for fixed inputs.
double objective(const std::vector<double>& coeffs, CoeffFamily family,
                 const ObjectiveData& data, const Scenario& scenario);

struct TraceEntry {
  int eval = 0;
  std::vector<double> coeffs;
  double value = 0.0;
  double best = 0.0;
};

struct SearchOutcome {
  std::vector<double> best_coeffs;
  double best_objective = 0.0;
  bool budget_exhausted = false;
  std::vector<TraceEntry> trace;
};

// Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink 0.5) with
// three deterministic restarts from the perturbed incumbent.  Respects the
// evaluation budget; never throws on exhaustion.
SearchOutcome nelder_mead(CoeffFamily family, const Scenario& scenario, int budget,
                          std::vector<double> initial = {});

}  // namespace rfm
