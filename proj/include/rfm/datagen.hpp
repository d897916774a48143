#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rfm/activations.hpp"

namespace rfm {

// Spiked-covariance task: x ~ N(0, I_n + theta gamma gamma^T) and
// y = sigma_*(xi^T x / sqrt(1 + theta alpha^2)) with alpha = gamma^T xi, so
// the label argument has unit variance regardless of spike strength.
struct SpikedModel {
  int n = 0;
  double theta = 0.0;  // materialized theta_c * n^theta_beta
  double theta_c = 1.0;
  double theta_beta = 0.0;
  Eigen::VectorXd gamma;  // unit spike direction
  Eigen::VectorXd xi;     // unit signal direction
  double alpha = 0.0;     // cached gamma . xi
  Activation target;      // sigma_*
};

// Validates unit norms (1e-12) and caches alpha.
SpikedModel make_spiked_model(int n, double theta_c, double theta_beta,
                              Eigen::VectorXd gamma, Eigen::VectorXd xi,
                              Activation target);

struct SignalPair {
  Eigen::VectorXd gamma;
  Eigen::VectorXd xi;
};

// Controlled overlap: xi = alpha gamma + sqrt(1 - alpha^2) u with u a unit
// vector orthogonal to gamma (Gram-Schmidt of a fresh Gaussian draw), so
// gamma^T xi = alpha to machine precision.  Requires |alpha| <= 1.
SignalPair make_signal_pair_aligned(int n, double alpha, std::uint64_t seed);

// Independent uniform directions; the overlap concentrates at O(1/sqrt(n)).
SignalPair make_signal_pair_random(int n, std::uint64_t seed);

// m x n input matrix through the exact rank-one reparameterization
// x = g + (sqrt(1 + theta) - 1)(gamma^T g) gamma, g ~ N(0, I_n), which has the
// spiked covariance exactly (no covariance factorization involved).  Draw
// order: per sample, the n entries of g, samples in row order.
Eigen::MatrixXd sample_inputs(const SpikedModel& model, int m, std::uint64_t seed);

// Streaming variant: fills the given block from an existing generator so that
// moment accumulators can walk one input stream without materializing it.
void sample_inputs_into(const SpikedModel& model, Rng& rng, Eigen::Ref<Eigen::MatrixXd> x);

// Labels for the rows of x.  noise_seed only matters when sigma_* itself has
// a noise channel.
Eigen::VectorXd labels(const SpikedModel& model, const Eigen::MatrixXd& x,
                       std::uint64_t noise_seed = 0);

// k x n random features, entries iid N(0, 1/(n + theta)); this normalization
// makes E[(f_i^T x)^2] = 1 under the spiked input law.
struct FeatureMatrix {
  Eigen::MatrixXd f;
  double theta = 0.0;
  std::uint64_t seed = 0;
};
FeatureMatrix sample_feature_matrix(int n, int k, double theta, std::uint64_t seed);

// Concentration diagnostics for a realized feature matrix.  Reporting only;
// nothing in the pipeline enforces these.
struct AdmissibilityStats {
  double max_offdiag = 0.0;   // max_{i<j} |f_i^T f_j + theta (gamma^T f_j)(f_i^T gamma)|
  double max_diag_dev = 0.0;  // max_i |  ||f_i||^2 + theta (gamma^T f_i)^2 - 1 |
  double fhat_spectral_norm = 0.0;  // ||F (I + (sqrt(1+theta)-1) gamma gamma^T)||
};
AdmissibilityStats admissibility_stats(const Eigen::MatrixXd& f,
                                       const Eigen::VectorXd& gamma, double theta);

}  // namespace rfm
