#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rfm/datagen.hpp"
#include "rfm/hermite.hpp"

namespace rfm {

// Feature-wise signal alignment eta_i = f_i^T (xi + theta alpha gamma) /
// sqrt(1 + theta alpha^2); eta = max_i |eta_i| drives the surrogate-degree
// rule: small eta means low-degree Hermite terms dominate the cross moments.
struct EtaReport {
  Eigen::VectorXd eta_i;
  double eta = 0.0;
  int n = 0;
};

EtaReport compute_eta(const Eigen::MatrixXd& f, const Eigen::VectorXd& gamma,
                      const Eigen::VectorXd& xi, double theta);

// Smallest l in {2..l_max} with eta <= c_threshold * n^(-1/l) (boundary
// inclusive); falls back to l_max when no l qualifies.  l = 2 is the noisy
// linear regime.
int recommend_degree(double eta, int n, double c_threshold = 1.0, int l_max = 4);

// mu1^2 F (I + theta gamma gamma^T) F^T + mu_star^2 I_k.
Eigen::MatrixXd linear_surrogate_covariance(const Eigen::MatrixXd& f, double theta,
                                            const Eigen::VectorXd& gamma, double mu1,
                                            double mu_star);

// Raw second moment of the noisy linear surrogate's features: the matrix
// above plus mu0^2 11^T.  For odd activations (mu0 = 0) the two coincide;
// for relu-like ones the rank-one offset matters and grows with k.
Eigen::MatrixXd noisy_linear_second_moment(const Eigen::MatrixXd& f, double theta,
                                           const Eigen::VectorXd& gamma, double mu0,
                                           double mu1, double mu_star);

// (1/m_mc) sum_x sigma(F x) sigma(F x)^T over fresh inputs (raw second
// moment, no centering).  Warns on stderr when m_mc < k.
Eigen::MatrixXd empirical_feature_covariance(const SpikedModel& model, const Activation& act,
                                             const Eigen::MatrixXd& f, int m_mc,
                                             std::uint64_t input_seed,
                                             std::uint64_t noise_seed);

// Closed form E[sigma(f_i^T x) y] ~ sum_{j < terms} mu_j mu~_j eta_i^j / j!,
// evaluated per coordinate.
Eigen::VectorXd cross_covariance_closed_form(const HermiteCoefficients& mu,
                                             const HermiteCoefficients& mu_tilde,
                                             const Eigen::VectorXd& eta_i, int terms);

// Rank-one part of E[(x - E x)(y - E y)]: mu~_1 (xi + theta alpha gamma) /
// sqrt(1 + theta alpha^2).
Eigen::VectorXd input_label_correlation_first_term(const SpikedModel& model,
                                                   const HermiteCoefficients& mu_tilde);

// 100 |g_a - g_b| / g_b; the reference g_b must be positive.
double percentage_gap(double g_a, double g_b);

struct EquivalenceGap {
  double g_rfm = 0.0;
  double g_surrogate = 0.0;
  double abs_gap = 0.0;
  double pct_gap = 0.0;
};
EquivalenceGap make_equivalence_gap(double g_rfm, double g_surrogate);

}  // namespace rfm
