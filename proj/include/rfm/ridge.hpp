#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rfm/activations.hpp"
#include "rfm/datagen.hpp"

namespace rfm {

enum class RidgeSolver { kPrimal, kDual };

// Solution of min_w (1/m) ||y - R w||^2 + lambda ||w||^2.  Note the factor m
// in the normal equations (R^T R + m lambda I) w = R^T y: the data-fit term is
// averaged, the penalty is not.
struct RidgeFit {
  Eigen::VectorXd w_hat;
  double lambda = 0.0;
  int m = 0;
  int k = 0;
  double training_error = 0.0;  // objective value at w_hat
  RidgeSolver solver = RidgeSolver::kPrimal;
};

// Closed-form fit via Cholesky: primal (k x k system) when k <= m, the
// algebraically identical dual (m x m system) when k > m.  A failed
// factorization throws NumericalError; lambda must be > 0.
RidgeFit fit(const Eigen::MatrixXd& r, const Eigen::VectorXd& y, double lambda);

// Objective value (1/m)||y - R w||^2 + lambda ||w||^2 at the fitted weights.
double training_error(const Eigen::MatrixXd& r, const Eigen::VectorXd& y,
                      const RidgeFit& fit);

// Monte Carlo generalization error E[(y - w . sigma(F x))^2] on m_test fresh
// inputs.  Fresh label noise is derived from input_seed; fresh activation
// noise (for noisy surrogates) comes from noise_seed, so paired comparisons
// can share test inputs while keeping noise streams independent.
double generalization_error_mc(const SpikedModel& model, const Activation& act,
                               const Eigen::MatrixXd& f, const RidgeFit& fit, int m_test,
                               std::uint64_t input_seed, std::uint64_t noise_seed);

// Suggested m_test when the caller has no preference.
int default_test_samples(int m);

// Second-moment route: E[y^2] - 2 w . Sigma_xy + w . Sigma_x w, with Sigma_x
// either empirical or a surrogate matrix.  Sigma_x must be symmetric (1e-8).
double generalization_error_semianalytic(const Eigen::VectorXd& w_hat,
                                         double y_second_moment,
                                         const Eigen::VectorXd& sigma_xy,
                                         const Eigen::MatrixXd& sigma_x);

}  // namespace rfm
