#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "rfm/errors.hpp"

namespace rfm {

// Largest |eigenvalue| of a symmetric matrix by power iteration.  The start
// vector is deterministic (no RNG) so diagnostics are reproducible.  `tol` is
// the relative change in the eigenvalue estimate between sweeps.
inline double spectral_norm_sym(const Eigen::MatrixXd& a, double tol = 1e-6,
                                int max_iter = 5000) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));

  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i % 97);
  v.normalize();

  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = a * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;  // started in the null space of a null matrix
    const double prev = est;
    est = norm;
    v = w / norm;
    if (it > 0 && std::abs(est - prev) <= tol * std::max(est, 1e-300)) return est;
  }
  return est;
}

// Spectral norm of a general matrix via the Gram matrix of the smaller side.
inline double spectral_norm(const Eigen::MatrixXd& a, double tol = 1e-6,
                            int max_iter = 5000) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::MatrixXd gram;
  if (a.rows() <= a.cols())
    gram = a * a.transpose();
  else
    gram = a.transpose() * a;
  return std::sqrt(std::max(0.0, spectral_norm_sym(gram, tol, max_iter)));
}

}  // namespace rfm
