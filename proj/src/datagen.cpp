#include "rfm/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "rfm/linalg.hpp"
#include "rfm/rng.hpp"

namespace rfm {

SpikedModel make_spiked_model(int n, double theta_c, double theta_beta,
                              Eigen::VectorXd gamma, Eigen::VectorXd xi,
                              Activation target) {
  if (n < 1) throw std::invalid_argument("make_spiked_model: n < 1");
  if (theta_c < 0.0) throw std::invalid_argument("make_spiked_model: theta_c < 0");
  if (gamma.size() != n || xi.size() != n)
    throw std::invalid_argument("make_spiked_model: signal dimension mismatch");
  if (std::abs(gamma.norm() - 1.0) > 1e-12 || std::abs(xi.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("make_spiked_model: gamma and xi must be unit vectors");

  SpikedModel model;
  model.n = n;
  model.theta_c = theta_c;
  model.theta_beta = theta_beta;
  model.theta = theta_c * std::pow(static_cast<double>(n), theta_beta);
  model.gamma = std::move(gamma);
  model.xi = std::move(xi);
  model.alpha = model.gamma.dot(model.xi);
  model.target = std::move(target);
  return model;
}

SignalPair make_signal_pair_aligned(int n, double alpha, std::uint64_t seed) {
  if (std::abs(alpha) > 1.0)
    throw std::invalid_argument("make_signal_pair_aligned: |alpha| > 1");
  Rng rng(seed);
  SignalPair pair;
  pair.gamma = normal_vector(n, rng);
  pair.gamma.normalize();
  if (std::abs(alpha) == 1.0) {
    pair.xi = alpha * pair.gamma;
    return pair;
  }
  Eigen::VectorXd u = normal_vector(n, rng);
  // Two projection passes keep the residual overlap at rounding level even
  // when the raw draw happens to lie close to gamma.
  u -= pair.gamma.dot(u) * pair.gamma;
  u -= pair.gamma.dot(u) * pair.gamma;
  const double norm = u.norm();
  if (norm < 1e-12)
    throw NumericalError("make_signal_pair_aligned: degenerate orthogonal draw");
  u /= norm;
  pair.xi = alpha * pair.gamma + std::sqrt(1.0 - alpha * alpha) * u;
  pair.xi.normalize();
  return pair;
}

SignalPair make_signal_pair_random(int n, std::uint64_t seed) {
  Rng rng(seed);
  SignalPair pair;
  pair.gamma = normal_vector(n, rng);
  pair.gamma.normalize();
  pair.xi = normal_vector(n, rng);
  pair.xi.normalize();
  return pair;
}

Eigen::MatrixXd sample_inputs(const SpikedModel& model, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample_inputs: m < 1");
  Rng rng(seed);
  Eigen::MatrixXd x(m, model.n);
  sample_inputs_into(model, rng, x);
  return x;
}

void sample_inputs_into(const SpikedModel& model, Rng& rng, Eigen::Ref<Eigen::MatrixXd> x) {
  if (x.cols() != model.n)
    throw std::invalid_argument("sample_inputs_into: dimension mismatch");
  const double shift = std::sqrt(1.0 + model.theta) - 1.0;
  Eigen::VectorXd g(model.n);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (int d = 0; d < model.n; ++d) g(d) = rng.normal();
    const double proj = model.gamma.dot(g);
    x.row(i) = (g + shift * proj * model.gamma).transpose();
  }
}

Eigen::VectorXd labels(const SpikedModel& model, const Eigen::MatrixXd& x,
                       std::uint64_t noise_seed) {
  if (x.cols() != model.n) throw std::invalid_argument("labels: dimension mismatch");
  const double scale = 1.0 / std::sqrt(1.0 + model.theta * model.alpha * model.alpha);
  Eigen::MatrixXd arg = (x * model.xi) * scale;
  return apply(model.target, arg, noise_seed).col(0);
}

FeatureMatrix sample_feature_matrix(int n, int k, double theta, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("sample_feature_matrix: bad shape");
  if (theta < 0.0) throw std::invalid_argument("sample_feature_matrix: theta < 0");
  FeatureMatrix fm;
  fm.theta = theta;
  fm.seed = seed;
  fm.f.resize(k, n);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n) + theta);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) fm.f(i, j) = scale * rng.normal();
  return fm;
}

AdmissibilityStats admissibility_stats(const Eigen::MatrixXd& f,
                                       const Eigen::VectorXd& gamma, double theta) {
  if (f.cols() != gamma.size())
    throw std::invalid_argument("admissibility_stats: dimension mismatch");
  const Eigen::Index k = f.rows();
  const Eigen::MatrixXd gram = f * f.transpose();
  const Eigen::VectorXd v = f * gamma;

  AdmissibilityStats stats;
  for (Eigen::Index i = 0; i < k; ++i) {
    stats.max_diag_dev =
        std::max(stats.max_diag_dev, std::abs(gram(i, i) + theta * v(i) * v(i) - 1.0));
    for (Eigen::Index j = i + 1; j < k; ++j)
      stats.max_offdiag =
          std::max(stats.max_offdiag, std::abs(gram(i, j) + theta * v(i) * v(j)));
  }
  const Eigen::MatrixXd fhat =
      f + (std::sqrt(1.0 + theta) - 1.0) * v * gamma.transpose();
  stats.fhat_spectral_norm = spectral_norm(fhat);
  return stats;
}

}  // namespace rfm
