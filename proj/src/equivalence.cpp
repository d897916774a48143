#include "rfm/equivalence.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "rfm/rng.hpp"

namespace rfm {

EtaReport compute_eta(const Eigen::MatrixXd& f, const Eigen::VectorXd& gamma,
                      const Eigen::VectorXd& xi, double theta) {
  if (f.cols() != gamma.size() || f.cols() != xi.size())
    throw std::invalid_argument("compute_eta: dimension mismatch");
  if (theta < 0.0) throw std::invalid_argument("compute_eta: theta < 0");
  const double alpha = gamma.dot(xi);
  // Fused form: eta_i is the inner product of f_i with the effective signal
  // direction under the spiked input law, normalized to the label argument.
  const Eigen::VectorXd spike = xi + theta * alpha * gamma;
  EtaReport report;
  report.eta_i = (f * spike) / std::sqrt(1.0 + theta * alpha * alpha);
  report.eta = report.eta_i.size() ? report.eta_i.cwiseAbs().maxCoeff() : 0.0;
  report.n = static_cast<int>(f.cols());
  return report;
}

int recommend_degree(double eta, int n, double c_threshold, int l_max) {
  if (n < 1) throw std::invalid_argument("recommend_degree: n < 1");
  if (c_threshold <= 0.0) throw std::invalid_argument("recommend_degree: c_threshold <= 0");
  if (l_max < 2) throw std::invalid_argument("recommend_degree: l_max < 2");
  for (int l = 2; l <= l_max; ++l) {
    const double cutoff = c_threshold * std::pow(static_cast<double>(n), -1.0 / l);
    if (eta <= cutoff) return l;
  }
  return l_max;
}

Eigen::MatrixXd linear_surrogate_covariance(const Eigen::MatrixXd& f, double theta,
                                            const Eigen::VectorXd& gamma, double mu1,
                                            double mu_star) {
  if (f.cols() != gamma.size())
    throw std::invalid_argument("linear_surrogate_covariance: dimension mismatch");
  const Eigen::VectorXd v = f * gamma;
  // Rank updates keep the result exactly symmetric; a plain product F F^T is
  // only symmetric up to rounding in the blocked kernels.
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(f.rows(), f.rows());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(f, mu1 * mu1);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(v, mu1 * mu1 * theta);
  cov = cov.selfadjointView<Eigen::Lower>();
  cov.diagonal().array() += mu_star * mu_star;
  return cov;
}

Eigen::MatrixXd noisy_linear_second_moment(const Eigen::MatrixXd& f, double theta,
                                           const Eigen::VectorXd& gamma, double mu0,
                                           double mu1, double mu_star) {
  Eigen::MatrixXd moment = linear_surrogate_covariance(f, theta, gamma, mu1, mu_star);
  moment.array() += mu0 * mu0;
  return moment;
}

Eigen::MatrixXd empirical_feature_covariance(const SpikedModel& model, const Activation& act,
                                             const Eigen::MatrixXd& f, int m_mc,
                                             std::uint64_t input_seed,
                                             std::uint64_t noise_seed) {
  if (f.cols() != model.n)
    throw std::invalid_argument("empirical_feature_covariance: dimension mismatch");
  if (m_mc < 1) throw std::invalid_argument("empirical_feature_covariance: m_mc < 1");
  const Eigen::Index k = f.rows();
  if (m_mc < k)
    std::cerr << "warning: empirical_feature_covariance with m_mc = " << m_mc
              << " < k = " << k << "; estimate will be rank deficient\n";

  // Sequential blocks against one continuous input (and noise) stream, so the
  // estimate is independent of the block size and never holds all samples.
  constexpr int kBlock = 4096;
  Rng input_rng(input_seed);
  Rng noise_rng(noise_seed);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd x(kBlock, model.n);
  int done = 0;
  while (done < m_mc) {
    const int rows = std::min(kBlock, m_mc - done);
    auto block = x.topRows(rows);
    sample_inputs_into(model, input_rng, block);
    const Eigen::MatrixXd feats = apply(act, block * f.transpose(), noise_rng);
    acc.selfadjointView<Eigen::Lower>().rankUpdate(feats.transpose());
    done += rows;
  }
  acc = acc.selfadjointView<Eigen::Lower>();
  return acc / static_cast<double>(m_mc);
}

Eigen::VectorXd cross_covariance_closed_form(const HermiteCoefficients& mu,
                                             const HermiteCoefficients& mu_tilde,
                                             const Eigen::VectorXd& eta_i, int terms) {
  if (terms < 1) throw std::invalid_argument("cross_covariance_closed_form: terms < 1");
  const int avail = static_cast<int>(std::min(mu.mu.size(), mu_tilde.mu.size()));
  if (terms > avail)
    throw std::invalid_argument("cross_covariance_closed_form: not enough coefficients");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(eta_i.size());
  double fact = 1.0;
  for (int j = 0; j < terms; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    const double weight = mu.mu[j] * mu_tilde.mu[j] / fact;
    if (weight == 0.0) continue;
    if (j == 0)
      out.array() += weight;
    else
      out.array() += weight * eta_i.array().pow(j);
  }
  return out;
}

Eigen::VectorXd input_label_correlation_first_term(const SpikedModel& model,
                                                   const HermiteCoefficients& mu_tilde) {
  if (mu_tilde.mu.size() < 2)
    throw std::invalid_argument("input_label_correlation_first_term: need mu~_1");
  const double scale =
      mu_tilde.mu[1] / std::sqrt(1.0 + model.theta * model.alpha * model.alpha);
  return scale * (model.xi + model.theta * model.alpha * model.gamma);
}

double percentage_gap(double g_a, double g_b) {
  if (g_b <= 0.0) throw std::invalid_argument("percentage_gap: reference must be positive");
  return 100.0 * std::abs(g_a - g_b) / g_b;
}

EquivalenceGap make_equivalence_gap(double g_rfm, double g_surrogate) {
  EquivalenceGap gap;
  gap.g_rfm = g_rfm;
  gap.g_surrogate = g_surrogate;
  gap.abs_gap = std::abs(g_rfm - g_surrogate);
  gap.pct_gap = percentage_gap(g_rfm, g_surrogate);
  return gap;
}

}  // namespace rfm
