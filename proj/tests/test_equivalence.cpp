#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "rfm/activations.hpp"
#include "rfm/datagen.hpp"
#include "rfm/equivalence.hpp"
#include "rfm/hermite.hpp"
#include "rfm/linalg.hpp"
#include "rfm/rng.hpp"

using namespace rfm;

TEST_CASE("compute_eta matches the covariance-route formula") {
  const int n = 40, k = 25;
  const double theta = 5.0;
  SignalPair sig = make_signal_pair_aligned(n, 0.37, derive_seed(21, "signals", 0));
  Eigen::MatrixXd f = sample_feature_matrix(n, k, theta, derive_seed(21, "features", 0)).f;
  EtaReport report = compute_eta(f, sig.gamma, sig.xi, theta);
  CHECK(report.n == n);
  CHECK(report.eta_i.size() == k);

  // Independent route: eta_i = f_i^T (I + theta gamma gamma^T) xi, normalized.
  const double alpha = sig.gamma.dot(sig.xi);
  const Eigen::MatrixXd cov =
      Eigen::MatrixXd::Identity(n, n) + theta * sig.gamma * sig.gamma.transpose();
  const Eigen::VectorXd expect =
      (f * (cov * sig.xi)) / std::sqrt(1.0 + theta * alpha * alpha);
  CHECK((report.eta_i - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(report.eta == report.eta_i.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(compute_eta(f, sig.gamma.head(n - 1), sig.xi.head(n - 1), theta),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_eta(f, sig.gamma, sig.xi, -1.0), std::invalid_argument);
}

TEST_CASE("recommend_degree thresholds and boundaries") {
  // n = 400: cutoffs 0.05, 0.0737, 0.2236 for l = 2, 3, 4.
  CHECK(recommend_degree(0.01, 400) == 2);
  CHECK(recommend_degree(0.2, 400) == 4);
  CHECK(recommend_degree(0.5, 400) == 4);  // above every cutoff, falls back to l_max
  CHECK(recommend_degree(std::pow(400.0, -0.5), 400) == 2);  // boundary inclusive
  CHECK(recommend_degree(0.06, 400) == 3);
  CHECK(recommend_degree(0.0, 400) == 2);
  CHECK(recommend_degree(0.5, 400, 1.0, 3) == 3);
  CHECK(recommend_degree(0.09, 400, 2.0) == 2);  // looser threshold, lower degree

  // The recommended degree never increases as the threshold constant grows.
  for (double eta : {0.02, 0.08, 0.15, 0.3}) {
    int prev = recommend_degree(eta, 400, 0.5);
    for (double c : {1.0, 2.0, 4.0}) {
      const int cur = recommend_degree(eta, 400, c);
      CHECK(cur <= prev);
      prev = cur;
    }
  }

  CHECK_THROWS_AS(recommend_degree(0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(recommend_degree(0.1, 400, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(recommend_degree(0.1, 400, 1.0, 1), std::invalid_argument);
}

TEST_CASE("linear_surrogate_covariance hand case and invariants") {
  // F = I_2, gamma = e1, theta = 1, mu1 = 2, mu* = 3:
  // 4 (I + e1 e1^T) + 9 I = diag(17, 13).
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd gamma(2);
  gamma << 1.0, 0.0;
  Eigen::MatrixXd cov = linear_surrogate_covariance(f, 1.0, gamma, 2.0, 3.0);
  CHECK(cov(0, 0) == doctest::Approx(17.0));
  CHECK(cov(1, 1) == doctest::Approx(13.0));
  CHECK(cov(0, 1) == doctest::Approx(0.0));
  CHECK(cov(1, 0) == doctest::Approx(0.0));

  // Random instance: exactly symmetric and positive semidefinite.
  const int n = 20, k = 30;
  SignalPair sig = make_signal_pair_aligned(n, 0.8, derive_seed(22, "signals", 0));
  Eigen::MatrixXd fr = sample_feature_matrix(n, k, 7.0, derive_seed(22, "features", 0)).f;
  Eigen::MatrixXd m = linear_surrogate_covariance(fr, 7.0, sig.gamma, 0.61, 0.17);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);

  // The full second moment only shifts every entry by mu0^2.
  Eigen::MatrixXd m0 = noisy_linear_second_moment(fr, 7.0, sig.gamma, 0.4, 0.61, 0.17);
  CHECK((m0 - m).cwiseAbs().minCoeff() == doctest::Approx(0.16).epsilon(1e-12));
  CHECK((m0 - m).cwiseAbs().maxCoeff() == doctest::Approx(0.16).epsilon(1e-12));
}

TEST_CASE("empirical covariance of identity features matches the exact matrix") {
  const int n = 25, k = 15;
  const double theta = 3.0;
  SignalPair sig = make_signal_pair_aligned(n, 0.6, derive_seed(11, "signals", 0));
  SpikedModel model = make_spiked_model(n, theta, 0.0, sig.gamma, sig.xi, make_identity());
  Eigen::MatrixXd f = sample_feature_matrix(n, k, theta, derive_seed(11, "features", 0)).f;
  Eigen::MatrixXd emp = empirical_feature_covariance(model, make_identity(), f, 200000,
                                                     derive_seed(11, "inputs", 0), 1);
  // sigma = identity has mu1 = 1 and no residual, so the surrogate matrix is
  // the exact second moment F (I + theta gamma gamma^T) F^T.
  Eigen::MatrixXd exact = linear_surrogate_covariance(f, theta, model.gamma, 1.0, 0.0);
  CHECK(spectral_norm_sym(emp - exact) < 0.06);  // realized 0.0217 at m = 2e5
}

TEST_CASE("blocked covariance accumulation equals the direct computation") {
  const int n = 30, k = 12, m = 5000;
  const double theta = 2.0;
  SignalPair sig = make_signal_pair_aligned(n, 0.4, derive_seed(15, "signals", 0));
  SpikedModel model = make_spiked_model(n, theta, 0.0, sig.gamma, sig.xi, make_relu());
  Eigen::MatrixXd f = sample_feature_matrix(n, k, theta, derive_seed(15, "features", 0)).f;
  HermiteCoefficients co = activation_hermite_coefficients(make_relu());
  Activation sur = noisy_linear_surrogate(co);
  const std::uint64_t iseed = derive_seed(15, "inputs", 0);
  const std::uint64_t nseed = derive_seed(15, "poly-noise", 0);
  Eigen::MatrixXd emp = empirical_feature_covariance(model, sur, f, m, iseed, nseed);

  // Same seeds, one shot: the block walk must consume the identical stream.
  Eigen::MatrixXd x = sample_inputs(model, m, iseed);
  Eigen::MatrixXd feats = apply(sur, x * f.transpose(), nseed);
  Eigen::MatrixXd direct = (feats.transpose() * feats) / static_cast<double>(m);
  CHECK((emp - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("noisy linear surrogate features reproduce the covariance formula") {
  const int n = 40, k = 20;
  const double theta = 5.0;
  SignalPair sig = make_signal_pair_aligned(n, 0.5, derive_seed(12, "signals", 0));
  SpikedModel model = make_spiked_model(n, theta, 0.0, sig.gamma, sig.xi, make_tanh());
  Eigen::MatrixXd f = sample_feature_matrix(n, k, theta, derive_seed(12, "features", 0)).f;
  HermiteCoefficients co = activation_hermite_coefficients(make_tanh());
  Activation sur = noisy_linear_surrogate(co);
  Eigen::MatrixXd emp = empirical_feature_covariance(model, sur, f, 100000,
                                                     derive_seed(12, "inputs", 0),
                                                     derive_seed(12, "poly-noise", 0));
  Eigen::MatrixXd exact =
      linear_surrogate_covariance(f, theta, model.gamma, co.mu[1], sur.noise_level);
  CHECK(spectral_norm_sym(emp - exact) < 0.05);  // realized 0.0143 at m = 1e5
}

TEST_CASE("relu second moment needs the constant-coefficient block") {
  const int n = 50, k = 40;
  const double theta = 6.0;
  SignalPair sig = make_signal_pair_aligned(n, 0.7, derive_seed(13, "signals", 0));
  SpikedModel model = make_spiked_model(n, theta, 0.0, sig.gamma, sig.xi, make_relu());
  Eigen::MatrixXd f = sample_feature_matrix(n, k, theta, derive_seed(13, "features", 0)).f;
  HermiteCoefficients co = activation_hermite_coefficients(make_relu());
  const double mu_star = co.residual(2);
  Eigen::MatrixXd emp = empirical_feature_covariance(model, make_relu(), f, 200000,
                                                     derive_seed(13, "inputs", 0), 1);
  const double gap_with =
      spectral_norm_sym(emp - noisy_linear_second_moment(f, theta, model.gamma, co.mu[0],
                                                         co.mu[1], mu_star));
  const double gap_without =
      spectral_norm_sym(emp - linear_surrogate_covariance(f, theta, model.gamma, co.mu[1],
                                                          mu_star));
  // Dropping mu0^2 11^T leaves an error of order mu0^2 k (6.45 here); with the
  // block the residual is the genuine higher-degree remainder.
  CHECK(gap_with < 1.5);       // realized 0.891
  CHECK(gap_without > 4.0);    // realized 6.31
  CHECK(gap_with < 0.25 * gap_without);
}

TEST_CASE("cross covariance closed form: hand values and linearity") {
  HermiteCoefficients a, b;
  a.mu = {1.0, 1.0, 0.0};
  b.mu = {1.0, 1.0, 0.0};
  Eigen::VectorXd eta(2);
  eta << 0.5, -0.5;
  Eigen::VectorXd out = cross_covariance_closed_form(a, b, eta, 2);
  CHECK(out(0) == doctest::Approx(1.5));
  CHECK(out(1) == doctest::Approx(0.5));
  CHECK(cross_covariance_closed_form(a, b, eta, 1)(1) == doctest::Approx(1.0));

  // Linear in the target coefficients: doubling mu~ doubles the output.
  HermiteCoefficients b2 = b;
  for (double& v : b2.mu) v *= 2.0;
  Eigen::VectorXd out2 = cross_covariance_closed_form(a, b2, eta, 2);
  CHECK((out2 - 2.0 * out).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(cross_covariance_closed_form(a, b, eta, 0), std::invalid_argument);
  CHECK_THROWS_AS(cross_covariance_closed_form(a, b, eta, 4), std::invalid_argument);
}

TEST_CASE("terms with a vanishing coefficient product drop out identically") {
  HermiteCoefficients relu = activation_hermite_coefficients(make_relu());
  HermiteCoefficients th = activation_hermite_coefficients(make_tanh());
  Eigen::VectorXd eta(3);
  eta << 0.9, -0.4, 0.1;
  // tanh kills every even term and relu kills the odd ones above degree 1, so
  // past j = 1 nothing survives in the mixed series.
  Eigen::VectorXd two = cross_covariance_closed_form(relu, th, eta, 2);
  Eigen::VectorXd six = cross_covariance_closed_form(relu, th, eta, 6);
  CHECK((six - two).cwiseAbs().maxCoeff() < 1e-8);
  // tanh against itself: the j = 2 term carries mu2(tanh)^2 which is zero.
  Eigen::VectorXd t3 = cross_covariance_closed_form(th, th, eta, 3);
  Eigen::VectorXd t2 = cross_covariance_closed_form(th, th, eta, 2);
  CHECK((t3 - t2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cross covariance closed form agrees with Monte Carlo (relu features, tanh labels)") {
  const int n = 50, k = 30, m = 200000;
  const double theta = 7.0;
  SignalPair sig = make_signal_pair_aligned(n, 1.0, derive_seed(14, "signals", 0));
  SpikedModel model = make_spiked_model(n, theta, 0.0, sig.gamma, sig.xi, make_tanh());
  Eigen::MatrixXd f = sample_feature_matrix(n, k, theta, derive_seed(14, "features", 0)).f;
  HermiteCoefficients mu = activation_hermite_coefficients(make_relu());
  HermiteCoefficients mt = activation_hermite_coefficients(make_tanh());
  EtaReport eta = compute_eta(f, model.gamma, model.xi, theta);
  Eigen::VectorXd closed = cross_covariance_closed_form(mu, mt, eta.eta_i, 6);

  Eigen::MatrixXd x = sample_inputs(model, m, derive_seed(14, "inputs", 0));
  Eigen::VectorXd y = labels(model, x);
  Eigen::MatrixXd feats = apply(make_relu(), x * f.transpose(), 1);
  for (int i = 0; i < k; ++i) {
    Eigen::ArrayXd prod = feats.col(i).array() * y.array();
    const double mean = prod.mean();
    const double se = std::sqrt((prod - mean).square().sum() / (m - 1.0) / m);
    CHECK(std::abs(mean - closed(i)) < 3.0 * se);  // realized max z = 1.37
  }
}

TEST_CASE("input-label correlation first term") {
  const int n = 20;
  const double theta = 4.0;
  SignalPair sig = make_signal_pair_aligned(n, 0.6, derive_seed(23, "signals", 0));
  SpikedModel model = make_spiked_model(n, theta, 0.0, sig.gamma, sig.xi, make_identity());
  HermiteCoefficients id = activation_hermite_coefficients(make_identity());
  Eigen::VectorXd term = input_label_correlation_first_term(model, id);

  // Identity target: the first term is the entire correlation E[x y], checked
  // against a direct Monte Carlo estimate.
  const int m = 200000;
  Eigen::MatrixXd x = sample_inputs(model, m, derive_seed(23, "inputs", 0));
  Eigen::VectorXd y = labels(model, x);
  for (int d = 0; d < n; ++d) {
    Eigen::ArrayXd prod = x.col(d).array() * y.array();
    const double mean = prod.mean();
    const double se = std::sqrt((prod - mean).square().sum() / (m - 1.0) / m);
    CHECK(std::abs(mean - term(d)) < 4.0 * se);
  }

  // alpha = 0 collapses it to mu~_1 xi.
  SignalPair orth = make_signal_pair_aligned(n, 0.0, derive_seed(23, "signals", 1));
  SpikedModel m0 = make_spiked_model(n, theta, 0.0, orth.gamma, orth.xi, make_tanh());
  HermiteCoefficients th = activation_hermite_coefficients(make_tanh());
  Eigen::VectorXd t0 = input_label_correlation_first_term(m0, th);
  CHECK((t0 - th.mu[1] * orth.xi).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("eta concentrates at the n^{-1/2} scale") {
  const int n = 400, k = 500;
  const double theta = std::sqrt(static_cast<double>(n));
  double worst_aligned = 0.0, worst_random = 0.0;
  for (int s = 0; s < 50; ++s) {
    SignalPair sa = make_signal_pair_aligned(n, 1.0, derive_seed(900 + s, "signals", 0));
    Eigen::MatrixXd f =
        sample_feature_matrix(n, k, theta, derive_seed(900 + s, "features", 0)).f;
    worst_aligned = std::max(worst_aligned, compute_eta(f, sa.gamma, sa.xi, theta).eta);
    SignalPair sr = make_signal_pair_random(n, derive_seed(900 + s, "signals", 1));
    worst_random = std::max(worst_random, compute_eta(f, sr.gamma, sr.xi, theta).eta);
  }
  // Calibrated over these 50 seeds: aligned max 0.990, random max 0.373.  The
  // aligned case gains a sqrt(1 + theta) style factor but both sit at the
  // polylog-times-n^{-1/2} scale.
  CHECK(worst_aligned * std::sqrt(400.0) < 25.0);
  CHECK(worst_random * std::sqrt(400.0) < 12.0);
  CHECK(worst_aligned > worst_random);
}

TEST_CASE("percentage gap and gap records") {
  CHECK(percentage_gap(1.1, 1.0) == doctest::Approx(10.0));
  CHECK(percentage_gap(0.9, 1.0) == doctest::Approx(10.0));
  CHECK(percentage_gap(2.0, 2.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(percentage_gap(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(percentage_gap(1.0, -0.5), std::invalid_argument);

  EquivalenceGap gap = make_equivalence_gap(0.25, 0.2);
  CHECK(gap.g_rfm == doctest::Approx(0.25));
  CHECK(gap.g_surrogate == doctest::Approx(0.2));
  CHECK(gap.abs_gap == doctest::Approx(0.05));
  CHECK(gap.pct_gap == doctest::Approx(25.0));
}
