#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rfm/activations.hpp"
#include "rfm/errors.hpp"
#include "rfm/rng.hpp"
#include "support/oracles.hpp"

using rfm::Activation;

TEST_CASE("pointwise values of the built-in activations") {
  CHECK(rfm::activation_value(rfm::make_relu(), -1.5) == 0.0);
  CHECK(rfm::activation_value(rfm::make_relu(), 2.25) == 2.25);
  CHECK(rfm::activation_value(rfm::make_tanh(), 0.7) == doctest::Approx(std::tanh(0.7)));
  CHECK(rfm::activation_value(rfm::make_identity(), -3.0) == -3.0);
  CHECK(rfm::activation_value(rfm::make_affine(0.5, -2.0), 3.0) == doctest::Approx(-5.5));

  // softplus: log(1 + e^x), stable at both extremes
  const Activation sp = rfm::make_softplus();
  CHECK(rfm::activation_value(sp, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(rfm::activation_value(sp, 1.3) == doctest::Approx(std::log1p(std::exp(1.3))));
  CHECK(rfm::activation_value(sp, 800.0) == doctest::Approx(800.0));
  CHECK(rfm::activation_value(sp, -800.0) == 0.0);
}

TEST_CASE("hermite polynomial and cubic kinds evaluate the stated series") {
  const Activation poly = rfm::make_hermite_poly({0.3, -1.1, 0.25, 0.6}, 0.0);
  const Activation cubic = rfm::make_cubic_noisy(0.3, -1.1, 0.25, 0.6, 0.0);
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
    const double expect = 0.3 - 1.1 * x + 0.25 / 2.0 * (x * x - 1.0) +
                          0.6 / 6.0 * (x * x * x - 3.0 * x);
    CHECK(rfm::activation_value(poly, x) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rfm::activation_value(cubic, x) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("apply: deterministic kinds ignore the seed, noisy kinds use it reproducibly") {
  Eigen::MatrixXd pre(3, 4);
  pre << 0.1, -2.0, 0.4, 1.0, -0.5, 0.0, 2.0, -1.0, 0.3, 0.9, -0.2, 0.6;

  const Activation relu = rfm::make_relu();
  CHECK(rfm::apply(relu, pre, 1) == rfm::apply(relu, pre, 999));

  const Activation noisy = rfm::make_hermite_poly({0.0, 1.0}, 0.7);
  const Eigen::MatrixXd a = rfm::apply(noisy, pre, 42);
  const Eigen::MatrixXd b = rfm::apply(noisy, pre, 42);
  CHECK(a == b);  // bitwise
  CHECK((rfm::apply(noisy, pre, 43) - a).cwiseAbs().maxCoeff() > 1e-3);

  // exactly one draw per entry, row-major: reproduce manually
  rfm::Rng rng(42);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(a(i, j) == pre(i, j) + 0.7 * rng.normal());
}

TEST_CASE("noise streams from different seeds are uncorrelated") {
  const int n = 10000;
  const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(n, 1);
  const Activation noisy = rfm::make_hermite_poly({0.0}, 1.0);
  const Eigen::VectorXd z1 = rfm::apply(noisy, zeros, 7).col(0);
  const Eigen::VectorXd z2 = rfm::apply(noisy, zeros, 8).col(0);
  const double corr = z1.dot(z2) / (z1.norm() * z2.norm());
  CHECK(std::abs(corr) < 0.05);
  // and the draws look standard normal
  CHECK(z1.mean() == doctest::Approx(0.0).epsilon(0.05));
  CHECK(z1.squaredNorm() / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("zero noise level means deterministic output for any seed") {
  Eigen::MatrixXd pre(2, 2);
  pre << 0.0, 1.0, -1.0, 2.0;
  const Activation act = rfm::make_hermite_poly({0.1, 0.9}, 0.0);
  CHECK_FALSE(act.has_noise_channel());
  CHECK(rfm::apply(act, pre, 1) == rfm::apply(act, pre, 2));
}

TEST_CASE("apply rejects non-finite input") {
  Eigen::MatrixXd pre(1, 2);
  pre << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(rfm::apply(rfm::make_relu(), pre, 0), std::invalid_argument);
  pre(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(rfm::apply(rfm::make_relu(), pre, 0), std::invalid_argument);
}

TEST_CASE("surrogates match the first moments of the base activation") {
  // E[z sigma_hat_l(z)] = mu_1 and E[sigma_hat_l(z)^2] = E[sigma(z)^2] within
  // 1e-6, both sides evaluated with the same quadrature rule.
  for (const Activation& base : {rfm::make_relu(), rfm::make_tanh()}) {
    const rfm::HermiteCoefficients co = rfm::activation_hermite_coefficients(base, 8, 64);
    for (int l : {2, 3, 4}) {
      const Activation sur = rfm::equivalent_polynomial(co, l);
      const double m1 = rfm::gauss_hermite_expectation(
          [&](double z) { return z * rfm::activation_value(sur, z); }, 64);
      CHECK(m1 == doctest::Approx(co.mu[1]).epsilon(1e-6));
      const double m2 = rfm::gauss_hermite_expectation(
          [&](double z) { return std::pow(rfm::activation_value(sur, z), 2); }, 64);
      CHECK(m2 + sur.noise_level * sur.noise_level ==
            doctest::Approx(co.second_moment).epsilon(1e-6));
    }
  }
}

TEST_CASE("noisy linear surrogate is the l = 2 polynomial surrogate") {
  const rfm::HermiteCoefficients co =
      rfm::activation_hermite_coefficients(rfm::make_relu(), 8, 64);
  const Activation lin = rfm::noisy_linear_surrogate(co);
  const Activation p2 = rfm::equivalent_polynomial(co, 2);
  REQUIRE(lin.coeffs.size() == 2);
  CHECK(lin.coeffs[0] == p2.coeffs[0]);
  CHECK(lin.coeffs[1] == p2.coeffs[1]);
  CHECK(lin.noise_level == p2.noise_level);
  // pinned order-64 noise level for the relu surrogate
  CHECK(lin.noise_level == doctest::Approx(0.29796213528481647).epsilon(1e-12));
  CHECK(lin.coeffs[1] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("degenerate residuals disable the noise channel") {
  const rfm::HermiteCoefficients co =
      rfm::activation_hermite_coefficients(rfm::make_identity(), 4, 64);
  const Activation sur = rfm::equivalent_polynomial(co, 2);
  CHECK(sur.noise_level == 0.0);
  CHECK_FALSE(sur.has_noise_channel());
}

TEST_CASE("hermite data of noisy activations folds the noise into the variance") {
  const Activation act = rfm::make_hermite_poly({0.0, 1.0}, 0.5);
  const rfm::HermiteCoefficients co = rfm::activation_hermite_coefficients(act, 4, 64);
  CHECK(co.mu[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(co.second_moment == doctest::Approx(1.25).epsilon(1e-10));
  // truncating at l = 2 recovers exactly the noise level
  CHECK(rfm::residual_noise_level(co.mu, 2, co.second_moment) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("remark-level coefficient facts used by the degree criterion") {
  const auto tanh_co = rfm::activation_hermite_coefficients(rfm::make_tanh(), 4, 64);
  const auto relu_co = rfm::activation_hermite_coefficients(rfm::make_relu(), 4, 64);
  CHECK(std::abs(tanh_co.mu[2]) < 1e-8);
  CHECK(std::abs(tanh_co.mu[3]) > 0.1);
  CHECK(std::abs(relu_co.mu[3]) < 1e-8);
  CHECK(std::abs(relu_co.mu[2]) > 0.1);
}

TEST_CASE("activation name parsing") {
  CHECK(rfm::parse_activation("relu").act.kind == rfm::ActivationKind::kRelu);
  CHECK(rfm::parse_activation("tanh").act.kind == rfm::ActivationKind::kTanh);
  CHECK(rfm::parse_activation("softplus").act.kind == rfm::ActivationKind::kSoftplus);
  CHECK(rfm::parse_activation("identity").act.kind == rfm::ActivationKind::kIdentity);

  const auto lin = rfm::parse_activation("linear:0.3,-0.5");
  CHECK(lin.act.kind == rfm::ActivationKind::kAffine);
  CHECK(lin.act.coeffs[0] == 0.3);
  CHECK(lin.act.coeffs[1] == -0.5);

  const auto cubic = rfm::parse_activation("cubic:0.1,0.2,0.3,0.4,0.5");
  CHECK(cubic.act.kind == rfm::ActivationKind::kCubicNoisy);
  CHECK(cubic.act.noise_level == 0.5);

  const auto poly = rfm::parse_activation("poly:l=3");
  CHECK(poly.is_poly_of_target);
  CHECK(poly.poly_l == 3);

  CHECK_THROWS_AS(rfm::parse_activation("sigmoid"), rfm::ConfigError);
  CHECK_THROWS_AS(rfm::parse_activation("linear:1"), rfm::ConfigError);
  CHECK_THROWS_AS(rfm::parse_activation("linear:a,b"), rfm::ConfigError);
  CHECK_THROWS_AS(rfm::parse_activation("cubic:1,2,3,4"), rfm::ConfigError);
  CHECK_THROWS_AS(rfm::parse_activation("cubic:1,2,3,4,-1"), rfm::ConfigError);
  CHECK_THROWS_AS(rfm::parse_activation("poly:l=zero"), rfm::ConfigError);
}
