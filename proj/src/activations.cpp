#include "rfm/activations.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rfm/errors.hpp"
#include "rfm/rng.hpp"

namespace rfm {

Activation make_relu() { return {ActivationKind::kRelu, {}, 0.0, "relu"}; }
Activation make_tanh() { return {ActivationKind::kTanh, {}, 0.0, "tanh"}; }
Activation make_softplus() { return {ActivationKind::kSoftplus, {}, 0.0, "softplus"}; }
Activation make_identity() { return {ActivationKind::kIdentity, {}, 0.0, "identity"}; }

Activation make_affine(double a0, double a1) {
  Activation act{ActivationKind::kAffine, {a0, a1}, 0.0, "linear"};
  return act;
}

Activation make_hermite_poly(std::vector<double> mu, double noise_level) {
  if (mu.empty()) throw std::invalid_argument("make_hermite_poly: no coefficients");
  if (noise_level < 0.0) throw std::invalid_argument("make_hermite_poly: noise_level < 0");
  Activation act{ActivationKind::kHermitePoly, std::move(mu), noise_level, "poly"};
  act.label = "poly" + std::to_string(act.coeffs.size() - 1);
  return act;
}

Activation make_cubic_noisy(double b0, double b1, double b2, double b3, double b4) {
  if (b4 < 0.0) throw std::invalid_argument("make_cubic_noisy: noise level b4 < 0");
  return {ActivationKind::kCubicNoisy, {b0, b1, b2, b3}, b4, "cubic"};
}

namespace {

// sum_j coeffs[j]/j! He_j(x), evaluated by running the recurrence once.
double hermite_series(const std::vector<double>& coeffs, double x) {
  double acc = coeffs[0];
  if (coeffs.size() == 1) return acc;
  double prev = 1.0, cur = x, fact = 1.0;
  acc += coeffs[1] * x;
  for (size_t j = 2; j < coeffs.size(); ++j) {
    const double next = x * cur - static_cast<double>(j - 1) * prev;
    prev = cur;
    cur = next;
    fact *= static_cast<double>(j);
    acc += coeffs[j] / fact * cur;
  }
  return acc;
}

}  // namespace

double activation_value(const Activation& act, double x) {
  switch (act.kind) {
    case ActivationKind::kRelu:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::kTanh:
      return std::tanh(x);
    case ActivationKind::kSoftplus:
      return std::log1p(std::exp(-std::abs(x))) + (x > 0.0 ? x : 0.0);
    case ActivationKind::kIdentity:
      return x;
    case ActivationKind::kAffine:
      return act.coeffs[0] + act.coeffs[1] * x;
    case ActivationKind::kHermitePoly:
    case ActivationKind::kCubicNoisy:
      return hermite_series(act.coeffs, x);
  }
  throw std::logic_error("activation_value: unknown kind");
}

Eigen::MatrixXd apply(const Activation& act, const Eigen::MatrixXd& preacts,
                      std::uint64_t noise_seed) {
  Rng rng(noise_seed);  // left untouched when the activation is noise free
  return apply(act, preacts, rng);
}

Eigen::MatrixXd apply(const Activation& act, const Eigen::MatrixXd& preacts,
                      Rng& noise_rng) {
  if (!preacts.allFinite())
    throw std::invalid_argument("apply: non-finite preactivation input");
  Eigen::MatrixXd out(preacts.rows(), preacts.cols());
  if (!act.has_noise_channel()) {
    for (Eigen::Index i = 0; i < preacts.rows(); ++i)
      for (Eigen::Index j = 0; j < preacts.cols(); ++j)
        out(i, j) = activation_value(act, preacts(i, j));
    return out;
  }
  for (Eigen::Index i = 0; i < preacts.rows(); ++i)
    for (Eigen::Index j = 0; j < preacts.cols(); ++j)
      out(i, j) = activation_value(act, preacts(i, j)) + act.noise_level * noise_rng.normal();
  return out;
}

Activation equivalent_polynomial(const HermiteCoefficients& coeffs, int l) {
  if (l < 1 || l > static_cast<int>(coeffs.mu.size()))
    throw std::invalid_argument("equivalent_polynomial: need 1 <= l <= max_degree+1");
  std::vector<double> mu(coeffs.mu.begin(), coeffs.mu.begin() + l);
  const double noise = residual_noise_level(coeffs.mu, l, coeffs.second_moment);
  return make_hermite_poly(std::move(mu), noise);
}

Activation noisy_linear_surrogate(const HermiteCoefficients& coeffs) {
  Activation act = equivalent_polynomial(coeffs, 2);
  act.label = "linear";
  return act;
}

HermiteCoefficients activation_hermite_coefficients(const Activation& act, int max_degree,
                                                    int order) {
  auto f = [&act](double z) { return activation_value(act, z); };
  HermiteCoefficients co = compute_hermite_coefficients(f, max_degree, order);
  if (act.has_noise_channel()) {
    // The noise channel is independent of the input, so it adds variance but
    // no Hermite mass; fold it into the second moment and residuals.
    co.second_moment += act.noise_level * act.noise_level;
    for (size_t l = 1; l <= co.residual_noise.size(); ++l)
      co.residual_noise[l - 1] =
          residual_noise_level(co.mu, static_cast<int>(l), co.second_moment);
  }
  return co;
}

namespace {

std::vector<double> parse_number_list(const std::string& body, const std::string& name) {
  std::vector<double> vals;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      vals.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("activation '" + name + "': bad numeric parameter '" + item + "'");
    }
  }
  return vals;
}

}  // namespace

ParsedActivation parse_activation(const std::string& name) {
  ParsedActivation parsed;
  if (name == "relu") {
    parsed.act = make_relu();
  } else if (name == "tanh") {
    parsed.act = make_tanh();
  } else if (name == "softplus") {
    parsed.act = make_softplus();
  } else if (name == "identity") {
    parsed.act = make_identity();
  } else if (name.rfind("linear:", 0) == 0) {
    const auto vals = parse_number_list(name.substr(7), name);
    if (vals.size() != 2) throw ConfigError("activation '" + name + "': expected linear:a0,a1");
    parsed.act = make_affine(vals[0], vals[1]);
  } else if (name.rfind("cubic:", 0) == 0) {
    const auto vals = parse_number_list(name.substr(6), name);
    if (vals.size() != 5)
      throw ConfigError("activation '" + name + "': expected cubic:b0,b1,b2,b3,b4");
    if (vals[4] < 0.0) throw ConfigError("activation '" + name + "': noise level b4 must be >= 0");
    parsed.act = make_cubic_noisy(vals[0], vals[1], vals[2], vals[3], vals[4]);
  } else if (name.rfind("poly:l=", 0) == 0) {
    const std::string body = name.substr(7);
    try {
      size_t pos = 0;
      parsed.poly_l = std::stoi(body, &pos);
      if (pos != body.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("activation '" + name + "': expected poly:l=<int>");
    }
    if (parsed.poly_l < 1) throw ConfigError("activation '" + name + "': l must be >= 1");
    parsed.is_poly_of_target = true;
  } else {
    throw ConfigError("unknown activation '" + name + "'");
  }
  return parsed;
}

}  // namespace rfm
