#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfm/hermite.hpp"

namespace rfm {

class Rng;

enum class ActivationKind {
  kRelu,
  kTanh,
  kSoftplus,
  kIdentity,
  kAffine,       // a0 + a1 x
  kHermitePoly,  // sum_{j<l} mu_j/j! He_j(x) + mu*_l z
  kCubicNoisy,   // b0 + b1 x + b2/2 (x^2-1) + b3/6 (x^3-3x) + b4 z
};

// A pointwise feature nonlinearity.  Noisy kinds add noise_level * z with z a
// fresh standard normal per (sample, feature) entry; noise_level == 0 makes
// them plain deterministic polynomials.
struct Activation {
  ActivationKind kind = ActivationKind::kRelu;
  // kAffine: {a0, a1}; kHermitePoly: {mu_0 .. mu_{l-1}}; kCubicNoisy: {b0..b3}.
  std::vector<double> coeffs;
  double noise_level = 0.0;
  std::string label = "relu";

  bool has_noise_channel() const { return noise_level > 0.0; }
};

Activation make_relu();
Activation make_tanh();
Activation make_softplus();
Activation make_identity();
Activation make_affine(double a0, double a1);
Activation make_hermite_poly(std::vector<double> mu, double noise_level);
Activation make_cubic_noisy(double b0, double b1, double b2, double b3, double b4);

// Deterministic part at a single point (ignores the noise channel).
double activation_value(const Activation& act, double x);

// Elementwise application.  Rejects non-finite inputs.  Noisy kinds consume
// exactly one derived N(0,1) draw per entry, row-major, from noise_seed, so
// two calls with the same seed coincide and the draw order is contractual.
Eigen::MatrixXd apply(const Activation& act, const Eigen::MatrixXd& preacts,
                      std::uint64_t noise_seed);

// Streaming variant: noise comes from an existing generator (same entry
// order), so blocked evaluations can keep one continuous noise stream.
Eigen::MatrixXd apply(const Activation& act, const Eigen::MatrixXd& preacts,
                      Rng& noise_rng);

// Noisy linear surrogate of the expansion: mu_0 + mu_1 x + mu* z with
// mu* = sqrt(E[sigma^2] - mu_1^2 - mu_0^2).  Identical to equivalent_polynomial
// at l = 2.
Activation noisy_linear_surrogate(const HermiteCoefficients& coeffs);

// Degree-(l-1) noisy polynomial surrogate: keeps Hermite terms 0..l-1 and puts
// the unexplained variance into the noise channel.  Requires 1 <= l <= L+1.
Activation equivalent_polynomial(const HermiteCoefficients& coeffs, int l);

// Expansion data of the deterministic part (quadrature; the noise channel
// contributes only to the second moment).
HermiteCoefficients activation_hermite_coefficients(const Activation& act,
                                                    int max_degree = kDefaultMaxDegree,
                                                    int order = kDefaultQuadratureOrder);

// CLI activation names: relu | tanh | softplus | identity | linear:a0,a1 |
// poly:l=<int> | cubic:b0,b1,b2,b3,b4.  "poly:l=N" is the noisy polynomial
// surrogate of the experiment's target and must be resolved by the caller.
struct ParsedActivation {
  bool is_poly_of_target = false;
  int poly_l = 0;
  Activation act;
};
ParsedActivation parse_activation(const std::string& name);

}  // namespace rfm
