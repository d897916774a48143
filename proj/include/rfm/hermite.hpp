#pragma once

#include <functional>
#include <vector>

namespace rfm {

// Quadrature order used when callers do not ask for something else.  Exact for
// polynomial integrands up to degree 2*64 - 1; plenty for the degree-8 cap.
constexpr int kDefaultQuadratureOrder = 64;
constexpr int kDefaultMaxDegree = 8;

// mu*_l^2 slightly below zero is rounding; below -kResidualClampTol it means
// the supplied coefficients are inconsistent with the second moment.
constexpr double kResidualClampTol = 1e-9;

// Probabilist's Hermite polynomial He_i via He_{i+1}(x) = x He_i(x) - i He_{i-1}(x),
// He_0 = 1, He_1 = x.
double hermite_eval(int degree, double x);

// Gauss-Hermite rule adapted to the standard normal: sum_q weights[q] * f(nodes[q])
// approximates E[f(Z)], Z ~ N(0,1), exactly for polynomials of degree <= 2*order - 1.
// Nodes are symmetrized about zero so odd integrands cancel to machine precision.
struct HermiteBasis {
  int max_degree = kDefaultMaxDegree;
  int order = kDefaultQuadratureOrder;
  std::vector<double> nodes;
  std::vector<double> weights;
};

HermiteBasis make_hermite_basis(int max_degree = kDefaultMaxDegree,
                                int order = kDefaultQuadratureOrder);

// E[f(Z)] under the rule of the given order.
double gauss_hermite_expectation(const std::function<double(double)>& f, int order);

// mu_j = E[He_j(Z) sigma(Z)].  Requires j < order; beyond that the rule cannot
// even integrate He_j^2 exactly, so results would be unreliable.
double hermite_coefficient(const std::function<double(double)>& sigma, int j,
                           int order = kDefaultQuadratureOrder);

// Expansion data for one scalar function: coefficients mu_0..mu_L, the second
// moment E[sigma(Z)^2], and truncation noise levels mu*_l for l = 1..L+1 where
// mu*_l = sqrt(E[sigma^2] - sum_{j<l} mu_j^2 / j!).
struct HermiteCoefficients {
  std::vector<double> mu;
  double second_moment = 0.0;
  std::vector<double> residual_noise;

  int max_degree() const { return static_cast<int>(mu.size()) - 1; }
  // mu*_l, valid for l = 1 .. max_degree()+1.
  double residual(int l) const;
};

HermiteCoefficients compute_hermite_coefficients(
    const std::function<double(double)>& sigma, int max_degree = kDefaultMaxDegree,
    int order = kDefaultQuadratureOrder);

// mu*_l from explicit coefficients.  Clamps tiny negative radicands to zero,
// throws if the radicand is below -kResidualClampTol.
double residual_noise_level(const std::vector<double>& mu, int l, double second_moment);

// E[He_i(rho Z1 + sqrt(c^2 - rho^2) Z2) He_j(Z1)] over independent standard
// normals, by a 2-D tensor rule.  Requires |rho| <= c, c > 0.
double mehler_inner_product(int i, int j, double rho, double c,
                            int order = kDefaultQuadratureOrder);

// E[He_i(c Z) He_j(Z)].
double scaled_orthogonality(int i, int j, double c,
                            int order = kDefaultQuadratureOrder);

}  // namespace rfm
