#include "rfm/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rfm/errors.hpp"

namespace rfm {

double hermite_eval(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("hermite_eval: degree must be >= 0");
  if (degree == 0) return 1.0;
  double prev = 1.0;  // He_0
  double cur = x;     // He_1
  for (int i = 1; i < degree; ++i) {
    const double next = x * cur - static_cast<double>(i) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

// Golub-Welsch for the N(0,1) weight: the Jacobi matrix of the probabilist's
// Hermite family is tridiagonal with zero diagonal and off-diagonals sqrt(i).
// Eigenvalues give the nodes, squared first eigenvector components the weights
// (total mass 1).  The rule is then symmetrized about zero: the eigensolver
// leaves +/- pairs equal only to rounding, and downstream tests rely on odd
// integrands cancelling exactly.
void golub_welsch(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(static_cast<double>(i));
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw NumericalError("gauss-hermite: eigen decomposition failed");

  nodes.resize(order);
  weights.resize(order);
  for (int q = 0; q < order; ++q) {
    nodes[q] = solver.eigenvalues()(q);  // ascending
    const double v0 = solver.eigenvectors()(0, q);
    weights[q] = v0 * v0;
  }
  for (int q = 0; q < order / 2; ++q) {
    const int r = order - 1 - q;
    const double z = 0.5 * (nodes[r] - nodes[q]);
    const double w = 0.5 * (weights[q] + weights[r]);
    nodes[q] = -z;
    nodes[r] = z;
    weights[q] = w;
    weights[r] = w;
  }
  if (order % 2 == 1) nodes[order / 2] = 0.0;
}

}  // namespace

HermiteBasis make_hermite_basis(int max_degree, int order) {
  if (max_degree < 0) throw std::invalid_argument("make_hermite_basis: max_degree < 0");
  if (order < 1) throw std::invalid_argument("make_hermite_basis: order < 1");
  HermiteBasis basis;
  basis.max_degree = max_degree;
  basis.order = order;
  golub_welsch(order, basis.nodes, basis.weights);
  return basis;
}

double gauss_hermite_expectation(const std::function<double(double)>& f, int order) {
  const HermiteBasis basis = make_hermite_basis(0, order);
  double acc = 0.0;
  for (int q = 0; q < order; ++q) acc += basis.weights[q] * f(basis.nodes[q]);
  return acc;
}

double hermite_coefficient(const std::function<double(double)>& sigma, int j, int order) {
  if (j < 0) throw std::invalid_argument("hermite_coefficient: degree < 0");
  if (j >= order)
    throw std::invalid_argument(
        "hermite_coefficient: degree too high for quadrature order (need j < order)");
  const HermiteBasis basis = make_hermite_basis(j, order);
  double acc = 0.0;
  for (int q = 0; q < order; ++q)
    acc += basis.weights[q] * hermite_eval(j, basis.nodes[q]) * sigma(basis.nodes[q]);
  return acc;
}

double HermiteCoefficients::residual(int l) const {
  if (l < 1 || l > static_cast<int>(residual_noise.size()))
    throw std::invalid_argument("HermiteCoefficients::residual: l out of range");
  return residual_noise[l - 1];
}

double residual_noise_level(const std::vector<double>& mu, int l, double second_moment) {
  if (l < 1 || l > static_cast<int>(mu.size()))
    throw std::invalid_argument("residual_noise_level: need 1 <= l <= mu.size()");
  double explained = 0.0;
  for (int j = 0; j < l; ++j) explained += mu[j] * mu[j] / factorial(j);
  const double rad = second_moment - explained;
  if (rad < -kResidualClampTol)
    throw std::invalid_argument(
        "residual_noise_level: coefficients exceed the second moment; "
        "inputs are inconsistent");
  // Symmetric dead zone: quadrature dust on either side of zero must not turn
  // an exactly-representable activation into a (barely) noisy one.
  if (rad < kResidualClampTol) return 0.0;
  return std::sqrt(rad);
}

HermiteCoefficients compute_hermite_coefficients(const std::function<double(double)>& sigma,
                                                 int max_degree, int order) {
  if (max_degree >= order)
    throw std::invalid_argument("compute_hermite_coefficients: max_degree must be < order");
  const HermiteBasis basis = make_hermite_basis(max_degree, order);

  HermiteCoefficients out;
  out.mu.assign(max_degree + 1, 0.0);
  // One recurrence sweep per node covers every degree at once.
  for (int q = 0; q < order; ++q) {
    const double z = basis.nodes[q];
    const double ws = basis.weights[q] * sigma(z);
    out.second_moment += basis.weights[q] * sigma(z) * sigma(z);
    double prev = 1.0;
    double cur = z;
    out.mu[0] += ws;
    if (max_degree >= 1) out.mu[1] += ws * z;
    for (int j = 2; j <= max_degree; ++j) {
      const double next = z * cur - static_cast<double>(j - 1) * prev;
      prev = cur;
      cur = next;
      out.mu[j] += ws * cur;
    }
  }

  // mu*_l for l = 1..L+1; the last entry uses every computed coefficient.
  out.residual_noise.resize(max_degree + 1);
  for (int l = 1; l <= max_degree + 1; ++l)
    out.residual_noise[l - 1] = residual_noise_level(out.mu, l, out.second_moment);
  return out;
}

double mehler_inner_product(int i, int j, double rho, double c, int order) {
  if (i < 0 || j < 0) throw std::invalid_argument("mehler_inner_product: negative degree");
  if (c <= 0.0) throw std::invalid_argument("mehler_inner_product: need c > 0");
  if (std::abs(rho) > c)
    throw std::invalid_argument("mehler_inner_product: need |rho| <= c");
  const double s = std::sqrt(std::max(0.0, c * c - rho * rho));
  const HermiteBasis basis = make_hermite_basis(std::max(i, j), order);
  double acc = 0.0;
  for (int q1 = 0; q1 < order; ++q1) {
    const double z1 = basis.nodes[q1];
    const double hj = hermite_eval(j, z1);
    double inner = 0.0;
    for (int q2 = 0; q2 < order; ++q2)
      inner += basis.weights[q2] * hermite_eval(i, rho * z1 + s * basis.nodes[q2]);
    acc += basis.weights[q1] * hj * inner;
  }
  return acc;
}

double scaled_orthogonality(int i, int j, double c, int order) {
  if (i < 0 || j < 0) throw std::invalid_argument("scaled_orthogonality: negative degree");
  const HermiteBasis basis = make_hermite_basis(std::max(i, j), order);
  double acc = 0.0;
  for (int q = 0; q < order; ++q) {
    const double z = basis.nodes[q];
    acc += basis.weights[q] * hermite_eval(i, c * z) * hermite_eval(j, z);
  }
  return acc;
}

}  // namespace rfm
