#include "rfm/ridge.hpp"

#include <cmath>
#include <stdexcept>

#include "rfm/errors.hpp"
#include "rfm/rng.hpp"

namespace rfm {

RidgeFit fit(const Eigen::MatrixXd& r, const Eigen::VectorXd& y, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("ridge fit: lambda must be > 0");
  if (r.rows() != y.size()) throw std::invalid_argument("ridge fit: shape mismatch");
  if (r.rows() < 1) throw std::invalid_argument("ridge fit: empty design");
  if (!r.allFinite() || !y.allFinite())
    throw std::invalid_argument("ridge fit: non-finite design or labels");

  const Eigen::Index m = r.rows();
  const Eigen::Index k = r.cols();
  const double mlambda = static_cast<double>(m) * lambda;

  RidgeFit out;
  out.lambda = lambda;
  out.m = static_cast<int>(m);
  out.k = static_cast<int>(k);

  if (k <= m) {
    Eigen::MatrixXd a = r.transpose() * r;
    a.diagonal().array() += mlambda;
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
      throw NumericalError("ridge fit: primal Cholesky factorization failed");
    out.w_hat = llt.solve(r.transpose() * y);
    out.solver = RidgeSolver::kPrimal;
  } else {
    Eigen::MatrixXd b = r * r.transpose();
    b.diagonal().array() += mlambda;
    const Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success)
      throw NumericalError("ridge fit: dual Cholesky factorization failed");
    out.w_hat = r.transpose() * llt.solve(y);
    out.solver = RidgeSolver::kDual;
  }
  if (!out.w_hat.allFinite()) throw NumericalError("ridge fit: non-finite solution");
  out.training_error = training_error(r, y, out);
  return out;
}

double training_error(const Eigen::MatrixXd& r, const Eigen::VectorXd& y,
                      const RidgeFit& fit) {
  const double m = static_cast<double>(r.rows());
  const double data = (y - r * fit.w_hat).squaredNorm() / m;
  return data + fit.lambda * fit.w_hat.squaredNorm();
}

int default_test_samples(int m) { return std::max(10 * m, 10000); }

double generalization_error_mc(const SpikedModel& model, const Activation& act,
                               const Eigen::MatrixXd& f, const RidgeFit& fit, int m_test,
                               std::uint64_t input_seed, std::uint64_t noise_seed) {
  if (m_test < 1) throw std::invalid_argument("generalization_error_mc: m_test < 1");
  const Eigen::MatrixXd x = sample_inputs(model, m_test, input_seed);
  const Eigen::VectorXd y = labels(model, x, derive_seed(input_seed, "labels-noise", 0));
  const Eigen::MatrixXd feats = apply(act, x * f.transpose(), noise_seed);
  return (y - feats * fit.w_hat).squaredNorm() / static_cast<double>(m_test);
}

double generalization_error_semianalytic(const Eigen::VectorXd& w_hat,
                                         double y_second_moment,
                                         const Eigen::VectorXd& sigma_xy,
                                         const Eigen::MatrixXd& sigma_x) {
  if (sigma_x.rows() != sigma_x.cols() || sigma_x.rows() != w_hat.size() ||
      sigma_xy.size() != w_hat.size())
    throw std::invalid_argument("generalization_error_semianalytic: shape mismatch");
  if ((sigma_x - sigma_x.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("generalization_error_semianalytic: sigma_x not symmetric");
  return y_second_moment - 2.0 * w_hat.dot(sigma_xy) + w_hat.dot(sigma_x * w_hat);
}

}  // namespace rfm
