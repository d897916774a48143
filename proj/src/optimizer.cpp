#include "rfm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rfm/datagen.hpp"
#include "rfm/ridge.hpp"
#include "rfm/rng.hpp"

namespace rfm {

int family_dim(CoeffFamily family) {
  return family == CoeffFamily::kLinear ? 2 : 5;
}

Activation family_activation(CoeffFamily family, const std::vector<double>& coeffs) {
  if (static_cast<int>(coeffs.size()) != family_dim(family))
    throw std::invalid_argument("family_activation: wrong coefficient count");
  if (family == CoeffFamily::kLinear) return make_affine(coeffs[0], coeffs[1]);
  return make_cubic_noisy(coeffs[0], coeffs[1], coeffs[2], coeffs[3], std::abs(coeffs[4]));
}

std::vector<double> family_initial_guess(CoeffFamily family, const Activation& target) {
  HermiteCoefficients co = activation_hermite_coefficients(target);
  if (family == CoeffFamily::kLinear) return {co.mu[0], co.mu[1]};
  return {co.mu[0], co.mu[1], co.mu[2], co.mu[3], 0.0};
}

ObjectiveData make_objective_data(const Scenario& sc) {
  if (sc.num_seeds < 1) throw std::invalid_argument("make_objective_data: num_seeds < 1");
  ObjectiveData data;
  data.seeds.resize(sc.num_seeds);
  for (int s = 0; s < sc.num_seeds; ++s) {
    auto& sd = data.seeds[s];
    const SignalPair sig =
        sc.signals == "random"
            ? make_signal_pair_random(sc.n, derive_seed(sc.master_seed, "signals", s))
            : make_signal_pair_aligned(sc.n, sc.alpha,
                                       derive_seed(sc.master_seed, "signals", s));
    const SpikedModel model =
        make_spiked_model(sc.n, sc.theta_c, sc.theta_beta, sig.gamma, sig.xi, sc.target);
    const Eigen::MatrixXd f =
        sample_feature_matrix(sc.n, sc.k, model.theta,
                              derive_seed(sc.master_seed, "features", s))
            .f;
    const Eigen::MatrixXd x =
        sample_inputs(model, sc.m, derive_seed(sc.master_seed, "inputs", s));
    sd.y_train = labels(model, x, derive_seed(sc.master_seed, "labels-noise", 2 * s));
    sd.preacts_train = x * f.transpose();
    const Eigen::MatrixXd xt =
        sample_inputs(model, sc.m_test, derive_seed(sc.master_seed, "test-inputs", s));
    sd.y_test = labels(model, xt, derive_seed(sc.master_seed, "labels-noise", 2 * s + 1));
    sd.preacts_test = xt * f.transpose();
    // Frozen unit-normal noise: candidates scale it by their own b4, so the
    // noise channel also uses common random numbers.
    Rng train_rng(derive_seed(sc.master_seed, "poly-noise", 2 * s));
    Rng test_rng(derive_seed(sc.master_seed, "poly-noise", 2 * s + 1));
    sd.noise_train.resize(sc.m, sc.k);
    fill_normal(sd.noise_train, train_rng);
    sd.noise_test.resize(sc.m_test, sc.k);
    fill_normal(sd.noise_test, test_rng);
  }
  return data;
}

namespace {

Eigen::MatrixXd candidate_features(const std::vector<double>& c, CoeffFamily family,
                                   const Eigen::MatrixXd& p, const Eigen::MatrixXd& noise) {
  if (family == CoeffFamily::kLinear)
    return (c[0] + c[1] * p.array()).matrix();
  const auto a = p.array();
  Eigen::ArrayXXd out = c[0] + c[1] * a + 0.5 * c[2] * (a.square() - 1.0) +
                        (c[3] / 6.0) * (a.cube() - 3.0 * a);
  if (c[4] != 0.0) out += std::abs(c[4]) * noise.array();
  return out.matrix();
}

}  // namespace

double objective(const std::vector<double>& coeffs, CoeffFamily family,
                 const ObjectiveData& data, const Scenario& sc) {
  if (static_cast<int>(coeffs.size()) != family_dim(family))
    throw std::invalid_argument("objective: wrong coefficient count");
  double acc = 0.0;
  for (const auto& sd : data.seeds) {
    const Eigen::MatrixXd r = candidate_features(coeffs, family, sd.preacts_train, sd.noise_train);
    const RidgeFit fit_res = fit(r, sd.y_train, sc.lambda);
    const Eigen::MatrixXd rt =
        candidate_features(coeffs, family, sd.preacts_test, sd.noise_test);
    acc += (sd.y_test - rt * fit_res.w_hat).squaredNorm() / static_cast<double>(sc.m_test);
  }
  return acc / static_cast<double>(data.seeds.size());
}

namespace {

struct Evaluator {
  CoeffFamily family;
  const ObjectiveData& data;
  const Scenario& scenario;
  int budget;
  SearchOutcome& out;

  bool exhausted() const { return static_cast<int>(out.trace.size()) >= budget; }

  double eval(const std::vector<double>& x) {
    const double v = objective(x, family, data, scenario);
    if (out.trace.empty() || v < out.best_objective) {
      out.best_objective = v;
      out.best_coeffs = x;
    }
    TraceEntry entry;
    entry.eval = static_cast<int>(out.trace.size());
    entry.coeffs = x;
    entry.value = v;
    entry.best = out.best_objective;
    out.trace.push_back(entry);
    return v;
  }
};

// One Nelder-Mead descent from `start`; stops on budget, tiny simplex, or a
// flat function spread.  Returns true if it stopped by convergence.
bool descend(Evaluator& ev, const std::vector<double>& start, double step, int phase_budget) {
  const int d = static_cast<int>(start.size());
  const int stop_at = std::min(ev.budget, static_cast<int>(ev.out.trace.size()) + phase_budget);
  auto room = [&]() { return static_cast<int>(ev.out.trace.size()) < stop_at; };

  std::vector<std::vector<double>> xs;
  std::vector<double> fs;
  if (!room()) return false;
  xs.push_back(start);
  fs.push_back(ev.eval(start));
  for (int i = 0; i < d; ++i) {
    if (!room()) return false;
    std::vector<double> v = start;
    v[i] += step * std::max(0.25, std::abs(start[i]));
    xs.push_back(v);
    fs.push_back(ev.eval(v));
  }

  std::vector<int> order(d + 1);
  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], second_worst = order[d - 1], worst = order[d];

    double spread = fs[worst] - fs[best];
    double diam = 0.0;
    for (int i = 0; i < d; ++i)
      for (int c = 0; c < d; ++c)
        diam = std::max(diam, std::abs(xs[order[i + 1]][c] - xs[best][c]));
    if (spread < 1e-12 || diam < 1e-9) return true;
    if (!room()) return false;

    std::vector<double> centroid(d, 0.0);
    for (int i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (int c = 0; c < d; ++c) centroid[c] += xs[i][c] / d;
    }
    auto along = [&](double t) {
      std::vector<double> v(d);
      for (int c = 0; c < d; ++c) v[c] = centroid[c] + t * (centroid[c] - xs[worst][c]);
      return v;
    };

    const std::vector<double> xr = along(1.0);
    const double fr = ev.eval(xr);
    if (fr < fs[best]) {
      if (room()) {
        const std::vector<double> xe = along(2.0);
        const double fe = ev.eval(xe);
        if (fe < fr) {
          xs[worst] = xe;
          fs[worst] = fe;
          continue;
        }
      }
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    if (!room()) return false;
    if (fr < fs[worst]) {
      const std::vector<double> xc = along(0.5);  // outside contraction
      const double fc = ev.eval(xc);
      if (fc <= fr) {
        xs[worst] = xc;
        fs[worst] = fc;
        continue;
      }
    } else {
      const std::vector<double> xc = along(-0.5);  // inside contraction
      const double fc = ev.eval(xc);
      if (fc < fs[worst]) {
        xs[worst] = xc;
        fs[worst] = fc;
        continue;
      }
    }
    // Shrink toward the best vertex.
    for (int i = 0; i <= d; ++i) {
      if (i == best) continue;
      if (!room()) return false;
      for (int c = 0; c < d; ++c) xs[i][c] = xs[best][c] + 0.5 * (xs[i][c] - xs[best][c]);
      fs[i] = ev.eval(xs[i]);
    }
  }
}

}  // namespace

SearchOutcome nelder_mead(CoeffFamily family, const Scenario& scenario, int budget,
                          std::vector<double> initial) {
  const int d = family_dim(family);
  if (budget < d + 1) throw std::invalid_argument("nelder_mead: budget below dim + 1");
  if (initial.empty()) initial = family_initial_guess(family, scenario.target);
  if (static_cast<int>(initial.size()) != d)
    throw std::invalid_argument("nelder_mead: initial guess has wrong dimension");

  const ObjectiveData data = make_objective_data(scenario);
  SearchOutcome out;
  Evaluator ev{family, data, scenario, budget, out};

  // Initial descent plus three restarts from the perturbed incumbent at
  // shrinking steps; all deterministic.
  const double steps[4] = {0.5, 0.25, 0.125, 0.0625};
  bool converged = false;
  for (int phase = 0; phase < 4 && !ev.exhausted(); ++phase) {
    const int remaining_phases = 4 - phase;
    const int phase_budget =
        (budget - static_cast<int>(out.trace.size()) + remaining_phases - 1) / remaining_phases;
    std::vector<double> start = phase == 0 ? initial : out.best_coeffs;
    if (phase > 0)
      for (int c = 0; c < d; ++c)
        start[c] += (c % 2 == 0 ? 1.0 : -1.0) * steps[phase] * std::max(0.1, std::abs(start[c]));
    converged = descend(ev, start, steps[phase], phase_budget);
  }
  out.budget_exhausted = ev.exhausted() && !converged;
  return out;
}

}  // namespace rfm
