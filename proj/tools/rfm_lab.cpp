// Command line front end: run configured experiments, print equivalence
// diagnostics for one scenario, search activation coefficients, or dump
// Hermite expansion data.  Exit codes: 0 success, 2 bad configuration,
// 3 numerical failure.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfm/config.hpp"
#include "rfm/datagen.hpp"
#include "rfm/equivalence.hpp"
#include "rfm/errors.hpp"
#include "rfm/experiments.hpp"
#include "rfm/optimizer.hpp"
#include "rfm/rng.hpp"

namespace {

using namespace rfm;

// Shared scenario flags for diagnose/optimize; mirrors the config defaults.
struct ScenarioArgs {
  int n = 200;
  int m = 250;
  int k = 250;
  int m_test = 2500;
  double lambda = 1e-2;
  double theta_c = 1.0;
  double theta_beta = 0.5;
  std::string signals = "aligned";
  double alpha = 1.0;
  std::string target = "relu";
  std::uint64_t seed = 1;
};

void add_scenario_flags(CLI::App* cmd, ScenarioArgs* args, bool with_fit_dims) {
  cmd->add_option("--n", args->n, "input dimension")->check(CLI::Range(2, 1 << 20));
  if (with_fit_dims) {
    cmd->add_option("--m", args->m, "training samples")->check(CLI::PositiveNumber);
    cmd->add_option("--m-test", args->m_test, "held-out samples")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", args->lambda, "ridge penalty")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--k", args->k, "feature count")->check(CLI::PositiveNumber);
  cmd->add_option("--theta-c", args->theta_c, "spike strength constant c in theta = c n^beta")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--theta-beta", args->theta_beta, "spike exponent beta in [0, 0.5]")
      ->check(CLI::Range(0.0, 0.5));
  cmd->add_option("--signals", args->signals, "aligned | random")
      ->check(CLI::IsMember({"aligned", "random"}));
  cmd->add_option("--alpha", args->alpha, "signal overlap (aligned mode)")
      ->check(CLI::Range(-1.0, 1.0));
  cmd->add_option("--target", args->target, "label nonlinearity sigma_*");
  cmd->add_option("--seed", args->seed, "master seed");
}

Activation resolve_named(const std::string& name, const Activation& target) {
  ParsedActivation parsed = parse_activation(name);
  if (!parsed.is_poly_of_target) return parsed.act;
  Activation act = equivalent_polynomial(
      activation_hermite_coefficients(target, kDefaultMaxDegree, 512), parsed.poly_l);
  act.label = name;
  return act;
}

int cmd_run(const std::string& config_path, std::string out_dir, int threads,
            const std::optional<std::uint64_t>& seed_override) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed_override) cfg.master_seed = *seed_override;
  if (out_dir.empty()) out_dir = cfg.out.empty() ? "runs" : cfg.out;

  RunResult result = run_experiment(cfg, threads);
  std::vector<std::string> paths = write_outputs(result, cfg, out_dir);
  for (const std::string& path : paths) std::cout << "wrote " << path << "\n";
  std::cout << "rows " << result.rows.size() << "\n";
  std::cout << "wall_seconds " << format_double(result.wall_seconds) << "\n";
  return 0;
}

int cmd_diagnose(const ScenarioArgs& args, const std::string& sigma_name, int m_cov, int terms) {
  const std::uint64_t master = args.seed;
  SignalPair sig = args.signals == "random"
                       ? make_signal_pair_random(args.n, derive_seed(master, "signals", 0))
                       : make_signal_pair_aligned(args.n, args.alpha,
                                                  derive_seed(master, "signals", 0));
  Activation target = parse_activation(args.target).act;
  SpikedModel model =
      make_spiked_model(args.n, args.theta_c, args.theta_beta, sig.gamma, sig.xi, target);
  Activation sigma = resolve_named(sigma_name, target);
  FeatureMatrix fm = sample_feature_matrix(args.n, args.k, model.theta,
                                           derive_seed(master, "features", 0));

  EtaReport eta = compute_eta(fm.f, sig.gamma, sig.xi, model.theta);
  AdmissibilityStats stats = admissibility_stats(fm.f, sig.gamma, model.theta);
  HermiteCoefficients coeffs = activation_hermite_coefficients(sigma, kDefaultMaxDegree, 512);
  HermiteCoefficients coeffs_target =
      activation_hermite_coefficients(target, kDefaultMaxDegree, 512);

  const int samples = m_cov > 0 ? m_cov : 20000;
  const double mu0 = coeffs.mu[0];
  const double mu1 = coeffs.mu[1];
  const double mu_star = coeffs.residual(2);
  Eigen::MatrixXd emp = empirical_feature_covariance(model, sigma, fm.f, samples,
                                                     derive_seed(master, "inputs", 0),
                                                     derive_seed(master, "poly-noise", 0));
  Eigen::MatrixXd surrogate =
      noisy_linear_second_moment(fm.f, model.theta, sig.gamma, mu0, mu1, mu_star);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(emp - surrogate);
  const double gap = svd.singularValues()(0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_ref(surrogate);
  const double scale = svd_ref.singularValues()(0);

  // Monte Carlo cross moments E[sigma(f_i . x) y] against the closed form.
  Eigen::MatrixXd x = sample_inputs(model, samples, derive_seed(master, "test-inputs", 0));
  Eigen::VectorXd y = labels(model, x, derive_seed(master, "labels-noise", 0));
  Eigen::MatrixXd r = apply(sigma, x * fm.f.transpose(), derive_seed(master, "poly-noise", 1));
  Eigen::VectorXd mc = r.transpose() * y / samples;
  Eigen::VectorXd second = r.array().square().matrix().transpose() *
                           y.array().square().matrix() / samples;
  Eigen::VectorXd se =
      ((second.array() - mc.array().square()).max(0.0) / samples).sqrt().matrix();
  Eigen::VectorXd closed = cross_covariance_closed_form(coeffs, coeffs_target, eta.eta_i, terms);
  Eigen::VectorXd resid = (mc - closed).cwiseAbs();
  double max_z = 0.0;
  for (int i = 0; i < resid.size(); ++i)
    if (se(i) > 0.0) max_z = std::max(max_z, resid(i) / se(i));

  std::cout << "metric,value\n";
  std::cout << "theta," << format_double(model.theta) << "\n";
  std::cout << "alpha," << format_double(model.alpha) << "\n";
  std::cout << "eta," << format_double(eta.eta) << "\n";
  std::cout << "eta_sqrt_n," << format_double(eta.eta * std::sqrt(double(args.n))) << "\n";
  std::cout << "recommended_degree," << recommend_degree(eta.eta, args.n) << "\n";
  std::cout << "feature_max_offdiag," << format_double(stats.max_offdiag) << "\n";
  std::cout << "feature_max_diag_dev," << format_double(stats.max_diag_dev) << "\n";
  std::cout << "cov_samples," << samples << "\n";
  std::cout << "cov_spectral_gap," << format_double(gap) << "\n";
  std::cout << "cov_relative_gap," << format_double(gap / scale) << "\n";
  std::cout << "cross_cov_terms," << terms << "\n";
  std::cout << "cross_cov_max_abs_residual," << format_double(resid.maxCoeff()) << "\n";
  std::cout << "cross_cov_rms_residual,"
            << format_double(std::sqrt(resid.squaredNorm() / resid.size())) << "\n";
  std::cout << "cross_cov_max_z," << format_double(max_z) << "\n";
  return 0;
}

int cmd_optimize(const ScenarioArgs& args, const std::string& family_name, int budget,
                 int num_seeds, const std::string& trace_path) {
  Scenario scenario;
  scenario.n = args.n;
  scenario.m = args.m;
  scenario.k = args.k;
  scenario.m_test = args.m_test;
  scenario.lambda = args.lambda;
  scenario.theta_c = args.theta_c;
  scenario.theta_beta = args.theta_beta;
  scenario.signals = args.signals;
  scenario.alpha = args.alpha;
  scenario.target = parse_activation(args.target).act;
  scenario.master_seed = args.seed;
  scenario.num_seeds = num_seeds;

  const CoeffFamily family =
      family_name == "linear" ? CoeffFamily::kLinear : CoeffFamily::kCubic;
  SearchOutcome outcome = nelder_mead(family, scenario, budget);

  std::cout << "metric,value\n";
  std::cout << "family," << family_name << "\n";
  std::cout << "best_objective," << format_double(outcome.best_objective) << "\n";
  std::cout << "evaluations," << outcome.trace.size() << "\n";
  std::cout << "budget_exhausted," << (outcome.budget_exhausted ? 1 : 0) << "\n";
  for (std::size_t i = 0; i < outcome.best_coeffs.size(); ++i)
    std::cout << "c" << i << "," << format_double(outcome.best_coeffs[i]) << "\n";

  if (!trace_path.empty()) {
    std::ofstream trace(trace_path, std::ios::binary);
    if (!trace) throw ConfigError("cannot open trace file " + trace_path);
    trace << "eval,value,best\n";
    for (const TraceEntry& entry : outcome.trace)
      trace << entry.eval << ',' << format_double(entry.value) << ','
            << format_double(entry.best) << '\n';
    std::cout << "trace," << trace_path << "\n";
  }
  return 0;
}

int cmd_hermite(const std::string& sigma_name, const std::string& target_name, int max_degree,
                int order) {
  Activation target = parse_activation(target_name).act;
  Activation sigma = resolve_named(sigma_name, target);
  HermiteCoefficients coeffs = activation_hermite_coefficients(sigma, max_degree, order);
  std::cout << "quantity,index,value\n";
  std::cout << "second_moment,," << format_double(coeffs.second_moment) << "\n";
  for (std::size_t j = 0; j < coeffs.mu.size(); ++j)
    std::cout << "mu," << j << "," << format_double(coeffs.mu[j]) << "\n";
  for (int l = 1; l <= coeffs.max_degree() + 1; ++l)
    std::cout << "residual_noise," << l << "," << format_double(coeffs.residual(l)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random feature equivalence lab"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
  CLI::App* run = app.add_subcommand("run", "execute a configured experiment");
  run->add_option("--config", config_path, "TOML or JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (default: config 'out' or ./runs)");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed_override, "override the config master seed");

  // diagnose
  ScenarioArgs diag_args;
  std::string diag_sigma = "relu";
  int m_cov = 0;
  int terms = 4;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "alignment and surrogate diagnostics for one scenario");
  add_scenario_flags(diagnose, &diag_args, false);
  diagnose->add_option("--activation", diag_sigma, "feature nonlinearity sigma");
  diagnose->add_option("--m-cov", m_cov, "Monte Carlo samples (0 = 20000)")
      ->check(CLI::NonNegativeNumber);
  diagnose->add_option("--terms", terms, "cross-moment expansion terms")
      ->check(CLI::PositiveNumber);

  // optimize
  ScenarioArgs opt_args;
  std::string family_name = "cubic";
  int budget = 300;
  int num_seeds = 8;
  std::string trace_path;
  CLI::App* optimize = app.add_subcommand("optimize", "search activation coefficients");
  add_scenario_flags(optimize, &opt_args, true);
  optimize->add_option("--family", family_name, "linear | cubic")
      ->check(CLI::IsMember({"linear", "cubic"}));
  optimize->add_option("--budget", budget, "objective evaluation budget")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--opt-seeds", num_seeds, "seeds averaged in the objective")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--trace-out", trace_path, "write the evaluation trace CSV here");

  // hermite-coeffs
  std::string hermite_sigma = "relu";
  std::string hermite_target = "relu";
  int hermite_degree = kDefaultMaxDegree;
  int hermite_order = 512;
  CLI::App* hermite = app.add_subcommand("hermite-coeffs", "print expansion data for sigma");
  hermite->add_option("--activation", hermite_sigma, "nonlinearity to expand");
  hermite->add_option("--target", hermite_target, "target resolving poly:l= names");
  hermite->add_option("--degree", hermite_degree, "highest coefficient degree")
      ->check(CLI::Range(1, 16));
  hermite->add_option("--order", hermite_order, "quadrature order")->check(CLI::Range(8, 4096));

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, out_dir, threads, seed_override);
    if (diagnose->parsed()) return cmd_diagnose(diag_args, diag_sigma, m_cov, terms);
    if (optimize->parsed()) return cmd_optimize(opt_args, family_name, budget, num_seeds,
                                                trace_path);
    if (hermite->parsed())
      return cmd_hermite(hermite_sigma, hermite_target, hermite_degree, hermite_order);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const rfm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rfm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
