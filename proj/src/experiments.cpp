#include "rfm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "rfm/equivalence.hpp"
#include "rfm/errors.hpp"
#include "rfm/optimizer.hpp"
#include "rfm/pool.hpp"
#include "rfm/ridge.hpp"
#include "rfm/rng.hpp"

namespace rfm {
namespace {

// Surrogate coefficients are computed at a much higher quadrature order than
// the library default so truncation error cannot leak into experiment output.
constexpr int kCoeffOrder = 512;

// Noise-stream slots reserved per replicate.  Families inside one replicate
// index into this space, so their activation noise channels never collide.
constexpr std::uint64_t kNoiseSlots = 64;

// Replicate stride in the per-stream index: cellrep = cell * stride + rep.
constexpr std::uint64_t kRepStride = 100000;

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments summarize(const std::vector<double>& xs) {
  Moments out;
  const int r = static_cast<int>(xs.size());
  if (r == 0) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / r;
  if (r > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (r - 1) / r);
  }
  return out;
}

// One grid point with everything that varies along the sweep.
struct Cell {
  int index = 0;
  std::string grid_param;
  double grid_value = 0.0;
  int m = 0;
  int k = 0;
  bool aligned = true;
  double alpha = 0.0;
  double theta_beta = 0.0;
};

// One model family evaluated inside a cell.  sigma_label names the activation
// the family derives from (so surrogates group with their source sigma).
struct FamilyEntry {
  std::string family;
  std::string sigma_label;
  Activation act;
  std::uint64_t slot = 0;
};

struct CellPlan {
  Cell cell;
  double theta = 0.0;
  std::string target_label;
  Activation target;
  std::vector<FamilyEntry> entries;
};

// Per-replicate errors for every family of a cell, plus the realized
// alignment statistic of that replicate's feature draw.
struct RepOutcome {
  std::vector<double> train;
  std::vector<double> gen;
  double eta = 0.0;
};

SignalPair draw_signals(const ExperimentConfig& cfg, const Cell& cell, std::uint64_t seed) {
  if (cell.aligned) return make_signal_pair_aligned(cfg.n, cell.alpha, seed);
  return make_signal_pair_random(cfg.n, seed);
}

double cell_theta(const ExperimentConfig& cfg, const Cell& cell) {
  return cfg.theta_c * std::pow(static_cast<double>(cfg.n), cell.theta_beta);
}

// Replicate 0's realized eta, drawn with the exact seeds the replicate itself
// will use; this picks the surrogate degree before any data-heavy work.
double probe_eta(const ExperimentConfig& cfg, const Cell& cell) {
  const std::uint64_t cr = static_cast<std::uint64_t>(cell.index) * kRepStride;
  SignalPair sig = draw_signals(cfg, cell, derive_seed(cfg.master_seed, "signals", cr));
  const double theta = cell_theta(cfg, cell);
  FeatureMatrix fm =
      sample_feature_matrix(cfg.n, cell.k, theta, derive_seed(cfg.master_seed, "features", cr));
  return compute_eta(fm.f, sig.gamma, sig.xi, theta).eta;
}

RepOutcome eval_replicate(const ExperimentConfig& cfg, const CellPlan& plan, int rep) {
  const Cell& cell = plan.cell;
  const std::uint64_t master = cfg.master_seed;
  const std::uint64_t cr = static_cast<std::uint64_t>(cell.index) * kRepStride +
                           static_cast<std::uint64_t>(rep);

  SignalPair sig = draw_signals(cfg, cell, derive_seed(master, "signals", cr));
  SpikedModel model = make_spiked_model(cfg.n, cfg.theta_c, cell.theta_beta, sig.gamma, sig.xi,
                                        plan.target);
  FeatureMatrix fm =
      sample_feature_matrix(cfg.n, cell.k, model.theta, derive_seed(master, "features", cr));
  Eigen::MatrixXd x = sample_inputs(model, cell.m, derive_seed(master, "inputs", cr));
  Eigen::VectorXd y = labels(model, x, derive_seed(master, "labels-noise", 2 * cr));
  Eigen::MatrixXd xt = sample_inputs(model, cfg.m_test, derive_seed(master, "test-inputs", cr));
  Eigen::VectorXd yt = labels(model, xt, derive_seed(master, "labels-noise", 2 * cr + 1));

  // Shared preactivations: every family sees the same X, y, F and only the
  // activation (plus its noise stream) differs.
  Eigen::MatrixXd p = x * fm.f.transpose();
  Eigen::MatrixXd pt = xt * fm.f.transpose();

  RepOutcome out;
  out.eta = compute_eta(fm.f, sig.gamma, sig.xi, model.theta).eta;
  out.train.reserve(plan.entries.size());
  out.gen.reserve(plan.entries.size());
  for (const FamilyEntry& entry : plan.entries) {
    const std::uint64_t base = (cr * kNoiseSlots + entry.slot) * 2;
    Eigen::MatrixXd r = apply(entry.act, p, derive_seed(master, "poly-noise", base));
    RidgeFit ridge = fit(r, y, cfg.lambda);
    Eigen::MatrixXd rt = apply(entry.act, pt, derive_seed(master, "poly-noise", base + 1));
    const Eigen::VectorXd resid = yt - rt * ridge.w_hat;
    out.train.push_back(ridge.training_error);
    out.gen.push_back(resid.squaredNorm() / static_cast<double>(yt.size()));
  }
  return out;
}

// Cached high-order expansion per (activation name, target) pair; poly:l=
// names resolve against the target, so the target label is part of the key.
class CoeffCache {
 public:
  const HermiteCoefficients& of(const Activation& act) {
    const std::string key = act.label;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, activation_hermite_coefficients(act, kDefaultMaxDegree, kCoeffOrder))
        .first->second;
  }

 private:
  std::map<std::string, HermiteCoefficients> cache_;
};

Activation resolve_sigma(const std::string& name, const Activation& target, CoeffCache& cache) {
  ParsedActivation parsed = parse_activation(name);
  if (!parsed.is_poly_of_target) return parsed.act;
  Activation act = equivalent_polynomial(cache.of(target), parsed.poly_l);
  act.label = name;
  return act;
}

// Grid-point plans for the curve kinds: cells = k/m ratios x targets, and per
// cell one entry triple (rfm, linear, optionally poly-l) per activation.
std::vector<CellPlan> curve_plans(const ExperimentConfig& cfg, bool with_poly) {
  CoeffCache cache;
  std::vector<CellPlan> plans;
  int index = 0;
  for (double ratio : cfg.k_over_m) {
    for (const std::string& target_name : cfg.targets) {
      Cell cell;
      cell.index = index++;
      cell.grid_param = "k_over_m";
      cell.grid_value = ratio;
      cell.m = cfg.m;
      cell.k = std::max(1, static_cast<int>(std::lround(ratio * cfg.m)));
      cell.aligned = cfg.signals == "aligned";
      cell.alpha = cfg.alpha;
      cell.theta_beta = cfg.theta_beta;

      CellPlan plan;
      plan.cell = cell;
      plan.theta = cell_theta(cfg, cell);
      plan.target = parse_activation(target_name).act;
      plan.target_label = plan.target.label;

      int degree = 0;
      if (with_poly)
        degree = recommend_degree(probe_eta(cfg, cell), cfg.n, cfg.c_threshold, cfg.l_max);

      std::uint64_t slot = 0;
      for (const std::string& act_name : cfg.activations) {
        Activation sigma = resolve_sigma(act_name, plan.target, cache);
        const HermiteCoefficients& coeffs = cache.of(sigma);
        plan.entries.push_back({"rfm", sigma.label, sigma, slot++});
        plan.entries.push_back({"linear", sigma.label, noisy_linear_surrogate(coeffs), slot++});
        if (with_poly)
          plan.entries.push_back({"poly" + std::to_string(degree), sigma.label,
                                  equivalent_polynomial(coeffs, degree), slot++});
      }
      if (plan.entries.size() > kNoiseSlots)
        throw ConfigError("too many model families per grid point");
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

// Heatmap plans: cells = beta x alpha, always aligned signals (the heatmap is
// a map over the alignment, so the configured signal mode is ignored), and
// per activation the paired (rfm, linear) entries that feed the gap table.
std::vector<CellPlan> heatmap_plans(const ExperimentConfig& cfg) {
  CoeffCache cache;
  std::vector<CellPlan> plans;
  int index = 0;
  for (double beta : cfg.beta_grid) {
    for (double alpha : cfg.alpha_grid) {
      for (const std::string& target_name : cfg.targets) {
        Cell cell;
        cell.index = index++;
        cell.grid_param = "beta";
        cell.grid_value = beta;
        cell.m = cfg.m;
        cell.k = cfg.k;
        cell.aligned = true;
        cell.alpha = alpha;
        cell.theta_beta = beta;

        CellPlan plan;
        plan.cell = cell;
        plan.theta = cell_theta(cfg, cell);
        plan.target = parse_activation(target_name).act;
        plan.target_label = plan.target.label;

        std::uint64_t slot = 0;
        for (const std::string& act_name : cfg.activations) {
          Activation sigma = resolve_sigma(act_name, plan.target, cache);
          const HermiteCoefficients& coeffs = cache.of(sigma);
          plan.entries.push_back({"rfm", sigma.label, sigma, slot++});
          plan.entries.push_back({"linear", sigma.label, noisy_linear_surrogate(coeffs), slot++});
        }
        if (plan.entries.size() > kNoiseSlots)
          throw ConfigError("too many model families per grid point");
        plans.push_back(std::move(plan));
      }
    }
  }
  return plans;
}

// Comparison plans carry no entries up front; the searched families are
// resolved inside the per-cell task (or once, in shared coefficient mode).
std::vector<Cell> comparison_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  int index = 0;
  auto base_cell = [&](const std::string& param, double value) {
    Cell cell;
    cell.index = index++;
    cell.grid_param = param;
    cell.grid_value = value;
    cell.m = cfg.m;
    cell.k = cfg.k;
    cell.aligned = cfg.signals == "aligned";
    cell.alpha = cfg.alpha;
    cell.theta_beta = cfg.theta_beta;
    return cell;
  };
  if (cfg.sweep == "m") {
    for (int m : cfg.m_grid) {
      Cell cell = base_cell("m", static_cast<double>(m));
      cell.m = m;
      cells.push_back(cell);
    }
  } else if (cfg.sweep == "alpha") {
    for (double alpha : cfg.alpha_grid) {
      Cell cell = base_cell("alpha", alpha);
      cell.aligned = true;
      cell.alpha = alpha;
      cells.push_back(cell);
    }
  } else {
    for (double beta : cfg.beta_grid) {
      Cell cell = base_cell("beta", beta);
      cell.theta_beta = beta;
      cells.push_back(cell);
    }
  }
  return cells;
}

bool family_is_searched(const std::string& family) {
  return family == "optimal_linear" || family == "optimal_cubic";
}

CoeffFamily family_enum(const std::string& family) {
  return family == "optimal_linear" ? CoeffFamily::kLinear : CoeffFamily::kCubic;
}

Activation fixed_family_activation(const std::string& family) {
  if (family == "relu") return make_relu();
  if (family == "tanh") return make_tanh();
  if (family == "softplus") return make_softplus();
  if (family == "identity") return make_identity();
  throw ConfigError("unknown model family '" + family + "'");
}

Scenario comparison_scenario(const ExperimentConfig& cfg, const Cell& cell,
                             const Activation& target, std::uint64_t scenario_index) {
  Scenario s;
  s.n = cfg.n;
  s.m = cell.m;
  s.k = cell.k;
  s.m_test = cfg.m_test;
  s.lambda = cfg.lambda;
  s.theta_c = cfg.theta_c;
  s.theta_beta = cell.theta_beta;
  s.signals = cell.aligned ? "aligned" : "random";
  s.alpha = cell.alpha;
  s.target = target;
  s.master_seed = derive_seed(cfg.master_seed, "opt-scenario", scenario_index);
  s.num_seeds = cfg.opt_seeds;
  return s;
}

void assemble_rows(const ExperimentConfig& cfg, const std::vector<CellPlan>& plans,
                   const std::vector<RepOutcome>& outcomes, RunResult* out) {
  const int reps = cfg.replicates;
  for (const CellPlan& plan : plans) {
    const Cell& cell = plan.cell;
    for (std::size_t e = 0; e < plan.entries.size(); ++e) {
      const FamilyEntry& entry = plan.entries[e];
      ResultRow row;
      row.grid_param = cell.grid_param;
      row.grid_value = cell.grid_value;
      row.family = entry.family;
      row.activation = entry.sigma_label;
      row.target = plan.target_label;
      row.n = cfg.n;
      row.m = cell.m;
      row.k = cell.k;
      row.lambda = cfg.lambda;
      row.theta = plan.theta;
      row.alpha = cell.aligned ? cell.alpha : std::nan("");
      row.replicates = reps;
      row.train_samples.reserve(reps);
      row.gen_samples.reserve(reps);
      for (int r = 0; r < reps; ++r) {
        const RepOutcome& o = outcomes[static_cast<std::size_t>(cell.index) * reps + r];
        row.train_samples.push_back(o.train[e]);
        row.gen_samples.push_back(o.gen[e]);
      }
      const Moments train = summarize(row.train_samples);
      const Moments gen = summarize(row.gen_samples);
      row.train_mean = train.mean;
      row.train_se = train.se;
      row.gen_mean = gen.mean;
      row.gen_se = gen.se;
      out->rows.push_back(std::move(row));
    }
  }
}

void run_cell_kinds(const ExperimentConfig& cfg, int threads, RunResult* out) {
  const bool heatmap = cfg.kind == "alignment_theta_heatmap";
  const bool with_poly = cfg.kind == "polynomial_equivalence_curve" ||
                         cfg.kind == "training_error_curves";
  std::vector<CellPlan> plans = heatmap ? heatmap_plans(cfg) : curve_plans(cfg, with_poly);

  const int reps = cfg.replicates;
  const int cells = static_cast<int>(plans.size());
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cells) * reps);
  parallel_indexed(cells * reps, threads, [&](int task) {
    const int cell = task / reps;
    const int rep = task % reps;
    outcomes[task] = eval_replicate(cfg, plans[cell], rep);
  });
  assemble_rows(cfg, plans, outcomes, out);

  if (!heatmap) return;

  // Paired percentage gaps per (cell, activation); entries alternate
  // rfm/linear in activation order by construction.
  for (const CellPlan& plan : plans) {
    const Cell& cell = plan.cell;
    std::vector<double> etas(reps);
    for (int r = 0; r < reps; ++r)
      etas[r] = outcomes[static_cast<std::size_t>(cell.index) * reps + r].eta;
    const Moments eta = summarize(etas);
    for (std::size_t a = 0; a + 1 < plan.entries.size(); a += 2) {
      std::vector<double> pct(reps);
      for (int r = 0; r < reps; ++r) {
        const RepOutcome& o = outcomes[static_cast<std::size_t>(cell.index) * reps + r];
        pct[r] = percentage_gap(o.gen[a], o.gen[a + 1]);
      }
      const Moments gap = summarize(pct);
      GapRow row;
      row.alpha = cell.alpha;
      row.beta = cell.theta_beta;
      row.theta = plan.theta;
      row.activation = plan.entries[a].sigma_label;
      row.pct_mean = gap.mean;
      row.pct_se = gap.se;
      row.eta_mean = eta.mean;
      row.recommended_degree = recommend_degree(eta.mean, cfg.n, cfg.c_threshold, cfg.l_max);
      row.replicates = reps;
      out->gaps.push_back(std::move(row));
    }
  }

  // Boundary locus: alignment where the typical per-feature overlap scale
  // sqrt(n E[eta_i^2]) crosses boundary_c.  With f_i ~ N(0, I/(n+theta)),
  // n E[eta_i^2] = n (1 + 2 theta a^2 + theta^2 a^2) / ((n+theta)(1+theta a^2));
  // solving for a^2 gives the closed form below.  Cells outside [0,1] or with
  // a nonpositive denominator have no crossing and report NaN.
  const double n = static_cast<double>(cfg.n);
  const double c2 = cfg.boundary_c * cfg.boundary_c;
  for (double beta : cfg.beta_grid) {
    BoundaryRow row;
    row.beta = beta;
    row.theta = cfg.theta_c * std::pow(n, beta);
    const double th = row.theta;
    const double num = c2 * (n + th) - n;
    const double den = n * (2.0 * th + th * th) - c2 * (n + th) * th;
    if (den > 0.0) {
      const double t = num / den;
      if (t >= 0.0 && t <= 1.0) row.alpha_star = std::sqrt(t);
    }
    out->boundary.push_back(row);
  }
}

void run_comparison(const ExperimentConfig& cfg, int threads, RunResult* out) {
  CoeffCache cache;
  std::vector<Cell> cells = comparison_cells(cfg);
  const Activation target = parse_activation(cfg.targets.front()).act;

  std::vector<std::string> searched;
  for (const std::string& family : cfg.families)
    if (family_is_searched(family)) searched.push_back(family);

  // Shared mode searches once against the first cell's geometry; per-point
  // mode searches inside each cell task.
  const bool shared = cfg.coefficient_mode == "shared";
  std::map<std::string, SearchOutcome> shared_coeffs;
  if (shared && !searched.empty()) {
    for (const std::string& family : searched) {
      Scenario s = comparison_scenario(cfg, cells.front(), target, 0);
      SearchOutcome found = nelder_mead(family_enum(family), s, cfg.budget);
      CoeffRow row;
      row.grid_param = "shared";
      row.grid_value = 0.0;
      row.family = family;
      row.coeffs = found.best_coeffs;
      row.objective = found.best_objective;
      row.budget_exhausted = found.budget_exhausted;
      out->coeffs.push_back(row);
      shared_coeffs.emplace(family, std::move(found));
    }
  }

  const int reps = cfg.replicates;
  const int n_cells = static_cast<int>(cells.size());
  std::vector<CellPlan> plans(n_cells);
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(n_cells) * reps);
  std::vector<CoeffRow> per_point(static_cast<std::size_t>(n_cells) * searched.size());

  parallel_indexed(n_cells, threads, [&](int c) {
    const Cell& cell = cells[c];
    CellPlan plan;
    plan.cell = cell;
    plan.theta = cell_theta(cfg, cell);
    plan.target = target;
    plan.target_label = target.label;

    std::uint64_t slot = 0;
    std::size_t searched_seen = 0;
    for (const std::string& family : cfg.families) {
      Activation act;
      if (family_is_searched(family)) {
        std::vector<double> coeffs;
        if (shared) {
          coeffs = shared_coeffs.at(family).best_coeffs;
        } else {
          Scenario s = comparison_scenario(cfg, cell, target, static_cast<std::uint64_t>(c));
          SearchOutcome found = nelder_mead(family_enum(family), s, cfg.budget);
          CoeffRow row;
          row.grid_param = cell.grid_param;
          row.grid_value = cell.grid_value;
          row.family = family;
          row.coeffs = found.best_coeffs;
          row.objective = found.best_objective;
          row.budget_exhausted = found.budget_exhausted;
          per_point[static_cast<std::size_t>(c) * searched.size() + searched_seen] = row;
          coeffs = std::move(found.best_coeffs);
        }
        ++searched_seen;
        act = family_activation(family_enum(family), coeffs);
        act.label = family;
      } else {
        act = fixed_family_activation(family);
      }
      plan.entries.push_back({family, family, std::move(act), slot++});
    }
    if (plan.entries.size() > kNoiseSlots)
      throw ConfigError("too many model families per grid point");
    plans[c] = std::move(plan);

    for (int r = 0; r < reps; ++r)
      outcomes[static_cast<std::size_t>(c) * reps + r] = eval_replicate(cfg, plans[c], r);
  });

  if (!shared)
    for (CoeffRow& row : per_point) out->coeffs.push_back(std::move(row));
  assemble_rows(cfg, plans, outcomes, out);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw ConfigError("cannot open output file " + path);
  stream << text;
  if (!stream) throw ConfigError("failed writing output file " + path);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, int threads) {
  if (threads < 1) throw ConfigError("thread count must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  if (cfg.kind == "activation_comparison")
    run_comparison(cfg, threads, &out);
  else
    run_cell_kinds(cfg, threads, &out);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string result_csv(const RunResult& result, const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment,grid_param,grid_value,family,activation,target,n,m,k,lambda,theta,alpha,"
         "replicates,train_mean,train_se,gen_mean,gen_se,seed\n";
  for (const ResultRow& row : result.rows) {
    out << cfg.kind << ',' << row.grid_param << ',' << format_double(row.grid_value) << ','
        << row.family << ',' << row.activation << ',' << row.target << ',' << row.n << ','
        << row.m << ',' << row.k << ',' << format_double(row.lambda) << ','
        << format_double(row.theta) << ',' << format_double(row.alpha) << ',' << row.replicates
        << ',' << format_double(row.train_mean) << ',' << format_double(row.train_se) << ','
        << format_double(row.gen_mean) << ',' << format_double(row.gen_se) << ','
        << cfg.master_seed << '\n';
  }
  return out.str();
}

std::string gap_csv(const RunResult& result) {
  std::ostringstream out;
  out << "alpha,beta,theta,activation,pct_gap_mean,pct_gap_se,eta_mean,recommended_degree,"
         "replicates\n";
  for (const GapRow& row : result.gaps) {
    out << format_double(row.alpha) << ',' << format_double(row.beta) << ','
        << format_double(row.theta) << ',' << row.activation << ','
        << format_double(row.pct_mean) << ',' << format_double(row.pct_se) << ','
        << format_double(row.eta_mean) << ',' << row.recommended_degree << ',' << row.replicates
        << '\n';
  }
  return out.str();
}

std::string boundary_csv(const RunResult& result) {
  std::ostringstream out;
  out << "beta,theta,alpha_star\n";
  for (const BoundaryRow& row : result.boundary) {
    out << format_double(row.beta) << ',' << format_double(row.theta) << ',';
    if (std::isfinite(row.alpha_star)) out << format_double(row.alpha_star);
    out << '\n';
  }
  return out.str();
}

std::string coeff_csv(const RunResult& result) {
  std::ostringstream out;
  out << "grid_param,grid_value,family,objective,budget_exhausted,c0,c1,c2,c3,c4\n";
  for (const CoeffRow& row : result.coeffs) {
    out << row.grid_param << ',' << format_double(row.grid_value) << ',' << row.family << ','
        << format_double(row.objective) << ',' << (row.budget_exhausted ? 1 : 0);
    for (std::size_t i = 0; i < 5; ++i) {
      out << ',';
      if (i < row.coeffs.size()) out << format_double(row.coeffs[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> write_outputs(const RunResult& result, const ExperimentConfig& cfg,
                                       const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> paths;
  const std::string main_path = out_dir + "/" + cfg.kind + ".csv";
  write_file(main_path, result_csv(result, cfg));
  paths.push_back(main_path);
  if (cfg.kind == "alignment_theta_heatmap") {
    const std::string gap_path = out_dir + "/alignment_theta_gap.csv";
    write_file(gap_path, gap_csv(result));
    paths.push_back(gap_path);
    const std::string boundary_path = out_dir + "/alignment_theta_boundary.csv";
    write_file(boundary_path, boundary_csv(result));
    paths.push_back(boundary_path);
  }
  if (cfg.kind == "activation_comparison") {
    const std::string coeff_path = out_dir + "/activation_comparison_coeffs.csv";
    write_file(coeff_path, coeff_csv(result));
    paths.push_back(coeff_path);
  }
  return paths;
}

}  // namespace rfm
