#include "rfm/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rfm/activations.hpp"
#include "rfm/errors.hpp"

namespace rfm {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Cuts a '#' comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

nlohmann::json parse_scalar(const std::string& raw, int line_no) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError("config line " + std::to_string(line_no) + ": unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    size_t pos = 0;
    if (v.find_first_of(".eE") == std::string::npos) {
      const long long iv = std::stoll(v, &pos);
      if (pos == v.size()) return iv;
    }
    pos = 0;
    const double dv = std::stod(v, &pos);
    if (pos == v.size()) return dv;
  } catch (const std::exception&) {
  }
  throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse value '" + v +
                    "'");
}

nlohmann::json parse_value(const std::string& raw, int line_no) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError("config line " + std::to_string(line_no) + ": unterminated array");
    nlohmann::json arr = nlohmann::json::array();
    std::string body = v.substr(1, v.size() - 2);
    std::string item;
    bool in_string = false;
    for (char c : body) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!trim(item).empty()) arr.push_back(parse_scalar(item, line_no));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!trim(item).empty()) arr.push_back(parse_scalar(item, line_no));
    return arr;
  }
  return parse_scalar(v, line_no);
}

}  // namespace

nlohmann::json parse_toml_subset(const std::string& text) {
  nlohmann::json out = nlohmann::json::object();
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[')
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": sections are not supported; use flat keys");
    const size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": missing key");
    if (out.contains(key))
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "'");
    out[key] = parse_value(body.substr(eq + 1), line_no);
  }
  return out;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      nlohmann::json j = nlohmann::json::parse(buf.str());
      if (!j.is_object()) throw ConfigError("config root must be an object");
      return j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
  }
  return parse_toml_subset(buf.str());
}

namespace {

const std::set<std::string> kKnownKeys = {
    "kind",        "n",         "m",          "k",           "k_over_m",
    "m_grid",      "alpha_grid", "beta_grid", "signals",     "alpha",
    "theta_c",     "theta_beta", "lambda",    "activations", "targets",
    "families",    "sweep",      "replicates", "master_seed", "l_max",
    "m_test",      "m_cov",      "budget",    "opt_seeds",   "coefficient_mode",
    "c_threshold", "boundary_c", "out"};

const std::set<std::string> kKinds = {"linear_equivalence_curve", "alignment_theta_heatmap",
                                      "polynomial_equivalence_curve", "activation_comparison",
                                      "training_error_curves"};

const std::set<std::string> kFamilies = {"optimal_linear", "optimal_cubic", "relu",
                                         "tanh",           "softplus",      "identity"};

double get_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_number(e, key));
  return out;
}

std::vector<std::string> get_string_array(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(get_string(e, key));
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKnownKeys.count(it.key()))
      throw ConfigError("unknown config key '" + it.key() + "'");

  ExperimentConfig cfg;
  if (!j.contains("kind")) throw ConfigError("config key 'kind' is required");
  cfg.kind = get_string(j.at("kind"), "kind");
  if (!kKinds.count(cfg.kind)) throw ConfigError("unknown experiment kind '" + cfg.kind + "'");

  if (j.contains("n")) cfg.n = get_int(j.at("n"), "n");
  if (j.contains("m")) cfg.m = get_int(j.at("m"), "m");
  if (j.contains("k")) cfg.k = get_int(j.at("k"), "k");
  if (j.contains("k_over_m")) cfg.k_over_m = get_number_array(j.at("k_over_m"), "k_over_m");
  if (j.contains("m_grid")) {
    cfg.m_grid.clear();
    for (double v : get_number_array(j.at("m_grid"), "m_grid")) {
      if (v < 1.0 || v != static_cast<int>(v))
        throw ConfigError("config key 'm_grid' must hold positive integers");
      cfg.m_grid.push_back(static_cast<int>(v));
    }
  }
  if (j.contains("alpha_grid")) cfg.alpha_grid = get_number_array(j.at("alpha_grid"), "alpha_grid");
  if (j.contains("beta_grid")) cfg.beta_grid = get_number_array(j.at("beta_grid"), "beta_grid");
  if (j.contains("signals")) cfg.signals = get_string(j.at("signals"), "signals");
  if (j.contains("alpha")) cfg.alpha = get_number(j.at("alpha"), "alpha");
  if (j.contains("theta_c")) cfg.theta_c = get_number(j.at("theta_c"), "theta_c");
  if (j.contains("theta_beta")) cfg.theta_beta = get_number(j.at("theta_beta"), "theta_beta");
  if (j.contains("lambda")) cfg.lambda = get_number(j.at("lambda"), "lambda");
  if (j.contains("activations"))
    cfg.activations = get_string_array(j.at("activations"), "activations");
  if (j.contains("targets")) cfg.targets = get_string_array(j.at("targets"), "targets");
  if (j.contains("families")) cfg.families = get_string_array(j.at("families"), "families");
  if (j.contains("sweep")) cfg.sweep = get_string(j.at("sweep"), "sweep");
  if (j.contains("replicates")) cfg.replicates = get_int(j.at("replicates"), "replicates");
  if (j.contains("master_seed")) {
    const auto& v = j.at("master_seed");
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError("config key 'master_seed' must be a nonnegative integer");
    cfg.master_seed = v.get<std::uint64_t>();
  }
  if (j.contains("l_max")) cfg.l_max = get_int(j.at("l_max"), "l_max");
  if (j.contains("m_test")) cfg.m_test = get_int(j.at("m_test"), "m_test");
  if (j.contains("m_cov")) cfg.m_cov = get_int(j.at("m_cov"), "m_cov");
  if (j.contains("budget")) cfg.budget = get_int(j.at("budget"), "budget");
  if (j.contains("opt_seeds")) cfg.opt_seeds = get_int(j.at("opt_seeds"), "opt_seeds");
  if (j.contains("coefficient_mode"))
    cfg.coefficient_mode = get_string(j.at("coefficient_mode"), "coefficient_mode");
  if (j.contains("c_threshold")) cfg.c_threshold = get_number(j.at("c_threshold"), "c_threshold");
  if (j.contains("boundary_c")) cfg.boundary_c = get_number(j.at("boundary_c"), "boundary_c");
  if (j.contains("out")) cfg.out = get_string(j.at("out"), "out");

  // Range checks shared by every kind.
  if (cfg.n < 2) throw ConfigError("config: n must be >= 2");
  if (cfg.m < 1) throw ConfigError("config: m must be >= 1");
  if (cfg.k < 0) throw ConfigError("config: k must be >= 0");
  if (cfg.replicates < 1) throw ConfigError("config: replicates must be >= 1");
  if (cfg.lambda <= 0.0) throw ConfigError("config: lambda must be > 0");
  if (cfg.theta_c < 0.0) throw ConfigError("config: theta_c must be >= 0");
  if (cfg.theta_beta < 0.0 || cfg.theta_beta > 0.5)
    throw ConfigError("config: theta_beta must lie in [0, 0.5]");
  if (cfg.signals != "aligned" && cfg.signals != "random")
    throw ConfigError("config: signals must be 'aligned' or 'random'");
  if (std::abs(cfg.alpha) > 1.0) throw ConfigError("config: alpha must lie in [-1, 1]");
  if (cfg.l_max < 2) throw ConfigError("config: l_max must be >= 2");
  if (cfg.m_test < 1) throw ConfigError("config: m_test must be >= 1");
  if (cfg.m_cov < 0) throw ConfigError("config: m_cov must be >= 0");
  if (cfg.budget < 1) throw ConfigError("config: budget must be >= 1");
  if (cfg.opt_seeds < 1) throw ConfigError("config: opt_seeds must be >= 1");
  if (cfg.c_threshold <= 0.0) throw ConfigError("config: c_threshold must be > 0");
  if (cfg.boundary_c <= 0.0) throw ConfigError("config: boundary_c must be > 0");
  if (cfg.coefficient_mode != "per-point" && cfg.coefficient_mode != "shared")
    throw ConfigError("config: coefficient_mode must be 'per-point' or 'shared'");
  for (double r : cfg.k_over_m)
    if (r <= 0.0) throw ConfigError("config: k_over_m entries must be > 0");
  for (double a : cfg.alpha_grid)
    if (a < 0.0 || a > 1.0) throw ConfigError("config: alpha_grid entries must lie in [0, 1]");
  for (double b : cfg.beta_grid)
    if (b < 0.0 || b > 0.5) throw ConfigError("config: beta_grid entries must lie in [0, 0.5]");
  if (cfg.activations.empty()) throw ConfigError("config: activations must not be empty");
  if (cfg.targets.empty()) throw ConfigError("config: targets must not be empty");
  for (const std::string& name : cfg.activations) parse_activation(name);
  for (const std::string& name : cfg.targets) {
    ParsedActivation parsed = parse_activation(name);
    if (parsed.is_poly_of_target)
      throw ConfigError("config: target '" + name + "' cannot be poly:l= (self reference)");
  }

  if (cfg.kind == "activation_comparison") {
    if (cfg.sweep != "m" && cfg.sweep != "alpha" && cfg.sweep != "beta")
      throw ConfigError("config: sweep must be one of m, alpha, beta");
    if (cfg.families.empty())
      cfg.families = {"optimal_linear", "optimal_cubic", "relu", "softplus"};
    for (const std::string& fam : cfg.families)
      if (!kFamilies.count(fam)) throw ConfigError("config: unknown family '" + fam + "'");
    if (cfg.sweep == "m" && cfg.m_grid.empty())
      cfg.m_grid = {125, 250, 500, 1000};
    if (cfg.sweep == "alpha" && cfg.alpha_grid.empty())
      cfg.alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    if (cfg.sweep == "beta" && cfg.beta_grid.empty())
      cfg.beta_grid = {0.0, 0.125, 0.25, 0.375, 0.5};
    if (cfg.k == 0) cfg.k = 250;
  } else if (cfg.kind == "alignment_theta_heatmap") {
    if (cfg.alpha_grid.empty())
      for (int i = 0; i <= 10; ++i) cfg.alpha_grid.push_back(0.1 * i);
    if (cfg.beta_grid.empty())
      for (int i = 0; i <= 10; ++i) cfg.beta_grid.push_back(0.05 * i);
    if (cfg.k == 0) cfg.k = cfg.m;
  } else {
    if (cfg.k_over_m.empty()) cfg.k_over_m = {0.25, 0.5, 1.0, 2.0, 4.0};
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return config_from_json(load_config_file(path));
}

}  // namespace rfm
