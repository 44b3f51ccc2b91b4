#include <fstream>

#include "cpomdp/harness.hpp"

namespace cpomdp::harness {

namespace {

double num(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw std::invalid_argument("config: '" + key + "' must be a number");
  return v.get<double>();
}

long integer(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw std::invalid_argument("config: '" + key + "' must be an integer");
  return v.get<long>();
}

bool boolean(const nlohmann::json& v, const std::string& key) {
  if (!v.is_boolean()) throw std::invalid_argument("config: '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string text(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw std::invalid_argument("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

PlannerConfig planner_from_json(const nlohmann::json& j) {
  PlannerConfig pc;
  if (!j.is_object()) throw std::invalid_argument("config: 'planner' must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "sims") pc.sims = static_cast<int>(integer(val, key));
    else if (key == "max_depth") pc.max_depth = static_cast<int>(integer(val, key));
    else if (key == "kappa") pc.kappa = num(val, key);
    else if (key == "nu") pc.nu = num(val, key);
    else if (key == "lambda0") {
      if (val.is_number()) pc.lambda0 = {val.get<double>()};
      else if (val.is_array()) pc.lambda0 = val.get<std::vector<double>>();
      else throw std::invalid_argument("config: 'lambda0' must be a number or array");
    } else if (key == "lambda_max") pc.lambda_max = num(val, key);
    else if (key == "alpha_c") pc.alpha.c = num(val, key);
    else if (key == "alpha_exponent") pc.alpha.exponent = num(val, key);
    else if (key == "n_init") pc.init.n_init = integer(val, key);
    else if (key == "q_r_init") pc.init.q_r_init = num(val, key);
    else if (key == "q_c_init") pc.init.q_c_init = num(val, key);
    else if (key == "c_bar_init") pc.init.c_bar_init = num(val, key);
    else if (key == "reuse_tree") pc.reuse_tree = boolean(val, key);
    else throw std::invalid_argument("config: unknown planner key '" + key + "'");
  }
  return pc;
}

WideningConfig widening_from_json(const nlohmann::json& j) {
  WideningConfig wc;
  if (!j.is_object()) throw std::invalid_argument("config: 'widening' must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "k_obs") wc.k_obs = num(val, key);
    else if (key == "alpha_obs") wc.alpha_obs = num(val, key);
    else if (key == "k_act") wc.k_act = num(val, key);
    else if (key == "alpha_act") wc.alpha_act = num(val, key);
    else if (key == "action_widening") wc.enable_action_widening = boolean(val, key);
    else throw std::invalid_argument("config: unknown widening key '" + key + "'");
  }
  return wc;
}

}  // namespace

EnvKind parse_env(const std::string& name) {
  if (name == "toy_chain") return EnvKind::toy_chain;
  if (name == "tiger") return EnvKind::tiger;
  if (name == "lightdark") return EnvKind::lightdark;
  throw std::invalid_argument("unknown environment '" + name +
                              "' (expected toy_chain | tiger | lightdark)");
}

SolverKind parse_solver(const std::string& name) {
  if (name == "ccpomcp") return SolverKind::ccpomcp;
  if (name == "ccpomcp+") return SolverKind::ccpomcp_plus;
  if (name == "cpomcpow") return SolverKind::cpomcpow;
  if (name == "cpomcpow+") return SolverKind::cpomcpow_plus;
  throw std::invalid_argument("unknown solver '" + name +
                              "' (expected ccpomcp | ccpomcp+ | cpomcpow | cpomcpow+)");
}

std::string to_string(EnvKind env) {
  switch (env) {
    case EnvKind::toy_chain: return "toy_chain";
    case EnvKind::tiger: return "tiger";
    case EnvKind::lightdark: return "lightdark";
  }
  return "?";
}

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::ccpomcp: return "ccpomcp";
    case SolverKind::ccpomcp_plus: return "ccpomcp+";
    case SolverKind::cpomcpow: return "cpomcpow";
    case SolverKind::cpomcpow_plus: return "cpomcpow+";
  }
  return "?";
}

bool solver_local_duals(SolverKind solver) {
  return solver == SolverKind::ccpomcp_plus || solver == SolverKind::cpomcpow_plus;
}

bool solver_widens(SolverKind solver) {
  return solver == SolverKind::cpomcpow || solver == SolverKind::cpomcpow_plus;
}

void ExperimentConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("config: episodes must be >= 1");
  if (max_steps < 1) throw std::invalid_argument("config: max_steps must be >= 1");
  if (root_particles < 1) throw std::invalid_argument("config: root_particles must be >= 1");
  if (dump_depth < 0) throw std::invalid_argument("config: dump_depth must be >= 0");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (!env_overrides.is_object()) throw std::invalid_argument("config: env_overrides must be an object");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: root must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, val] : j.items()) {
    if (key == "env") cfg.env = parse_env(text(val, key));
    else if (key == "env_overrides") cfg.env_overrides = val;
    else if (key == "solver") cfg.solver = parse_solver(text(val, key));
    else if (key == "planner") cfg.planner = planner_from_json(val);
    else if (key == "widening") cfg.widening = widening_from_json(val);
    else if (key == "episodes") cfg.episodes = static_cast<int>(integer(val, key));
    else if (key == "max_steps") cfg.max_steps = static_cast<int>(integer(val, key));
    else if (key == "base_seed") cfg.base_seed = static_cast<std::uint64_t>(integer(val, key));
    else if (key == "root_particles") cfg.root_particles = static_cast<int>(integer(val, key));
    else if (key == "greedy_execution") cfg.greedy_execution = boolean(val, key);
    else if (key == "threads") cfg.threads = static_cast<int>(integer(val, key));
    else if (key == "out_csv") cfg.out_csv = text(val, key);
    else if (key == "out_summary") cfg.out_summary = text(val, key);
    else if (key == "dump_tree") cfg.dump_tree = text(val, key);
    else if (key == "dump_depth") cfg.dump_depth = static_cast<int>(integer(val, key));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

envs::ToyChainSpec toy_chain_spec_from(const nlohmann::json& overrides) {
  envs::ToyChainSpec s;
  for (const auto& [key, val] : overrides.items()) {
    if (key == "reward_cautious") s.reward_cautious = num(val, key);
    else if (key == "reward_risky") s.reward_risky = num(val, key);
    else if (key == "reward_safe") s.reward_safe = num(val, key);
    else if (key == "cost_cautious") s.cost_cautious = num(val, key);
    else if (key == "cost_risky") s.cost_risky = num(val, key);
    else if (key == "cost_safe") s.cost_safe = num(val, key);
    else if (key == "budget") s.budget = num(val, key);
    else if (key == "gamma") s.gamma = num(val, key);
    else throw std::invalid_argument("toy_chain override: unknown key '" + key + "'");
  }
  return s;
}

envs::TigerSpec tiger_spec_from(const nlohmann::json& overrides) {
  envs::TigerSpec s;
  for (const auto& [key, val] : overrides.items()) {
    if (key == "listen_accuracy") s.listen_accuracy = num(val, key);
    else if (key == "reward_correct") s.reward_correct = num(val, key);
    else if (key == "reward_wrong") s.reward_wrong = num(val, key);
    else if (key == "reward_listen") s.reward_listen = num(val, key);
    else if (key == "cost_open_tiger") s.cost_open_tiger = num(val, key);
    else if (key == "cost_open_safe") s.cost_open_safe = num(val, key);
    else if (key == "cost_listen") s.cost_listen = num(val, key);
    else if (key == "gamma") s.gamma = num(val, key);
    else if (key == "budget") s.budget = num(val, key);
    else if (key == "reset_after_open") s.reset_after_open = boolean(val, key);
    else throw std::invalid_argument("tiger override: unknown key '" + key + "'");
  }
  return s;
}

envs::LightDarkSpec lightdark_spec_from(const nlohmann::json& overrides) {
  envs::LightDarkSpec s;
  for (const auto& [key, val] : overrides.items()) {
    if (key == "belief_mean") s.belief_mean = num(val, key);
    else if (key == "belief_std") s.belief_std = num(val, key);
    else if (key == "light") s.light = num(val, key);
    else if (key == "sigma_min") s.sigma_min = num(val, key);
    else if (key == "action_deltas") {
      if (!val.is_array()) throw std::invalid_argument("config: 'action_deltas' must be an array");
      s.action_deltas = val.get<std::vector<double>>();
    } else if (key == "goal_reward") s.goal_reward = num(val, key);
    else if (key == "miss_penalty") s.miss_penalty = num(val, key);
    else if (key == "step_penalty") s.step_penalty = num(val, key);
    else if (key == "goal_radius") s.goal_radius = num(val, key);
    else if (key == "cost_threshold") s.cost_threshold = num(val, key);
    else if (key == "region_cost") s.region_cost = num(val, key);
    else if (key == "gamma") s.gamma = num(val, key);
    else if (key == "budget") s.budget = num(val, key);
    else throw std::invalid_argument("lightdark override: unknown key '" + key + "'");
  }
  return s;
}

}  // namespace cpomdp::harness
