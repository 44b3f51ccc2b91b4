#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cpomdp/envs/lightdark.hpp"
#include "cpomdp/envs/tiger.hpp"
#include "cpomdp/envs/toy_chain.hpp"
#include "cpomdp/solver.hpp"
#include "cpomdp/stats.hpp"
#include "cpomdp/trajectory.hpp"

namespace cpomdp::harness {

enum class EnvKind { toy_chain, tiger, lightdark };
enum class SolverKind { ccpomcp, ccpomcp_plus, cpomcpow, cpomcpow_plus };

EnvKind parse_env(const std::string& name);
SolverKind parse_solver(const std::string& name);
std::string to_string(EnvKind env);
std::string to_string(SolverKind solver);

// The "+" variants run per-history local duals; the POW family adds widening.
bool solver_local_duals(SolverKind solver);
bool solver_widens(SolverKind solver);

struct ExperimentConfig {
  EnvKind env = EnvKind::tiger;
  nlohmann::json env_overrides = nlohmann::json::object();
  SolverKind solver = SolverKind::ccpomcp_plus;
  PlannerConfig planner;
  WideningConfig widening;
  int episodes = 100;
  int max_steps = 20;
  std::uint64_t base_seed = 1;
  int root_particles = 10000;   // bootstrap-filter size between steps
  bool greedy_execution = false;  // argmax of the root policy instead of sampling
  int threads = 0;              // OpenMP team size; 0 = library default, 1 = serial path
  std::string out_csv;
  std::string out_summary;
  std::string dump_tree;        // path prefix; writes <prefix>.json and <prefix>.dot
  int dump_depth = 3;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct EpisodeResult {
  std::uint64_t seed = 0;
  double v_r = 0.0;             // discounted return
  CostVec v_c;                  // discounted cost
  bool violated = false;
  int steps = 0;
  bool failed = false;
  std::string error;
  std::vector<RootActionStat> first_root_actions;  // root stats of the first plan
  std::vector<double> first_root_lambda;
  int first_action = -1;
  // Per-action share of root visits summed over every planning call of the
  // episode (the search-query allocation, not just the first plan's).
  std::vector<double> search_visit_fraction;
  // Budget bookkeeping: realized discounted mean-cost (resp. realized cost)
  // plus the discount-scaled final remaining budget. The first telescopes back
  // to the initial budget exactly; the second differs by the c_bar estimation
  // error and is logged so the gap can be tested against sampling noise.
  double telescope_cbar = 0.0;
  double telescope_realized = 0.0;
};

struct MetricsTable {
  std::string solver;
  std::string env;
  long episodes = 0;  // completed episodes (failed ones excluded from the stats)
  long failed = 0;
  double mean_return = 0.0;
  double se_return = 0.0;
  double mean_cost = 0.0;  // first cost dimension
  double se_cost = 0.0;
  double violation_pct = 0.0;
  double mean_root_lambda = 0.0;  // first dual dimension, first plan of each episode
  std::vector<std::string> action_names;
  std::vector<double> mean_visit_fraction;   // first-plan root visit fraction per action
  std::vector<double> mean_search_fraction;  // all-plans root visit fraction per action
  std::vector<double> exec_frequency;        // first executed action frequency per action

  nlohmann::json to_json() const;
};

struct ExperimentOutput {
  std::vector<EpisodeResult> episodes;
  MetricsTable table;
  nlohmann::json first_tree_json;  // first plan of episode 0
  std::string first_tree_dot;
};

MetricsTable aggregate(const std::vector<EpisodeResult>& episodes,
                       const std::vector<std::string>& action_names, const std::string& solver,
                       const std::string& env);

void write_episode_csv(const std::string& path, const std::vector<EpisodeResult>& episodes,
                       std::size_t num_costs);
std::vector<EpisodeResult> read_episode_csv(const std::string& path);
void write_summary_json(const std::string& path, const MetricsTable& table);
void write_text_file(const std::string& path, const std::string& text);
std::string format_table(const MetricsTable& table);

// Environment specs with config overrides applied on top of defaults.
// Unknown override keys are errors.
envs::ToyChainSpec toy_chain_spec_from(const nlohmann::json& overrides);
envs::TigerSpec tiger_spec_from(const nlohmann::json& overrides);
envs::LightDarkSpec lightdark_spec_from(const nlohmann::json& overrides);

// Runs the configured experiment on the configured environment.
MetricsTable run_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_experiment_full(const ExperimentConfig& cfg);

namespace detail {

struct TreeDump {
  nlohmann::json json;
  std::string dot;
};

constexpr std::uint32_t kEnvStream = 0x656e7600u;
constexpr std::uint32_t kPlanStream = 0x706c6e00u;
constexpr std::uint32_t kBeliefStream = 0x626c6600u;

inline int greedy_action(const ActionDistribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i)
    if (dist[i].second > dist[best].second) best = i;
  return dist[best].first;
}

template <class S, class O>
LagrangianMctsPlanner<S, O> make_planner(const CpomdpModel<S, O>& model,
                                         const ExperimentConfig& cfg) {
  PlannerConfig pc = cfg.planner;
  pc.local_duals = solver_local_duals(cfg.solver);
  std::optional<WideningConfig> wc;
  if (solver_widens(cfg.solver)) wc = cfg.widening;
  return LagrangianMctsPlanner<S, O>(model, pc, wc);
}

template <class S, class O>
EpisodeResult run_episode(const CpomdpModel<S, O>& model, const ExperimentConfig& cfg,
                          std::uint64_t seed, TreeDump* dump) {
  EpisodeResult out;
  out.seed = seed;
  out.v_c = zero_costs(model.num_costs());
  const double gamma = model.discount();
  double disc = 1.0;
  double cbar_sum = 0.0;
  CostVec budget = model.cost_budget();
  try {
    Rng env_rng = make_stream(seed, kEnvStream);
    Rng plan_rng = make_stream(seed, kPlanStream);
    Rng belief_rng = make_stream(seed, kBeliefStream);
    auto planner = make_planner(model, cfg);
    std::unique_ptr<Belief<S>> belief = model.initial_belief();
    S s = belief->sample(env_rng);
    std::vector<double> search_counts(static_cast<std::size_t>(model.num_actions()), 0.0);

    for (int t = 0; t < cfg.max_steps && !model.is_terminal(s); ++t) {
      PlanResult pr = planner.plan(*belief, budget, plan_rng);
      for (const RootActionStat& st : pr.root_actions)
        search_counts[static_cast<std::size_t>(st.action)] += static_cast<double>(st.visits);
      int a = cfg.greedy_execution ? greedy_action(pr.policy) : pr.chosen_action;
      if (t == 0) {
        out.first_root_actions = pr.root_actions;
        out.first_root_lambda = pr.root_lambda;
        out.first_action = a;
        if (dump != nullptr) {
          dump->json = planner.dump_tree_json(cfg.dump_depth);
          dump->dot = planner.dump_tree_dot(cfg.dump_depth);
        }
      }
      StepResult<S, O> st = model.step(s, a, env_rng);
      out.v_r += disc * st.reward;
      add_scaled(out.v_c, st.cost, disc);
      cbar_sum += disc * pr.c_bar_for(a)[0];
      CostVec next_budget = propagate_budget(budget, pr.c_bar_for(a), gamma);
      out.steps += 1;
      planner.advance_root(a, st.obs);
      if (!model.is_terminal(st.next) && out.steps < cfg.max_steps)
        belief = model.update_belief(*belief, a, st.obs, cfg.root_particles, belief_rng);
      budget = std::move(next_budget);
      disc *= gamma;
      s = std::move(st.next);
    }
    out.violated = violates_budget(out.v_c, model.cost_budget());
    double total = 0.0;
    for (double c : search_counts) total += c;
    if (total > 0.0) {
      out.search_visit_fraction.resize(search_counts.size());
      for (std::size_t i = 0; i < search_counts.size(); ++i)
        out.search_visit_fraction[i] = search_counts[i] / total;
    }
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  out.telescope_cbar = cbar_sum + disc * budget[0];
  out.telescope_realized = out.v_c[0] + disc * budget[0];
  return out;
}

}  // namespace detail

// Serial reference episode loop.
template <class S, class O>
std::vector<EpisodeResult> run_episodes_serial(const CpomdpModel<S, O>& model,
                                               const ExperimentConfig& cfg,
                                               detail::TreeDump* dump = nullptr) {
  std::vector<EpisodeResult> out(static_cast<std::size_t>(cfg.episodes));
  for (int i = 0; i < cfg.episodes; ++i)
    out[static_cast<std::size_t>(i)] = detail::run_episode(
        model, cfg, cfg.base_seed + static_cast<std::uint64_t>(i), i == 0 ? dump : nullptr);
  return out;
}

// OpenMP episode loop. Episode i is fully determined by base_seed + i, so the
// schedule cannot change results; the output vector is indexed, not appended.
template <class S, class O>
std::vector<EpisodeResult> run_episodes_parallel(const CpomdpModel<S, O>& model,
                                                 const ExperimentConfig& cfg,
                                                 detail::TreeDump* dump = nullptr) {
  std::vector<EpisodeResult> out(static_cast<std::size_t>(cfg.episodes));
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < cfg.episodes; ++i)
    out[static_cast<std::size_t>(i)] = detail::run_episode(
        model, cfg, cfg.base_seed + static_cast<std::uint64_t>(i), i == 0 ? dump : nullptr);
  return out;
}

// Full experiment on an arbitrary model (tests drive mock models through this).
template <class S, class O>
ExperimentOutput run_model_experiment(const CpomdpModel<S, O>& model,
                                      const ExperimentConfig& cfg) {
  cfg.validate();
  detail::make_planner(model, cfg);  // fail fast on bad solver/model combinations
  detail::TreeDump dump;
  std::vector<EpisodeResult> episodes =
      cfg.threads == 1 ? run_episodes_serial(model, cfg, &dump)
                       : run_episodes_parallel(model, cfg, &dump);
  std::vector<std::string> names;
  for (int a = 0; a < model.num_actions(); ++a) names.push_back(model.action_name(a));
  ExperimentOutput out;
  out.table = aggregate(episodes, names, to_string(cfg.solver), to_string(cfg.env));
  out.episodes = std::move(episodes);
  out.first_tree_json = std::move(dump.json);
  out.first_tree_dot = std::move(dump.dot);
  if (!cfg.out_csv.empty()) write_episode_csv(cfg.out_csv, out.episodes, model.num_costs());
  if (!cfg.out_summary.empty()) write_summary_json(cfg.out_summary, out.table);
  if (!cfg.dump_tree.empty()) {
    write_text_file(cfg.dump_tree + ".json", out.first_tree_json.dump(2) + "\n");
    write_text_file(cfg.dump_tree + ".dot", out.first_tree_dot);
  }
  return out;
}

}  // namespace cpomdp::harness
