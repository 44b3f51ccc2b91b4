#include <iostream>

#include <CLI11.hpp>

#include "cpomdp/harness.hpp"

// Batch experiment runner: loads a JSON config (all fields optional), applies
// CLI overrides, runs the episode loop, prints the metrics table, and writes
// CSV/summary/tree exports when paths are configured.
int main(int argc, char** argv) {
  CLI::App app{"constrained POMDP planning experiments (Lagrangian MCTS)"};
  std::string config_path, env, solver, out, dump_tree;
  int episodes = 0, sims = 0, max_steps = 0, threads = 0, dump_depth = 0;
  std::uint64_t seed = 0;
  bool greedy = false;

  app.add_option("--config", config_path, "JSON experiment config file");
  app.add_option("--env", env, "environment: toy_chain | tiger | lightdark");
  app.add_option("--solver", solver, "solver: ccpomcp | ccpomcp+ | cpomcpow | cpomcpow+");
  app.add_option("--episodes", episodes, "number of episodes");
  app.add_option("--sims", sims, "simulations per planning call");
  app.add_option("--seed", seed, "base seed; episode i uses seed + i");
  app.add_option("--out", out, "output prefix; writes <out>.csv and <out>.summary.json");
  app.add_option("--dump-tree", dump_tree,
                 "tree snapshot prefix; writes <prefix>.json and <prefix>.dot");
  app.add_option("--dump-depth", dump_depth, "tree snapshot depth limit");
  app.add_option("--max-steps", max_steps, "maximum steps per episode");
  app.add_option("--threads", threads, "worker threads (1 forces the serial path)");
  app.add_flag("--greedy", greedy, "execute the argmax of the root policy instead of sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    cpomdp::harness::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = cpomdp::harness::load_config(config_path);
    if (app.count("--env")) cfg.env = cpomdp::harness::parse_env(env);
    if (app.count("--solver")) cfg.solver = cpomdp::harness::parse_solver(solver);
    if (app.count("--episodes")) cfg.episodes = episodes;
    if (app.count("--sims")) cfg.planner.sims = sims;
    if (app.count("--seed")) cfg.base_seed = seed;
    if (app.count("--out")) {
      cfg.out_csv = out + ".csv";
      cfg.out_summary = out + ".summary.json";
    }
    if (app.count("--dump-tree")) cfg.dump_tree = dump_tree;
    if (app.count("--dump-depth")) cfg.dump_depth = dump_depth;
    if (app.count("--max-steps")) cfg.max_steps = max_steps;
    if (app.count("--threads")) cfg.threads = threads;
    if (greedy) cfg.greedy_execution = true;
    cfg.validate();

    cpomdp::harness::ExperimentOutput result = cpomdp::harness::run_experiment_full(cfg);
    std::cout << cpomdp::harness::format_table(result.table);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
