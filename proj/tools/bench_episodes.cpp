#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "cpomdp/harness.hpp"

// Times the serial reference episode loop against the OpenMP loop on the same
// workload and verifies their outputs agree bit for bit.
namespace {

using cpomdp::harness::EpisodeResult;

bool same_results(const std::vector<EpisodeResult>& a, const std::vector<EpisodeResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].seed != b[i].seed || a[i].v_r != b[i].v_r || a[i].v_c != b[i].v_c ||
        a[i].violated != b[i].violated || a[i].steps != b[i].steps ||
        a[i].failed != b[i].failed || a[i].first_action != b[i].first_action ||
        a[i].telescope_cbar != b[i].telescope_cbar ||
        a[i].telescope_realized != b[i].telescope_realized)
      return false;
  }
  return true;
}

template <class F>
double time_seconds(F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP episode loop benchmark"};
  int episodes = 64, sims = 100, threads = 0;
  app.add_option("--episodes", episodes, "episodes per run");
  app.add_option("--sims", sims, "simulations per planning call");
  app.add_option("--threads", threads, "OpenMP team size (0 = default)");
  CLI11_PARSE(app, argc, argv);

  try {
    cpomdp::envs::TigerModel model;
    cpomdp::harness::ExperimentConfig cfg;
    cfg.env = cpomdp::harness::EnvKind::tiger;
    cfg.solver = cpomdp::harness::SolverKind::ccpomcp_plus;
    cfg.episodes = episodes;
    cfg.planner.sims = sims;
    cfg.threads = threads;

    std::vector<EpisodeResult> serial, parallel;
    double t_serial = time_seconds([&] { serial = run_episodes_serial(model, cfg); });
    double t_parallel = time_seconds([&] { parallel = run_episodes_parallel(model, cfg); });

#ifdef _OPENMP
    std::cout << "openmp: enabled\n";
#else
    std::cout << "openmp: disabled (parallel loop compiles to the serial one)\n";
#endif
    std::cout << "episodes: " << episodes << ", sims/plan: " << sims << '\n';
    std::cout << "serial:   " << t_serial << " s\n";
    std::cout << "parallel: " << t_parallel << " s\n";
    if (t_parallel > 0.0) std::cout << "speedup:  " << t_serial / t_parallel << "x\n";
    if (!same_results(serial, parallel)) {
      std::cerr << "error: serial and parallel results differ\n";
      return 1;
    }
    std::cout << "results identical across both loops\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
