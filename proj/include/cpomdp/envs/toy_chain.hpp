#pragma once

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp::envs {

// Two-step deterministic chain exposing the myopia of a single global
// multiplier. From the start node, "exit" ends immediately with a small reward
// at zero cost and "advance" moves to the mid node; from mid, "advance" reaches
// the high-reward terminal whose cost exceeds the budget and "exit" reaches the
// mid-reward terminal that exactly fits it. No fixed multiplier reaches the
// mid-reward terminal: small ones chase the infeasible reward, large ones bail
// out at the root.
struct ToyChainSpec {
  double reward_cautious = 1.0;   // exit at the start node
  double reward_risky = 10.0;     // advance twice
  double reward_safe = 5.0;       // advance then exit
  double cost_cautious = 0.0;
  double cost_risky = 2.0;
  double cost_safe = 1.0;
  double budget = 1.0;
  double gamma = 1.0;             // two-step episode, undiscounted

  void validate() const;
};

class ToyChainModel final : public CpomdpModel<int, int>, public DiscreteDynamics {
 public:
  static constexpr int kStart = 0;
  static constexpr int kMid = 1;
  static constexpr int kCautiousEnd = 2;
  static constexpr int kRiskyEnd = 3;
  static constexpr int kSafeEnd = 4;
  static constexpr int kAdvance = 0;
  static constexpr int kExit = 1;

  explicit ToyChainModel(ToyChainSpec spec = {});

  // CpomdpModel
  int num_actions() const override { return 2; }
  double discount() const override { return spec_.gamma; }
  CostVec cost_budget() const override { return {spec_.budget}; }
  std::unique_ptr<Belief<int>> initial_belief() const override;
  StepResult<int, int> step(const int& s, int action, Rng& rng) const override;
  bool is_terminal(const int& s) const override { return s >= kCautiousEnd; }
  std::string action_name(int action) const override;
  bool has_obs_density() const override { return true; }
  double obs_density(int action, const int& next, const int& obs) const override;
  bool has_reward_cost() const override { return true; }
  std::pair<double, CostVec> reward_cost(const int& s, int action, const int& next) const override;
  std::unique_ptr<Belief<int>> update_belief(const Belief<int>& belief, int action,
                                             const int& obs, int n_particles,
                                             Rng& rng) const override;

  // DiscreteDynamics
  int num_states() const override { return 5; }
  int num_observations() const override { return 1; }
  int num_dyn_actions() const override { return 2; }
  double transition_prob(int s, int action, int next) const override;
  double obs_prob(int action, int next, int obs) const override;
  double mean_reward(int s, int action) const override;
  CostVec mean_cost(int s, int action) const override;
  std::vector<double> initial_probs() const override { return {1, 0, 0, 0, 0}; }
  bool terminal_state(int s) const override { return s >= kCautiousEnd; }

  const ToyChainSpec& spec() const { return spec_; }

 private:
  int next_state(int s, int action) const;
  ToyChainSpec spec_;
};

}  // namespace cpomdp::envs
