#pragma once

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp::envs {

// Classic two-door tiger with a safety budget: opening the tiger's door incurs
// one unit of discounted cost on top of its reward penalty. By default opening
// any door resets the tiger uniformly and the encounter continues; with
// reset_after_open = false it ends in an absorbing state instead.
struct TigerSpec {
  double listen_accuracy = 0.85;
  double reward_correct = 10.0;
  double reward_wrong = -100.0;
  double reward_listen = -1.0;
  double cost_open_tiger = 1.0;
  double cost_open_safe = 0.0;
  double cost_listen = 0.0;
  double gamma = 0.95;
  double budget = 0.9;
  bool reset_after_open = true;

  void validate() const;
};

class TigerModel final : public CpomdpModel<int, int>, public DiscreteDynamics {
 public:
  static constexpr int kTigerLeft = 0;
  static constexpr int kTigerRight = 1;
  static constexpr int kDone = 2;
  static constexpr int kListen = 0;
  static constexpr int kOpenLeft = 1;
  static constexpr int kOpenRight = 2;
  static constexpr int kHearLeft = 0;
  static constexpr int kHearRight = 1;

  explicit TigerModel(TigerSpec spec = {});

  // CpomdpModel
  int num_actions() const override { return 3; }
  double discount() const override { return spec_.gamma; }
  CostVec cost_budget() const override { return {spec_.budget}; }
  std::unique_ptr<Belief<int>> initial_belief() const override;
  StepResult<int, int> step(const int& s, int action, Rng& rng) const override;
  bool is_terminal(const int& s) const override { return s == kDone; }
  std::string action_name(int action) const override;
  std::string observation_name(const int& obs) const override;
  bool has_obs_density() const override { return true; }
  double obs_density(int action, const int& next, const int& obs) const override {
    return obs_prob(action, next, obs);
  }
  bool has_reward_cost() const override { return true; }
  std::pair<double, CostVec> reward_cost(const int& s, int action, const int& next) const override;
  std::unique_ptr<Belief<int>> update_belief(const Belief<int>& belief, int action,
                                             const int& obs, int n_particles,
                                             Rng& rng) const override;

  // DiscreteDynamics
  int num_states() const override { return 3; }
  int num_observations() const override { return 2; }
  int num_dyn_actions() const override { return 3; }
  double transition_prob(int s, int action, int next) const override;
  double obs_prob(int action, int next, int obs) const override;
  double mean_reward(int s, int action) const override;
  CostVec mean_cost(int s, int action) const override;
  std::vector<double> initial_probs() const override { return {0.5, 0.5, 0.0}; }
  bool terminal_state(int s) const override { return s == kDone; }

  const TigerSpec& spec() const { return spec_; }

 private:
  bool tiger_behind(int s, int open_action) const {
    return (open_action == kOpenLeft && s == kTigerLeft) ||
           (open_action == kOpenRight && s == kTigerRight);
  }
  TigerSpec spec_;
};

}  // namespace cpomdp::envs
