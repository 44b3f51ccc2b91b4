#pragma once

#include <vector>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp::envs {

// 1-D localization task with a hazardous region. The agent starts uncertain
// about its position; observation noise shrinks near the "light" location, so
// it can localize by moving right, but positions above the cost threshold
// charge one unit of cost per step. The stop action (delta 0) ends the episode
// with a goal reward when the agent is within goal_radius of the origin and a
// miss penalty otherwise; every other step costs step_penalty in reward.
struct LightDarkSpec {
  double belief_mean = 2.0;
  double belief_std = 2.0;
  double light = 10.0;
  double sigma_min = 0.01;
  std::vector<double> action_deltas = {-10.0, -5.0, -1.0, 0.0, 1.0, 5.0, 10.0};
  double goal_reward = 100.0;
  double miss_penalty = -100.0;
  double step_penalty = -1.0;
  double goal_radius = 1.0;
  double cost_threshold = 12.0;
  double region_cost = 1.0;
  double gamma = 0.95;
  double budget = 0.1;

  void validate() const;
};

struct LdState {
  double x = 0.0;
  bool done = false;
};

class GaussianBelief final : public Belief<LdState> {
 public:
  GaussianBelief(double mean, double std_dev);
  LdState sample(Rng& rng) const override;
  std::unique_ptr<Belief<LdState>> clone() const override;
  double mean() const { return mean_; }
  double std_dev() const { return std_; }

 private:
  double mean_;
  double std_;
};

class LightDarkModel final : public CpomdpModel<LdState, double> {
 public:
  explicit LightDarkModel(LightDarkSpec spec = {});

  int num_actions() const override { return static_cast<int>(spec_.action_deltas.size()); }
  double discount() const override { return spec_.gamma; }
  CostVec cost_budget() const override { return {spec_.budget}; }
  std::unique_ptr<Belief<LdState>> initial_belief() const override;
  StepResult<LdState, double> step(const LdState& s, int action, Rng& rng) const override;
  bool is_terminal(const LdState& s) const override { return s.done; }
  bool continuous_observations() const override { return true; }
  std::string action_name(int action) const override;
  bool has_obs_density() const override { return true; }
  double obs_density(int action, const LdState& next, const double& obs) const override;
  bool has_reward_cost() const override { return true; }
  std::pair<double, CostVec> reward_cost(const LdState& s, int action,
                                         const LdState& next) const override;
  std::unique_ptr<Belief<LdState>> update_belief(const Belief<LdState>& belief, int action,
                                                 const double& obs, int n_particles,
                                                 Rng& rng) const override;

  double obs_sigma(double x) const { return std::abs(x - spec_.light) + spec_.sigma_min; }
  double delta(int action) const;
  const LightDarkSpec& spec() const { return spec_; }

 private:
  LightDarkSpec spec_;
};

}  // namespace cpomdp::envs
