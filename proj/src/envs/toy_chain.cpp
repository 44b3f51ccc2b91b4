#include "cpomdp/envs/toy_chain.hpp"

namespace cpomdp::envs {

void ToyChainSpec::validate() const {
  if (!(reward_risky > reward_safe) || !(reward_safe > reward_cautious))
    throw std::invalid_argument("toy chain: rewards must be ordered risky > safe > cautious");
  if (!(cost_risky > budget))
    throw std::invalid_argument("toy chain: the risky path must exceed the budget");
  if (!(budget >= cost_safe) || !(cost_safe >= cost_cautious) || cost_cautious < 0.0)
    throw std::invalid_argument(
        "toy chain: costs must satisfy budget >= safe >= cautious >= 0");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("toy chain: gamma must lie in (0, 1]");
}

ToyChainModel::ToyChainModel(ToyChainSpec spec) : spec_(spec) { spec_.validate(); }

std::unique_ptr<Belief<int>> ToyChainModel::initial_belief() const {
  return std::make_unique<DiscreteBelief>(initial_probs());
}

int ToyChainModel::next_state(int s, int action) const {
  if (s == kStart) return action == kAdvance ? kMid : kCautiousEnd;
  if (s == kMid) return action == kAdvance ? kRiskyEnd : kSafeEnd;
  return s;  // terminals absorb
}

StepResult<int, int> ToyChainModel::step(const int& s, int action, Rng&) const {
  if (action < 0 || action >= 2) throw std::invalid_argument("toy chain: bad action");
  int next = next_state(s, action);
  auto rc = reward_cost(s, action, next);
  return {next, 0, rc.first, std::move(rc.second)};
}

std::pair<double, CostVec> ToyChainModel::reward_cost(const int& s, int action, const int&) const {
  return {mean_reward(s, action), mean_cost(s, action)};
}

std::string ToyChainModel::action_name(int action) const {
  return action == kAdvance ? "advance" : "exit";
}

double ToyChainModel::obs_density(int, const int&, const int& obs) const {
  return obs == 0 ? 1.0 : 0.0;
}

std::unique_ptr<Belief<int>> ToyChainModel::update_belief(const Belief<int>& belief, int action,
                                                          const int& obs, int n_particles,
                                                          Rng& rng) const {
  auto updated = particle_filter_update(belief, action, obs, *this, n_particles, rng);
  return std::make_unique<ParticleBelief<int>>(std::move(updated));
}

double ToyChainModel::transition_prob(int s, int action, int next) const {
  return next == next_state(s, action) ? 1.0 : 0.0;
}

double ToyChainModel::obs_prob(int, int, int obs) const { return obs == 0 ? 1.0 : 0.0; }

double ToyChainModel::mean_reward(int s, int action) const {
  if (s == kStart) return action == kAdvance ? 0.0 : spec_.reward_cautious;
  if (s == kMid) return action == kAdvance ? spec_.reward_risky : spec_.reward_safe;
  return 0.0;
}

CostVec ToyChainModel::mean_cost(int s, int action) const {
  if (s == kStart) return {action == kAdvance ? 0.0 : spec_.cost_cautious};
  if (s == kMid) return {action == kAdvance ? spec_.cost_risky : spec_.cost_safe};
  return {0.0};
}

}  // namespace cpomdp::envs
