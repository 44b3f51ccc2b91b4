#include "cpomdp/envs/tiger.hpp"

namespace cpomdp::envs {

void TigerSpec::validate() const {
  if (!(listen_accuracy > 0.5) || !(listen_accuracy < 1.0))
    throw std::invalid_argument("tiger: listen accuracy must lie in (0.5, 1)");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("tiger: gamma must lie in (0, 1]");
  if (budget < 0.0) throw std::invalid_argument("tiger: budget must be >= 0");
  if (cost_open_tiger < 0.0 || cost_open_safe < 0.0 || cost_listen < 0.0)
    throw std::invalid_argument("tiger: costs must be >= 0");
}

TigerModel::TigerModel(TigerSpec spec) : spec_(spec) { spec_.validate(); }

std::unique_ptr<Belief<int>> TigerModel::initial_belief() const {
  return std::make_unique<DiscreteBelief>(initial_probs());
}

StepResult<int, int> TigerModel::step(const int& s, int action, Rng& rng) const {
  if (s == kDone) return {kDone, kHearLeft, 0.0, {0.0}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (action == kListen) {
    int correct = s == kTigerLeft ? kHearLeft : kHearRight;
    int obs = u(rng) < spec_.listen_accuracy ? correct : 1 - correct;
    return {s, obs, spec_.reward_listen, {spec_.cost_listen}};
  }
  if (action != kOpenLeft && action != kOpenRight)
    throw std::invalid_argument("tiger: bad action");
  bool tiger = tiger_behind(s, action);
  double r = tiger ? spec_.reward_wrong : spec_.reward_correct;
  CostVec c = {tiger ? spec_.cost_open_tiger : spec_.cost_open_safe};
  int next = spec_.reset_after_open ? (u(rng) < 0.5 ? kTigerLeft : kTigerRight) : kDone;
  int obs = u(rng) < 0.5 ? kHearLeft : kHearRight;  // doors tell you nothing
  return {next, obs, r, std::move(c)};
}

std::pair<double, CostVec> TigerModel::reward_cost(const int& s, int action, const int&) const {
  return {mean_reward(s, action), mean_cost(s, action)};
}

std::string TigerModel::action_name(int action) const {
  switch (action) {
    case kListen: return "listen";
    case kOpenLeft: return "open-left";
    default: return "open-right";
  }
}

std::string TigerModel::observation_name(const int& obs) const {
  return obs == kHearLeft ? "hear-left" : "hear-right";
}

std::unique_ptr<Belief<int>> TigerModel::update_belief(const Belief<int>& belief, int action,
                                                       const int& obs, int, Rng&) const {
  const auto* db = dynamic_cast<const DiscreteBelief*>(&belief);
  if (db == nullptr) throw std::invalid_argument("tiger: expected a discrete belief");
  return std::make_unique<DiscreteBelief>(exact_update(*db, action, obs, *this));
}

double TigerModel::transition_prob(int s, int action, int next) const {
  if (s == kDone) return next == kDone ? 1.0 : 0.0;
  if (action == kListen) return next == s ? 1.0 : 0.0;
  if (spec_.reset_after_open) return next == kDone ? 0.0 : 0.5;
  return next == kDone ? 1.0 : 0.0;
}

double TigerModel::obs_prob(int action, int next, int obs) const {
  if (obs != kHearLeft && obs != kHearRight) return 0.0;
  if (action != kListen || next == kDone) return 0.5;
  int correct = next == kTigerLeft ? kHearLeft : kHearRight;
  return obs == correct ? spec_.listen_accuracy : 1.0 - spec_.listen_accuracy;
}

double TigerModel::mean_reward(int s, int action) const {
  if (s == kDone) return 0.0;
  if (action == kListen) return spec_.reward_listen;
  return tiger_behind(s, action) ? spec_.reward_wrong : spec_.reward_correct;
}

CostVec TigerModel::mean_cost(int s, int action) const {
  if (s == kDone) return {0.0};
  if (action == kListen) return {spec_.cost_listen};
  return {tiger_behind(s, action) ? spec_.cost_open_tiger : spec_.cost_open_safe};
}

}  // namespace cpomdp::envs
