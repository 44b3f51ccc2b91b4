#include "cpomdp/envs/lightdark.hpp"

#include <cmath>
#include <cstdio>

namespace cpomdp::envs {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
}

void LightDarkSpec::validate() const {
  if (!(belief_std > 0.0)) throw std::invalid_argument("lightdark: belief std must be > 0");
  if (!(sigma_min > 0.0)) throw std::invalid_argument("lightdark: sigma_min must be > 0");
  if (action_deltas.empty()) throw std::invalid_argument("lightdark: needs at least one action");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("lightdark: gamma must lie in (0, 1]");
  if (budget < 0.0) throw std::invalid_argument("lightdark: budget must be >= 0");
  if (region_cost < 0.0) throw std::invalid_argument("lightdark: region cost must be >= 0");
  if (goal_radius < 0.0) throw std::invalid_argument("lightdark: goal radius must be >= 0");
}

GaussianBelief::GaussianBelief(double mean, double std_dev) : mean_(mean), std_(std_dev) {
  if (!(std_ > 0.0)) throw std::invalid_argument("gaussian belief: std must be > 0");
}

LdState GaussianBelief::sample(Rng& rng) const {
  std::normal_distribution<double> d(mean_, std_);
  return {d(rng), false};
}

std::unique_ptr<Belief<LdState>> GaussianBelief::clone() const {
  return std::make_unique<GaussianBelief>(mean_, std_);
}

LightDarkModel::LightDarkModel(LightDarkSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::unique_ptr<Belief<LdState>> LightDarkModel::initial_belief() const {
  return std::make_unique<GaussianBelief>(spec_.belief_mean, spec_.belief_std);
}

double LightDarkModel::delta(int action) const {
  if (action < 0 || action >= num_actions()) throw std::invalid_argument("lightdark: bad action");
  return spec_.action_deltas[static_cast<std::size_t>(action)];
}

StepResult<LdState, double> LightDarkModel::step(const LdState& s, int action, Rng& rng) const {
  if (s.done) return {s, s.x, 0.0, {0.0}};
  double d = delta(action);
  LdState next{s.x + d, d == 0.0};
  double reward;
  if (d == 0.0) {
    reward = std::abs(s.x) <= spec_.goal_radius ? spec_.goal_reward : spec_.miss_penalty;
  } else {
    reward = spec_.step_penalty;
  }
  CostVec cost = {next.x > spec_.cost_threshold ? spec_.region_cost : 0.0};
  std::normal_distribution<double> noise(0.0, obs_sigma(next.x));
  double obs = next.x + noise(rng);
  return {next, obs, reward, std::move(cost)};
}

std::string LightDarkModel::action_name(int action) const {
  double d = delta(action);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+g", d);
  return d == 0.0 ? "0" : buf;
}

double LightDarkModel::obs_density(int /*action*/, const LdState& next, const double& obs) const {
  double sigma = obs_sigma(next.x);
  double z = (obs - next.x) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
}

std::pair<double, CostVec> LightDarkModel::reward_cost(const LdState& s, int action,
                                                       const LdState& next) const {
  if (s.done) return {0.0, {0.0}};
  double d = delta(action);
  double reward;
  if (d == 0.0) {
    reward = std::abs(s.x) <= spec_.goal_radius ? spec_.goal_reward : spec_.miss_penalty;
  } else {
    reward = spec_.step_penalty;
  }
  return {reward, {next.x > spec_.cost_threshold ? spec_.region_cost : 0.0}};
}

std::unique_ptr<Belief<LdState>> LightDarkModel::update_belief(const Belief<LdState>& belief,
                                                               int action, const double& obs,
                                                               int n_particles, Rng& rng) const {
  auto updated = particle_filter_update(belief, action, obs, *this, n_particles, rng);
  return std::make_unique<ParticleBelief<LdState>>(std::move(updated));
}

}  // namespace cpomdp::envs
