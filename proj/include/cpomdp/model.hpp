#pragma once

#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>

#include "cpomdp/common.hpp"

namespace cpomdp {

// Distribution over states that the planner can sample root states from.
template <class S>
class Belief {
 public:
  virtual ~Belief() = default;
  virtual S sample(Rng& rng) const = 0;
  virtual std::unique_ptr<Belief<S>> clone() const = 0;
};

template <class S, class O>
struct StepResult {
  S next;
  O obs;
  double reward = 0.0;
  CostVec cost;
};

template <class T>
std::string value_label(const T& v) {
  if constexpr (std::is_integral_v<T>) {
    return std::to_string(v);
  } else if constexpr (std::is_floating_point_v<T>) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
  } else {
    return "?";
  }
}

// Generative constrained POMDP. Solvers only touch states/observations through
// this interface: they sample transitions, compare discrete observation keys for
// equality, and (for widening solvers) query the observation density hook.
// All methods are const and thread-safe given caller-owned rngs.
template <class S, class O>
class CpomdpModel {
 public:
  virtual ~CpomdpModel() = default;

  virtual int num_actions() const = 0;
  virtual double discount() const = 0;
  virtual CostVec cost_budget() const = 0;
  virtual std::unique_ptr<Belief<S>> initial_belief() const = 0;
  virtual StepResult<S, O> step(const S& s, int action, Rng& rng) const = 0;
  virtual bool is_terminal(const S& s) const = 0;

  std::size_t num_costs() const { return cost_budget().size(); }
  virtual bool continuous_observations() const { return false; }

  virtual std::string action_name(int action) const { return "a" + std::to_string(action); }
  virtual std::string observation_name(const O& obs) const { return value_label(obs); }

  // Observation density z(o | a, s'). Needed by the weighted particle filter and
  // by observation widening; generative-only models may omit it.
  virtual bool has_obs_density() const { return false; }
  virtual double obs_density(int /*action*/, const S& /*next*/, const O& /*obs*/) const {
    throw std::logic_error("model provides no observation density");
  }

  // Deterministic immediate (reward, cost) of a transition, used when a widening
  // solver resamples the continuation state of an existing observation child.
  virtual bool has_reward_cost() const { return false; }
  virtual std::pair<double, CostVec> reward_cost(const S& /*s*/, int /*action*/,
                                                 const S& /*next*/) const {
    throw std::logic_error("model provides no reward/cost evaluator");
  }

  // Action proposal for progressive action widening; default covers finite spaces.
  virtual int sample_action(Rng& rng) const {
    std::uniform_int_distribution<int> d(0, num_actions() - 1);
    return d(rng);
  }

  // Root belief maintenance between planning steps. Environments pick their
  // updater (exact Bayes where tables exist, bootstrap filter otherwise).
  virtual std::unique_ptr<Belief<S>> update_belief(const Belief<S>& /*belief*/, int /*action*/,
                                                   const O& /*obs*/, int /*n_particles*/,
                                                   Rng& /*rng*/) const {
    throw std::logic_error("model provides no belief updater");
  }
};

// Exact tables for small discrete problems: transition, observation, expected
// immediate reward/cost, initial distribution. Terminal states must be encoded
// absorbing with zero reward and cost so exact evaluation can recurse blindly.
class DiscreteDynamics {
 public:
  virtual ~DiscreteDynamics() = default;
  virtual int num_states() const = 0;
  virtual int num_observations() const = 0;
  virtual int num_dyn_actions() const = 0;
  virtual double transition_prob(int s, int action, int next) const = 0;
  virtual double obs_prob(int action, int next, int obs) const = 0;
  virtual double mean_reward(int s, int action) const = 0;
  virtual CostVec mean_cost(int s, int action) const = 0;
  virtual std::vector<double> initial_probs() const = 0;
  virtual bool terminal_state(int /*s*/) const { return false; }
};

template <class S, class O>
void validate_model(const CpomdpModel<S, O>& m) {
  if (m.num_actions() < 1) throw std::invalid_argument("model: needs at least one action");
  double g = m.discount();
  if (!(g > 0.0) || g > 1.0) throw std::invalid_argument("model: discount must lie in (0, 1]");
  CostVec budget = m.cost_budget();
  if (budget.empty()) throw std::invalid_argument("model: needs at least one cost dimension");
  for (double b : budget) {
    if (!std::isfinite(b) || b < 0.0)
      throw std::invalid_argument("model: cost budget must be finite and nonnegative");
  }
}

}  // namespace cpomdp
