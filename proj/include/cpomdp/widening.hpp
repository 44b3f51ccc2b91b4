#pragma once

#include <cmath>
#include <stdexcept>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"
#include "cpomdp/tree.hpp"

namespace cpomdp {

// Double progressive widening parameters. Child counts are capped at
// k * max(N, 1)^alpha, so at least one child always fits.
struct WideningConfig {
  double k_obs = 4.0;
  double alpha_obs = 0.1;
  double k_act = 4.0;
  double alpha_act = 0.1;
  bool enable_action_widening = false;

  void validate() const {
    if (k_obs < 1.0 || k_act < 1.0)
      throw std::invalid_argument("WideningConfig: k factors must be >= 1");
    if (alpha_obs < 0.0 || alpha_obs >= 1.0 || alpha_act < 0.0 || alpha_act >= 1.0)
      throw std::invalid_argument("WideningConfig: alpha exponents must lie in [0, 1)");
  }
};

inline double widening_cap(double k, double alpha, long n) {
  return k * std::pow(static_cast<double>(std::max<long>(n, 1)), alpha);
}

template <class S, class O>
struct WidenResult {
  NodeId child = kNoNode;
  bool created = false;
  S state;          // continuation state for the recursive call
  double reward = 0.0;
  CostVec cost;
};

// Observation-side widening. Three cases:
//  - the key already exists (discrete observations): revisit that child with the
//    just-simulated state, no resampling, so a cap of infinity reproduces the
//    unwidened solver draw for draw;
//  - below the cap: new child keyed by o, belief seeded with (s', z);
//  - at the cap: funnel into an existing child chosen proportionally to its
//    insert count, weight s' against that child's own key, resample the
//    continuation state from its weighted belief and re-evaluate (r, c).
template <class S, class O>
WidenResult<S, O> widen_observation(SearchTree<S, O>& tree, NodeId aid,
                                    const StepResult<S, O>& step, const S& prev_state,
                                    const CpomdpModel<S, O>& model, const WideningConfig& cfg,
                                    Rng& rng) {
  auto density = [&](const O& obs, const S& next) {
    return model.has_obs_density() ? model.obs_density(tree.action_node(aid).action, next, obs)
                                   : 1.0;
  };

  WidenResult<S, O> out;
  out.state = step.next;
  out.reward = step.reward;
  out.cost = step.cost;

  NodeId existing = tree.find_obs_child(aid, step.obs);
  if (existing != kNoNode) {
    auto& child = tree.history(existing);
    child.particles.push_back(step.next);
    child.weights.push_back(density(step.obs, step.next));
    out.child = existing;
    return out;
  }

  const auto& an = tree.action_node(aid);
  long child_count = static_cast<long>(an.obs_children.size());
  if (child_count == 0 ||
      static_cast<double>(child_count) < widening_cap(cfg.k_obs, cfg.alpha_obs, an.n)) {
    NodeId id = tree.add_obs_child(aid, step.obs);
    auto& child = tree.history(id);
    child.particles.push_back(step.next);
    child.weights.push_back(density(step.obs, step.next));
    out.child = id;
    out.created = true;
    return out;
  }

  // At the cap: pick an existing child by insert count (its particle count).
  std::vector<double> counts(an.obs_children.size());
  double total = 0.0;
  for (std::size_t i = 0; i < an.obs_children.size(); ++i) {
    counts[i] = static_cast<double>(tree.history(an.obs_children[i]).particles.size());
    total += counts[i];
  }
  std::size_t pick = detail::weighted_index(counts, total, rng);
  NodeId sel = an.obs_children[pick];
  O sel_key = an.obs_keys[pick];
  int action = an.action;

  auto& child = tree.history(sel);
  child.particles.push_back(step.next);
  child.weights.push_back(density(sel_key, step.next));

  double wtotal = 0.0;
  for (double w : child.weights) wtotal += w;
  std::size_t idx;
  if (wtotal > 0.0) {
    idx = detail::weighted_index(child.weights, wtotal, rng);
  } else {
    std::uniform_int_distribution<std::size_t> d(0, child.particles.size() - 1);
    idx = d(rng);
  }
  out.child = sel;
  out.state = child.particles[idx];
  if (!model.has_reward_cost())
    throw std::logic_error("widening: model lacks reward_cost needed for state resampling");
  auto rc = model.reward_cost(prev_state, action, out.state);
  out.reward = rc.first;
  out.cost = std::move(rc.second);
  return out;
}

}  // namespace cpomdp
