#include "cpomdp/envs/exact_solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpomdp::envs {

namespace {

// Enumerate all deterministic policy trees of a fixed horizon.
std::vector<PolicyTree> all_trees(int num_actions, int num_observations, int horizon) {
  std::vector<PolicyTree> out;
  if (horizon <= 0) return out;
  std::vector<PolicyTree> subtrees = all_trees(num_actions, num_observations, horizon - 1);
  for (int a = 0; a < num_actions; ++a) {
    if (horizon == 1) {
      out.push_back({a, {}});
      continue;
    }
    // Cartesian product of subtrees across observation branches.
    std::vector<std::size_t> pick(static_cast<std::size_t>(num_observations), 0);
    while (true) {
      PolicyTree t{a, {}};
      t.children.reserve(pick.size());
      for (std::size_t idx : pick) t.children.push_back(subtrees[idx]);
      out.push_back(std::move(t));
      std::size_t digit = 0;
      while (digit < pick.size()) {
        if (++pick[digit] < subtrees.size()) break;
        pick[digit] = 0;
        ++digit;
      }
      if (digit == pick.size()) break;
    }
  }
  return out;
}

void accumulate(const DiscreteDynamics& dyn, double gamma, const PolicyTree& node,
                const std::vector<double>& probs, double scale, double& value, CostVec& cost) {
  int ns = dyn.num_states();
  int no = dyn.num_observations();
  for (int s = 0; s < ns; ++s) {
    if (probs[static_cast<std::size_t>(s)] == 0.0) continue;
    double p = scale * probs[static_cast<std::size_t>(s)];
    value += p * dyn.mean_reward(s, node.action);
    add_scaled(cost, dyn.mean_cost(s, node.action), p);
  }
  if (node.children.empty()) return;
  if (static_cast<int>(node.children.size()) != no)
    throw std::invalid_argument("policy tree: child count must equal the observation count");
  for (int o = 0; o < no; ++o) {
    std::vector<double> next(static_cast<std::size_t>(ns), 0.0);
    double mass = 0.0;
    for (int s = 0; s < ns; ++s) {
      double ps = probs[static_cast<std::size_t>(s)];
      if (ps == 0.0) continue;
      for (int sn = 0; sn < ns; ++sn) {
        double t = dyn.transition_prob(s, node.action, sn);
        if (t == 0.0) continue;
        double m = ps * t * dyn.obs_prob(node.action, sn, o);
        next[static_cast<std::size_t>(sn)] += m;
        mass += m;
      }
    }
    if (mass == 0.0) continue;
    accumulate(dyn, gamma, node.children[static_cast<std::size_t>(o)], next, scale * gamma, value,
               cost);
  }
}

}  // namespace

double count_policy_trees(int num_actions, int num_observations, int horizon) {
  if (horizon <= 0) return 0.0;
  double n = 1.0;
  for (int h = 0; h < horizon; ++h) {
    n = num_actions * std::pow(n, num_observations);
    if (!std::isfinite(n)) return std::numeric_limits<double>::infinity();
  }
  return n;
}

std::pair<double, CostVec> evaluate_policy_tree(const DiscreteDynamics& dyn, double gamma,
                                                const PolicyTree& tree) {
  double value = 0.0;
  CostVec cost = dyn.mean_cost(0, 0);
  std::fill(cost.begin(), cost.end(), 0.0);
  accumulate(dyn, gamma, tree, dyn.initial_probs(), 1.0, value, cost);
  return {value, cost};
}

ExactSolution exact_solve_small(const DiscreteDynamics& dyn, double gamma, const CostVec& budget,
                                int horizon, double max_trees) {
  if (horizon < 1) throw std::invalid_argument("exact_solve_small: horizon must be >= 1");
  double n = count_policy_trees(dyn.num_dyn_actions(), dyn.num_observations(), horizon);
  if (n > max_trees)
    throw std::invalid_argument("exact_solve_small: " + std::to_string(n) +
                                " policy trees exceeds the enumeration cap");
  bool found = false;
  ExactSolution best;
  for (PolicyTree& t : all_trees(dyn.num_dyn_actions(), dyn.num_observations(), horizon)) {
    auto [value, cost] = evaluate_policy_tree(dyn, gamma, t);
    check_same_length(cost, budget, "exact_solve_small: cost/budget");
    bool feasible = true;
    for (std::size_t k = 0; k < cost.size(); ++k)
      if (cost[k] > budget[k]) feasible = false;
    if (!feasible) continue;
    if (!found || value > best.value) {
      best = {value, std::move(cost), std::move(t)};
      found = true;
    }
  }
  if (!found) throw std::runtime_error("exact_solve_small: no feasible policy");
  return best;
}

std::vector<int> lambda_greedy_path(const DiscreteDynamics& dyn, double gamma, double lambda,
                                    int horizon, int start_state) {
  int ns = dyn.num_states();
  int na = dyn.num_dyn_actions();
  // v[d][s] = optimal scalarized value with (horizon - d) steps to go.
  std::vector<std::vector<double>> v(static_cast<std::size_t>(horizon) + 1,
                                     std::vector<double>(static_cast<std::size_t>(ns), 0.0));
  auto q = [&](int d, int s, int a) {
    double out = dyn.mean_reward(s, a) - lambda * dyn.mean_cost(s, a)[0];
    for (int sn = 0; sn < ns; ++sn) {
      double t = dyn.transition_prob(s, a, sn);
      if (t != 0.0) out += gamma * t * v[static_cast<std::size_t>(d) + 1][static_cast<std::size_t>(sn)];
    }
    return out;
  };
  for (int d = horizon - 1; d >= 0; --d)
    for (int s = 0; s < ns; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < na; ++a) best = std::max(best, q(d, s, a));
      v[static_cast<std::size_t>(d)][static_cast<std::size_t>(s)] = best;
    }
  std::vector<int> path = {start_state};
  int s = start_state;
  for (int d = 0; d < horizon && !dyn.terminal_state(s); ++d) {
    int best_a = 0;
    double best_q = q(d, s, 0);
    for (int a = 1; a < na; ++a) {
      double qa = q(d, s, a);
      if (qa > best_q) {
        best_q = qa;
        best_a = a;
      }
    }
    int next = 0;
    double best_t = -1.0;
    for (int sn = 0; sn < ns; ++sn) {
      double t = dyn.transition_prob(s, best_a, sn);
      if (t > best_t) {
        best_t = t;
        next = sn;
      }
    }
    s = next;
    path.push_back(s);
  }
  return path;
}

MixedPolicy solve_bandit_lp(const std::vector<double>& reward, const std::vector<double>& cost,
                            double budget) {
  if (reward.empty() || reward.size() != cost.size())
    throw std::invalid_argument("solve_bandit_lp: reward/cost sizes must match and be nonempty");
  int n = static_cast<int>(reward.size());
  bool found = false;
  MixedPolicy best;
  auto consider = [&](MixedPolicy cand) {
    if (!found || cand.value > best.value) {
      best = std::move(cand);
      found = true;
    }
  };
  for (int a = 0; a < n; ++a) {
    auto ai = static_cast<std::size_t>(a);
    if (cost[ai] <= budget) consider({{{a, 1.0}}, reward[ai], cost[ai]});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto ii = static_cast<std::size_t>(i);
      auto jj = static_cast<std::size_t>(j);
      if (!(cost[ii] < budget && budget < cost[jj])) continue;
      double p = (budget - cost[ii]) / (cost[jj] - cost[ii]);  // weight on the costly arm
      consider({{{i, 1.0 - p}, {j, p}},
                (1.0 - p) * reward[ii] + p * reward[jj],
                budget});
    }
  if (!found) throw std::runtime_error("solve_bandit_lp: no feasible action distribution");
  return best;
}

}  // namespace cpomdp::envs
