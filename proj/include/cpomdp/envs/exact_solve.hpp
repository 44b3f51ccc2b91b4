#pragma once

#include <utility>
#include <vector>

#include "cpomdp/model.hpp"

namespace cpomdp::envs {

// Deterministic policy tree: root action, then one subtree per observation.
// A node with no children stops acting (end of horizon).
struct PolicyTree {
  int action = 0;
  std::vector<PolicyTree> children;
};

struct ExactSolution {
  double value = 0.0;
  CostVec cost;
  PolicyTree policy;
};

// Number of deterministic policy trees of the given horizon; saturates at
// infinity on overflow so callers can compare against a refusal cap.
double count_policy_trees(int num_actions, int num_observations, int horizon);

// Exact expected (discounted reward, discounted cost) of a policy tree under
// the dynamics' initial distribution. Terminal states must be absorbing with
// zero reward/cost.
std::pair<double, CostVec> evaluate_policy_tree(const DiscreteDynamics& dyn, double gamma,
                                                const PolicyTree& tree);

// Brute-force best feasible policy tree: enumerate every deterministic tree up
// to the horizon, keep those with expected cost within budget elementwise, and
// return the highest-value survivor. Refuses when the tree count exceeds
// max_trees; throws when no tree is feasible.
ExactSolution exact_solve_small(const DiscreteDynamics& dyn, double gamma, const CostVec& budget,
                                int horizon, double max_trees = 1e6);

// Greedy state path under the scalarized objective r - lambda * c (first cost
// dimension), computed from exact finite-horizon Q tables. Follows the most
// likely successor, so it is exact only for deterministic chains. Ties break
// toward the lower action index.
std::vector<int> lambda_greedy_path(const DiscreteDynamics& dyn, double gamma, double lambda,
                                    int horizon, int start_state);

struct MixedPolicy {
  std::vector<std::pair<int, double>> support;  // (action, probability)
  double value = 0.0;
  double cost = 0.0;
};

// Exact solution of the one-step constrained bandit: maximize expected reward
// over action distributions subject to expected cost <= budget. The optimum
// needs at most two support points, so singletons and pairs are enumerated.
// Throws when every action's cost exceeds the budget.
MixedPolicy solve_bandit_lp(const std::vector<double>& reward, const std::vector<double>& cost,
                            double budget);

}  // namespace cpomdp::envs
