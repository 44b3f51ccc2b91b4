#pragma once

#include <utility>
#include <vector>

#include "cpomdp/common.hpp"

namespace cpomdp {

template <class S, class O>
struct TrajectoryStep {
  S state;
  int action = -1;
  O obs;
  double reward = 0.0;
  CostVec cost;
};

// Executed episode: per-step tuples plus cached discounted aggregates.
template <class S, class O>
struct TrajectoryRecord {
  std::vector<TrajectoryStep<S, O>> steps;
  double discounted_return = 0.0;
  CostVec discounted_cost;
};

// (sum gamma^t r_t, sum gamma^t c_t); k fixes the cost dimension for empty input.
template <class S, class O>
std::pair<double, CostVec> discounted_sums(const std::vector<TrajectoryStep<S, O>>& steps,
                                           double gamma, std::size_t k) {
  double ret = 0.0;
  CostVec cost = zero_costs(k);
  double disc = 1.0;
  for (const auto& st : steps) {
    ret += disc * st.reward;
    add_scaled(cost, st.cost, disc);
    disc *= gamma;
  }
  return {ret, cost};
}

// Strict comparison: a run exactly on budget does not violate.
inline bool violates_budget(const CostVec& cost, const CostVec& budget) {
  check_same_length(cost, budget, "violates_budget");
  for (std::size_t i = 0; i < cost.size(); ++i)
    if (cost[i] > budget[i]) return true;
  return false;
}

}  // namespace cpomdp
