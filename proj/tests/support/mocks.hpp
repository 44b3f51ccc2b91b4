#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp::test {

// One-step bandit: state 0 is live, state 1 absorbs. Every arm pays a fixed
// (reward, cost) and emits observation 0. Exposes density/reward hooks so both
// solver families can run on it.
class BanditModel final : public CpomdpModel<int, int> {
 public:
  struct Arm {
    double reward = 0.0;
    double cost = 0.0;
  };

  BanditModel(std::vector<Arm> arms, double budget, double gamma = 1.0)
      : arms_(std::move(arms)), budget_(budget), gamma_(gamma) {}

  int num_actions() const override { return static_cast<int>(arms_.size()); }
  double discount() const override { return gamma_; }
  CostVec cost_budget() const override { return {budget_}; }
  std::unique_ptr<Belief<int>> initial_belief() const override {
    return std::make_unique<DiscreteBelief>(std::vector<double>{1.0, 0.0});
  }
  StepResult<int, int> step(const int& s, int action, Rng&) const override {
    if (s != 0) return {1, 0, 0.0, {0.0}};
    const Arm& arm = arms_.at(static_cast<std::size_t>(action));
    return {1, 0, arm.reward, {arm.cost}};
  }
  bool is_terminal(const int& s) const override { return s != 0; }
  bool has_obs_density() const override { return true; }
  double obs_density(int, const int&, const int& obs) const override {
    return obs == 0 ? 1.0 : 0.0;
  }
  bool has_reward_cost() const override { return true; }
  std::pair<double, CostVec> reward_cost(const int& s, int action, const int&) const override {
    if (s != 0) return {0.0, {0.0}};
    const Arm& arm = arms_.at(static_cast<std::size_t>(action));
    return {arm.reward, {arm.cost}};
  }
  std::unique_ptr<Belief<int>> update_belief(const Belief<int>& belief, int, const int&, int,
                                             Rng&) const override {
    return belief.clone();
  }

 private:
  std::vector<Arm> arms_;
  double budget_;
  double gamma_;
};

// Deterministic line graph 0 -> 1 -> ... with one action; reward/cost fixed per
// position, terminal at the end. Used for exact-value checks.
class LineModel final : public CpomdpModel<int, int> {
 public:
  LineModel(std::vector<double> rewards, std::vector<double> costs, double budget, double gamma)
      : rewards_(std::move(rewards)), costs_(std::move(costs)), budget_(budget), gamma_(gamma) {}

  int num_actions() const override { return 1; }
  double discount() const override { return gamma_; }
  CostVec cost_budget() const override { return {budget_}; }
  std::unique_ptr<Belief<int>> initial_belief() const override {
    std::vector<double> p(rewards_.size() + 1, 0.0);
    p[0] = 1.0;
    return std::make_unique<DiscreteBelief>(std::move(p));
  }
  StepResult<int, int> step(const int& s, int, Rng&) const override {
    if (is_terminal(s)) return {s, 0, 0.0, {0.0}};
    auto i = static_cast<std::size_t>(s);
    return {s + 1, 0, rewards_[i], {costs_[i]}};
  }
  bool is_terminal(const int& s) const override {
    return s >= static_cast<int>(rewards_.size());
  }
  bool has_obs_density() const override { return true; }
  double obs_density(int, const int&, const int& obs) const override {
    return obs == 0 ? 1.0 : 0.0;
  }
  bool has_reward_cost() const override { return true; }
  std::pair<double, CostVec> reward_cost(const int& s, int, const int&) const override {
    if (is_terminal(s)) return {0.0, {0.0}};
    auto i = static_cast<std::size_t>(s);
    return {rewards_[i], {costs_[i]}};
  }
  std::unique_ptr<Belief<int>> update_belief(const Belief<int>& belief, int, const int&, int,
                                             Rng&) const override {
    return belief.clone();
  }

 private:
  std::vector<double> rewards_;
  std::vector<double> costs_;
  double budget_;
  double gamma_;
};

// Non-terminating two-action chain whose belief updater always fails, for the
// harness error-row path.
class BrokenUpdateModel final : public CpomdpModel<int, int> {
 public:
  int num_actions() const override { return 2; }
  double discount() const override { return 0.9; }
  CostVec cost_budget() const override { return {1.0}; }
  std::unique_ptr<Belief<int>> initial_belief() const override {
    return std::make_unique<DiscreteBelief>(std::vector<double>{1.0});
  }
  StepResult<int, int> step(const int& s, int, Rng&) const override {
    return {s, 0, 1.0, {0.0}};
  }
  bool is_terminal(const int&) const override { return false; }
  std::unique_ptr<Belief<int>> update_belief(const Belief<int>&, int, const int&, int,
                                             Rng&) const override {
    throw std::runtime_error("belief updater exploded");
  }
};

// Counts reward_cost calls so widening's at-cap re-evaluation is observable.
class CountingBandit final : public CpomdpModel<int, double> {
 public:
  explicit CountingBandit(int obs_values) : obs_values_(obs_values) {}

  int num_actions() const override { return 1; }
  double discount() const override { return 0.9; }
  CostVec cost_budget() const override { return {1.0}; }
  std::unique_ptr<Belief<int>> initial_belief() const override {
    return std::make_unique<DiscreteBelief>(std::vector<double>{1.0, 0.0});
  }
  // Emits a fresh observation value each call so widening always faces a new key.
  StepResult<int, double> step(const int& s, int, Rng&) const override {
    if (s != 0) return {1, 0.0, 0.0, {0.0}};
    obs_counter_ = (obs_counter_ + 1) % obs_values_;
    return {1, static_cast<double>(obs_counter_) + 0.5, 1.0, {0.25}};
  }
  bool is_terminal(const int& s) const override { return s != 0; }
  bool continuous_observations() const override { return true; }
  bool has_obs_density() const override { return true; }
  double obs_density(int, const int&, const double&) const override { return 1.0; }
  bool has_reward_cost() const override { return true; }
  std::pair<double, CostVec> reward_cost(const int& s, int, const int&) const override {
    ++reward_cost_calls_;
    if (s != 0) return {0.0, {0.0}};
    return {1.0, {0.25}};
  }
  long reward_cost_calls() const { return reward_cost_calls_; }

 private:
  int obs_values_;
  mutable int obs_counter_ = -1;
  mutable long reward_cost_calls_ = 0;
};

// Loose syntactic DOT check: digraph header, balanced braces and quotes,
// statements terminated with semicolons.
inline bool dot_syntax_ok(const std::string& dot) {
  if (dot.rfind("digraph", 0) != 0) return false;
  long depth = 0;
  bool in_quote = false;
  for (std::size_t i = 0; i < dot.size(); ++i) {
    char c = dot[i];
    if (in_quote) {
      if (c == '\\') ++i;
      else if (c == '"') in_quote = false;
      continue;
    }
    if (c == '"') in_quote = true;
    else if (c == '{') ++depth;
    else if (c == '}') {
      --depth;
      if (depth < 0) return false;
    }
  }
  if (depth != 0 || in_quote) return false;
  // Every statement line inside the braces ends with ';' or a brace.
  std::size_t pos = 0;
  while (pos < dot.size()) {
    std::size_t end = dot.find('\n', pos);
    if (end == std::string::npos) end = dot.size();
    std::string line = dot.substr(pos, end - pos);
    pos = end + 1;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
    if (line.empty()) continue;
    char back = line.back();
    if (back != ';' && back != '{' && back != '}') return false;
  }
  return true;
}

}  // namespace cpomdp::test
