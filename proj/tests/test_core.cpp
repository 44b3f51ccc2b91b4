#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpomdp/belief.hpp"
#include "cpomdp/common.hpp"
#include "cpomdp/model.hpp"
#include "cpomdp/stats.hpp"
#include "cpomdp/trajectory.hpp"

using namespace cpomdp;

TEST_CASE("make_stream is deterministic and stream-split") {
  Rng a = make_stream(42, 1);
  Rng b = make_stream(42, 1);
  Rng c = make_stream(42, 2);
  Rng d = make_stream(43, 1);
  CHECK(a() == b());
  CHECK(a() == b());
  Rng a2 = make_stream(42, 1);
  CHECK(a2() != c());  // distinct streams diverge immediately (astronomically likely)
  CHECK(make_stream(42, 1)() != d());
}

TEST_CASE("cost vector helpers") {
  CHECK(zero_costs(3) == CostVec{0.0, 0.0, 0.0});
  CostVec x{1.0, 2.0};
  add_scaled(x, CostVec{10.0, 20.0}, 0.5);
  CHECK(x == CostVec{6.0, 12.0});
  CHECK_THROWS_AS(add_scaled(x, CostVec{1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(check_same_length(CostVec{1.0}, CostVec{1.0, 2.0}, "t"), std::invalid_argument);
}

TEST_CASE("value_label prints integral and floating keys") {
  CHECK(value_label(7) == "7");
  CHECK(value_label(2.5) == "2.5");
}

TEST_CASE("discounted_sums matches hand computation") {
  std::vector<TrajectoryStep<int, int>> steps = {
      {0, 0, 0, 1.0, {0.5}},
      {1, 0, 0, 2.0, {1.0}},
      {2, 0, 0, 4.0, {0.0}},
  };
  auto [ret, cost] = discounted_sums(steps, 0.5, 1);
  CHECK(ret == doctest::Approx(1.0 + 0.5 * 2.0 + 0.25 * 4.0).epsilon(1e-12));
  CHECK(cost[0] == doctest::Approx(0.5 + 0.5 * 1.0).epsilon(1e-12));

  auto [r0, c0] = discounted_sums(std::vector<TrajectoryStep<int, int>>{}, 0.9, 2);
  CHECK(r0 == 0.0);
  CHECK(c0 == CostVec{0.0, 0.0});
}

TEST_CASE("violates_budget is strict") {
  CHECK_FALSE(violates_budget({1.0}, {1.0}));  // exactly on budget is fine
  CHECK(violates_budget({1.0 + 1e-12}, {1.0}));
  CHECK_FALSE(violates_budget({0.0, 2.0}, {1.0, 2.0}));
  CHECK(violates_budget({0.0, 2.1}, {1.0, 2.0}));
  CHECK_THROWS_AS(violates_budget({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("mean and standard error") {
  std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  CHECK(stats::mean(xs) == doctest::Approx(2.5).epsilon(1e-15));
  // sample var = ((1.5^2+0.5^2)*2)/3 = 5/3; se = sqrt(5/3/4)
  CHECK(stats::standard_error(xs) == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-12));
  CHECK(stats::standard_error({7.0}) == 0.0);
  CHECK_THROWS_AS(stats::mean({}), std::invalid_argument);
}

TEST_CASE("normal cdf reference points") {
  CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(stats::normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(stats::normal_cdf(-1.96) == doctest::Approx(1.0 - 0.9750021048517795).epsilon(1e-9));
}

TEST_CASE("two proportion one-sided z-test") {
  // 27/100 vs 59/100: pooled 0.43, z = -4.5704959..., p = 2.4328570e-6.
  double p = stats::two_proportion_p_value(27, 100, 59, 100);
  CHECK(p == doctest::Approx(2.432857066755312e-06).epsilon(1e-9));
  // symmetric direction is near 1
  CHECK(stats::two_proportion_p_value(59, 100, 27, 100) ==
        doctest::Approx(1.0 - 2.432857066755312e-06).epsilon(1e-9));
  // degenerate: no variance
  CHECK(stats::two_proportion_p_value(0, 10, 0, 10) == 1.0);
  CHECK_THROWS_AS(stats::two_proportion_p_value(5, 4, 0, 10), std::invalid_argument);
}

TEST_CASE("validate_model rejects broken models") {
  struct Bad final : CpomdpModel<int, int> {
    int actions = 1;
    double gamma = 0.9;
    CostVec budget = {1.0};
    int num_actions() const override { return actions; }
    double discount() const override { return gamma; }
    CostVec cost_budget() const override { return budget; }
    std::unique_ptr<Belief<int>> initial_belief() const override { return nullptr; }
    StepResult<int, int> step(const int&, int, Rng&) const override { return {0, 0, 0.0, {0.0}}; }
    bool is_terminal(const int&) const override { return true; }
  };
  Bad m;
  CHECK_NOTHROW(validate_model(m));
  m.actions = 0;
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  m.actions = 1;
  m.gamma = 1.5;
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  m.gamma = 1.0;  // gamma = 1 allowed for finite-horizon instances
  CHECK_NOTHROW(validate_model(m));
  m.budget = {-0.1};
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  m.budget = {};
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
}

TEST_CASE("optional model hooks throw by default") {
  struct Plain final : CpomdpModel<int, int> {
    int num_actions() const override { return 2; }
    double discount() const override { return 0.9; }
    CostVec cost_budget() const override { return {1.0}; }
    std::unique_ptr<Belief<int>> initial_belief() const override { return nullptr; }
    StepResult<int, int> step(const int&, int, Rng&) const override { return {0, 0, 0.0, {0.0}}; }
    bool is_terminal(const int&) const override { return true; }
  };
  Plain m;
  Rng rng = make_stream(1, 1);
  CHECK_FALSE(m.has_obs_density());
  CHECK_FALSE(m.has_reward_cost());
  CHECK_FALSE(m.continuous_observations());
  CHECK_THROWS_AS(m.obs_density(0, 0, 0), std::logic_error);
  CHECK_THROWS_AS(m.reward_cost(0, 0, 0), std::logic_error);
  CHECK_THROWS_AS(m.update_belief(DiscreteBelief({1.0}), 0, 0, 10, rng), std::logic_error);
  CHECK(m.action_name(1) == "a1");
  CHECK(m.observation_name(3) == "3");
  int seen0 = 0;
  for (int i = 0; i < 100; ++i)
    if (m.sample_action(rng) == 0) ++seen0;
  CHECK(seen0 > 20);
  CHECK(seen0 < 80);
}
