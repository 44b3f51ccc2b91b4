#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpomdp/envs/lightdark.hpp"
#include "cpomdp/envs/tiger.hpp"
#include "cpomdp/solver.hpp"
#include "cpomdp/widening.hpp"
#include "support/mocks.hpp"

using namespace cpomdp;
using envs::LdState;
using envs::LightDarkModel;
using envs::TigerModel;
using test::BanditModel;
using test::CountingBandit;

TEST_CASE("widening cap and config validation") {
  CHECK(widening_cap(1.0, 0.0, 5) == 1.0);
  CHECK(widening_cap(2.0, 0.5, 4) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(widening_cap(3.0, 0.2, 0) == 3.0);  // N clamped at 1

  WideningConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.k_obs = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.alpha_act = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.alpha_obs = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("repeated observation keys revisit without resampling") {
  CountingBandit model(1);  // every step emits the same observation 0.5
  SearchTree<int, double> tree(1);
  tree.make_root(DualVector({1.0}, 10.0), {1.0});
  tree.expand(0, {0}, NodeInit{});
  NodeId aid = tree.find_action_child(0, 0);
  WideningConfig cfg;
  Rng rng = make_stream(1, 0);

  StepResult<int, double> step{1, 0.5, 1.0, {0.25}};
  auto first = widen_observation(tree, aid, step, 0, model, cfg, rng);
  CHECK(first.created);
  CHECK(first.state == 1);
  CHECK(first.reward == 1.0);

  long calls_before = model.reward_cost_calls();
  auto again = widen_observation(tree, aid, step, 0, model, cfg, rng);
  CHECK_FALSE(again.created);
  CHECK(again.child == first.child);
  CHECK(again.state == 1);
  CHECK(again.reward == 1.0);  // passthrough, no re-evaluation
  CHECK(model.reward_cost_calls() == calls_before);
  CHECK(tree.action_node(aid).obs_children.size() == 1);
  CHECK(tree.history(first.child).particles.size() == 2);
  CHECK(tree.history(first.child).weights.size() == 2);
}

TEST_CASE("fresh keys create children until the cap, then funnel") {
  CountingBandit model(1000);  // practically always a fresh key
  SearchTree<int, double> tree(1);
  tree.make_root(DualVector({1.0}, 10.0), {1.0});
  tree.expand(0, {0}, NodeInit{});
  NodeId aid = tree.find_action_child(0, 0);
  WideningConfig cfg;
  cfg.k_obs = 1.0;
  cfg.alpha_obs = 0.0;  // hard cap of one observation child
  Rng rng = make_stream(2, 0);

  auto draw = [&](double obs) {
    StepResult<int, double> step{1, obs, 1.0, {0.25}};
    return widen_observation(tree, aid, step, 0, model, cfg, rng);
  };

  auto first = draw(0.5);
  CHECK(first.created);
  long calls_before = model.reward_cost_calls();
  auto funneled = draw(1.5);
  CHECK_FALSE(funneled.created);
  CHECK(funneled.child == first.child);
  CHECK(funneled.state == 1);  // resampled from the child's particle bucket
  CHECK(model.reward_cost_calls() == calls_before + 1);
  CHECK(funneled.reward == 1.0);
  CHECK(funneled.cost == CostVec{0.25});
  CHECK(tree.action_node(aid).obs_children.size() == 1);
  CHECK(tree.history(first.child).particles.size() == 2);
}

TEST_CASE("under the cap every new key becomes its own child") {
  CountingBandit model(1000);
  SearchTree<int, double> tree(1);
  tree.make_root(DualVector({1.0}, 10.0), {1.0});
  tree.expand(0, {0}, NodeInit{});
  NodeId aid = tree.find_action_child(0, 0);
  WideningConfig cfg;
  cfg.k_obs = 4.0;
  cfg.alpha_obs = 0.0;
  Rng rng = make_stream(3, 0);
  for (int i = 0; i < 4; ++i) {
    StepResult<int, double> step{1, i + 0.5, 1.0, {0.25}};
    auto r = widen_observation(tree, aid, step, 0, model, cfg, rng);
    CHECK(r.created);
  }
  CHECK(tree.action_node(aid).obs_children.size() == 4);
  StepResult<int, double> step{1, 99.5, 1.0, {0.25}};
  auto r = widen_observation(tree, aid, step, 0, model, cfg, rng);
  CHECK_FALSE(r.created);
  CHECK(tree.action_node(aid).obs_children.size() == 4);
}

TEST_CASE("zero observation density falls back to uniform resampling") {
  struct DeadDensity final : CpomdpModel<int, double> {
    int num_actions() const override { return 1; }
    double discount() const override { return 0.9; }
    CostVec cost_budget() const override { return {1.0}; }
    std::unique_ptr<Belief<int>> initial_belief() const override { return nullptr; }
    StepResult<int, double> step(const int&, int, Rng&) const override {
      return {1, 0.0, 0.0, {0.0}};
    }
    bool is_terminal(const int& s) const override { return s != 0; }
    bool has_obs_density() const override { return true; }
    double obs_density(int, const int&, const double&) const override { return 0.0; }
    bool has_reward_cost() const override { return true; }
    std::pair<double, CostVec> reward_cost(const int&, int, const int&) const override {
      return {3.0, {0.5}};
    }
  } model;

  SearchTree<int, double> tree(1);
  tree.make_root(DualVector({1.0}, 10.0), {1.0});
  tree.expand(0, {0}, NodeInit{});
  NodeId aid = tree.find_action_child(0, 0);
  WideningConfig cfg;
  cfg.k_obs = 1.0;
  cfg.alpha_obs = 0.0;
  Rng rng = make_stream(4, 0);

  StepResult<int, double> s1{7, 0.5, 1.0, {0.25}};
  widen_observation(tree, aid, s1, 0, model, cfg, rng);
  StepResult<int, double> s2{8, 1.5, 1.0, {0.25}};
  auto r = widen_observation(tree, aid, s2, 0, model, cfg, rng);
  CHECK_FALSE(r.created);
  CHECK((r.state == 7 || r.state == 8));
  CHECK(r.reward == 3.0);  // re-evaluated through reward_cost
  CHECK(r.cost == CostVec{0.5});
}

TEST_CASE("planner respects the observation cap on every action node") {
  LightDarkModel ld;
  PlannerConfig cfg;
  cfg.sims = 800;
  cfg.max_depth = 8;
  cfg.kappa = 50.0;
  WideningConfig wide;
  wide.k_obs = 2.0;
  wide.alpha_obs = 0.2;
  LagrangianMctsPlanner<LdState, double> planner(ld, cfg, wide);
  Rng rng = make_stream(5, 0);
  planner.plan(*ld.initial_belief(), {0.1}, rng);

  const auto& tree = planner.tree();
  REQUIRE(tree.action_count() > 0);
  bool saw_multi = false;
  for (std::size_t i = 0; i < tree.action_count(); ++i) {
    const auto& a = tree.action_node(static_cast<NodeId>(i));
    double cap = widening_cap(wide.k_obs, wide.alpha_obs, a.n);
    CHECK(static_cast<double>(a.obs_keys.size()) <= cap + 1.0);
    CHECK(a.obs_keys.size() == a.obs_children.size());
    if (a.obs_children.size() > 1) saw_multi = true;
  }
  CHECK(saw_multi);

  // visited observation nodes carry a weighted particle bucket
  NodeId first_aid = tree.history(tree.root()).actions.at(0);
  const auto& an = tree.action_node(first_aid);
  REQUIRE(!an.obs_children.empty());
  const auto& child = tree.history(an.obs_children[0]);
  CHECK(child.particles.size() == child.weights.size());
  CHECK(!child.particles.empty());
}

TEST_CASE("an effectively infinite cap reproduces the unwidened solver") {
  TigerModel tiger;
  PlannerConfig cfg;
  cfg.sims = 500;
  cfg.max_depth = 6;
  cfg.kappa = 10.0;

  LagrangianMctsPlanner<int, int> plain(tiger, cfg);
  Rng r1 = make_stream(6, 0);
  PlanResult a = plain.plan(*tiger.initial_belief(), {0.9}, r1);

  WideningConfig wide;
  wide.k_obs = 1.0e9;
  wide.alpha_obs = 0.0;
  LagrangianMctsPlanner<int, int> widened(tiger, cfg, wide);
  Rng r2 = make_stream(6, 0);
  PlanResult b = widened.plan(*tiger.initial_belief(), {0.9}, r2);

  CHECK(a.policy == b.policy);
  CHECK(a.chosen_action == b.chosen_action);
  CHECK(a.root_visits == b.root_visits);
  CHECK(a.root_lambda == b.root_lambda);
  REQUIRE(a.root_actions.size() == b.root_actions.size());
  for (std::size_t i = 0; i < a.root_actions.size(); ++i) {
    CHECK(a.root_actions[i].visits == b.root_actions[i].visits);
    CHECK(a.root_actions[i].q_r == b.root_actions[i].q_r);
    CHECK(a.root_actions[i].q_c == b.root_actions[i].q_c);
    CHECK(a.root_actions[i].c_bar == b.root_actions[i].c_bar);
  }
}

TEST_CASE("action widening grows arms gradually") {
  BanditModel bandit({{1.0, 0.0}, {2.0, 0.5}, {3.0, 1.0}, {4.0, 2.0}}, 1.0);
  PlannerConfig cfg;
  cfg.sims = 600;
  cfg.max_depth = 3;
  cfg.kappa = 2.0;
  WideningConfig wide;
  wide.enable_action_widening = true;
  wide.k_act = 1.0;
  wide.alpha_act = 0.1;  // admits a second arm near n = 2, a third only past n = 1024
  LagrangianMctsPlanner<int, int> planner(bandit, cfg, wide);
  Rng rng = make_stream(7, 0);
  PlanResult pr = planner.plan(*bandit.initial_belief(), {1.0}, rng);

  const auto& root = planner.tree().history(planner.tree().root());
  CHECK(root.actions.size() == 2);
  double cap = widening_cap(wide.k_act, wide.alpha_act, root.n);
  CHECK(static_cast<double>(root.actions.size()) <= cap + 1.0);
  CHECK(!pr.policy.empty());
}
