#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cpomdp/belief.hpp"
#include "cpomdp/model.hpp"
#include "cpomdp/tree.hpp"
#include "cpomdp/widening.hpp"

namespace cpomdp {

enum class RolloutPolicy { uniform_random };

// alpha_i = c / i^exponent; c = 0 freezes the duals.
struct AlphaSchedule {
  double c = 1.0;
  double exponent = 0.5;
};

struct PlannerConfig {
  int sims = 100;                      // simulations per planning call
  int max_depth = 20;                  // search + rollout horizon
  double kappa = 1.0;                  // exploration constant
  double nu = 0.0;                     // best-action tolerance of the stochastic policy
  std::vector<double> lambda0 = {1.0};
  double lambda_max = 100.0;
  AlphaSchedule alpha;
  bool local_duals = true;             // false recovers the global-dual baseline
  RolloutPolicy rollout = RolloutPolicy::uniform_random;
  NodeInit init;
  bool reuse_tree = false;
  std::uint64_t seed = 0;              // used only by the rng-less plan() overload

  void validate(std::size_t k) const {
    if (sims < 1) throw std::invalid_argument("PlannerConfig: sims must be >= 1");
    if (max_depth < 1) throw std::invalid_argument("PlannerConfig: max_depth must be >= 1");
    if (kappa < 0.0) throw std::invalid_argument("PlannerConfig: kappa must be >= 0");
    if (nu < 0.0) throw std::invalid_argument("PlannerConfig: nu must be >= 0");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("PlannerConfig: lambda_max must be > 0");
    if (alpha.c < 0.0 || alpha.exponent < 0.0)
      throw std::invalid_argument("PlannerConfig: alpha schedule must be nonnegative");
    if (init.n_init < 0) throw std::invalid_argument("PlannerConfig: n_init must be >= 0");
    if (lambda0.size() != k && lambda0.size() != 1)
      throw std::invalid_argument("PlannerConfig: lambda0 must have one entry per cost dimension");
    for (double l : lambda0)
      if (!(l >= 0.0) || l > lambda_max)
        throw std::invalid_argument("PlannerConfig: lambda0 outside [0, lambda_max]");
  }

  std::vector<double> resolved_lambda0(std::size_t k) const {
    if (lambda0.size() == k) return lambda0;
    return std::vector<double>(k, lambda0.front());
  }
};

using ActionDistribution = std::vector<std::pair<int, double>>;

inline int sample_from(const ActionDistribution& dist, Rng& rng) {
  if (dist.empty()) throw std::logic_error("sample_from: empty distribution");
  if (dist.size() == 1) return dist.front().first;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  double acc = 0.0;
  for (const auto& [a, p] : dist) {
    acc += p;
    if (x < acc) return a;
  }
  return dist.back().first;
}

// Remaining budget one level down: (c_rem - c_bar) / gamma, elementwise.
// Deliberately unclamped; overspent branches go negative and stay there.
inline CostVec propagate_budget(const CostVec& c_rem, const CostVec& c_bar, double gamma) {
  check_same_length(c_rem, c_bar, "propagate_budget");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("propagate_budget: gamma must lie in (0, 1]");
  CostVec out(c_rem.size());
  for (std::size_t i = 0; i < c_rem.size(); ++i) out[i] = (c_rem[i] - c_bar[i]) / gamma;
  return out;
}

// UCB exploration term; infinite for unvisited arms so they are tried first.
inline double ucb_bonus(double kappa, double n_h, double n_ha) {
  if (kappa <= 0.0) return 0.0;
  if (n_ha <= 0.0) return std::numeric_limits<double>::infinity();
  return kappa * std::sqrt(std::log(std::max(n_h, 1.0)) / n_ha);
}

// Cost-constrained action distribution over the near-best set
// A* = {a : scalarized(a) >= max - nu}. With one cost dimension the minimum- and
// maximum-cost members of A* are mixed so the expected cost meets c_rem exactly
// (clipped to the endpoints when c_rem falls outside their cost range). With
// k > 1 the distribution degenerates to the deterministic scalarized argmax.
inline ActionDistribution stochastic_policy(const std::vector<int>& actions,
                                            const std::vector<double>& scalarized,
                                            const std::vector<CostVec>& q_c,
                                            const CostVec& c_rem, double nu) {
  if (actions.empty()) throw std::invalid_argument("stochastic_policy: no actions");
  if (actions.size() != scalarized.size() || actions.size() != q_c.size())
    throw std::invalid_argument("stochastic_policy: input length mismatch");

  std::size_t best = 0;
  for (std::size_t i = 1; i < actions.size(); ++i)
    if (scalarized[i] > scalarized[best]) best = i;

  const std::size_t k = c_rem.size();
  if (k != 1) return {{actions[best], 1.0}};

  std::size_t low = best, high = best;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (scalarized[i] < scalarized[best] - nu) continue;
    if (q_c[i][0] < q_c[low][0]) low = i;
    if (q_c[i][0] > q_c[high][0]) high = i;
  }

  double c_low = q_c[low][0], c_high = q_c[high][0];
  if (c_rem[0] <= c_low) return {{actions[low], 1.0}};
  if (c_rem[0] >= c_high) return {{actions[high], 1.0}};
  double p = (c_rem[0] - c_low) / (c_high - c_low);
  if (actions[low] < actions[high])
    return {{actions[low], 1.0 - p}, {actions[high], p}};
  return {{actions[high], p}, {actions[low], 1.0 - p}};
}

// Uniform-random playout to the depth limit; returns discounted (return, cost)
// from the given state. The remaining budget is accepted for interface parity
// with cost-aware rollout policies but the uniform policy ignores it.
template <class S, class O>
std::pair<double, CostVec> rollout_uniform(const CpomdpModel<S, O>& model, S s,
                                           const CostVec& /*c_rem*/, int depth, Rng& rng) {
  const std::size_t k = model.num_costs();
  double ret = 0.0;
  CostVec cost = zero_costs(k);
  double disc = 1.0;
  std::uniform_int_distribution<int> pick(0, model.num_actions() - 1);
  for (int t = 0; t < depth; ++t) {
    if (model.is_terminal(s)) break;
    StepResult<S, O> st = model.step(s, pick(rng), rng);
    ret += disc * st.reward;
    add_scaled(cost, st.cost, disc);
    disc *= model.discount();
    s = std::move(st.next);
  }
  return {ret, cost};
}

struct RootActionStat {
  int action = -1;
  long visits = 0;  // real visits, init counts excluded
  double q_r = 0.0;
  CostVec q_c;
  CostVec c_bar;
  double visit_fraction = 0.0;
};

struct PlanResult {
  ActionDistribution policy;
  int chosen_action = -1;
  std::vector<double> root_lambda;
  std::vector<RootActionStat> root_actions;
  long root_visits = 0;

  const CostVec& c_bar_for(int action) const {
    for (const auto& st : root_actions)
      if (st.action == action) return st.c_bar;
    throw std::invalid_argument("PlanResult: unknown action " + std::to_string(action));
  }
};

// Lagrangian-guided Monte Carlo tree search for constrained POMDPs.
//
// Action values are scalarized as Q_R - lambda . Q_C plus a UCB bonus. The
// multiplier is either a single global vector updated at the root between
// simulations (baseline) or a per-history-node vector updated by recursive dual
// ascent against that node's remaining budget (local_duals). The remaining
// budget recurses as (c_rem - c_bar(h,a)) / gamma along the simulated path.
// Passing a WideningConfig enables double progressive widening for continuous
// observation (and optionally action) spaces; without it observation children
// are keyed by equality, which suits discrete models.
template <class S, class O>
class LagrangianMctsPlanner {
 public:
  using Tree = SearchTree<S, O>;

  LagrangianMctsPlanner(const CpomdpModel<S, O>& model, PlannerConfig cfg,
                        std::optional<WideningConfig> widening = std::nullopt)
      : model_(model), cfg_(std::move(cfg)), widening_(std::move(widening)),
        k_(model.num_costs()) {
    validate_model(model_);
    cfg_.validate(k_);
    if (widening_) {
      widening_->validate();
      if (!model_.has_reward_cost())
        throw std::invalid_argument(
            "planner: widening needs the model's reward_cost evaluator");
    } else if (model_.continuous_observations()) {
      throw std::invalid_argument(
          "planner: continuous observations need a widening solver");
    }
    lambda0_ = cfg_.resolved_lambda0(k_);
    global_lambda_ = DualVector(lambda0_, cfg_.lambda_max);
  }

  PlanResult plan(const Belief<S>& belief, const CostVec& budget, Rng& rng) {
    if (budget.size() != k_) throw std::invalid_argument("plan: budget dimension mismatch");
    setup_tree(budget);
    const NodeId root = tree_->root();
    for (int i = 1; i <= cfg_.sims; ++i) {
      S s = belief.sample(rng);
      simulate(s, root, budget, cfg_.max_depth, rng);
      // Skip ascent until the root has action children (all-terminal draws so
      // far, or an action-widened root that has not admitted an arm yet).
      if (!tree_->history(root).expanded || tree_->history(root).actions.empty()) continue;
      // Root dual ascent on the current greedy action (no exploration, no mixing).
      ActionDistribution greedy = action_policy(root, 0.0, 0.0, budget, true);
      if (!greedy.empty()) {
        NodeId aid = tree_->find_action_child(root, greedy.front().first);
        plan_lambda().ascend(tree_->action_node(aid).q_c, budget, alpha_at(i));
      }
    }
    return extract_result(budget, rng);
  }

  PlanResult plan(const Belief<S>& belief, const CostVec& budget) {
    Rng rng = make_stream(cfg_.seed, 0x706c616eu);
    return plan(belief, budget, rng);
  }

  // Records the executed (action, observation) so the next plan() call can be
  // re-rooted at that child when reuse_tree is on.
  void advance_root(int action, const O& obs) {
    pending_ = Pending{action, obs};
  }

  const Tree& tree() const {
    if (!tree_) throw std::logic_error("planner: no tree yet");
    return *tree_;
  }

  const PlannerConfig& config() const { return cfg_; }

  nlohmann::json dump_tree_json(int depth_limit) const {
    return tree().to_json(depth_limit, [this](int a) { return model_.action_name(a); },
                          [this](const O& o) { return model_.observation_name(o); });
  }

  std::string dump_tree_dot(int depth_limit) const {
    return tree().to_dot(depth_limit, [this](int a) { return model_.action_name(a); },
                         [this](const O& o) { return model_.observation_name(o); });
  }

 private:
  struct Pending {
    int action;
    O obs;
  };

  double alpha_at(long i) const {
    return cfg_.alpha.c / std::pow(static_cast<double>(i), cfg_.alpha.exponent);
  }

  DualVector& plan_lambda() {
    return cfg_.local_duals ? tree_->history(tree_->root()).lambda : global_lambda_;
  }

  const DualVector& lambda_at(NodeId h) const {
    return cfg_.local_duals ? tree_->history(h).lambda : global_lambda_;
  }

  void setup_tree(const CostVec& budget) {
    DualVector fresh_lambda(lambda0_, cfg_.lambda_max);
    if (cfg_.reuse_tree && tree_ && pending_) {
      NodeId aid = tree_->find_action_child(tree_->root(), pending_->action);
      NodeId child = aid == kNoNode ? kNoNode : tree_->find_obs_child(aid, pending_->obs);
      if (child != kNoNode) {
        auto promoted = std::make_unique<Tree>(k_);
        copy_subtree(*tree_, child, *promoted, budget);
        tree_ = std::move(promoted);
        pending_.reset();
        if (!cfg_.local_duals) global_lambda_ = fresh_lambda;
        return;
      }
    }
    pending_.reset();
    tree_ = std::make_unique<Tree>(k_);
    tree_->make_root(fresh_lambda, budget);
    if (!cfg_.local_duals) global_lambda_ = fresh_lambda;
  }

  // Deep copy of the subtree under `from` into an empty tree, keeping the
  // statistics and local duals of every promoted node.
  void copy_subtree(const Tree& src, NodeId from, Tree& dst, const CostVec& budget) {
    const auto& node = src.history(from);
    NodeId root =
        dst.make_root(node.lambda.size() ? node.lambda : DualVector(lambda0_, cfg_.lambda_max),
                      budget);
    copy_below(src, from, dst, root);
    auto& r = dst.history(root);
    r.n = node.n;
    r.expanded = node.expanded;
    r.particles = node.particles;
    r.weights = node.weights;
  }

  void copy_below(const Tree& src, NodeId sh, Tree& dst, NodeId dh) {
    for (NodeId said : src.history(sh).actions) {
      const auto& sa = src.action_node(said);
      NodeId daid = dst.add_action_child(dh, sa.action, cfg_.init);
      auto& da = dst.action_node(daid);
      da.n = sa.n;
      da.q_r = sa.q_r;
      da.q_c = sa.q_c;
      da.c_bar = sa.c_bar;
      for (std::size_t i = 0; i < sa.obs_children.size(); ++i) {
        NodeId dchild = dst.add_obs_child(daid, sa.obs_keys[i]);
        const auto& schild = src.history(sa.obs_children[i]);
        auto& dc = dst.history(dchild);
        dc.n = schild.n;
        dc.expanded = schild.expanded;
        dc.lambda = schild.lambda;
        dc.c_rem = schild.c_rem;
        dc.particles = schild.particles;
        dc.weights = schild.weights;
        copy_below(src, sa.obs_children[i], dst, dchild);
      }
    }
  }

  std::vector<int> all_actions() const {
    std::vector<int> out(model_.num_actions());
    for (int a = 0; a < model_.num_actions(); ++a) out[a] = a;
    return out;
  }

  // Scalarized UCB policy over the node's action children. With kappa > 0,
  // unvisited arms are taken first in creation order. visited_only restricts to
  // arms with at least one real visit (used for root ascent and extraction).
  ActionDistribution action_policy(NodeId h, double kappa, double nu, const CostVec& c_rem,
                                   bool visited_only) const {
    const auto& node = tree_->history(h);
    if (!node.expanded) throw std::logic_error("action_policy: unexpanded node");
    if (node.actions.empty()) return {};  // action-widened node with no arms yet
    const DualVector& lam = lambda_at(h);

    std::vector<int> actions;
    std::vector<double> scalarized;
    std::vector<CostVec> costs;
    bool any_visited = false;
    for (NodeId aid : node.actions)
      if (tree_->action_node(aid).n > cfg_.init.n_init) any_visited = true;

    for (NodeId aid : node.actions) {
      const auto& a = tree_->action_node(aid);
      bool unvisited = a.n == 0;
      if (kappa > 0.0 && unvisited) return {{a.action, 1.0}};
      if (visited_only && any_visited && a.n <= cfg_.init.n_init) continue;
      actions.push_back(a.action);
      scalarized.push_back(a.q_r - lam.dot(a.q_c) +
                           ucb_bonus(kappa, static_cast<double>(node.n),
                                     static_cast<double>(a.n)));
      costs.push_back(a.q_c);
    }
    if (actions.empty()) return {};
    return stochastic_policy(actions, scalarized, costs, c_rem, nu);
  }

  std::pair<double, CostVec> simulate(const S& s, NodeId h, const CostVec& c_rem, int depth,
                                      Rng& rng) {
    tree_->history(h).c_rem = c_rem;
    if (depth == 0 || model_.is_terminal(s)) return {0.0, zero_costs(k_)};

    if (!widening_) tree_->history(h).particles.push_back(s);

    if (!tree_->history(h).expanded) {
      bool widen_actions = widening_ && widening_->enable_action_widening;
      tree_->expand(h, widen_actions ? std::vector<int>{} : all_actions(), cfg_.init);
      return rollout_uniform(model_, s, c_rem, depth, rng);
    }

    if (widening_ && widening_->enable_action_widening) maybe_widen_actions(h, rng);

    ActionDistribution dist = action_policy(h, cfg_.kappa, cfg_.nu, c_rem, false);
    int a = sample_from(dist, rng);
    NodeId aid = tree_->find_action_child(h, a);

    CostVec child_budget =
        propagate_budget(c_rem, tree_->action_node(aid).c_bar, model_.discount());
    StepResult<S, O> st = model_.step(s, a, rng);
    if (!std::isfinite(st.reward))
      throw std::runtime_error("simulate: model produced a non-finite reward");
    for (double c : st.cost)
      if (!std::isfinite(c)) throw std::runtime_error("simulate: model produced a non-finite cost");
    check_same_length(st.cost, c_rem, "simulate");

    NodeId child;
    S cont = st.next;
    double r = st.reward;
    CostVec c = st.cost;
    if (widening_) {
      WidenResult<S, O> w = widen_observation(*tree_, aid, st, s, model_, *widening_, rng);
      child = w.child;
      cont = std::move(w.state);
      r = w.reward;
      c = std::move(w.cost);
    } else {
      child = tree_->find_obs_child(aid, st.obs);
      if (child == kNoNode) child = tree_->add_obs_child(aid, st.obs);
    }

    auto [cr, cc] = simulate(cont, child, child_budget, depth - 1, rng);
    double ret = r + model_.discount() * cr;
    CostVec cost = c;
    add_scaled(cost, cc, model_.discount());

    auto& node = tree_->history(h);
    node.n += 1;
    tree_->action_node(aid).n += 1;
    tree_->backup(aid, ret, cost, c);
    if (cfg_.local_duals)
      node.lambda.ascend(tree_->action_node(aid).q_c, c_rem, alpha_at(node.n));
#ifndef NDEBUG
    long total = 0;
    for (NodeId id : node.actions) total += tree_->action_node(id).n - cfg_.init.n_init;
    assert(total == node.n && "count conservation violated");
#endif
    return {ret, cost};
  }

  void maybe_widen_actions(NodeId h, Rng& rng) {
    const auto& node = tree_->history(h);
    double cap = widening_cap(widening_->k_act, widening_->alpha_act, node.n);
    if (static_cast<double>(node.actions.size()) >= cap && !node.actions.empty()) return;
    for (int tries = 0; tries < 8; ++tries) {
      int a = model_.sample_action(rng);
      if (tree_->find_action_child(h, a) == kNoNode) {
        tree_->add_action_child(h, a, cfg_.init);
        return;
      }
    }
  }

  PlanResult extract_result(const CostVec& budget, Rng& rng) {
    const NodeId root = tree_->root();
    const auto& node = tree_->history(root);
    if (!node.expanded)
      throw std::runtime_error("plan: root was never expanded (terminal root belief?)");
    PlanResult out;
    out.root_visits = node.n;
    out.root_lambda = cfg_.local_duals ? node.lambda.values() : global_lambda_.values();
    for (NodeId aid : node.actions) {
      const auto& a = tree_->action_node(aid);
      RootActionStat st;
      st.action = a.action;
      st.visits = a.n - cfg_.init.n_init;
      st.q_r = a.q_r;
      st.q_c = a.q_c;
      st.c_bar = a.c_bar;
      st.visit_fraction =
          node.n > 0 ? static_cast<double>(st.visits) / static_cast<double>(node.n) : 0.0;
      out.root_actions.push_back(std::move(st));
    }
    out.policy = action_policy(root, 0.0, cfg_.nu, budget, true);
    if (out.policy.empty()) throw std::runtime_error("plan: root has no candidate actions");
    out.chosen_action = sample_from(out.policy, rng);
    return out;
  }

  const CpomdpModel<S, O>& model_;
  PlannerConfig cfg_;
  std::optional<WideningConfig> widening_;
  std::size_t k_;
  std::vector<double> lambda0_;
  DualVector global_lambda_;
  std::unique_ptr<Tree> tree_;
  std::optional<Pending> pending_;
};

// Between-step update: posterior root belief via the model's updater and the
// remaining budget pushed through the planner's mean immediate cost of the
// executed action.
template <class S, class O>
std::pair<std::unique_ptr<Belief<S>>, CostVec> step_episode(const CpomdpModel<S, O>& model,
                                                            const Belief<S>& belief,
                                                            const CostVec& budget,
                                                            const PlanResult& pr, int action,
                                                            const O& obs, int n_particles,
                                                            Rng& rng) {
  auto next_belief = model.update_belief(belief, action, obs, n_particles, rng);
  CostVec next_budget = propagate_budget(budget, pr.c_bar_for(action), model.discount());
  return {std::move(next_belief), std::move(next_budget)};
}

}  // namespace cpomdp
