#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpomdp/common.hpp"

namespace cpomdp {

// Nonnegative multipliers with a hard upper bound; every ascent step projects
// back into [0, bound].
class DualVector {
 public:
  DualVector() = default;
  DualVector(std::vector<double> values, double bound) : v_(std::move(values)), bound_(bound) {
    if (v_.empty()) throw std::invalid_argument("DualVector: empty");
    if (!(bound_ > 0.0)) throw std::invalid_argument("DualVector: bound must be positive");
    for (double x : v_)
      if (!(x >= 0.0) || x > bound_)
        throw std::invalid_argument("DualVector: initial value outside [0, bound]");
  }

  // v <- clamp(v + alpha * (q_c - budget), 0, bound), elementwise.
  void ascend(const CostVec& q_c, const CostVec& budget, double alpha) {
    check_same_length(q_c, budget, "DualVector::ascend");
    if (q_c.size() != v_.size())
      throw std::invalid_argument("DualVector::ascend: dimension mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i)
      v_[i] = std::clamp(v_[i] + alpha * (q_c[i] - budget[i]), 0.0, bound_);
  }

  double dot(const CostVec& c) const {
    check_same_length(c, v_, "DualVector::dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) acc += v_[i] * c[i];
    return acc;
  }

  const std::vector<double>& values() const { return v_; }
  double bound() const { return bound_; }
  std::size_t size() const { return v_.size(); }

 private:
  std::vector<double> v_;
  double bound_ = 0.0;
};

// Initialization of fresh action statistics. Counts seeded with n_init behave as
// if n_init samples at the init values had already been averaged in.
struct NodeInit {
  long n_init = 0;
  double q_r_init = 0.0;
  double q_c_init = 0.0;
  double c_bar_init = 0.0;
};

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// History/action tree stored in two index arenas. History nodes hold visit
// counts, a local dual vector, the latest remaining-budget estimate, and a
// particle bucket (weighted at observation nodes under widening). Action nodes
// hold running means of return, cost-to-go and immediate cost.
template <class S, class O>
class SearchTree {
 public:
  struct ActionNode {
    NodeId parent = kNoNode;  // owning history node
    int action = -1;
    long n = 0;
    double q_r = 0.0;
    CostVec q_c;
    CostVec c_bar;
    std::vector<O> obs_keys;
    std::vector<NodeId> obs_children;
  };

  struct HistoryNode {
    NodeId parent = kNoNode;  // owning action node, kNoNode at root
    long n = 0;
    bool expanded = false;
    DualVector lambda;
    CostVec c_rem;
    std::vector<NodeId> actions;
    std::vector<S> particles;
    std::vector<double> weights;  // parallel to particles when weighted
  };

  explicit SearchTree(std::size_t k) : k_(k) {}

  NodeId make_root(const DualVector& lambda0, const CostVec& c_rem) {
    if (!histories_.empty()) throw std::logic_error("SearchTree: root already exists");
    HistoryNode root;
    root.lambda = lambda0;
    root.c_rem = c_rem;
    histories_.push_back(std::move(root));
    return 0;
  }

  NodeId root() const { return 0; }
  bool empty() const { return histories_.empty(); }
  std::size_t history_count() const { return histories_.size(); }
  std::size_t action_count() const { return actions_.size(); }

  HistoryNode& history(NodeId id) { return histories_[id]; }
  const HistoryNode& history(NodeId id) const { return histories_[id]; }
  ActionNode& action_node(NodeId id) { return actions_[id]; }
  const ActionNode& action_node(NodeId id) const { return actions_[id]; }

  NodeId find_action_child(NodeId h, int action) const {
    for (NodeId aid : histories_[h].actions)
      if (actions_[aid].action == action) return aid;
    return kNoNode;
  }

  NodeId add_action_child(NodeId h, int action, const NodeInit& init) {
    if (find_action_child(h, action) != kNoNode)
      throw std::logic_error("SearchTree: duplicate action child");
    ActionNode a;
    a.parent = h;
    a.action = action;
    a.n = init.n_init;
    a.q_r = init.q_r_init;
    a.q_c = CostVec(k_, init.q_c_init);
    a.c_bar = CostVec(k_, init.c_bar_init);
    actions_.push_back(std::move(a));
    NodeId id = static_cast<NodeId>(actions_.size() - 1);
    histories_[h].actions.push_back(id);
    return id;
  }

  // Marks h expanded, copies the parent history's dual vector (the root keeps
  // the values it was created with), and creates one action child per entry.
  void expand(NodeId h, const std::vector<int>& actions, const NodeInit& init) {
    HistoryNode& node = histories_[h];
    if (node.expanded) throw std::logic_error("SearchTree: node already expanded");
    if (node.parent != kNoNode) {
      NodeId parent_h = actions_[node.parent].parent;
      node.lambda = histories_[parent_h].lambda;
    }
    node.expanded = true;
    for (int a : actions) add_action_child(h, a, init);
  }

  NodeId find_obs_child(NodeId aid, const O& key) const {
    const ActionNode& a = actions_[aid];
    for (std::size_t i = 0; i < a.obs_keys.size(); ++i)
      if (a.obs_keys[i] == key) return a.obs_children[i];
    return kNoNode;
  }

  NodeId add_obs_child(NodeId aid, const O& key) {
    if (find_obs_child(aid, key) != kNoNode)
      throw std::logic_error("SearchTree: duplicate observation child");
    HistoryNode child;
    child.parent = aid;
    child.c_rem = zero_costs(k_);
    histories_.push_back(std::move(child));
    NodeId id = static_cast<NodeId>(histories_.size() - 1);
    actions_[aid].obs_keys.push_back(key);
    actions_[aid].obs_children.push_back(id);
    return id;
  }

  // Incremental means; counts must already be incremented so the divisor is the
  // post-increment count (init counts included).
  void backup(NodeId aid, double sampled_return, const CostVec& sampled_cost,
              const CostVec& sampled_step_cost) {
    ActionNode& a = actions_[aid];
    if (a.n < 1) throw std::logic_error("SearchTree::backup: count not incremented");
    check_same_length(sampled_cost, a.q_c, "SearchTree::backup");
    check_same_length(sampled_step_cost, a.c_bar, "SearchTree::backup");
    double inv = 1.0 / static_cast<double>(a.n);
    a.q_r += (sampled_return - a.q_r) * inv;
    for (std::size_t i = 0; i < k_; ++i) {
      a.q_c[i] += (sampled_cost[i] - a.q_c[i]) * inv;
      a.c_bar[i] += (sampled_step_cost[i] - a.c_bar[i]) * inv;
    }
  }

  // N(h) == sum_a (N(h,a) - n_init) at every expanded history node.
  bool counts_consistent(long n_init) const {
    for (const HistoryNode& h : histories_) {
      if (!h.expanded) continue;
      long total = 0;
      for (NodeId aid : h.actions) total += actions_[aid].n - n_init;
      if (total != h.n) return false;
    }
    return true;
  }

  using ActionLabeler = std::function<std::string(int)>;
  using ObsLabeler = std::function<std::string(const O&)>;

  // depth_limit counts history levels below the root; 0 emits the root record
  // only. Children are arrays (not maps) so repeated continuous keys are safe.
  nlohmann::json to_json(int depth_limit, const ActionLabeler& action_label,
                         const ObsLabeler& obs_label) const {
    if (histories_.empty()) return nlohmann::json::object();
    return history_json(root(), 0, depth_limit, action_label, obs_label);
  }

  std::string to_dot(int depth_limit, const ActionLabeler& action_label,
                     const ObsLabeler& obs_label) const {
    std::ostringstream os;
    os << "digraph search_tree {\n";
    os << "  node [fontsize=10];\n";
    if (!histories_.empty()) dot_history(os, root(), 0, depth_limit, action_label, obs_label);
    os << "}\n";
    return os.str();
  }

 private:
  nlohmann::json history_json(NodeId h, int depth, int depth_limit,
                              const ActionLabeler& action_label,
                              const ObsLabeler& obs_label) const {
    const HistoryNode& node = histories_[h];
    nlohmann::json j;
    j["n"] = node.n;
    j["lambda"] = node.lambda.size() ? node.lambda.values() : std::vector<double>{};
    j["crem"] = node.c_rem;
    if (depth >= depth_limit) return j;
    nlohmann::json children = nlohmann::json::array();
    for (NodeId aid : node.actions) {
      const ActionNode& a = actions_[aid];
      nlohmann::json ja;
      ja["action"] = action_label(a.action);
      ja["n"] = a.n;
      ja["qr"] = a.q_r;
      ja["qc"] = a.q_c;
      ja["cbar"] = a.c_bar;
      nlohmann::json obs_children = nlohmann::json::array();
      for (std::size_t i = 0; i < a.obs_children.size(); ++i) {
        nlohmann::json jo =
            history_json(a.obs_children[i], depth + 1, depth_limit, action_label, obs_label);
        jo["obs"] = obs_label(a.obs_keys[i]);
        obs_children.push_back(std::move(jo));
      }
      ja["children"] = std::move(obs_children);
      children.push_back(std::move(ja));
    }
    j["children"] = std::move(children);
    return j;
  }

  static std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  }

  void dot_history(std::ostringstream& os, NodeId h, int depth, int depth_limit,
                   const ActionLabeler& action_label, const ObsLabeler& obs_label) const {
    const HistoryNode& node = histories_[h];
    os << "  h" << h << " [shape=ellipse, label=\"N=" << node.n << "\"];\n";
    if (depth >= depth_limit) return;
    for (NodeId aid : node.actions) {
      const ActionNode& a = actions_[aid];
      os << "  q" << aid << " [shape=box, label=\"" << dot_escape(action_label(a.action))
         << "\\nN=" << a.n << "\"];\n";
      os << "  h" << h << " -> q" << aid << ";\n";
      for (std::size_t i = 0; i < a.obs_children.size(); ++i) {
        dot_history(os, a.obs_children[i], depth + 1, depth_limit, action_label, obs_label);
        os << "  q" << aid << " -> h" << a.obs_children[i] << " [label=\""
           << dot_escape(obs_label(a.obs_keys[i])) << "\"];\n";
      }
    }
  }

  std::size_t k_;
  std::vector<HistoryNode> histories_;
  std::vector<ActionNode> actions_;
};

}  // namespace cpomdp
