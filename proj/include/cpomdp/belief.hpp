#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "cpomdp/common.hpp"
#include "cpomdp/model.hpp"

namespace cpomdp {

namespace detail {
// Inverse-cdf draw over nonnegative weights; total must be positive.
inline std::size_t weighted_index(const std::vector<double>& w, double total, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, total);
  double x = u(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (x < acc) return i;
  }
  return w.size() - 1;  // guard against rounding at the top end
}
}  // namespace detail

// Exact distribution over enumerated state indices.
class DiscreteBelief final : public Belief<int> {
 public:
  explicit DiscreteBelief(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("DiscreteBelief: empty distribution");
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw std::invalid_argument("DiscreteBelief: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("DiscreteBelief: probabilities sum to " + std::to_string(total));
  }

  int sample(Rng& rng) const override {
    return static_cast<int>(detail::weighted_index(probs_, 1.0, rng));
  }
  std::unique_ptr<Belief<int>> clone() const override {
    return std::make_unique<DiscreteBelief>(*this);
  }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

// Particle set, optionally weighted. An empty weight vector means uniform.
template <class S>
class ParticleBelief final : public Belief<S> {
 public:
  ParticleBelief() = default;
  explicit ParticleBelief(std::vector<S> particles) : particles_(std::move(particles)) {}
  ParticleBelief(std::vector<S> particles, std::vector<double> weights)
      : particles_(std::move(particles)), weights_(std::move(weights)) {
    if (!weights_.empty() && weights_.size() != particles_.size())
      throw std::invalid_argument("ParticleBelief: weight/particle count mismatch");
    for (double w : weights_)
      if (!(w >= 0.0)) throw std::invalid_argument("ParticleBelief: negative weight");
  }

  S sample(Rng& rng) const override {
    if (particles_.empty()) throw std::runtime_error("ParticleBelief: sampling from empty belief");
    if (weights_.empty()) {
      std::uniform_int_distribution<std::size_t> d(0, particles_.size() - 1);
      return particles_[d(rng)];
    }
    double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (total <= 0.0) throw std::runtime_error("ParticleBelief: total weight is zero");
    return particles_[detail::weighted_index(weights_, total, rng)];
  }

  std::unique_ptr<Belief<S>> clone() const override {
    return std::make_unique<ParticleBelief<S>>(*this);
  }

  bool weighted() const { return !weights_.empty(); }
  std::size_t size() const { return particles_.size(); }
  const std::vector<S>& particles() const { return particles_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<S> particles_;
  std::vector<double> weights_;
};

// Exact Bayes update b'(s') proportional to Z(o|a,s') * sum_s T(s,a,s') b(s).
inline DiscreteBelief exact_update(const DiscreteBelief& belief, int action, int obs,
                                   const DiscreteDynamics& dyn) {
  const int n = dyn.num_states();
  if (static_cast<int>(belief.size()) != n)
    throw std::invalid_argument("exact_update: belief size does not match state count");
  std::vector<double> post(n, 0.0);
  double total = 0.0;
  for (int next = 0; next < n; ++next) {
    double pred = 0.0;
    for (int s = 0; s < n; ++s) pred += belief.probs()[s] * dyn.transition_prob(s, action, next);
    post[next] = pred * dyn.obs_prob(action, next, obs);
    total += post[next];
  }
  if (total <= 0.0)
    throw std::runtime_error("exact_update: observation has zero likelihood under belief");
  for (double& p : post) p /= total;
  return DiscreteBelief(std::move(post));
}

// Bootstrap filter: draw n states from the prior, push each through the
// generative model with the executed action, weight by the observation density
// of the actual observation, then resample down to n unweighted particles.
template <class S, class O>
ParticleBelief<S> particle_filter_update(const Belief<S>& belief, int action, const O& obs,
                                         const CpomdpModel<S, O>& model, int n_particles,
                                         Rng& rng) {
  if (n_particles < 1) throw std::invalid_argument("particle_filter_update: n_particles < 1");
  if (!model.has_obs_density())
    throw std::logic_error("particle_filter_update: model lacks an observation density");
  std::vector<S> propagated;
  std::vector<double> weights;
  propagated.reserve(n_particles);
  weights.reserve(n_particles);
  double total = 0.0;
  for (int i = 0; i < n_particles; ++i) {
    S s = belief.sample(rng);
    StepResult<S, O> st = model.step(s, action, rng);
    double w = model.obs_density(action, st.next, obs);
    propagated.push_back(std::move(st.next));
    weights.push_back(w);
    total += w;
  }
  if (total <= 0.0)
    throw std::runtime_error("particle_filter_update: all particle weights are zero");
  std::vector<S> resampled;
  resampled.reserve(n_particles);
  for (int i = 0; i < n_particles; ++i)
    resampled.push_back(propagated[detail::weighted_index(weights, total, rng)]);
  return ParticleBelief<S>(std::move(resampled));
}

}  // namespace cpomdp
