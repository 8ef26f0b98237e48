#ifndef GAILPT_RL_POLICY_HPP
#define GAILPT_RL_POLICY_HPP

#include <span>
#include <vector>

#include "gailpt/nn.hpp"
#include "gailpt/rng.hpp"

namespace gailpt {

struct TrajStep {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  double log_prob = 0.0;  // under the behavior policy
  double value = 0.0;     // critic estimate at collection time
  bool done = false;
};

struct TrajectoryBatch {
  std::vector<TrajStep> steps;
  double bootstrap_value = 0.0;  // V(s') after the final step; ignored when that step is done
  std::vector<double> returns;
  std::vector<double> advantages;

  /// Computes discounted returns and n-step advantages; neither crosses a
  /// done boundary.
  void finalize(double gamma, int horizon);
};

/// n-step advantage per step: sum of up to `horizon` discounted rewards plus
/// a discounted value bootstrap, minus the stored value estimate. Episode
/// ends truncate the sum with no bootstrap.
std::vector<double> advantage(const TrajectoryBatch& batch, double gamma, int horizon,
                              double bootstrap_value);

struct PPOConfig {
  double clip_eps = 0.2;
  int horizon = 5;
  double entropy_coef = 0.01;
  double critic_coef = 0.05;
  int epochs = 1;
  double gamma = 0.99;
  double lr = 1e-4;
};

/// Accumulates policy-gradient and squared-advantage critic gradients over a
/// finalized batch. Gradients are descent directions for
///   L_actor  = -sum_t [ log pi(a_t|s_t) * A_t + entropy_coef * H(pi(s_t)) ]
///   L_critic = critic_coef * sum_t (target_t - V(s_t))^2
void a3c_gradients(const nn::DenseNet& actor, const nn::DenseNet& critic,
                   const TrajectoryBatch& batch, double entropy_coef, double critic_coef,
                   nn::Gradients& actor_grads, nn::Gradients& critic_grads);

/// exp(new_log_prob - old_log_prob).
double ppo_ratio(double new_log_prob, double old_log_prob);

struct ClipLossResult {
  double loss = 0.0;
  std::vector<double> dloss_dratio;
};

/// Clipped surrogate: loss = -mean_t min(r_t A_t, clip(r_t, 1-eps, 1+eps) A_t).
/// The gradient w.r.t. a ratio is zero where the clipped branch is active.
ClipLossResult ppo_clip_loss(std::span<const double> ratios,
                             std::span<const double> advantages, double clip_eps);

/// Actor/critic shapes used throughout: 50-100-200 ReLU trunk, Softmax head
/// over the action space for the actor, width-1 Linear head for the critic.
nn::DenseNet make_actor(int state_width, int action_count, uint64_t seed);
nn::DenseNet make_critic(int state_width, uint64_t seed);

struct SampledAction {
  int action = 0;
  double log_prob = 0.0;
};
SampledAction sample_action(const nn::DenseNet& actor, std::span<const double> state,
                            RandomStream& rng);
int greedy_action(const nn::DenseNet& actor, std::span<const double> state);
double state_value(const nn::DenseNet& critic, std::span<const double> state);

double entropy_from_log_probs(std::span<const double> log_probs);

}  // namespace gailpt

#endif
