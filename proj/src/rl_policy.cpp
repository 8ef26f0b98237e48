#include "gailpt/rl_policy.hpp"

#include <cmath>
#include <stdexcept>

namespace gailpt {

std::vector<double> advantage(const TrajectoryBatch& batch, double gamma, int horizon,
                              double bootstrap_value) {
  const int T = static_cast<int>(batch.steps.size());
  if (T == 0) throw std::invalid_argument("advantage: empty batch");
  if (horizon < 1) throw std::invalid_argument("advantage: horizon must be >= 1");
  std::vector<double> adv(T);
  for (int t = 0; t < T; ++t) {
    double acc = 0.0;
    double disc = 1.0;
    bool terminated = false;
    int k = 0;
    for (; k < horizon && t + k < T; ++k) {
      acc += disc * batch.steps[t + k].reward;
      disc *= gamma;
      if (batch.steps[t + k].done) {
        terminated = true;
        ++k;
        break;
      }
    }
    if (!terminated) {
      const int next = t + k;
      const double v_next =
          next < T ? batch.steps[next].value : bootstrap_value;
      acc += disc * v_next;
    }
    adv[t] = acc - batch.steps[t].value;
  }
  return adv;
}

void TrajectoryBatch::finalize(double gamma, int horizon) {
  const int T = static_cast<int>(steps.size());
  returns.assign(T, 0.0);
  double tail = steps.empty() || steps.back().done ? 0.0 : bootstrap_value;
  for (int t = T - 1; t >= 0; --t) {
    if (steps[t].done) tail = 0.0;
    tail = steps[t].reward + gamma * tail;
    returns[t] = tail;
  }
  advantages = advantage(*this, gamma, horizon, bootstrap_value);
}

void a3c_gradients(const nn::DenseNet& actor, const nn::DenseNet& critic,
                   const TrajectoryBatch& batch, double entropy_coef, double critic_coef,
                   nn::Gradients& actor_grads, nn::Gradients& critic_grads) {
  const int T = static_cast<int>(batch.steps.size());
  if (T == 0) throw std::invalid_argument("a3c_gradients: empty batch");
  if (batch.advantages.size() != batch.steps.size())
    throw std::invalid_argument("a3c_gradients: batch not finalized");
  const int sw = actor.input_width();
  const int an = actor.output_width();

  std::vector<double> X(static_cast<size_t>(T) * sw);
  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(batch.steps[t].state.size()) != sw)
      throw std::invalid_argument("a3c_gradients: state width mismatch");
    std::copy(batch.steps[t].state.begin(), batch.steps[t].state.end(),
              X.begin() + static_cast<size_t>(t) * sw);
  }

  nn::Workspace ws;
  nn::forward_batch(actor, X.data(), T, ws);
  const auto& probs = ws.post.back();  // T x an softmax outputs

  // dL/dz on the softmax preactivation:
  //   -A * (one_hot(a) - pi) + entropy_coef * pi * (log pi + H)
  std::vector<double> dz(static_cast<size_t>(T) * an);
  for (int t = 0; t < T; ++t) {
    const double* pi = probs.data() + static_cast<size_t>(t) * an;
    double* d = dz.data() + static_cast<size_t>(t) * an;
    const double A = batch.advantages[t];
    double H = 0.0;
    for (int i = 0; i < an; ++i)
      if (pi[i] > 0.0) H -= pi[i] * std::log(pi[i]);
    for (int i = 0; i < an; ++i) {
      const double logp = pi[i] > 0.0 ? std::log(pi[i]) : -745.0;
      const double indicator = (i == batch.steps[t].action) ? 1.0 : 0.0;
      d[i] = -A * (indicator - pi[i]) + entropy_coef * pi[i] * (logp + H);
    }
  }
  nn::backward_batch(actor, ws, dz.data(), nn::HeadGrad::Preactivation, actor_grads);

  // Critic: L = critic_coef * sum (target - V)^2, target held fixed, so
  // dL/dV = -2 * critic_coef * A with A computed from the stored values.
  nn::Workspace wsc;
  nn::forward_batch(critic, X.data(), T, wsc);
  std::vector<double> dv(T);
  for (int t = 0; t < T; ++t) dv[t] = -2.0 * critic_coef * batch.advantages[t];
  nn::backward_batch(critic, wsc, dv.data(), nn::HeadGrad::Preactivation, critic_grads);
}

double ppo_ratio(double new_log_prob, double old_log_prob) {
  return std::exp(new_log_prob - old_log_prob);
}

ClipLossResult ppo_clip_loss(std::span<const double> ratios,
                             std::span<const double> advantages, double clip_eps) {
  if (ratios.size() != advantages.size())
    throw std::invalid_argument("ppo_clip_loss: length mismatch");
  if (ratios.empty()) throw std::invalid_argument("ppo_clip_loss: empty input");
  const size_t T = ratios.size();
  ClipLossResult out;
  out.dloss_dratio.assign(T, 0.0);
  double acc = 0.0;
  for (size_t t = 0; t < T; ++t) {
    const double r = ratios[t];
    const double A = advantages[t];
    const double clipped = std::min(std::max(r, 1.0 - clip_eps), 1.0 + clip_eps);
    const double u = r * A;
    const double c = clipped * A;
    if (u <= c) {
      acc += u;
      out.dloss_dratio[t] = -A / static_cast<double>(T);
    } else {
      acc += c;
      // Clipped branch active: zero gradient outside the band.
      out.dloss_dratio[t] = (r >= 1.0 - clip_eps && r <= 1.0 + clip_eps)
                                ? -A / static_cast<double>(T)
                                : 0.0;
    }
  }
  out.loss = -acc / static_cast<double>(T);
  return out;
}

nn::DenseNet make_actor(int state_width, int action_count, uint64_t seed) {
  return nn::make_net(state_width,
                      {{50, nn::Activation::ReLU},
                       {100, nn::Activation::ReLU},
                       {200, nn::Activation::ReLU},
                       {action_count, nn::Activation::Softmax}},
                      seed);
}

nn::DenseNet make_critic(int state_width, uint64_t seed) {
  return nn::make_net(state_width,
                      {{50, nn::Activation::ReLU},
                       {100, nn::Activation::ReLU},
                       {200, nn::Activation::ReLU},
                       {1, nn::Activation::Linear}},
                      seed);
}

SampledAction sample_action(const nn::DenseNet& actor, std::span<const double> state,
                            RandomStream& rng) {
  const auto logits = nn::forward_logits(actor, state);
  const auto logp = nn::log_softmax(logits);
  const double u = rng.next_double();
  double cum = 0.0;
  int chosen = static_cast<int>(logp.size()) - 1;
  for (size_t i = 0; i < logp.size(); ++i) {
    cum += std::exp(logp[i]);
    if (u < cum) {
      chosen = static_cast<int>(i);
      break;
    }
  }
  return {chosen, logp[chosen]};
}

int greedy_action(const nn::DenseNet& actor, std::span<const double> state) {
  const auto logits = nn::forward_logits(actor, state);
  int best = 0;
  for (size_t i = 1; i < logits.size(); ++i)
    if (logits[i] > logits[best]) best = static_cast<int>(i);
  return best;
}

double state_value(const nn::DenseNet& critic, std::span<const double> state) {
  return nn::forward_logits(critic, state)[0];
}

double entropy_from_log_probs(std::span<const double> log_probs) {
  double h = 0.0;
  for (double lp : log_probs) h -= std::exp(lp) * lp;
  return h;
}

}  // namespace gailpt
