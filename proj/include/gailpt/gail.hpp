#ifndef GAILPT_GAIL_HPP
#define GAILPT_GAIL_HPP

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gailpt/env_mockhost.hpp"
#include "gailpt/env_net.hpp"
#include "gailpt/nn.hpp"
#include "gailpt/rl_tabular.hpp"

namespace gailpt {

struct StateActionPair {
  std::vector<double> state;
  int action = 0;
};

struct KBMeta {
  std::string scenario;
  int encoder_version = 1;
  std::string policy;
  double reward_threshold = 0.0;
  uint64_t seed = 0;
};

/// Ordered collection of expert (state, action) pairs with provenance.
struct ExpertKB {
  KBMeta meta;
  std::vector<StateActionPair> pairs;

  size_t state_width() const { return pairs.empty() ? 0 : pairs.front().state.size(); }
  void save_jsonl(const std::string& path) const;
  static ExpertKB load_jsonl(const std::string& path);
};

/// Cyclic repetition of the pairs, truncated to exactly n.
ExpertKB expand_kb(const ExpertKB& kb, size_t n);

/// Shortest action plan (success probabilities forced to 1) that roots every
/// sensitive host. Ties between equal-length plans prefer the higher success
/// probability product, then the higher total reward.
struct OptimalPlan {
  std::vector<int> actions;  // flat action indices
  int steps = 0;
  double prob_product = 1.0;
  double total_reward = 0.0;
};
OptimalPlan plan_optimal_actions(const Scenario& scn);

using NetPolicy = std::function<int(const NetEnv&)>;
using NetPolicyFactory = std::function<NetPolicy()>;

/// Runs `episodes` episodes and keeps every (state, action) pair from the
/// episodes that rooted all sensitive hosts in the minimum observed number of
/// steps. Throws when no episode qualifies within the budget.
ExpertKB collect_expert_pairs(const Scenario& scn, const NetPolicyFactory& make_policy,
                              int episodes, uint64_t seed, const std::string& policy_name);

/// Scripted collection: replays the optimal plan, retrying an action until it
/// lands, and keeps the clean (minimum-step) episodes.
ExpertKB collect_expert_pairs_scripted(const Scenario& scn, int episodes, uint64_t seed);

using MockPolicy = std::function<int(const MockHostEnv&)>;

/// Keeps the (state, payload) of every step rewarded 100. Throws when no
/// post-exploit lands within the budget.
ExpertKB collect_expert_pairs_mockhost(const VulnTable& table, const MockPolicy& policy,
                                       int episodes, uint64_t seed,
                                       const std::string& policy_name);

/// Scripted single-host expert: picks a known post payload for the profile.
ExpertKB collect_expert_pairs_mockhost_scripted(const VulnTable& table, int episodes,
                                                uint64_t seed);

struct GailConfig {
  double entropy_coef = 0.0;     // weight of the policy entropy regularizer
  double rd_weight = 1.0;        // scale of the shaped reward
  double rd_cap = 10.0;          // upper bound on the shaped reward
  int disc_batch = 64;           // pairs per class per discriminator update
  int disc_steps = 1;            // gradient steps per update event
  int cadence_episodes = 10;     // episodes between updates (tabular training)
  int policy_cadence_episodes = 1;  // episodes between updates (policy training)
  double disc_lr = 1e-3;
  size_t replay_capacity = 10000;
};

/// Discriminator over state (+) one-hot action: 50-100-200 ReLU, Sigmoid head.
nn::DenseNet make_discriminator(int state_width, int action_count, uint64_t seed);

void build_disc_input(std::span<const double> state, int action, int action_count,
                      std::vector<double>& out);

/// Clamped to (0,1) so logarithms stay finite.
double discriminator_output(const nn::DenseNet& d, std::span<const double> input,
                            nn::ForwardScratch& scratch);

struct DiscLossResult {
  double loss = 0.0;           // mean_agent log D + mean_expert log(1 - D) - lambda * H(pi)
  double mean_d_expert = 0.0;
  double mean_d_agent = 0.0;
  nn::Gradients disc_grads;    // descent direction that raises D on agent pairs
                               // and lowers it on expert pairs
  nn::Gradients actor_grads;   // descent direction of the -lambda*H term (actor only)
  bool has_actor_grads = false;
};

/// Adversarial loss over equal-purpose batches. The entropy term is estimated
/// on the agent batch and contributes only to the actor gradients.
DiscLossResult discriminator_loss(const nn::DenseNet& d,
                                  std::span<const StateActionPair> expert_batch,
                                  std::span<const StateActionPair> agent_batch,
                                  const nn::DenseNet* actor, double lambda);

/// r_d = weight * min(-log(max(D, 1e-8)), cap); always nonnegative.
double shaped_reward(const nn::DenseNet& d, std::span<const double> state, int action,
                     int action_count, const GailConfig& cfg);

/// Memoizing wrapper for the per-step shaped reward; valid between
/// discriminator updates (call invalidate() after each update).
class ShapedRewardCache {
 public:
  ShapedRewardCache(const nn::DenseNet* d, const GailConfig* cfg, int action_count);
  double get(const StateKey& key, std::span<const double> state, int action);
  void invalidate();

 private:
  struct PairKey {
    uint64_t hi, lo;
    bool operator==(const PairKey&) const = default;
  };
  struct PairKeyHash {
    size_t operator()(const PairKey& k) const { return k.hi ^ (k.lo * 0x9E3779B97F4A7C15ULL); }
  };
  const nn::DenseNet* d_;
  const GailConfig* cfg_;
  int action_count_;
  std::vector<double> input_;
  nn::ForwardScratch scratch_;
  std::unordered_map<PairKey, double, PairKeyHash> memo_;
};

/// Fixed-capacity FIFO of recent agent pairs for discriminator training.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);
  void push(std::vector<double> state, int action);
  size_t size() const { return buf_.size(); }
  const StateActionPair& at(size_t i) const { return buf_[i]; }
  std::vector<StateActionPair> sample(size_t n, RandomStream& rng) const;

 private:
  size_t capacity_;
  size_t next_ = 0;
  std::vector<StateActionPair> buf_;
};

/// Empirical Jensen-Shannon divergence between the occupancy histograms of
/// two pair samples, natural log base; range [0, ln 2].
double js_divergence(std::span<const StateActionPair> a, std::span<const StateActionPair> b);

}  // namespace gailpt

#endif
