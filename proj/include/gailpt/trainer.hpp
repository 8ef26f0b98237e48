#ifndef GAILPT_TRAINER_HPP
#define GAILPT_TRAINER_HPP

#include <optional>
#include <string>
#include <vector>

#include "gailpt/gail.hpp"
#include "gailpt/rl_policy.hpp"
#include "gailpt/rl_tabular.hpp"
#include "gailpt/scenario.hpp"

namespace gailpt {

/// Per-window training statistics.
struct MetricRecord {
  int window_end_episode = 0;
  double avg_reward = 0.0;
  double avg_steps = 0.0;
  double honeypot_prob = 0.0;
  long post_exploit_count = 0;
  double loss = 0.0;
};

struct TrainConfig {
  std::string algo;      // qlearn | qlearn-gail | a3c | a3c-gail | dppo | dppo-gail
  std::string scenario;  // builtin name, scenario file path, or "mockhost"
  int episodes = 20000;
  uint64_t seed = 1;
  int workers = 1;
  std::string kb_path;   // required by the *-gail variants
  int window = 1000;

  // tabular learner
  double alpha = 0.1;
  double gamma = 0.99;
  EpsilonSchedule eps{1.0, 0.05, 0};  // 0 horizon = resolved to episodes/5 at run start

  // policy-gradient learners
  PPOConfig ppo;

  // reward shaping
  GailConfig gail;
  uint64_t vuln_seed = 1337;  // synthetic vulnerability table for mockhost

  bool is_gail() const { return algo.size() > 5 && algo.substr(algo.size() - 5) == "-gail"; }
  bool is_tabular() const { return algo == "qlearn" || algo == "qlearn-gail"; }
  bool is_dppo() const { return algo == "dppo" || algo == "dppo-gail"; }
  bool is_mockhost() const { return scenario == "mockhost"; }
};

struct RunResult {
  std::vector<MetricRecord> metrics;
  std::optional<int> rounds_to_optimal;  // in episodes (window-end boundary)
  double wall_sec = 0.0;
};

/// Run artifacts alongside the metrics: exactly one policy representation.
struct TrainOutput {
  RunResult result;
  std::optional<QTable> qtable;
  std::optional<nn::DenseNet> actor;
  std::optional<nn::DenseNet> critic;
  std::optional<nn::DenseNet> disc;
};

/// Dispatch on cfg.algo; kb may be null for the plain variants.
TrainOutput train(const TrainConfig& cfg, const ExpertKB* kb);

RunResult train_qlearning(const TrainConfig& cfg);
RunResult train_qlearning_gail(const TrainConfig& cfg, const ExpertKB& kb);
RunResult train_policy(const TrainConfig& cfg, const ExpertKB* kb);

/// Earliest full-window boundary (in episodes) from which every later
/// window's average steps stays within 10% of the best window average.
/// Partial trailing windows can extend the stability requirement but never
/// become the answer themselves.
std::optional<int> rounds_to_optimal(const std::vector<MetricRecord>& metrics, int window_size);

void write_metrics_csv(const std::string& path, const std::vector<MetricRecord>& metrics);
std::vector<MetricRecord> read_metrics_csv(const std::string& path);

/// Resolve a scenario argument: builtin name or file path.
Scenario resolve_scenario(const std::string& arg);

struct EvalSummary {
  double mean_reward = 0.0;
  double mean_steps = 0.0;
  double honeypot_rate = 0.0;
  double success_rate = 0.0;
};

EvalSummary evaluate_qtable(const Scenario& scn, const QTable& q, int episodes, uint64_t seed,
                            bool force_success);
EvalSummary evaluate_actor(const Scenario& scn, const nn::DenseNet& actor, int episodes,
                           uint64_t seed, bool force_success);
EvalSummary evaluate_actor_mockhost(const VulnTable& table, const nn::DenseNet& actor,
                                    int episodes, uint64_t seed);

/// Greedy occupancy rollout used by the divergence diagnostic.
std::vector<StateActionPair> greedy_occupancy(const Scenario& scn, const QTable& q,
                                              int episodes, uint64_t seed);

}  // namespace gailpt

#endif
