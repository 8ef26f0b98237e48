#ifndef GAILPT_ENV_NET_HPP
#define GAILPT_ENV_NET_HPP

#include <cstdint>
#include <vector>

#include "gailpt/rng.hpp"
#include "gailpt/scenario.hpp"

namespace gailpt {

enum class Outcome { Success = 0, ConnectionError = 1, PermissionError = 2, UndefinedError = 3 };

/// What the attacker knows about (and holds on) one host.
struct HostKnowledge {
  bool discovered = false;
  bool reachable = false;
  bool compromised = false;
  bool just_discovered = false;  // set only on the step the host is first discovered
  AccessLevel access = AccessLevel::None;
  bool os_known = false;
  std::vector<uint8_t> known_services;   // one flag per service vocab entry
  std::vector<uint8_t> known_processes;  // one flag per process vocab entry
  bool value_collected = false;
};

struct StepOutcome {
  const std::vector<double>* observation = nullptr;
  double reward = 0.0;
  bool done = false;
  bool honeypot_hit = false;
  Outcome info = Outcome::Success;
};

/// Network penetration MDP over a Scenario. The flat action space is
/// host-major: action = host_id * action_count + action_index.
///
/// Observation layout, one row per host plus a trailing status row. Each row
/// has width C = (subnets+1) + max_hosts_per_subnet + 6 + |os| + |services|
/// + |processes|: subnet one-hot, host-index one-hot, then compromised,
/// reachable, discovered, value/100 (once discovered), just-discovered flag,
/// access (0 / 0.5 / 1), OS one-hot, known running services, known running
/// processes. Unknown attribute blocks stay all zero. The status row one-hot
/// encodes the last action outcome in its first four entries.
class NetEnv {
 public:
  explicit NetEnv(Scenario s);

  const std::vector<double>& reset(uint64_t seed);
  StepOutcome step(int action);

  int action_space_size() const { return H_ * A_; }
  int observation_width() const { return (H_ + 1) * C_; }
  int row_width() const { return C_; }
  int host_count() const { return H_; }
  int action_count() const { return A_; }
  const Scenario& scenario() const { return scn_; }

  const std::vector<double>& observation() const { return obs_; }
  bool done() const { return done_; }
  int steps_taken() const { return steps_; }
  double cumulative_reward() const { return cumulative_reward_; }
  Outcome last_outcome() const { return last_outcome_; }

  int action_host(int a) const { return a / A_; }
  int action_index(int a) const { return a % A_; }
  int encode_action(int host, int action_index) const { return host * A_ + action_index; }

  const HostKnowledge& knowledge(int host) const { return know_.at(host); }
  bool all_sensitive_rooted() const;

  static constexpr int kEncoderVersion = 1;

 private:
  void apply_exploit(int host, const ActionSpec& a, double& collected, bool& honeypot_hit,
                     Outcome& out);
  void apply_promotion(int host, const ActionSpec& a, double& collected, Outcome& out);
  void apply_scan(int host, const ActionSpec& a, Outcome& out);
  void discover(int host);
  void reveal_all(int host);
  double collect_value(int host, double& collected, bool& honeypot_hit, bool now_root);
  bool traffic_permitted(int dst_subnet, int service) const;
  void encode();

  Scenario scn_;
  int S_ = 0, H_ = 0, A_ = 0, maxH_ = 0, C_ = 0;
  std::vector<std::vector<int>> adjacent_;     // by subnet id
  std::vector<std::vector<int>> subnet_hosts_; // by subnet id

  std::vector<HostKnowledge> know_;
  Outcome last_outcome_ = Outcome::Success;
  int steps_ = 0;
  double cumulative_reward_ = 0.0;
  bool done_ = false;
  RandomStream rng_;
  std::vector<double> obs_;
};

}  // namespace gailpt

#endif
