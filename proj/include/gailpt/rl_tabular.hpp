#ifndef GAILPT_RL_TABULAR_HPP
#define GAILPT_RL_TABULAR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gailpt/rng.hpp"

namespace gailpt {

/// 128-bit fingerprint of an observation quantized to 3 decimal places.
/// Quantizing first keeps keys stable across float round-trips.
struct StateKey {
  uint64_t hi = 0, lo = 0;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  size_t operator()(const StateKey& k) const {
    return static_cast<size_t>(k.hi ^ (k.lo * 0x9E3779B97F4A7C15ULL));
  }
};

StateKey make_state_key(std::span<const double> observation);
std::string state_key_hex(const StateKey& k);
StateKey state_key_from_hex(const std::string& hex);

/// Q table keyed by state fingerprints; unseen states read as all-zero rows.
class QTable {
 public:
  explicit QTable(int action_count);

  int action_count() const { return action_count_; }
  size_t size() const { return rows_.size(); }

  /// Row for a state, inserting zeros on first touch.
  std::vector<float>& row(const StateKey& k);
  const std::vector<float>* find(const StateKey& k) const;

  double value(const StateKey& k, int action) const;
  double max_value(const StateKey& k) const;
  int greedy_action(const StateKey& k) const;  // argmax, ties to lowest index

  void save_jsonl(const std::string& path) const;
  static QTable load_jsonl(const std::string& path);

 private:
  int action_count_;
  std::unordered_map<StateKey, std::vector<float>, StateKeyHash> rows_;
};

/// Epsilon-greedy: probability eps of a uniform action, otherwise greedy.
int select_action(const QTable& q, const StateKey& s, double eps, RandomStream& rng);

/// One-step temporal difference update; touches only the (s, a) entry.
/// Returns the TD error. `terminal` drops the bootstrap term.
double q_update(QTable& q, const StateKey& s, int a, double r, const StateKey& s_next,
                bool terminal, double alpha, double gamma);

/// Same update with the discriminator reward added: target uses r + r_d.
double q_update_gail(QTable& q, const StateKey& s, int a, double r, double r_d,
                     const StateKey& s_next, bool terminal, double alpha, double gamma);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  int decay_episodes = 1;  // linear decay horizon

  double at(int episode) const;
};

}  // namespace gailpt

#endif
