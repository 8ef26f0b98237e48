#ifndef GAILPT_ENV_MOCKHOST_HPP
#define GAILPT_ENV_MOCKHOST_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gailpt {

/// Vocabularies of the single-host task. Feature values are encoded as
/// index / (vocabulary size - 1), so every entry lands in [0, 1].
struct MockVocab {
  static const std::vector<std::string>& services();   // 11 exploitable services
  static const std::vector<std::string>& os();         // 9 OS classes
  static const std::vector<std::string>& protocols();  // 4
  static constexpr int kVersions = 6;
  static constexpr int kModuleTypes = 2;
};

struct HostProfile {
  int os = 0;
  int service = 0;
  int version = 0;
  int protocol = 0;
  int module_type = 0;
  std::array<double, 5> encoded{};  // [os, service, version, protocol, module_type]
};

HostProfile sample_profile(uint64_t seed);
std::array<double, 5> encode_profile(const HostProfile& p);

/// Seeded synthetic vulnerability table: which payloads yield a full
/// post-exploit and which only a session, per (service, version, protocol).
class VulnTable {
 public:
  struct Entry {
    std::vector<int> post;     // payloads granting root (reward 100, terminal)
    std::vector<int> session;  // payloads granting a session only (reward 1)
  };

  static VulnTable generate(uint64_t seed);
  static VulnTable from_json(const std::string& text);
  std::string to_json() const;

  const Entry& lookup(int service, int version, int protocol) const;
  uint64_t seed() const { return seed_; }
  size_t entry_count() const { return entries_.size(); }

  static constexpr int kPostPerEntry = 2;
  static constexpr int kSessionPerEntry = 5;

 private:
  uint64_t seed_ = 0;
  std::map<std::string, Entry> entries_;
};

/// Single-host exploit MDP: pick payloads until one yields a post-exploit
/// or the step cap is reached.
class MockHostEnv {
 public:
  static constexpr int kPayloadCount = 593;
  static constexpr int kMaxSteps = 30;

  explicit MockHostEnv(VulnTable table);

  const std::array<double, 5>& reset(uint64_t seed);
  std::pair<double, bool> step(int payload);

  const HostProfile& profile() const { return profile_; }
  const std::array<double, 5>& state() const { return profile_.encoded; }
  bool done() const { return done_; }
  int steps_taken() const { return steps_; }
  const VulnTable& table() const { return table_; }

 private:
  VulnTable table_;
  HostProfile profile_;
  int steps_ = 0;
  bool done_ = false;
};

}  // namespace gailpt

#endif
