#ifndef GAILPT_SCENARIO_HPP
#define GAILPT_SCENARIO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gailpt {

enum class ActionKind { Exploit, Promotion, Scan };
enum class AccessLevel { None = 0, User = 1, Root = 2 };
enum class ScanTarget { Services, Os, Subnet, Processes, NotAScan };

struct SubnetSpec {
  int id = 0;    // 1-based; zone 0 is the external network
  int size = 0;  // declared host capacity
};

struct HostSpec {
  int subnet = 0;
  int index = 0;
  int os = 0;                   // vocab index
  double value = 0.0;           // negative marks a honeypot
  std::vector<int> services;    // vocab indices, sorted
  std::vector<int> processes;   // vocab indices, sorted
  bool honeypot = false;

  bool sensitive() const { return value > 0.0; }
  bool operator==(const HostSpec&) const = default;
};

struct ActionSpec {
  std::string name;
  ActionKind kind = ActionKind::Scan;
  std::optional<int> target_os;         // none = any OS
  double cost = 0.0;
  double success_prob = 1.0;
  AccessLevel granted_access = AccessLevel::None;
  std::optional<int> bound;             // service (exploit) or process (promotion)
  ScanTarget scan_target = ScanTarget::NotAScan;  // derived from the name

  bool operator==(const ActionSpec&) const = default;
};

struct FirewallRule {
  int src = 0;  // 0 = external network
  int dst = 0;
  std::vector<int> services;  // permitted service vocab indices, sorted

  bool operator==(const FirewallRule&) const = default;
};

struct Vocab {
  std::vector<std::string> os, services, processes;
  bool operator==(const Vocab&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<SubnetSpec> subnets;
  std::vector<HostSpec> hosts;
  std::vector<ActionSpec> actions;
  std::vector<FirewallRule> firewall;
  int step_cap = 0;
  Vocab vocab;

  int subnet_count() const { return static_cast<int>(subnets.size()); }
  int host_count() const { return static_cast<int>(hosts.size()); }
  int action_count() const { return static_cast<int>(actions.size()); }
  int max_hosts_per_subnet() const;
  int sensitive_count() const;

  /// Index into `hosts` for (subnet, index); -1 when absent.
  int host_id(int subnet, int index) const;

  /// True when a rule src->dst permits the given service.
  bool firewall_permits(int src_subnet, int dst_subnet, int service) const;

  /// Subnets with a rule from `subnet` (targets of lateral movement).
  std::vector<int> adjacent_subnets(int subnet) const;

  bool operator==(const Scenario& o) const {
    return name == o.name && step_cap == o.step_cap && vocab == o.vocab &&
           hosts == o.hosts && actions == o.actions && firewall == o.firewall &&
           subnets_equal(o);
  }

 private:
  bool subnets_equal(const Scenario& o) const {
    if (subnets.size() != o.subnets.size()) return false;
    for (size_t i = 0; i < subnets.size(); ++i)
      if (subnets[i].id != o.subnets[i].id || subnets[i].size != o.subnets[i].size) return false;
    return true;
  }
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse and fully validate a scenario document; throws ScenarioError naming
/// the offending path on both schema and semantic violations.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

std::string serialize(const Scenario& s);

/// Invariant check; empty result means the scenario is well formed.
std::vector<std::string> validate(const Scenario& s);

/// Built-in scenarios: "small", "small_honeypot", "large".
Scenario builtin_scenario(const std::string& name);
const std::string& builtin_scenario_text(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Copy with every action success probability set to 1 (deterministic replay).
Scenario with_success_forced(Scenario s);

/// H * |actions|; the flat action space of the network environment.
int action_space_size(const Scenario& s);

}  // namespace gailpt

#endif
