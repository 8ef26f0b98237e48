#include "gailpt/env_net.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace gailpt {

NetEnv::NetEnv(Scenario s) : scn_(std::move(s)) {
  S_ = scn_.subnet_count();
  H_ = scn_.host_count();
  A_ = scn_.action_count();
  maxH_ = scn_.max_hosts_per_subnet();
  C_ = (S_ + 1) + maxH_ + 6 + static_cast<int>(scn_.vocab.os.size()) +
       static_cast<int>(scn_.vocab.services.size()) +
       static_cast<int>(scn_.vocab.processes.size());
  adjacent_.resize(S_ + 1);
  subnet_hosts_.resize(S_ + 1);
  for (const auto& sn : scn_.subnets) adjacent_[sn.id] = scn_.adjacent_subnets(sn.id);
  for (int h = 0; h < H_; ++h) subnet_hosts_[scn_.hosts[h].subnet].push_back(h);
  reset(0);
}

const std::vector<double>& NetEnv::reset(uint64_t seed) {
  know_.assign(H_, HostKnowledge{});
  for (int h = 0; h < H_; ++h) {
    know_[h].known_services.assign(scn_.vocab.services.size(), 0);
    know_[h].known_processes.assign(scn_.vocab.processes.size(), 0);
    if (scn_.hosts[h].subnet == 1) know_[h].reachable = true;
  }
  last_outcome_ = Outcome::Success;
  steps_ = 0;
  cumulative_reward_ = 0.0;
  done_ = false;
  rng_ = RandomStream(seed, "net-episode");
  encode();
  return obs_;
}

bool NetEnv::all_sensitive_rooted() const {
  for (int h = 0; h < H_; ++h)
    if (scn_.hosts[h].sensitive() && know_[h].access != AccessLevel::Root) return false;
  return true;
}

bool NetEnv::traffic_permitted(int dst_subnet, int service) const {
  if (scn_.firewall_permits(0, dst_subnet, service)) return true;
  for (int z = 1; z <= S_; ++z) {
    bool src_compromised = false;
    for (int h : subnet_hosts_[z])
      if (know_[h].compromised) {
        src_compromised = true;
        break;
      }
    if (src_compromised && scn_.firewall_permits(z, dst_subnet, service)) return true;
  }
  return false;
}

void NetEnv::discover(int host) {
  if (!know_[host].discovered) {
    know_[host].discovered = true;
    know_[host].just_discovered = true;
  }
}

void NetEnv::reveal_all(int host) {
  auto& k = know_[host];
  k.os_known = true;
  for (int v : scn_.hosts[host].services) k.known_services[v] = 1;
  for (int v : scn_.hosts[host].processes) k.known_processes[v] = 1;
}

double NetEnv::collect_value(int host, double& collected, bool& honeypot_hit, bool now_root) {
  auto& k = know_[host];
  const auto& spec = scn_.hosts[host];
  if (k.value_collected) return 0.0;
  // Honeypots trip on first compromise; regular hosts pay out on first root.
  if (spec.honeypot) {
    if (k.compromised) {
      k.value_collected = true;
      collected += spec.value;
      honeypot_hit = true;
    }
  } else if (now_root) {
    k.value_collected = true;
    collected += spec.value;
  }
  return 0.0;
}

void NetEnv::apply_exploit(int host, const ActionSpec& a, double& collected,
                           bool& honeypot_hit, Outcome& out) {
  auto& k = know_[host];
  const auto& spec = scn_.hosts[host];
  if (!k.reachable) {
    out = Outcome::ConnectionError;
    return;
  }
  if (!traffic_permitted(spec.subnet, *a.bound)) {
    out = Outcome::ConnectionError;
    return;
  }
  const bool runs_service =
      std::find(spec.services.begin(), spec.services.end(), *a.bound) != spec.services.end();
  const bool os_ok = !a.target_os || *a.target_os == spec.os;
  if (!runs_service || !os_ok) {
    out = Outcome::UndefinedError;
    return;
  }
  if (!rng_.bernoulli(a.success_prob)) {
    out = Outcome::UndefinedError;
    return;
  }
  out = Outcome::Success;
  discover(host);
  k.compromised = true;
  if (a.granted_access > k.access) k.access = a.granted_access;
  reveal_all(host);
  collect_value(host, collected, honeypot_hit, k.access == AccessLevel::Root);
}

void NetEnv::apply_promotion(int host, const ActionSpec& a, double& collected, Outcome& out) {
  auto& k = know_[host];
  const auto& spec = scn_.hosts[host];
  if (!k.compromised || k.access < AccessLevel::User) {
    out = Outcome::PermissionError;
    return;
  }
  const bool runs_process =
      std::find(spec.processes.begin(), spec.processes.end(), *a.bound) != spec.processes.end();
  const bool os_ok = !a.target_os || *a.target_os == spec.os;
  if (!runs_process || !os_ok) {
    out = Outcome::UndefinedError;
    return;
  }
  if (!rng_.bernoulli(a.success_prob)) {
    out = Outcome::UndefinedError;
    return;
  }
  out = Outcome::Success;
  k.access = AccessLevel::Root;
  bool unused = false;
  collect_value(host, collected, unused, true);
}

void NetEnv::apply_scan(int host, const ActionSpec& a, Outcome& out) {
  auto& k = know_[host];
  const auto& spec = scn_.hosts[host];
  if (a.scan_target == ScanTarget::Subnet) {
    // Pivot scan: needs root on the scanning host; reveals (and makes
    // reachable) every host in its own and firewall-adjacent subnets.
    if (!k.compromised || k.access != AccessLevel::Root) {
      out = Outcome::PermissionError;
      return;
    }
    out = Outcome::Success;
    std::vector<int> zones = adjacent_[spec.subnet];
    zones.push_back(spec.subnet);
    for (int z : zones) {
      for (int h : subnet_hosts_[z]) {
        discover(h);
        know_[h].reachable = true;
      }
    }
    return;
  }
  if (!k.reachable) {
    out = Outcome::ConnectionError;
    return;
  }
  out = Outcome::Success;
  discover(host);
  switch (a.scan_target) {
    case ScanTarget::Services:
      for (int v : spec.services) k.known_services[v] = 1;
      break;
    case ScanTarget::Processes:
      for (int v : spec.processes) k.known_processes[v] = 1;
      break;
    case ScanTarget::Os:
      k.os_known = true;
      break;
    default:
      break;
  }
}

StepOutcome NetEnv::step(int action) {
  if (done_) throw std::logic_error("NetEnv::step: episode is done");
  if (action < 0 || action >= action_space_size())
    throw std::out_of_range("NetEnv::step: action index out of range");

  for (auto& k : know_) k.just_discovered = false;

  const int host = action_host(action);
  const ActionSpec& a = scn_.actions[action_index(action)];

  double collected = 0.0;
  bool honeypot_hit = false;
  Outcome out = Outcome::UndefinedError;
  switch (a.kind) {
    case ActionKind::Exploit:
      apply_exploit(host, a, collected, honeypot_hit, out);
      break;
    case ActionKind::Promotion:
      apply_promotion(host, a, collected, out);
      break;
    case ActionKind::Scan:
      apply_scan(host, a, out);
      break;
  }

  const double reward = collected - a.cost;
  cumulative_reward_ += reward;
  last_outcome_ = out;
  steps_ += 1;
  done_ = all_sensitive_rooted() || steps_ >= scn_.step_cap;
  encode();

  StepOutcome so;
  so.observation = &obs_;
  so.reward = reward;
  so.done = done_;
  so.honeypot_hit = honeypot_hit;
  so.info = out;
  return so;
}

void NetEnv::encode() {
  obs_.assign(static_cast<size_t>(H_ + 1) * C_, 0.0);
  const int os_n = static_cast<int>(scn_.vocab.os.size());
  const int svc_n = static_cast<int>(scn_.vocab.services.size());
  for (int h = 0; h < H_; ++h) {
    const auto& spec = scn_.hosts[h];
    const auto& k = know_[h];
    double* row = obs_.data() + static_cast<size_t>(h) * C_;
    if (k.discovered) {
      row[spec.subnet] = 1.0;            // subnet one-hot, slot 0 = external
      row[(S_ + 1) + spec.index] = 1.0;  // host index one-hot
    }
    double* f = row + (S_ + 1) + maxH_;
    f[0] = k.compromised ? 1.0 : 0.0;
    f[1] = k.reachable ? 1.0 : 0.0;
    f[2] = k.discovered ? 1.0 : 0.0;
    f[3] = k.discovered ? spec.value / 100.0 : 0.0;
    f[4] = k.just_discovered ? 1.0 : 0.0;
    f[5] = k.access == AccessLevel::Root ? 1.0 : (k.access == AccessLevel::User ? 0.5 : 0.0);
    double* os_block = f + 6;
    if (k.os_known) os_block[spec.os] = 1.0;
    double* svc_block = os_block + os_n;
    for (size_t v = 0; v < k.known_services.size(); ++v)
      if (k.known_services[v]) svc_block[v] = 1.0;
    double* proc_block = svc_block + svc_n;
    for (size_t v = 0; v < k.known_processes.size(); ++v)
      if (k.known_processes[v]) proc_block[v] = 1.0;
  }
  double* aux = obs_.data() + static_cast<size_t>(H_) * C_;
  aux[static_cast<int>(last_outcome_)] = 1.0;
}

}  // namespace gailpt
