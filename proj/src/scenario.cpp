#include "gailpt/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gailpt {

namespace detail {
extern const std::string kSmallDoc;
extern const std::string kSmallHoneypotDoc;
extern const std::string kLargeDoc;
}  // namespace detail

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

int Scenario::max_hosts_per_subnet() const {
  int m = 0;
  for (const auto& sn : subnets) m = std::max(m, sn.size);
  return m;
}

int Scenario::sensitive_count() const {
  int n = 0;
  for (const auto& h : hosts)
    if (h.sensitive()) ++n;
  return n;
}

int Scenario::host_id(int subnet, int index) const {
  for (size_t i = 0; i < hosts.size(); ++i)
    if (hosts[i].subnet == subnet && hosts[i].index == index) return static_cast<int>(i);
  return -1;
}

bool Scenario::firewall_permits(int src_subnet, int dst_subnet, int service) const {
  if (src_subnet == dst_subnet) return true;  // intra-subnet traffic is unrestricted
  for (const auto& r : firewall) {
    if (r.src == src_subnet && r.dst == dst_subnet &&
        std::find(r.services.begin(), r.services.end(), service) != r.services.end())
      return true;
  }
  return false;
}

std::vector<int> Scenario::adjacent_subnets(int subnet) const {
  std::set<int> out;
  for (const auto& r : firewall)
    if (r.src == subnet && r.dst != 0 && !r.services.empty()) out.insert(r.dst);
  return std::vector<int>(out.begin(), out.end());
}

int action_space_size(const Scenario& s) { return s.host_count() * s.action_count(); }

Scenario with_success_forced(Scenario s) {
  for (auto& a : s.actions) a.success_prob = 1.0;
  return s;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(path + "." + key, "missing field");
  return obj.at(key);
}

int int_field(const json& obj, const std::string& path, const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

double num_field(const json& obj, const std::string& path, const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string str_field(const json& obj, const std::string& path, const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

int vocab_index(const std::vector<std::string>& vocab, const std::string& name,
                const std::string& path) {
  auto it = std::find(vocab.begin(), vocab.end(), name);
  if (it == vocab.end()) fail(path, "'" + name + "' is not in the vocabulary");
  return static_cast<int>(it - vocab.begin());
}

std::vector<int> vocab_list(const json& arr, const std::vector<std::string>& vocab,
                            const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array");
  std::vector<int> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const json& v = arr.at(i);
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!v.is_string()) fail(p, "expected a string");
    out.push_back(vocab_index(vocab, v.get<std::string>(), p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> string_list(const json& arr, const std::string& path) {
  if (!arr.is_array()) fail(path, "expected an array");
  std::vector<std::string> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr.at(i).is_string()) fail(path + "[" + std::to_string(i) + "]", "expected a string");
    out.push_back(arr.at(i).get<std::string>());
  }
  return out;
}

ScanTarget scan_target_from_name(const std::string& name) {
  auto has = [&name](const char* sub) { return name.find(sub) != std::string::npos; };
  if (has("subnet")) return ScanTarget::Subnet;
  if (has("process")) return ScanTarget::Processes;
  if (has("service")) return ScanTarget::Services;
  if (has("os")) return ScanTarget::Os;
  return ScanTarget::NotAScan;
}

AccessLevel parse_access(const std::string& s, const std::string& path) {
  if (s == "none") return AccessLevel::None;
  if (s == "user") return AccessLevel::User;
  if (s == "root") return AccessLevel::Root;
  fail(path, "expected one of none/user/root");
}

const char* access_name(AccessLevel a) {
  switch (a) {
    case AccessLevel::None: return "none";
    case AccessLevel::User: return "user";
    case AccessLevel::Root: return "root";
  }
  return "none";
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("document: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");

  Scenario s;
  s.name = str_field(doc, "", "name");
  s.step_cap = int_field(doc, "", "step_cap");

  const json& vocab = field(doc, "", "vocab");
  s.vocab.os = string_list(field(vocab, "vocab", "os"), "vocab.os");
  s.vocab.services = string_list(field(vocab, "vocab", "services"), "vocab.services");
  s.vocab.processes = string_list(field(vocab, "vocab", "processes"), "vocab.processes");

  const json& subnets = field(doc, "", "subnets");
  if (!subnets.is_array()) fail("subnets", "expected an array");
  for (size_t i = 0; i < subnets.size(); ++i) {
    const std::string p = "subnets[" + std::to_string(i) + "]";
    SubnetSpec sn;
    sn.id = int_field(subnets.at(i), p, "id");
    sn.size = int_field(subnets.at(i), p, "size");
    s.subnets.push_back(sn);
  }

  const json& hosts = field(doc, "", "hosts");
  if (!hosts.is_array()) fail("hosts", "expected an array");
  for (size_t i = 0; i < hosts.size(); ++i) {
    const std::string p = "hosts[" + std::to_string(i) + "]";
    const json& h = hosts.at(i);
    HostSpec hs;
    const json& addr = field(h, p, "address");
    if (!addr.is_array() || addr.size() != 2 || !addr.at(0).is_number_integer() ||
        !addr.at(1).is_number_integer())
      fail(p + ".address", "expected [subnet, index]");
    hs.subnet = addr.at(0).get<int>();
    hs.index = addr.at(1).get<int>();
    hs.os = vocab_index(s.vocab.os, str_field(h, p, "os"), p + ".os");
    hs.value = num_field(h, p, "value");
    hs.services = vocab_list(field(h, p, "services"), s.vocab.services, p + ".services");
    hs.processes = vocab_list(field(h, p, "processes"), s.vocab.processes, p + ".processes");
    const json& hp = field(h, p, "honeypot");
    if (!hp.is_boolean()) fail(p + ".honeypot", "expected a boolean");
    hs.honeypot = hp.get<bool>();
    s.hosts.push_back(std::move(hs));
  }

  const json& actions = field(doc, "", "actions");
  if (!actions.is_array()) fail("actions", "expected an array");
  for (size_t i = 0; i < actions.size(); ++i) {
    const std::string p = "actions[" + std::to_string(i) + "]";
    const json& a = actions.at(i);
    ActionSpec as;
    as.name = str_field(a, p, "name");
    const std::string kind = str_field(a, p, "kind");
    if (kind == "exploit")
      as.kind = ActionKind::Exploit;
    else if (kind == "promotion")
      as.kind = ActionKind::Promotion;
    else if (kind == "scan")
      as.kind = ActionKind::Scan;
    else
      fail(p + ".kind", "expected one of exploit/promotion/scan");
    if (a.contains("os") && !a.at("os").is_null())
      as.target_os = vocab_index(s.vocab.os, str_field(a, p, "os"), p + ".os");
    as.cost = num_field(a, p, "cost");
    as.success_prob = a.contains("prob") ? num_field(a, p, "prob") : 1.0;
    as.granted_access =
        a.contains("access") ? parse_access(str_field(a, p, "access"), p + ".access")
                             : AccessLevel::None;
    if (as.kind == ActionKind::Exploit)
      as.bound = vocab_index(s.vocab.services, str_field(a, p, "service"), p + ".service");
    else if (as.kind == ActionKind::Promotion)
      as.bound = vocab_index(s.vocab.processes, str_field(a, p, "process"), p + ".process");
    if (as.kind == ActionKind::Scan) as.scan_target = scan_target_from_name(as.name);
    s.actions.push_back(std::move(as));
  }

  const json& firewall = field(doc, "", "firewall");
  if (!firewall.is_array()) fail("firewall", "expected an array");
  for (size_t i = 0; i < firewall.size(); ++i) {
    const std::string p = "firewall[" + std::to_string(i) + "]";
    FirewallRule r;
    r.src = int_field(firewall.at(i), p, "src");
    r.dst = int_field(firewall.at(i), p, "dst");
    r.services =
        vocab_list(field(firewall.at(i), p, "services"), s.vocab.services, p + ".services");
    s.firewall.push_back(std::move(r));
  }

  const auto violations = validate(s);
  if (!violations.empty()) {
    std::string msg = "semantic violation";
    for (const auto& v : violations) msg += "; " + v;
    throw ScenarioError(msg);
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize(const Scenario& s) {
  ordered_json doc;
  doc["name"] = s.name;
  doc["step_cap"] = s.step_cap;
  doc["vocab"] = {{"os", s.vocab.os}, {"services", s.vocab.services}, {"processes", s.vocab.processes}};
  doc["subnets"] = ordered_json::array();
  for (const auto& sn : s.subnets) doc["subnets"].push_back({{"id", sn.id}, {"size", sn.size}});
  doc["hosts"] = ordered_json::array();
  for (const auto& h : s.hosts) {
    ordered_json hj;
    hj["address"] = {h.subnet, h.index};
    hj["os"] = s.vocab.os.at(h.os);
    hj["value"] = h.value;
    hj["services"] = ordered_json::array();
    for (int v : h.services) hj["services"].push_back(s.vocab.services.at(v));
    hj["processes"] = ordered_json::array();
    for (int v : h.processes) hj["processes"].push_back(s.vocab.processes.at(v));
    hj["honeypot"] = h.honeypot;
    doc["hosts"].push_back(std::move(hj));
  }
  doc["actions"] = ordered_json::array();
  for (const auto& a : s.actions) {
    ordered_json aj;
    aj["name"] = a.name;
    aj["kind"] = a.kind == ActionKind::Exploit     ? "exploit"
                 : a.kind == ActionKind::Promotion ? "promotion"
                                                   : "scan";
    if (a.target_os)
      aj["os"] = s.vocab.os.at(*a.target_os);
    else
      aj["os"] = nullptr;
    aj["cost"] = a.cost;
    aj["prob"] = a.success_prob;
    aj["access"] = access_name(a.granted_access);
    if (a.kind == ActionKind::Exploit) aj["service"] = s.vocab.services.at(*a.bound);
    if (a.kind == ActionKind::Promotion) aj["process"] = s.vocab.processes.at(*a.bound);
    doc["actions"].push_back(std::move(aj));
  }
  doc["firewall"] = ordered_json::array();
  for (const auto& r : s.firewall) {
    ordered_json rj;
    rj["src"] = r.src;
    rj["dst"] = r.dst;
    rj["services"] = ordered_json::array();
    for (int v : r.services) rj["services"].push_back(s.vocab.services.at(v));
    doc["firewall"].push_back(std::move(rj));
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  auto note = [&out](const std::string& msg) { out.push_back(msg); };

  if (s.step_cap <= 0) note("step_cap: must be positive");
  if (s.hosts.empty()) note("hosts: scenario declares zero hosts");

  std::set<int> subnet_ids;
  for (size_t i = 0; i < s.subnets.size(); ++i) {
    const auto& sn = s.subnets[i];
    if (sn.id <= 0) note("subnets[" + std::to_string(i) + "].id: must be >= 1");
    if (sn.size <= 0) note("subnets[" + std::to_string(i) + "].size: must be >= 1");
    if (!subnet_ids.insert(sn.id).second)
      note("subnets[" + std::to_string(i) + "].id: duplicate subnet id");
  }

  std::set<std::pair<int, int>> seen_addr;
  bool any_sensitive = false;
  for (size_t i = 0; i < s.hosts.size(); ++i) {
    const auto& h = s.hosts[i];
    const std::string p = "hosts[" + std::to_string(i) + "]";
    if (!seen_addr.insert({h.subnet, h.index}).second) note(p + ".address: duplicate address");
    auto sn = std::find_if(s.subnets.begin(), s.subnets.end(),
                           [&h](const SubnetSpec& x) { return x.id == h.subnet; });
    if (sn == s.subnets.end())
      note(p + ".address: references undeclared subnet " + std::to_string(h.subnet));
    else if (h.index < 0 || h.index >= sn->size)
      note(p + ".address: host index outside subnet size");
    if (h.os < 0 || h.os >= static_cast<int>(s.vocab.os.size()))
      note(p + ".os: index outside vocabulary");
    for (int v : h.services)
      if (v < 0 || v >= static_cast<int>(s.vocab.services.size()))
        note(p + ".services: index outside vocabulary");
    for (int v : h.processes)
      if (v < 0 || v >= static_cast<int>(s.vocab.processes.size()))
        note(p + ".processes: index outside vocabulary");
    if (h.honeypot != (h.value < 0.0))
      note(p + ": honeypot flag must match a negative value");
    if (h.sensitive()) any_sensitive = true;
  }
  if (!s.hosts.empty() && !any_sensitive) note("hosts: no sensitive host (no host has value > 0)");

  for (size_t i = 0; i < s.actions.size(); ++i) {
    const auto& a = s.actions[i];
    const std::string p = "actions[" + std::to_string(i) + "]";
    if (a.cost < 0.0) note(p + ".cost: must be nonnegative");
    if (a.success_prob < 0.0 || a.success_prob > 1.0) note(p + ".prob: must be within [0,1]");
    switch (a.kind) {
      case ActionKind::Scan:
        if (a.success_prob != 1.0) note(p + ".prob: scans must have probability 1");
        if (a.granted_access != AccessLevel::None) note(p + ".access: scans grant no access");
        if (a.scan_target == ScanTarget::NotAScan)
          note(p + ".name: cannot derive the scanned attribute from the name");
        break;
      case ActionKind::Promotion:
        if (a.granted_access != AccessLevel::Root) note(p + ".access: promotions grant root");
        if (!a.bound) note(p + ".process: promotion requires a bound process");
        break;
      case ActionKind::Exploit:
        if (!a.bound) note(p + ".service: exploit requires a bound service");
        if (a.granted_access == AccessLevel::None)
          note(p + ".access: exploit must grant user or root");
        break;
    }
  }

  for (size_t i = 0; i < s.firewall.size(); ++i) {
    const auto& r = s.firewall[i];
    const std::string p = "firewall[" + std::to_string(i) + "]";
    if (r.src != 0 && subnet_ids.find(r.src) == subnet_ids.end())
      note(p + ".src: references undeclared subnet");
    if (r.dst == 0 || subnet_ids.find(r.dst) == subnet_ids.end())
      note(p + ".dst: references undeclared subnet");
    if (r.src == 0 && r.dst != 1)
      note(p + ": only subnet 1 may be reachable from the external network");
    for (int v : r.services)
      if (v < 0 || v >= static_cast<int>(s.vocab.services.size()))
        note(p + ".services: index outside vocabulary");
  }

  return out;
}

const std::string& builtin_scenario_text(const std::string& name) {
  if (name == "small") return detail::kSmallDoc;
  if (name == "small_honeypot") return detail::kSmallHoneypotDoc;
  if (name == "large") return detail::kLargeDoc;
  throw ScenarioError("unknown built-in scenario: " + name);
}

Scenario builtin_scenario(const std::string& name) {
  return load_scenario(builtin_scenario_text(name));
}

std::vector<std::string> builtin_scenario_names() {
  return {"small", "small_honeypot", "large"};
}

}  // namespace gailpt
