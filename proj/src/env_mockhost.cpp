#include "gailpt/env_mockhost.hpp"

#include <algorithm>
#include <stdexcept>

#include "gailpt/rng.hpp"
#include "json.hpp"

namespace gailpt {

using json = nlohmann::json;

const std::vector<std::string>& MockVocab::services() {
  static const std::vector<std::string> v = {"vnc",  "telnet", "ssh", "rpc",
                                             "proftpd", "postgresql", "php", "mysql",
                                             "irc",  "http",   "apache"};
  return v;
}

const std::vector<std::string>& MockVocab::os() {
  static const std::vector<std::string> v = {"windows", "solaris", "freebsd",
                                             "openbsd", "netbsd",  "macos",
                                             "aix",     "linux",   "embedded"};
  return v;
}

const std::vector<std::string>& MockVocab::protocols() {
  static const std::vector<std::string> v = {"tcp", "udp", "sctp", "unknown"};
  return v;
}

std::array<double, 5> encode_profile(const HostProfile& p) {
  auto norm = [](int idx, size_t size) {
    return static_cast<double>(idx) / static_cast<double>(size - 1);
  };
  return {norm(p.os, MockVocab::os().size()),
          norm(p.service, MockVocab::services().size()),
          norm(p.version, MockVocab::kVersions),
          norm(p.protocol, MockVocab::protocols().size()),
          norm(p.module_type, MockVocab::kModuleTypes)};
}

HostProfile sample_profile(uint64_t seed) {
  RandomStream rs(seed, "mock-profile");
  HostProfile p;
  p.service = rs.next_int(static_cast<int>(MockVocab::services().size()));
  p.os = rs.next_int(static_cast<int>(MockVocab::os().size()));
  p.version = rs.next_int(MockVocab::kVersions);
  p.protocol = rs.next_int(static_cast<int>(MockVocab::protocols().size()));
  p.module_type = rs.next_int(MockVocab::kModuleTypes);
  p.encoded = encode_profile(p);
  return p;
}

namespace {

std::string entry_key(int service, int version, int protocol) {
  return MockVocab::services().at(service) + "/" + std::to_string(version) + "/" +
         MockVocab::protocols().at(protocol);
}

}  // namespace

VulnTable VulnTable::generate(uint64_t seed) {
  VulnTable t;
  t.seed_ = seed;
  RandomStream root(seed, "vuln-table");
  const int svc_n = static_cast<int>(MockVocab::services().size());
  const int proto_n = static_cast<int>(MockVocab::protocols().size());
  for (int svc = 0; svc < svc_n; ++svc) {
    for (int ver = 0; ver < MockVocab::kVersions; ++ver) {
      for (int proto = 0; proto < proto_n; ++proto) {
        RandomStream rs = root.child(entry_key(svc, ver, proto));
        Entry e;
        std::vector<int> drawn;
        while (static_cast<int>(drawn.size()) < kPostPerEntry + kSessionPerEntry) {
          int p = rs.next_int(MockHostEnv::kPayloadCount);
          if (std::find(drawn.begin(), drawn.end(), p) == drawn.end()) drawn.push_back(p);
        }
        e.post.assign(drawn.begin(), drawn.begin() + kPostPerEntry);
        e.session.assign(drawn.begin() + kPostPerEntry, drawn.end());
        std::sort(e.post.begin(), e.post.end());
        std::sort(e.session.begin(), e.session.end());
        t.entries_[entry_key(svc, ver, proto)] = std::move(e);
      }
    }
  }
  return t;
}

const VulnTable::Entry& VulnTable::lookup(int service, int version, int protocol) const {
  auto it = entries_.find(entry_key(service, version, protocol));
  if (it == entries_.end())
    throw std::out_of_range("VulnTable: no entry for " + entry_key(service, version, protocol));
  return it->second;
}

std::string VulnTable::to_json() const {
  nlohmann::ordered_json doc;
  doc["seed"] = seed_;
  doc["payload_count"] = MockHostEnv::kPayloadCount;
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (const auto& [k, e] : entries_) entries[k] = {{"post", e.post}, {"session", e.session}};
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

VulnTable VulnTable::from_json(const std::string& text) {
  json doc = json::parse(text);
  VulnTable t;
  t.seed_ = doc.at("seed").get<uint64_t>();
  for (const auto& [k, v] : doc.at("entries").items()) {
    Entry e;
    e.post = v.at("post").get<std::vector<int>>();
    e.session = v.at("session").get<std::vector<int>>();
    for (int p : e.post)
      if (p < 0 || p >= MockHostEnv::kPayloadCount)
        throw std::out_of_range("VulnTable: payload index out of range in " + k);
    for (int p : e.session) {
      if (p < 0 || p >= MockHostEnv::kPayloadCount)
        throw std::out_of_range("VulnTable: payload index out of range in " + k);
      if (std::find(e.post.begin(), e.post.end(), p) != e.post.end())
        throw std::runtime_error("VulnTable: post/session overlap in " + k);
    }
    t.entries_[k] = std::move(e);
  }
  return t;
}

MockHostEnv::MockHostEnv(VulnTable table) : table_(std::move(table)) { reset(0); }

const std::array<double, 5>& MockHostEnv::reset(uint64_t seed) {
  profile_ = sample_profile(seed);
  steps_ = 0;
  done_ = false;
  return profile_.encoded;
}

std::pair<double, bool> MockHostEnv::step(int payload) {
  if (done_) throw std::logic_error("MockHostEnv::step: episode is done");
  if (payload < 0 || payload >= kPayloadCount)
    throw std::out_of_range("MockHostEnv::step: payload index out of range");
  const VulnTable::Entry& e =
      table_.lookup(profile_.service, profile_.version, profile_.protocol);
  steps_ += 1;
  double reward;
  if (std::find(e.post.begin(), e.post.end(), payload) != e.post.end()) {
    reward = 100.0;
    done_ = true;
  } else if (std::find(e.session.begin(), e.session.end(), payload) != e.session.end()) {
    reward = 1.0;
  } else {
    reward = -1.0;
  }
  if (steps_ >= kMaxSteps) done_ = true;
  return {reward, done_};
}

}  // namespace gailpt
