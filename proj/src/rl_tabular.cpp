#include "gailpt/rl_tabular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gailpt {

StateKey make_state_key(std::span<const double> observation) {
  // Two independent SplitMix64 accumulation lanes over the quantized entries.
  uint64_t h1 = 0x9AFB0C6D1E35A2B7ULL;
  uint64_t h2 = 0xC2B2AE3D27D4EB4FULL;
  for (double x : observation) {
    const auto q = static_cast<int64_t>(std::llround(x * 1000.0));
    const auto u = static_cast<uint64_t>(q);
    h1 = mix64(h1 ^ u);
    h2 = mix64(h2 + (u ^ 0xA5A5A5A5A5A5A5A5ULL));
  }
  return StateKey{h1, h2};
}

std::string state_key_hex(const StateKey& k) {
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(k.hi),
                static_cast<unsigned long long>(k.lo));
  return std::string(buf);
}

StateKey state_key_from_hex(const std::string& hex) {
  if (hex.size() != 32) throw std::invalid_argument("state key hex must be 32 chars");
  StateKey k;
  k.hi = std::stoull(hex.substr(0, 16), nullptr, 16);
  k.lo = std::stoull(hex.substr(16, 16), nullptr, 16);
  return k;
}

QTable::QTable(int action_count) : action_count_(action_count) {
  if (action_count <= 0) throw std::invalid_argument("QTable: action count must be positive");
}

std::vector<float>& QTable::row(const StateKey& k) {
  auto it = rows_.find(k);
  if (it == rows_.end())
    it = rows_.emplace(k, std::vector<float>(action_count_, 0.0f)).first;
  return it->second;
}

const std::vector<float>* QTable::find(const StateKey& k) const {
  auto it = rows_.find(k);
  return it == rows_.end() ? nullptr : &it->second;
}

double QTable::value(const StateKey& k, int action) const {
  const auto* r = find(k);
  return r ? static_cast<double>((*r)[action]) : 0.0;
}

double QTable::max_value(const StateKey& k) const {
  const auto* r = find(k);
  if (!r) return 0.0;
  float m = (*r)[0];
  for (float v : *r) m = std::max(m, v);
  return static_cast<double>(m);
}

int QTable::greedy_action(const StateKey& k) const {
  const auto* r = find(k);
  if (!r) return 0;
  int best = 0;
  for (int a = 1; a < action_count_; ++a)
    if ((*r)[a] > (*r)[best]) best = a;
  return best;
}

void QTable::save_jsonl(const std::string& path) const {
  std::vector<const decltype(rows_)::value_type*> sorted;
  sorted.reserve(rows_.size());
  for (const auto& kv : rows_) sorted.push_back(&kv);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->first.hi != b->first.hi ? a->first.hi < b->first.hi : a->first.lo < b->first.lo;
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("QTable::save_jsonl: cannot open " + path);
  out << nlohmann::json{{"actions", action_count_}, {"states", rows_.size()}}.dump() << "\n";
  for (const auto* kv : sorted) {
    nlohmann::json rec;
    rec["k"] = state_key_hex(kv->first);
    rec["q"] = kv->second;
    out << rec.dump() << "\n";
  }
}

QTable QTable::load_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("QTable::load_jsonl: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("QTable::load_jsonl: empty file " + path);
  auto header = nlohmann::json::parse(line);
  QTable q(header.at("actions").get<int>());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto rec = nlohmann::json::parse(line);
    auto key = state_key_from_hex(rec.at("k").get<std::string>());
    auto vals = rec.at("q").get<std::vector<float>>();
    if (static_cast<int>(vals.size()) != q.action_count_)
      throw std::runtime_error("QTable::load_jsonl: row width mismatch in " + path);
    q.rows_[key] = std::move(vals);
  }
  return q;
}

int select_action(const QTable& q, const StateKey& s, double eps, RandomStream& rng) {
  if (eps > 0.0 && rng.next_double() < eps) return rng.next_int(q.action_count());
  return q.greedy_action(s);
}

double q_update(QTable& q, const StateKey& s, int a, double r, const StateKey& s_next,
                bool terminal, double alpha, double gamma) {
  const double bootstrap = terminal ? 0.0 : gamma * q.max_value(s_next);
  auto& row = q.row(s);
  const double td = r + bootstrap - static_cast<double>(row[a]);
  row[a] = static_cast<float>(static_cast<double>(row[a]) + alpha * td);
  return td;
}

double q_update_gail(QTable& q, const StateKey& s, int a, double r, double r_d,
                     const StateKey& s_next, bool terminal, double alpha, double gamma) {
  return q_update(q, s, a, r + r_d, s_next, terminal, alpha, gamma);
}

double EpsilonSchedule::at(int episode) const {
  if (decay_episodes <= 0 || episode >= decay_episodes) return end;
  const double t = static_cast<double>(episode) / static_cast<double>(decay_episodes);
  return start + (end - start) * t;
}

}  // namespace gailpt
