#include "gailpt/gail.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace gailpt {

using json = nlohmann::json;

void ExpertKB::save_jsonl(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("ExpertKB::save_jsonl: cannot open " + path);
  nlohmann::ordered_json meta_rec;
  meta_rec["scenario"] = meta.scenario;
  meta_rec["encoder_version"] = meta.encoder_version;
  meta_rec["policy"] = meta.policy;
  meta_rec["reward_threshold"] = meta.reward_threshold;
  meta_rec["seed"] = meta.seed;
  meta_rec["pairs"] = pairs.size();
  out << meta_rec.dump() << "\n";
  for (const auto& p : pairs) {
    nlohmann::ordered_json rec;
    rec["s"] = p.state;
    rec["a"] = p.action;
    out << rec.dump() << "\n";
  }
}

ExpertKB ExpertKB::load_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("ExpertKB::load_jsonl: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ExpertKB::load_jsonl: empty file " + path);
  auto meta_rec = json::parse(line);
  ExpertKB kb;
  kb.meta.scenario = meta_rec.at("scenario").get<std::string>();
  kb.meta.encoder_version = meta_rec.at("encoder_version").get<int>();
  kb.meta.policy = meta_rec.at("policy").get<std::string>();
  kb.meta.reward_threshold = meta_rec.at("reward_threshold").get<double>();
  kb.meta.seed = meta_rec.at("seed").get<uint64_t>();
  size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto rec = json::parse(line);
    StateActionPair p;
    p.state = rec.at("s").get<std::vector<double>>();
    p.action = rec.at("a").get<int>();
    if (width == 0) width = p.state.size();
    if (p.state.size() != width)
      throw std::runtime_error("ExpertKB::load_jsonl: inconsistent state width in " + path);
    kb.pairs.push_back(std::move(p));
  }
  return kb;
}

ExpertKB expand_kb(const ExpertKB& kb, size_t n) {
  if (kb.pairs.empty()) throw std::invalid_argument("expand_kb: knowledge base is empty");
  if (n < 1) throw std::invalid_argument("expand_kb: n must be >= 1");
  ExpertKB out;
  out.meta = kb.meta;
  out.pairs.reserve(n);
  for (size_t i = 0; i < n; ++i) out.pairs.push_back(kb.pairs[i % kb.pairs.size()]);
  return out;
}

// ---------------------------------------------------------------------------
// Optimal plan search: layered breadth-first search over the attacker state
// that matters for action gating (per-host access level + reachability).
// ---------------------------------------------------------------------------

namespace {

struct PlanState {
  std::vector<uint8_t> access;     // 0 / 1 / 2 per host
  std::vector<uint8_t> reachable;  // 0 / 1 per host

  bool operator<(const PlanState& o) const {
    if (access != o.access) return access < o.access;
    return reachable < o.reachable;
  }
  bool operator==(const PlanState&) const = default;
};

struct PlanNode {
  double log_prob = 0.0;  // sum of log success probabilities
  double reward = 0.0;
  PlanState parent;
  int action = -1;
  bool has_parent = false;
};

bool better_score(double lp_a, double rw_a, double lp_b, double rw_b) {
  if (lp_a != lp_b) return lp_a > lp_b;
  return rw_a > rw_b;
}

}  // namespace

OptimalPlan plan_optimal_actions(const Scenario& scn) {
  const int H = scn.host_count();
  const int A = scn.action_count();

  std::vector<std::vector<int>> subnet_hosts(scn.subnet_count() + 1);
  for (int h = 0; h < H; ++h) subnet_hosts[scn.hosts[h].subnet].push_back(h);
  std::vector<std::vector<int>> adjacent(scn.subnet_count() + 1);
  for (const auto& sn : scn.subnets) adjacent[sn.id] = scn.adjacent_subnets(sn.id);

  auto goal_reached = [&](const PlanState& st) {
    for (int h = 0; h < H; ++h)
      if (scn.hosts[h].sensitive() && st.access[h] != 2) return false;
    return true;
  };

  PlanState init;
  init.access.assign(H, 0);
  init.reachable.assign(H, 0);
  for (int h = 0; h < H; ++h)
    if (scn.hosts[h].subnet == 1) init.reachable[h] = 1;

  std::map<PlanState, PlanNode> seen;
  seen[init] = PlanNode{};
  std::vector<PlanState> frontier{init};

  auto traffic_ok = [&](const PlanState& st, int dst_subnet, int service) {
    if (scn.firewall_permits(0, dst_subnet, service)) return true;
    for (int z = 1; z <= scn.subnet_count(); ++z) {
      bool any = false;
      for (int h : subnet_hosts[z])
        if (st.access[h] > 0) {
          any = true;
          break;
        }
      if (any && scn.firewall_permits(z, dst_subnet, service)) return true;
    }
    return false;
  };

  const int depth_cap = scn.step_cap;
  for (int depth = 0; depth < depth_cap && !frontier.empty(); ++depth) {
    std::map<PlanState, PlanNode> layer;
    for (const PlanState& st : frontier) {
      const PlanNode& node = seen.at(st);
      for (int h = 0; h < H; ++h) {
        const auto& host = scn.hosts[h];
        for (int ai = 0; ai < A; ++ai) {
          const auto& act = scn.actions[ai];
          PlanState nx = st;
          double lp = node.log_prob;
          double rw = node.reward - act.cost;
          bool changes = false;
          switch (act.kind) {
            case ActionKind::Exploit: {
              if (!st.reachable[h]) break;
              if (act.target_os && *act.target_os != host.os) break;
              if (std::find(host.services.begin(), host.services.end(), *act.bound) ==
                  host.services.end())
                break;
              if (!traffic_ok(st, host.subnet, *act.bound)) break;
              const auto granted = static_cast<uint8_t>(act.granted_access);
              if (granted <= st.access[h]) break;
              nx.access[h] = granted;
              lp += std::log(std::max(act.success_prob, 1e-12));
              if (granted == 2 && !host.honeypot) rw += host.value;
              if (host.honeypot && st.access[h] == 0) rw += host.value;
              changes = true;
              break;
            }
            case ActionKind::Promotion: {
              if (st.access[h] < 1 || st.access[h] >= 2) break;
              if (act.target_os && *act.target_os != host.os) break;
              if (std::find(host.processes.begin(), host.processes.end(), *act.bound) ==
                  host.processes.end())
                break;
              nx.access[h] = 2;
              if (!host.honeypot) rw += host.value;
              changes = true;
              break;
            }
            case ActionKind::Scan: {
              if (act.scan_target != ScanTarget::Subnet) break;  // only pivots change gating
              if (st.access[h] != 2) break;
              std::vector<int> zones = adjacent[host.subnet];
              zones.push_back(host.subnet);
              for (int z : zones)
                for (int hh : subnet_hosts[z])
                  if (!nx.reachable[hh]) {
                    nx.reachable[hh] = 1;
                    changes = true;
                  }
              break;
            }
          }
          if (!changes) continue;
          auto it = seen.find(nx);
          if (it != seen.end()) continue;  // reached at an earlier or equal depth already
          auto lit = layer.find(nx);
          if (lit == layer.end() || better_score(lp, rw, lit->second.log_prob, lit->second.reward))
            layer[nx] = PlanNode{lp, rw, st, h * A + ai, true};
        }
      }
    }
    if (layer.empty()) break;
    frontier.clear();
    const PlanState* best_goal = nullptr;
    for (auto& [nx, node] : layer) {
      seen[nx] = node;
      frontier.push_back(nx);
      if (goal_reached(nx)) {
        if (!best_goal || better_score(node.log_prob, node.reward, seen.at(*best_goal).log_prob,
                                       seen.at(*best_goal).reward))
          best_goal = &seen.find(nx)->first;
      }
    }
    if (best_goal) {
      OptimalPlan plan;
      plan.steps = depth + 1;
      const PlanNode* n = &seen.at(*best_goal);
      plan.prob_product = std::exp(n->log_prob);
      plan.total_reward = n->reward;
      PlanState cur = *best_goal;
      while (true) {
        const PlanNode& cn = seen.at(cur);
        if (!cn.has_parent) break;
        plan.actions.push_back(cn.action);
        cur = cn.parent;
      }
      std::reverse(plan.actions.begin(), plan.actions.end());
      return plan;
    }
  }
  throw std::runtime_error("plan_optimal_actions: no plan roots every sensitive host");
}

// ---------------------------------------------------------------------------
// Expert collection
// ---------------------------------------------------------------------------

ExpertKB collect_expert_pairs(const Scenario& scn, const NetPolicyFactory& make_policy,
                              int episodes, uint64_t seed, const std::string& policy_name) {
  NetEnv env(scn);
  RandomStream seeder(seed, "collect");
  int best_steps = -1;
  std::vector<std::vector<StateActionPair>> kept;  // episodes at the current best step count
  double best_reward = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seeder.next_u64());
    NetPolicy policy = make_policy();
    std::vector<StateActionPair> trace;
    while (!env.done()) {
      const int action = policy(env);
      StateActionPair p;
      p.state = env.observation();
      p.action = action;
      env.step(action);
      trace.push_back(std::move(p));
    }
    if (!env.all_sensitive_rooted()) continue;
    const int steps = env.steps_taken();
    if (best_steps < 0 || steps < best_steps) {
      best_steps = steps;
      kept.clear();
      best_reward = env.cumulative_reward();
    }
    if (steps == best_steps) kept.push_back(std::move(trace));
  }
  if (best_steps < 0)
    throw std::runtime_error("collect_expert_pairs: no episode rooted every sensitive host "
                             "within the budget");
  ExpertKB kb;
  kb.meta.scenario = scn.name;
  kb.meta.encoder_version = NetEnv::kEncoderVersion;
  kb.meta.policy = policy_name;
  kb.meta.reward_threshold = best_reward;
  kb.meta.seed = seed;
  for (auto& trace : kept)
    for (auto& p : trace) kb.pairs.push_back(std::move(p));
  return kb;
}

ExpertKB collect_expert_pairs_scripted(const Scenario& scn, int episodes, uint64_t seed) {
  const OptimalPlan plan = plan_optimal_actions(scn);
  auto factory = [&plan]() -> NetPolicy {
    // Replays the plan, repeating an action until the environment reports
    // success (only stochastic exploits ever retry).
    auto cursor = std::make_shared<size_t>(0);
    auto started = std::make_shared<bool>(false);
    return [cursor, started, &plan](const NetEnv& env) -> int {
      if (*started && env.last_outcome() == Outcome::Success) *cursor += 1;
      *started = true;
      const size_t i = std::min(*cursor, plan.actions.size() - 1);
      return plan.actions[i];
    };
  };
  return collect_expert_pairs(scn, factory, episodes, seed, "scripted-optimal-plan");
}

ExpertKB collect_expert_pairs_mockhost(const VulnTable& table, const MockPolicy& policy,
                                       int episodes, uint64_t seed,
                                       const std::string& policy_name) {
  MockHostEnv env(table);
  RandomStream seeder(seed, "collect-mock");
  ExpertKB kb;
  kb.meta.scenario = "mockhost";
  kb.meta.encoder_version = 1;
  kb.meta.policy = policy_name;
  kb.meta.reward_threshold = 100.0;
  kb.meta.seed = seed;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seeder.next_u64());
    while (!env.done()) {
      const int payload = policy(env);
      StateActionPair p;
      p.state.assign(env.state().begin(), env.state().end());
      p.action = payload;
      const auto [reward, done] = env.step(payload);
      if (reward == 100.0) kb.pairs.push_back(std::move(p));
    }
  }
  if (kb.pairs.empty())
    throw std::runtime_error("collect_expert_pairs_mockhost: no post-exploit landed within "
                             "the budget");
  return kb;
}

ExpertKB collect_expert_pairs_mockhost_scripted(const VulnTable& table, int episodes,
                                                uint64_t seed) {
  MockPolicy policy = [](const MockHostEnv& env) {
    const auto& p = env.profile();
    return env.table().lookup(p.service, p.version, p.protocol).post.front();
  };
  return collect_expert_pairs_mockhost(table, policy, episodes, seed, "scripted-vuln-table");
}

// ---------------------------------------------------------------------------
// Discriminator
// ---------------------------------------------------------------------------

nn::DenseNet make_discriminator(int state_width, int action_count, uint64_t seed) {
  return nn::make_net(state_width + action_count,
                      {{50, nn::Activation::ReLU},
                       {100, nn::Activation::ReLU},
                       {200, nn::Activation::ReLU},
                       {1, nn::Activation::Sigmoid}},
                      seed);
}

void build_disc_input(std::span<const double> state, int action, int action_count,
                      std::vector<double>& out) {
  out.assign(state.size() + static_cast<size_t>(action_count), 0.0);
  std::copy(state.begin(), state.end(), out.begin());
  out[state.size() + static_cast<size_t>(action)] = 1.0;
}

namespace {
constexpr double kDClamp = 1e-12;

double clamp_unit(double d) {
  return std::min(1.0 - kDClamp, std::max(kDClamp, d));
}
}  // namespace

double discriminator_output(const nn::DenseNet& d, std::span<const double> input,
                            nn::ForwardScratch& scratch) {
  return clamp_unit(nn::forward_into(d, input, scratch)[0]);
}

DiscLossResult discriminator_loss(const nn::DenseNet& d,
                                  std::span<const StateActionPair> expert_batch,
                                  std::span<const StateActionPair> agent_batch,
                                  const nn::DenseNet* actor, double lambda) {
  if (expert_batch.empty() || agent_batch.empty())
    throw std::invalid_argument("discriminator_loss: empty batch");
  const int in_w = d.input_width();
  const int action_count = in_w - static_cast<int>(expert_batch.front().state.size());
  if (action_count <= 0)
    throw std::invalid_argument("discriminator_loss: input width mismatch with discriminator");

  auto run_side = [&](std::span<const StateActionPair> batch, bool is_agent,
                      nn::Gradients& grads, double& mean_d, double& log_term) {
    const int B = static_cast<int>(batch.size());
    std::vector<double> X(static_cast<size_t>(B) * in_w, 0.0);
    std::vector<double> tmp;
    for (int i = 0; i < B; ++i) {
      if (static_cast<int>(batch[i].state.size()) + action_count != in_w)
        throw std::invalid_argument("discriminator_loss: input width mismatch with discriminator");
      build_disc_input(batch[i].state, batch[i].action, action_count, tmp);
      std::copy(tmp.begin(), tmp.end(), X.begin() + static_cast<size_t>(i) * in_w);
    }
    nn::Workspace ws;
    nn::forward_batch(d, X.data(), B, ws);
    // Head preactivation z with D = sigmoid(z); the log terms are computed in
    // a saturation-safe form: log D = -softplus(-z), log(1-D) = -softplus(z).
    std::vector<double> dz(B);
    mean_d = 0.0;
    log_term = 0.0;
    for (int i = 0; i < B; ++i) {
      const double z = ws.pre.back()[i];
      const double dval = clamp_unit(ws.post.back()[i]);
      mean_d += dval;
      const double softplus_pos = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      const double softplus_neg = softplus_pos - z;  // softplus(-z)
      if (is_agent) {
        log_term += -softplus_neg;                      // log D
        dz[i] = -(1.0 - dval) / static_cast<double>(B); // descent grad of -mean log D
      } else {
        log_term += -softplus_pos;                      // log (1 - D)
        dz[i] = dval / static_cast<double>(B);          // descent grad of -mean log(1-D)
      }
    }
    mean_d /= B;
    log_term /= B;
    nn::backward_batch(d, ws, dz.data(), nn::HeadGrad::Preactivation, grads);
  };

  DiscLossResult res;
  res.disc_grads = nn::make_gradients(d);
  double agent_log = 0.0, expert_log = 0.0;
  run_side(agent_batch, true, res.disc_grads, res.mean_d_agent, agent_log);
  run_side(expert_batch, false, res.disc_grads, res.mean_d_expert, expert_log);
  res.loss = agent_log + expert_log;

  if (actor != nullptr) {
    // Causal entropy estimated on the agent batch; the -lambda * H term flows
    // only to the actor.
    const int B = static_cast<int>(agent_batch.size());
    const int sw = actor->input_width();
    const int an = actor->output_width();
    std::vector<double> X(static_cast<size_t>(B) * sw);
    for (int i = 0; i < B; ++i) {
      if (static_cast<int>(agent_batch[i].state.size()) != sw)
        throw std::invalid_argument("discriminator_loss: agent state width mismatch with actor");
      std::copy(agent_batch[i].state.begin(), agent_batch[i].state.end(),
                X.begin() + static_cast<size_t>(i) * sw);
    }
    nn::Workspace ws;
    nn::forward_batch(*actor, X.data(), B, ws);
    double H = 0.0;
    std::vector<double> dz(static_cast<size_t>(B) * an, 0.0);
    for (int i = 0; i < B; ++i) {
      const double* pi = ws.post.back().data() + static_cast<size_t>(i) * an;
      const int a = agent_batch[i].action;
      const double logp = std::log(std::max(pi[a], 1e-300));
      H += -logp / B;
      // d(-lambda H)/dz_j = (lambda / B) * (one_hot(a)_j - pi_j)
      double* dzi = dz.data() + static_cast<size_t>(i) * an;
      for (int j = 0; j < an; ++j)
        dzi[j] = (lambda / B) * ((j == a ? 1.0 : 0.0) - pi[j]);
    }
    res.loss -= lambda * H;
    res.actor_grads = nn::make_gradients(*actor);
    nn::backward_batch(*actor, ws, dz.data(), nn::HeadGrad::Preactivation, res.actor_grads);
    res.has_actor_grads = true;
  }
  return res;
}

double shaped_reward(const nn::DenseNet& d, std::span<const double> state, int action,
                     int action_count, const GailConfig& cfg) {
  std::vector<double> input;
  build_disc_input(state, action, action_count, input);
  nn::ForwardScratch scratch;
  const double dval = discriminator_output(d, input, scratch);
  const double rd = -std::log(std::max(dval, 1e-8));
  return cfg.rd_weight * std::min(rd, cfg.rd_cap);
}

ShapedRewardCache::ShapedRewardCache(const nn::DenseNet* d, const GailConfig* cfg,
                                     int action_count)
    : d_(d), cfg_(cfg), action_count_(action_count) {}

double ShapedRewardCache::get(const StateKey& key, std::span<const double> state, int action) {
  PairKey pk{key.hi ^ mix64(static_cast<uint64_t>(action) + 1), key.lo};
  auto it = memo_.find(pk);
  if (it != memo_.end()) return it->second;
  build_disc_input(state, action, action_count_, input_);
  const double dval = discriminator_output(*d_, input_, scratch_);
  const double rd = cfg_->rd_weight * std::min(-std::log(std::max(dval, 1e-8)), cfg_->rd_cap);
  if (memo_.size() > (1u << 20)) memo_.clear();
  memo_.emplace(pk, rd);
  return rd;
}

void ShapedRewardCache::invalidate() { memo_.clear(); }

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(std::vector<double> state, int action) {
  if (buf_.size() < capacity_) {
    buf_.push_back({std::move(state), action});
  } else {
    buf_[next_] = {std::move(state), action};
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<StateActionPair> ReplayBuffer::sample(size_t n, RandomStream& rng) const {
  std::vector<StateActionPair> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(buf_[rng.next_int(static_cast<int>(buf_.size()))]);
  return out;
}

double js_divergence(std::span<const StateActionPair> a, std::span<const StateActionPair> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("js_divergence: empty sample");
  auto histogram = [](std::span<const StateActionPair> pairs) {
    std::map<std::pair<std::string, int>, double> h;
    for (const auto& p : pairs) {
      const StateKey k = make_state_key(p.state);
      h[{state_key_hex(k), p.action}] += 1.0;
    }
    for (auto& [k, v] : h) v /= static_cast<double>(pairs.size());
    return h;
  };
  const auto pa = histogram(a);
  const auto pb = histogram(b);
  double js = 0.0;
  auto kl_half = [](const auto& p, const auto& q) {
    double acc = 0.0;
    for (const auto& [k, pv] : p) {
      auto it = q.find(k);
      const double qv = it == q.end() ? 0.0 : it->second;
      const double m = 0.5 * (pv + qv);
      acc += pv * std::log(pv / m);
    }
    return acc;
  };
  js = 0.5 * kl_half(pa, pb) + 0.5 * kl_half(pb, pa);
  return js;
}

}  // namespace gailpt
