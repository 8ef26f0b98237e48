#include "gailpt/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gailpt {

namespace {

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

class MetricsAggregator {
 public:
  explicit MetricsAggregator(int window) : window_(window) {
    if (window_ < 1) throw std::invalid_argument("metrics window must be >= 1");
  }

  void add_loss(double l) {
    sum_loss_ += l;
    loss_n_ += 1;
  }

  void add_episode(double reward, int steps, bool honeypot, long posts) {
    sum_reward_ += reward;
    sum_steps_ += steps;
    honeypot_eps_ += honeypot ? 1 : 0;
    posts_ += posts;
    count_ += 1;
    total_ += 1;
    if (count_ == window_) flush();
  }

  void finish() {
    if (count_ > 0) flush();
  }

  const std::vector<MetricRecord>& records() const { return records_; }

 private:
  void flush() {
    MetricRecord r;
    r.window_end_episode = total_;
    r.avg_reward = sum_reward_ / count_;
    r.avg_steps = sum_steps_ / count_;
    r.honeypot_prob = static_cast<double>(honeypot_eps_) / count_;
    r.post_exploit_count = posts_;
    r.loss = loss_n_ > 0 ? sum_loss_ / loss_n_ : 0.0;
    records_.push_back(r);
    sum_reward_ = sum_steps_ = sum_loss_ = 0.0;
    honeypot_eps_ = 0;
    posts_ = 0;
    loss_n_ = 0;
    count_ = 0;
  }

  int window_;
  int count_ = 0;
  int total_ = 0;
  double sum_reward_ = 0.0, sum_steps_ = 0.0, sum_loss_ = 0.0;
  int honeypot_eps_ = 0;
  long posts_ = 0;
  int loss_n_ = 0;
  std::vector<MetricRecord> records_;
};

void check_config(const TrainConfig& cfg) {
  if (cfg.episodes < 1) throw std::invalid_argument("train: episodes must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("train: workers must be >= 1");
  if (cfg.window < 1) throw std::invalid_argument("train: window must be >= 1");
  if (cfg.is_gail() && cfg.kb_path.empty())
    throw std::invalid_argument("train: " + cfg.algo + " requires an expert knowledge base");
  if (cfg.is_tabular() && cfg.is_mockhost())
    throw std::invalid_argument("train: tabular training runs on network scenarios only");
  if (cfg.alpha <= 0.0 || cfg.alpha > 1.0) throw std::invalid_argument("train: alpha in (0,1]");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0) throw std::invalid_argument("train: gamma in [0,1]");
  if (cfg.eps.start < cfg.eps.end || cfg.eps.end < 0.0 || cfg.eps.start > 1.0)
    throw std::invalid_argument("train: epsilon schedule must satisfy 0 <= end <= start <= 1");
}

void check_kb_net(const ExpertKB& kb, const Scenario& scn, const NetEnv& env) {
  if (kb.pairs.empty()) throw std::invalid_argument("expert kb: empty knowledge base");
  if (kb.meta.scenario != scn.name)
    throw std::invalid_argument("expert kb: collected on '" + kb.meta.scenario +
                                "' but training on '" + scn.name + "'");
  if (kb.meta.encoder_version != NetEnv::kEncoderVersion)
    throw std::invalid_argument("expert kb: encoder version mismatch");
  if (static_cast<int>(kb.state_width()) != env.observation_width())
    throw std::invalid_argument("expert kb: state width mismatch with the scenario encoder");
  for (const auto& p : kb.pairs)
    if (p.action < 0 || p.action >= env.action_space_size())
      throw std::invalid_argument("expert kb: action index outside the scenario action space");
}

std::vector<StateActionPair> sample_kb(const ExpertKB& kb, size_t n, RandomStream& rng) {
  std::vector<StateActionPair> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i)
    out.push_back(kb.pairs[rng.next_int(static_cast<int>(kb.pairs.size()))]);
  return out;
}

double update_discriminator(nn::DenseNet& d, nn::OptimizerState& opt, const ExpertKB& kb,
                            const ReplayBuffer& replay, RandomStream& rng,
                            const GailConfig& gcfg) {
  double last_loss = 0.0;
  for (int s = 0; s < gcfg.disc_steps; ++s) {
    const auto expert = sample_kb(kb, gcfg.disc_batch, rng);
    const auto agent = replay.sample(gcfg.disc_batch, rng);
    auto res = discriminator_loss(d, expert, agent, nullptr, 0.0);
    nn::apply(d, res.disc_grads, opt);
    last_loss = res.loss;
  }
  return last_loss;
}

EpsilonSchedule resolve_eps(const TrainConfig& cfg) {
  EpsilonSchedule e = cfg.eps;
  if (e.decay_episodes <= 0) e.decay_episodes = std::max(1, cfg.episodes / 5);
  return e;
}

}  // namespace

std::optional<int> rounds_to_optimal(const std::vector<MetricRecord>& metrics, int window_size) {
  if (metrics.empty()) throw std::invalid_argument("rounds_to_optimal: no metrics");
  if (window_size < 1) throw std::invalid_argument("rounds_to_optimal: bad window size");
  double best = metrics.front().avg_steps;
  for (const auto& m : metrics) best = std::min(best, m.avg_steps);
  const double band = best * 1.1;
  int candidate = -1;
  for (int i = static_cast<int>(metrics.size()) - 1; i >= 0; --i) {
    if (metrics[i].avg_steps > band) break;
    if (metrics[i].window_end_episode % window_size == 0) candidate = i;
  }
  if (candidate < 0) return std::nullopt;
  return metrics[candidate].window_end_episode;
}

// ---------------------------------------------------------------------------
// Tabular training
// ---------------------------------------------------------------------------

namespace {

TrainOutput train_tabular_impl(const TrainConfig& cfg, const ExpertKB* kb) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg);
  Scenario scn = resolve_scenario(cfg.scenario);
  NetEnv env(scn);
  const bool gail = cfg.is_gail();
  if (gail) check_kb_net(*kb, scn, env);

  const EpsilonSchedule eps = resolve_eps(cfg);
  RandomStream env_seeds(cfg.seed, "env");
  RandomStream explore(cfg.seed, "explore");
  RandomStream disc_rng(cfg.seed, "disc");

  QTable q(env.action_space_size());
  MetricsAggregator agg(cfg.window);

  std::optional<nn::DenseNet> disc;
  std::optional<nn::OptimizerState> disc_opt;
  std::optional<ReplayBuffer> replay;
  std::optional<ShapedRewardCache> rd_cache;
  if (gail) {
    disc = make_discriminator(env.observation_width(), env.action_space_size(),
                              mix64(cfg.seed ^ hash64("disc-init")));
    disc_opt = nn::make_adam(cfg.gail.disc_lr);
    replay.emplace(cfg.gail.replay_capacity);
    rd_cache.emplace(&*disc, &cfg.gail, env.action_space_size());
  }

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const double e = eps.at(ep);
    env.reset(env_seeds.next_u64());
    StateKey key = make_state_key(env.observation());
    double ep_reward = 0.0;
    bool honeypot = false;
    long posts = 0;
    double td_sum = 0.0;
    int td_n = 0;
    while (!env.done()) {
      const int a = select_action(q, key, e, explore);
      double r_d = 0.0;
      if (gail) {
        r_d = rd_cache->get(key, env.observation(), a);
        replay->push(env.observation(), a);
      }
      const auto out = env.step(a);
      const StateKey next = make_state_key(env.observation());
      const double td = gail ? q_update_gail(q, key, a, out.reward, r_d, next, out.done,
                                             cfg.alpha, cfg.gamma)
                             : q_update(q, key, a, out.reward, next, out.done, cfg.alpha,
                                        cfg.gamma);
      td_sum += std::fabs(td);
      td_n += 1;
      ep_reward += out.reward;
      honeypot = honeypot || out.honeypot_hit;
      key = next;
    }
    if (env.all_sensitive_rooted()) posts += 1;
    agg.add_loss(td_n > 0 ? td_sum / td_n : 0.0);
    agg.add_episode(ep_reward, env.steps_taken(), honeypot, posts);

    if (gail && (ep + 1) % cfg.gail.cadence_episodes == 0 &&
        replay->size() >= static_cast<size_t>(cfg.gail.disc_batch)) {
      update_discriminator(*disc, *disc_opt, *kb, *replay, disc_rng, cfg.gail);
      rd_cache->invalidate();
    }

    if (std::getenv("GAILPT_DEBUG") && gail && (ep + 1) % 1000 == 0) {
      const auto expert = sample_kb(*kb, 64, disc_rng);
      const auto agent = replay->sample(64, disc_rng);
      const auto probe = discriminator_loss(*disc, expert, agent, nullptr, 0.0);
      double rd_expert = 0.0;
      for (const auto& p : expert)
        rd_expert += shaped_reward(*disc, p.state, p.action, env.action_space_size(), cfg.gail);
      double rd_agent = 0.0;
      for (const auto& p : agent)
        rd_agent += shaped_reward(*disc, p.state, p.action, env.action_space_size(), cfg.gail);
      std::fprintf(stderr, "[debug] ep=%d D(exp)=%.4f D(agt)=%.4f rd(exp)=%.3f rd(agt)=%.3f q_states=%zu\n",
                   ep + 1, probe.mean_d_expert, probe.mean_d_agent, rd_expert / 64.0,
                   rd_agent / 64.0, q.size());
    }
  }

  TrainOutput out;
  agg.finish();
  out.result.metrics = agg.records();
  out.result.rounds_to_optimal = rounds_to_optimal(out.result.metrics, cfg.window);
  out.result.wall_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.qtable = std::move(q);
  if (disc) out.disc = std::move(*disc);
  return out;
}

// ---------------------------------------------------------------------------
// Policy-gradient training (A3C / DPPO, plain and shaped)
// ---------------------------------------------------------------------------

class EnvAdapter {
 public:
  virtual ~EnvAdapter() = default;
  virtual void reset(uint64_t seed) = 0;
  virtual std::pair<double, bool> step(int a) = 0;
  virtual std::span<const double> obs() const = 0;
  virtual bool done() const = 0;
  virtual int steps() const = 0;
  virtual int action_count() const = 0;
  virtual int state_width() const = 0;
  virtual bool honeypot_last() const { return false; }
  virtual bool succeeded() const = 0;
};

class NetAdapter final : public EnvAdapter {
 public:
  explicit NetAdapter(Scenario scn) : env_(std::move(scn)) {}
  void reset(uint64_t seed) override {
    env_.reset(seed);
    honeypot_ = false;
  }
  std::pair<double, bool> step(int a) override {
    auto out = env_.step(a);
    honeypot_ = out.honeypot_hit;
    return {out.reward, out.done};
  }
  std::span<const double> obs() const override { return env_.observation(); }
  bool done() const override { return env_.done(); }
  int steps() const override { return env_.steps_taken(); }
  int action_count() const override { return env_.action_space_size(); }
  int state_width() const override { return env_.observation_width(); }
  bool honeypot_last() const override { return honeypot_; }
  bool succeeded() const override { return env_.all_sensitive_rooted(); }

 private:
  NetEnv env_;
  bool honeypot_ = false;
};

class MockAdapter final : public EnvAdapter {
 public:
  explicit MockAdapter(VulnTable table) : env_(std::move(table)) {}
  void reset(uint64_t seed) override {
    env_.reset(seed);
    post_ = false;
  }
  std::pair<double, bool> step(int a) override {
    auto [r, d] = env_.step(a);
    if (r == 100.0) post_ = true;
    return {r, d};
  }
  std::span<const double> obs() const override {
    return std::span<const double>(env_.state().data(), env_.state().size());
  }
  bool done() const override { return env_.done(); }
  int steps() const override { return env_.steps_taken(); }
  int action_count() const override { return MockHostEnv::kPayloadCount; }
  int state_width() const override { return 5; }
  bool succeeded() const override { return post_; }

 private:
  MockHostEnv env_;
  bool post_ = false;
};

struct PolicyChief {
  std::mutex mu;
  nn::DenseNet actor, critic;
  nn::OptimizerState opt_a, opt_c;
  std::optional<nn::DenseNet> disc;
  nn::OptimizerState opt_d;
  uint64_t version = 1;

  const ExpertKB* kb = nullptr;
  std::optional<ReplayBuffer> replay;
  RandomStream disc_rng;
  int episodes_since_disc = 0;

  TrainConfig cfg;
  MetricsAggregator agg;
  std::atomic<int> ticket{0};

  explicit PolicyChief(const TrainConfig& c) : cfg(c), agg(c.window) {}
};

// Clipped-surrogate update performed by the chief on a submitted segment.
double chief_ppo_update(PolicyChief& chief, const TrajectoryBatch& batch) {
  const auto& cfg = chief.cfg.ppo;
  const int T = static_cast<int>(batch.steps.size());
  const int sw = chief.actor.input_width();
  const int an = chief.actor.output_width();
  std::vector<double> X(static_cast<size_t>(T) * sw);
  for (int t = 0; t < T; ++t)
    std::copy(batch.steps[t].state.begin(), batch.steps[t].state.end(),
              X.begin() + static_cast<size_t>(t) * sw);

  double last_loss = 0.0;
  nn::Gradients ga = nn::make_gradients(chief.actor);
  nn::Gradients gc = nn::make_gradients(chief.critic);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    nn::Workspace ws;
    nn::forward_batch(chief.actor, X.data(), T, ws);
    const auto& probs = ws.post.back();
    std::vector<double> ratios(T);
    for (int t = 0; t < T; ++t) {
      const double p = std::max(probs[static_cast<size_t>(t) * an + batch.steps[t].action],
                                1e-300);
      ratios[t] = ppo_ratio(std::log(p), batch.steps[t].log_prob);
    }
    const auto clip = ppo_clip_loss(ratios, batch.advantages, cfg.clip_eps);

    std::vector<double> dz(static_cast<size_t>(T) * an);
    double mean_entropy = 0.0;
    for (int t = 0; t < T; ++t) {
      const double* pi = probs.data() + static_cast<size_t>(t) * an;
      double* d = dz.data() + static_cast<size_t>(t) * an;
      const int a = batch.steps[t].action;
      // d(ratio)/d(logit_j) = ratio * (one_hot(a)_j - pi_j)
      const double dldr = clip.dloss_dratio[t];
      double H = 0.0;
      for (int j = 0; j < an; ++j)
        if (pi[j] > 0.0) H -= pi[j] * std::log(pi[j]);
      mean_entropy += H / T;
      for (int j = 0; j < an; ++j) {
        const double logp = pi[j] > 0.0 ? std::log(pi[j]) : -745.0;
        const double ind = (j == a) ? 1.0 : 0.0;
        d[j] = dldr * ratios[t] * (ind - pi[j]) +
               (cfg.entropy_coef / T) * pi[j] * (logp + H);
      }
    }
    ga.zero();
    nn::backward_batch(chief.actor, ws, dz.data(), nn::HeadGrad::Preactivation, ga);
    nn::apply(chief.actor, ga, chief.opt_a);

    nn::Workspace wsc;
    nn::forward_batch(chief.critic, X.data(), T, wsc);
    std::vector<double> dv(T);
    double mse = 0.0;
    for (int t = 0; t < T; ++t) {
      const double v = wsc.post.back()[t];
      const double err = batch.returns[t] - v;
      mse += err * err / T;
      dv[t] = -2.0 * cfg.critic_coef * err / T;
    }
    gc.zero();
    nn::backward_batch(chief.critic, wsc, dv.data(), nn::HeadGrad::Preactivation, gc);
    nn::apply(chief.critic, gc, chief.opt_c);

    last_loss = clip.loss - cfg.entropy_coef * mean_entropy + cfg.critic_coef * mse;
  }
  return last_loss;
}

std::unique_ptr<EnvAdapter> make_adapter(const TrainConfig& cfg, const VulnTable* table) {
  if (cfg.is_mockhost()) return std::make_unique<MockAdapter>(*table);
  return std::make_unique<NetAdapter>(resolve_scenario(cfg.scenario));
}

void policy_worker(PolicyChief& chief, int wid, const VulnTable* table) {
  const TrainConfig& cfg = chief.cfg;
  const bool gail = cfg.is_gail();
  const bool dppo = cfg.is_dppo();
  auto env = make_adapter(cfg, table);
  RandomStream env_seeds = RandomStream(cfg.seed, "env").child("worker", wid);
  RandomStream explore = RandomStream(cfg.seed, "explore").child("worker", wid);

  nn::DenseNet actor, critic;
  std::optional<nn::DenseNet> disc;
  uint64_t seen_version = 0;
  auto sync_locked = [&]() {
    if (seen_version == chief.version) return;
    actor = chief.actor;
    critic = chief.critic;
    if (chief.disc) disc = *chief.disc;
    seen_version = chief.version;
  };
  {
    std::lock_guard<std::mutex> lk(chief.mu);
    sync_locked();
  }

  nn::Gradients ga = nn::make_gradients(actor);
  nn::Gradients gc = nn::make_gradients(critic);
  std::vector<StateActionPair> pending;

  while (true) {
    const int ep = chief.ticket.fetch_add(1);
    if (ep >= cfg.episodes) break;
    env->reset(env_seeds.next_u64());
    double raw_reward = 0.0;
    long posts = 0;
    bool honeypot = false;
    TrajectoryBatch batch;

    while (!env->done()) {
      std::vector<double> state(env->obs().begin(), env->obs().end());
      const auto sa = sample_action(actor, state, explore);
      const double v = state_value(critic, state);
      const auto [r, done] = env->step(sa.action);
      raw_reward += r;
      if (cfg.is_mockhost() && r == 100.0) posts += 1;
      honeypot = honeypot || env->honeypot_last();
      double learn_r = r;
      if (gail && disc)
        learn_r += shaped_reward(*disc, state, sa.action, env->action_count(), cfg.gail);
      if (gail) pending.push_back({state, sa.action});
      batch.steps.push_back({std::move(state), sa.action, learn_r, sa.log_prob, v, done});

      if (static_cast<int>(batch.steps.size()) >= cfg.ppo.horizon || done) {
        batch.bootstrap_value = done ? 0.0 : state_value(critic, env->obs());
        batch.finalize(cfg.ppo.gamma, cfg.ppo.horizon);
        double loss = 0.0;
        if (!dppo) {
          ga.zero();
          gc.zero();
          a3c_gradients(actor, critic, batch, cfg.ppo.entropy_coef, cfg.ppo.critic_coef, ga, gc);
        }
        {
          std::lock_guard<std::mutex> lk(chief.mu);
          if (dppo) {
            loss = chief_ppo_update(chief, batch);
          } else {
            nn::apply(chief.actor, ga, chief.opt_a);
            nn::apply(chief.critic, gc, chief.opt_c);
            // Loss surrogate for the records: mean squared advantage.
            double a2 = 0.0;
            for (double a : batch.advantages) a2 += a * a / batch.advantages.size();
            loss = cfg.ppo.critic_coef * a2;
          }
          if (gail && chief.replay) {
            for (auto& p : pending) chief.replay->push(std::move(p.state), p.action);
            pending.clear();
          }
          chief.version += 1;
          chief.agg.add_loss(loss);
          sync_locked();
        }
        batch = TrajectoryBatch{};
      }
    }

    {
      std::lock_guard<std::mutex> lk(chief.mu);
      if (!cfg.is_mockhost() && env->succeeded()) posts += 1;
      chief.agg.add_episode(raw_reward, env->steps(), honeypot, posts);
      if (gail && chief.replay) {
        chief.episodes_since_disc += 1;
        if (chief.episodes_since_disc >= cfg.gail.policy_cadence_episodes &&
            chief.replay->size() >= static_cast<size_t>(cfg.gail.disc_batch)) {
          update_discriminator(*chief.disc, chief.opt_d, *chief.kb, *chief.replay,
                               chief.disc_rng, cfg.gail);
          chief.episodes_since_disc = 0;
          chief.version += 1;
          sync_locked();
        }
      }
    }
  }
}

TrainOutput train_policy_impl(const TrainConfig& cfg, const ExpertKB* kb) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg);
  if (cfg.is_tabular()) throw std::invalid_argument("train_policy: tabular algorithm");

  std::optional<VulnTable> table;
  if (cfg.is_mockhost()) table = VulnTable::generate(cfg.vuln_seed);
  auto probe = make_adapter(cfg, table ? &*table : nullptr);
  const int sw = probe->state_width();
  const int an = probe->action_count();

  const bool gail = cfg.is_gail();
  if (gail) {
    if (kb == nullptr || kb->pairs.empty())
      throw std::invalid_argument("expert kb: empty knowledge base");
    if (static_cast<int>(kb->state_width()) != sw)
      throw std::invalid_argument("expert kb: state width mismatch with the environment");
    if (cfg.is_mockhost() && kb->meta.scenario != "mockhost")
      throw std::invalid_argument("expert kb: collected on '" + kb->meta.scenario +
                                  "' but training on mockhost");
    for (const auto& p : kb->pairs)
      if (p.action < 0 || p.action >= an)
        throw std::invalid_argument("expert kb: action index outside the action space");
  }

  PolicyChief chief(cfg);
  chief.actor = make_actor(sw, an, mix64(cfg.seed ^ hash64("actor-init")));
  chief.critic = make_critic(sw, mix64(cfg.seed ^ hash64("critic-init")));
  chief.opt_a = nn::make_adam(cfg.ppo.lr);
  chief.opt_c = nn::make_adam(cfg.ppo.lr);
  if (gail) {
    chief.disc = make_discriminator(sw, an, mix64(cfg.seed ^ hash64("disc-init")));
    chief.opt_d = nn::make_adam(cfg.gail.disc_lr);
    chief.kb = kb;
    chief.replay.emplace(cfg.gail.replay_capacity);
    chief.disc_rng = RandomStream(cfg.seed, "disc");
  }

  if (cfg.workers == 1) {
    policy_worker(chief, 0, table ? &*table : nullptr);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(cfg.workers);
    for (int w = 0; w < cfg.workers; ++w)
      threads.emplace_back(policy_worker, std::ref(chief), w, table ? &*table : nullptr);
    for (auto& t : threads) t.join();
  }

  TrainOutput out;
  chief.agg.finish();
  out.result.metrics = chief.agg.records();
  out.result.rounds_to_optimal = rounds_to_optimal(out.result.metrics, cfg.window);
  out.result.wall_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.actor = std::move(chief.actor);
  out.critic = std::move(chief.critic);
  if (chief.disc) out.disc = std::move(*chief.disc);
  return out;
}

}  // namespace

TrainOutput train(const TrainConfig& cfg, const ExpertKB* kb) {
  if (cfg.algo != "qlearn" && cfg.algo != "qlearn-gail" && cfg.algo != "a3c" &&
      cfg.algo != "a3c-gail" && cfg.algo != "dppo" && cfg.algo != "dppo-gail")
    throw std::invalid_argument("train: unknown algorithm '" + cfg.algo + "'");
  if (cfg.is_gail() && kb == nullptr)
    throw std::invalid_argument("train: " + cfg.algo + " requires an expert knowledge base");
  if (cfg.is_tabular()) return train_tabular_impl(cfg, kb);
  return train_policy_impl(cfg, kb);
}

RunResult train_qlearning(const TrainConfig& cfg) {
  TrainConfig c = cfg;
  c.algo = "qlearn";
  return train(c, nullptr).result;
}

RunResult train_qlearning_gail(const TrainConfig& cfg, const ExpertKB& kb) {
  TrainConfig c = cfg;
  c.algo = "qlearn-gail";
  if (c.kb_path.empty()) c.kb_path = "<in-memory>";
  return train(c, &kb).result;
}

RunResult train_policy(const TrainConfig& cfg, const ExpertKB* kb) {
  return train(cfg, kb).result;
}

Scenario resolve_scenario(const std::string& arg) {
  for (const auto& name : builtin_scenario_names())
    if (arg == name) return builtin_scenario(arg);
  return load_scenario_file(arg);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {
std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

void write_metrics_csv(const std::string& path, const std::vector<MetricRecord>& metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path);
  out << "window_end_episode,avg_reward,avg_steps,honeypot_prob,post_exploit_count,loss,"
         "wall_sec\n";
  for (const auto& m : metrics) {
    // wall_sec stays zero so identically-seeded runs byte-match; run timing
    // lives in the manifest.
    out << m.window_end_episode << "," << fmt6(m.avg_reward) << "," << fmt6(m.avg_steps) << ","
        << fmt6(m.honeypot_prob) << "," << m.post_exploit_count << "," << fmt6(m.loss)
        << ",0\n";
  }
}

std::vector<MetricRecord> read_metrics_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_metrics_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_metrics_csv: empty file " + path);
  std::vector<MetricRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 7) throw std::runtime_error("read_metrics_csv: malformed row in " + path);
    MetricRecord m;
    m.window_end_episode = std::stoi(cells[0]);
    m.avg_reward = std::stod(cells[1]);
    m.avg_steps = std::stod(cells[2]);
    m.honeypot_prob = std::stod(cells[3]);
    m.post_exploit_count = std::stol(cells[4]);
    m.loss = std::stod(cells[5]);
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

EvalSummary evaluate_qtable(const Scenario& scn, const QTable& q, int episodes, uint64_t seed,
                            bool force_success) {
  NetEnv env(force_success ? with_success_forced(scn) : scn);
  RandomStream seeds(seed, "eval");
  EvalSummary s;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seeds.next_u64());
    bool honeypot = false;
    while (!env.done()) {
      const auto out = env.step(q.greedy_action(make_state_key(env.observation())));
      honeypot = honeypot || out.honeypot_hit;
    }
    s.mean_reward += env.cumulative_reward();
    s.mean_steps += env.steps_taken();
    s.honeypot_rate += honeypot ? 1.0 : 0.0;
    s.success_rate += env.all_sensitive_rooted() ? 1.0 : 0.0;
  }
  s.mean_reward /= episodes;
  s.mean_steps /= episodes;
  s.honeypot_rate /= episodes;
  s.success_rate /= episodes;
  return s;
}

EvalSummary evaluate_actor(const Scenario& scn, const nn::DenseNet& actor, int episodes,
                           uint64_t seed, bool force_success) {
  NetEnv env(force_success ? with_success_forced(scn) : scn);
  RandomStream seeds(seed, "eval");
  EvalSummary s;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seeds.next_u64());
    bool honeypot = false;
    while (!env.done()) {
      const auto out = env.step(greedy_action(actor, env.observation()));
      honeypot = honeypot || out.honeypot_hit;
    }
    s.mean_reward += env.cumulative_reward();
    s.mean_steps += env.steps_taken();
    s.honeypot_rate += honeypot ? 1.0 : 0.0;
    s.success_rate += env.all_sensitive_rooted() ? 1.0 : 0.0;
  }
  s.mean_reward /= episodes;
  s.mean_steps /= episodes;
  s.honeypot_rate /= episodes;
  s.success_rate /= episodes;
  return s;
}

EvalSummary evaluate_actor_mockhost(const VulnTable& table, const nn::DenseNet& actor,
                                    int episodes, uint64_t seed) {
  MockHostEnv env(table);
  RandomStream seeds(seed, "eval");
  EvalSummary s;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seeds.next_u64());
    double total = 0.0;
    bool post = false;
    while (!env.done()) {
      std::span<const double> st(env.state().data(), env.state().size());
      const auto [r, d] = env.step(greedy_action(actor, st));
      total += r;
      post = post || r == 100.0;
    }
    s.mean_reward += total;
    s.mean_steps += env.steps_taken();
    s.success_rate += post ? 1.0 : 0.0;
  }
  s.mean_reward /= episodes;
  s.mean_steps /= episodes;
  s.success_rate /= episodes;
  return s;
}

std::vector<StateActionPair> greedy_occupancy(const Scenario& scn, const QTable& q,
                                              int episodes, uint64_t seed) {
  NetEnv env(scn);
  RandomStream seeds(seed, "occupancy");
  std::vector<StateActionPair> out;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seeds.next_u64());
    while (!env.done()) {
      const int a = q.greedy_action(make_state_key(env.observation()));
      out.push_back({env.observation(), a});
      env.step(a);
    }
  }
  return out;
}

}  // namespace gailpt
