#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gailpt/gail.hpp"
#include "gailpt/rl_policy.hpp"
#include "test_util.hpp"

using namespace gailpt;
using gailpt_test::fd_max_rel_error;
using gailpt_test::flatten;

TEST_CASE("optimal plans for the built-in scenarios") {
  const OptimalPlan small = plan_optimal_actions(builtin_scenario("small"));
  CHECK(small.steps == 9);
  // Ties prefer the reliable exploits: the stepping stone is taken over http
  // (prob 0.9, cost 2), not ftp (prob 0.6, cost 1).
  CHECK(small.prob_product == doctest::Approx(0.9 * 0.9 * 0.9 * 0.9));
  CHECK(small.total_reward == doctest::Approx(200.0 - 14.0));

  const OptimalPlan honey = plan_optimal_actions(builtin_scenario("small_honeypot"));
  CHECK(honey.steps == 9);
  // The plan never touches the honeypot host (3,2), which is host index 4.
  const Scenario hs = builtin_scenario("small_honeypot");
  for (int a : honey.actions) CHECK(a / hs.action_count() != 4);
  CHECK(honey.total_reward > 0.0);

  const OptimalPlan large = plan_optimal_actions(builtin_scenario("large"));
  CHECK(large.steps == 15);
}

TEST_CASE("scripted collection traces one clean optimal path") {
  const ExpertKB kb = collect_expert_pairs_scripted(builtin_scenario("small"), 40, 7);
  REQUIRE(!kb.pairs.empty());
  CHECK(kb.pairs.size() % 9 == 0);  // whole episodes only
  std::set<std::pair<std::string, int>> unique;
  for (const auto& p : kb.pairs) unique.insert({state_key_hex(make_state_key(p.state)), p.action});
  CHECK(unique.size() == 9);  // the unique pairs trace a 9-step path
  CHECK(kb.meta.scenario == "small");
  CHECK(kb.meta.encoder_version == 1);
  CHECK(kb.meta.policy == "scripted-optimal-plan");
  for (const auto& p : kb.pairs) CHECK(p.state.size() == 207);
}

TEST_CASE("collection fails cleanly when the policy never succeeds") {
  auto factory = []() -> NetPolicy {
    return [](const NetEnv&) { return 0; };
  };
  CHECK_THROWS_WITH_AS(
      collect_expert_pairs(builtin_scenario("small"), factory, 3, 1, "noop"),
      doctest::Contains("no episode"), std::runtime_error);
}

TEST_CASE("mockhost collection stores only post payloads") {
  const VulnTable table = VulnTable::generate(21);
  const ExpertKB kb = collect_expert_pairs_mockhost_scripted(table, 50, 3);
  CHECK(kb.pairs.size() == 50);  // scripted expert lands every episode
  CHECK(kb.meta.scenario == "mockhost");
  CHECK(kb.meta.reward_threshold == 100.0);
  for (const auto& p : kb.pairs) {
    REQUIRE(p.state.size() == 5);
    // Invert the feature normalization to recover the profile key.
    const int service = static_cast<int>(std::lround(p.state[1] * 10));
    const int version = static_cast<int>(std::lround(p.state[2] * 5));
    const int protocol = static_cast<int>(std::lround(p.state[3] * 3));
    const auto& entry = table.lookup(service, version, protocol);
    CHECK(std::find(entry.post.begin(), entry.post.end(), p.action) != entry.post.end());
  }
}

TEST_CASE("expand_kb repeats cyclically and truncates exactly") {
  ExpertKB kb;
  kb.meta.scenario = "small";
  for (int i = 0; i < 9; ++i) kb.pairs.push_back({{static_cast<double>(i)}, i});

  const ExpertKB big = expand_kb(kb, 5000);
  CHECK(big.pairs.size() == 5000);
  std::set<int> actions;
  for (const auto& p : big.pairs) actions.insert(p.action);
  CHECK(actions.size() == 9);  // unique set unchanged
  CHECK(big.pairs[9].action == 0);
  CHECK(big.pairs[4999].action == 4999 % 9);

  const ExpertKB same = expand_kb(kb, kb.pairs.size());
  for (size_t i = 0; i < kb.pairs.size(); ++i) CHECK(same.pairs[i].action == kb.pairs[i].action);

  const ExpertKB one = expand_kb(kb, 1);
  REQUIRE(one.pairs.size() == 1);
  CHECK(one.pairs[0].action == 0);

  ExpertKB empty;
  CHECK_THROWS(expand_kb(empty, 5));
}

TEST_CASE("knowledge base files round trip byte-stably") {
  const VulnTable table = VulnTable::generate(5);
  const ExpertKB kb = collect_expert_pairs_mockhost_scripted(table, 10, 3);
  const std::string p1 = "/tmp/gailpt_kb_a.jsonl", p2 = "/tmp/gailpt_kb_b.jsonl";
  kb.save_jsonl(p1);
  const ExpertKB back = ExpertKB::load_jsonl(p1);
  CHECK(back.pairs.size() == kb.pairs.size());
  CHECK(back.meta.policy == kb.meta.policy);
  back.save_jsonl(p2);
  std::ifstream f1(p1), f2(p2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

namespace {

std::vector<StateActionPair> make_pairs(std::vector<double> base, int action, int n) {
  std::vector<StateActionPair> out;
  for (int i = 0; i < n; ++i) out.push_back({base, action});
  return out;
}

}  // namespace

TEST_CASE("untrained discriminator sits at one half") {
  auto d = make_discriminator(4, 3, 9);
  for (auto& l : d.layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
  const auto expert = make_pairs({1, 0, 0, 0}, 0, 4);
  const auto agent = make_pairs({0, 1, 0, 0}, 1, 4);
  const auto res = discriminator_loss(d, expert, agent, nullptr, 0.0);
  CHECK(res.mean_d_expert == doctest::Approx(0.5));
  CHECK(res.mean_d_agent == doctest::Approx(0.5));
  CHECK(res.loss == doctest::Approx(2.0 * std::log(0.5)));

  // Identical batches at D = 0.5: the two log terms cancel exactly.
  const auto sym = discriminator_loss(d, expert, expert, nullptr, 0.0);
  CHECK(sym.disc_grads.max_abs() < 1e-15);
}

TEST_CASE("discriminator gradcheck against finite differences") {
  auto d = make_discriminator(3, 2, 17);
  std::vector<StateActionPair> expert = {{{0.2, -0.4, 0.9}, 0}, {{0.5, 0.1, -0.3}, 1}};
  std::vector<StateActionPair> agent = {{{-0.7, 0.3, 0.2}, 1}, {{0.1, 0.8, -0.6}, 0}};
  const auto res = discriminator_loss(d, expert, agent, nullptr, 0.0);

  // The returned gradients descend -(mean_a log D + mean_e log(1-D)).
  auto f = [&]() {
    nn::ForwardScratch scratch;
    std::vector<double> input;
    double acc = 0.0;
    for (const auto& p : agent) {
      build_disc_input(p.state, p.action, 2, input);
      acc += std::log(discriminator_output(d, input, scratch)) / agent.size();
    }
    for (const auto& p : expert) {
      build_disc_input(p.state, p.action, 2, input);
      acc += std::log(1.0 - discriminator_output(d, input, scratch)) / expert.size();
    }
    return -acc;
  };
  CHECK(fd_max_rel_error(d, flatten(res.disc_grads), f) < 1e-4);
}

TEST_CASE("entropy term flows only to the actor and matches finite differences") {
  auto d = make_discriminator(3, 4, 23);
  auto actor = make_actor(3, 4, 29);
  std::vector<StateActionPair> expert = {{{0.2, -0.4, 0.9}, 0}};
  std::vector<StateActionPair> agent = {{{-0.7, 0.3, 0.2}, 2}, {{0.4, -0.1, 0.5}, 1}};
  const double lambda = 0.3;
  const auto with_actor = discriminator_loss(d, expert, agent, &actor, lambda);
  const auto without = discriminator_loss(d, expert, agent, nullptr, 0.0);
  REQUIRE(with_actor.has_actor_grads);
  CHECK(flatten(with_actor.disc_grads) == flatten(without.disc_grads));

  double H = 0.0;
  for (const auto& p : agent) {
    const auto lp = nn::log_softmax(nn::forward_logits(actor, p.state));
    H += -lp[p.action] / agent.size();
  }
  CHECK(with_actor.loss == doctest::Approx(without.loss - lambda * H));

  auto f = [&]() {
    double acc = 0.0;
    for (const auto& p : agent) {
      const auto lp = nn::log_softmax(nn::forward_logits(actor, p.state));
      acc += -lp[p.action] / agent.size();
    }
    return -lambda * acc;  // the -lambda*H contribution the actor descends
  };
  CHECK(fd_max_rel_error(actor, flatten(with_actor.actor_grads), f) < 1e-4);
}

TEST_CASE("one update separates expert from agent in the right direction") {
  auto d = make_discriminator(4, 2, 31);
  const auto expert = make_pairs({1.0, 1.0, 0.0, 0.0}, 0, 8);
  const auto agent = make_pairs({0.0, 0.0, 1.0, 1.0}, 1, 8);
  const auto before = discriminator_loss(d, expert, agent, nullptr, 0.0);
  auto opt = nn::make_adam(1e-2);
  nn::apply(d, before.disc_grads, opt);
  const auto after = discriminator_loss(d, expert, agent, nullptr, 0.0);
  CHECK(after.mean_d_expert < before.mean_d_expert);
  CHECK(after.mean_d_agent > before.mean_d_agent);
}

TEST_CASE("discriminator outputs stay strictly inside (0,1)") {
  nn::ForwardScratch scratch;
  std::vector<double> input;
  RandomStream rs(3, "bounds");
  for (uint64_t seed = 0; seed < 5; ++seed) {
    auto d = make_discriminator(6, 3, seed);
    // Saturate the head bias in both directions.
    for (double bias : {-80.0, 0.0, 80.0}) {
      d.layers.back().b[0] = bias;
      std::vector<double> state(6);
      for (auto& v : state) v = rs.next_range(-1, 1);
      build_disc_input(state, rs.next_int(3), 3, input);
      const double out = discriminator_output(d, input, scratch);
      CHECK(out > 0.0);
      CHECK(out < 1.0);
    }
  }
}

TEST_CASE("shaped rewards follow -log D with floor and cap") {
  GailConfig cfg;  // weight 1, cap 10
  auto d = make_discriminator(2, 2, 3);
  for (auto& l : d.layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
  // D = 0.5 everywhere.
  CHECK(shaped_reward(d, std::vector<double>{0.3, 0.4}, 0, 2, cfg) ==
        doctest::Approx(std::log(2.0)));

  // D -> 1: shaped reward approaches zero.
  d.layers.back().b[0] = 40.0;
  CHECK(shaped_reward(d, std::vector<double>{0.3, 0.4}, 0, 2, cfg) ==
        doctest::Approx(0.0).epsilon(1e-6));

  // D ~ 1e-9: the 1e-8 floor engages, then the cap.
  d.layers.back().b[0] = -std::log(1e9);
  GailConfig wide = cfg;
  wide.rd_cap = 100.0;
  CHECK(shaped_reward(d, std::vector<double>{0.3, 0.4}, 0, 2, wide) ==
        doctest::Approx(-std::log(1e-8)));
  CHECK(shaped_reward(d, std::vector<double>{0.3, 0.4}, 0, 2, cfg) == doctest::Approx(10.0));
}

TEST_CASE("shaped reward cache matches direct evaluation and invalidates") {
  GailConfig cfg;
  auto d = make_discriminator(3, 2, 41);
  ShapedRewardCache cache(&d, &cfg, 2);
  const std::vector<double> s = {0.1, -0.2, 0.7};
  const StateKey k = make_state_key(s);
  const double direct = shaped_reward(d, s, 1, 2, cfg);
  CHECK(cache.get(k, s, 1) == doctest::Approx(direct));
  CHECK(cache.get(k, s, 1) == doctest::Approx(direct));  // memoized path
  d.layers.back().b[0] += 1.0;
  cache.invalidate();
  CHECK(cache.get(k, s, 1) == doctest::Approx(shaped_reward(d, s, 1, 2, cfg)));
}

TEST_CASE("replay buffer keeps the most recent pairs") {
  ReplayBuffer rb(3);
  for (int i = 0; i < 5; ++i) rb.push({static_cast<double>(i)}, i);
  CHECK(rb.size() == 3);
  std::set<int> actions;
  for (size_t i = 0; i < rb.size(); ++i) actions.insert(rb.at(i).action);
  CHECK(actions == std::set<int>{2, 3, 4});
}

TEST_CASE("js divergence endpoints and fixed histograms") {
  const auto atom = [](double x, int a) { return StateActionPair{{x}, a}; };
  std::vector<StateActionPair> p, q;

  // Identical samples.
  for (int i = 0; i < 10; ++i) p.push_back(atom(1.0, 0));
  CHECK(js_divergence(p, p) == doctest::Approx(0.0));

  // Disjoint supports.
  for (int i = 0; i < 10; ++i) q.push_back(atom(2.0, 1));
  CHECK(js_divergence(p, q) == doctest::Approx(std::log(2.0)));

  // Two known 3-bin histograms: p=(.5,.3,.2), q=(.2,.3,.5).
  std::vector<StateActionPair> hp, hq;
  auto fill10 = [&atom](std::vector<StateActionPair>& v, int c0, int c1, int c2) {
    for (int i = 0; i < c0; ++i) v.push_back(atom(0.0, 0));
    for (int i = 0; i < c1; ++i) v.push_back(atom(1.0, 0));
    for (int i = 0; i < c2; ++i) v.push_back(atom(2.0, 0));
  };
  fill10(hp, 5, 3, 2);
  fill10(hq, 2, 3, 5);
  CHECK(js_divergence(hp, hq) == doctest::Approx(0.06641431438228168).epsilon(1e-9));

  CHECK_THROWS(js_divergence({}, p));
}
