#include <cmath>
#include <set>

#include "doctest.h"
#include "gailpt/env_mockhost.hpp"
#include "gailpt/rng.hpp"

using namespace gailpt;

TEST_CASE("profile sampling is deterministic in the seed") {
  const HostProfile a = sample_profile(123);
  const HostProfile b = sample_profile(123);
  CHECK(a.encoded == b.encoded);
  CHECK(a.service == b.service);
  CHECK(a.os == b.os);
}

TEST_CASE("a thousand resets cover all eleven services") {
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(sample_profile(i).service);
  CHECK(seen.size() == MockVocab::services().size());
}

TEST_CASE("profile features are normalized index over size minus one") {
  HostProfile p;
  p.os = 7;          // of 9
  p.service = 10;    // of 11
  p.version = 0;     // of 6
  p.protocol = 3;    // of 4
  p.module_type = 0; // of 2
  const auto e = encode_profile(p);
  CHECK(e[0] == doctest::Approx(0.875));
  CHECK(e[1] == doctest::Approx(1.0));
  CHECK(e[2] == doctest::Approx(0.0));
  CHECK(e[3] == doctest::Approx(1.0));
  CHECK(e[4] == doctest::Approx(0.0));  // module_type index 0 of a 2-value vocabulary
  for (double v : e) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("vulnerability table is seeded, disjoint and in range") {
  const VulnTable t = VulnTable::generate(7);
  const VulnTable t2 = VulnTable::generate(7);
  CHECK(t.to_json() == t2.to_json());
  CHECK(t.entry_count() == 11u * 6u * 4u);
  for (int svc = 0; svc < 11; ++svc)
    for (int ver = 0; ver < 6; ++ver)
      for (int proto = 0; proto < 4; ++proto) {
        const auto& e = t.lookup(svc, ver, proto);
        CHECK(e.post.size() == 2);
        CHECK(e.session.size() == 5);
        for (int p : e.post) {
          CHECK(p >= 0);
          CHECK(p < 593);
          for (int s : e.session) CHECK(p != s);
        }
      }
}

TEST_CASE("vulnerability table JSON round trip") {
  const VulnTable t = VulnTable::generate(99);
  const VulnTable back = VulnTable::from_json(t.to_json());
  CHECK(back.to_json() == t.to_json());
}

TEST_CASE("payload outcomes: post, session, miss") {
  const VulnTable t = VulnTable::generate(5);
  MockHostEnv env(t);
  env.reset(11);
  const auto& p = env.profile();
  const auto& entry = t.lookup(p.service, p.version, p.protocol);

  // A session payload rewards 1 and keeps the episode alive.
  const auto [r1, d1] = env.step(entry.session.front());
  CHECK(r1 == 1.0);
  CHECK_FALSE(d1);

  // A miss costs 1.
  int miss = 0;
  while (std::find(entry.post.begin(), entry.post.end(), miss) != entry.post.end() ||
         std::find(entry.session.begin(), entry.session.end(), miss) != entry.session.end())
    ++miss;
  const auto [r2, d2] = env.step(miss);
  CHECK(r2 == -1.0);
  CHECK_FALSE(d2);

  // A post payload rewards 100 and terminates.
  const auto [r3, d3] = env.step(entry.post.front());
  CHECK(r3 == 100.0);
  CHECK(d3);
  CHECK_THROWS(env.step(0));
}

TEST_CASE("episodes cap at thirty steps") {
  const VulnTable t = VulnTable::generate(5);
  MockHostEnv env(t);
  env.reset(13);
  const auto& p = env.profile();
  const auto& entry = t.lookup(p.service, p.version, p.protocol);
  int miss = 0;
  while (std::find(entry.post.begin(), entry.post.end(), miss) != entry.post.end() ||
         std::find(entry.session.begin(), entry.session.end(), miss) != entry.session.end())
    ++miss;
  for (int i = 0; i < 29; ++i) {
    const auto [r, d] = env.step(miss);
    CHECK_FALSE(d);
  }
  const auto [r, d] = env.step(miss);
  CHECK(d);
  CHECK(env.steps_taken() == 30);
}

TEST_CASE("rewards only take the three defined values") {
  const VulnTable t = VulnTable::generate(31);
  MockHostEnv env(t);
  RandomStream rng(3, "mock-random");
  for (int ep = 0; ep < 50; ++ep) {
    env.reset(1000 + ep);
    while (!env.done()) {
      const auto [r, d] = env.step(rng.next_int(MockHostEnv::kPayloadCount));
      const bool ok = r == 100.0 || r == 1.0 || r == -1.0;
      CHECK(ok);
    }
    CHECK(env.steps_taken() <= 30);
  }
}

TEST_CASE("uniform play matches the analytic expected reward within three standard errors") {
  const VulnTable t = VulnTable::generate(17);
  MockHostEnv env(t);
  env.reset(77);
  const auto& p = env.profile();
  const auto& entry = t.lookup(p.service, p.version, p.protocol);
  const double n_post = static_cast<double>(entry.post.size());
  const double n_sess = static_cast<double>(entry.session.size());
  const double n = MockHostEnv::kPayloadCount;
  const double mean = (n_post * 100.0 + n_sess * 1.0 + (n - n_post - n_sess) * -1.0) / n;
  const double second_moment =
      (n_post * 100.0 * 100.0 + n_sess * 1.0 + (n - n_post - n_sess) * 1.0) / n;
  const double var = second_moment - mean * mean;

  // Single-step draws against the fixed profile.
  RandomStream rng(9, "mock-mc");
  const int kTrials = 40000;
  double acc = 0.0;
  for (int i = 0; i < kTrials; ++i) {
    env.reset(77);  // same profile every time
    const auto [r, d] = env.step(rng.next_int(MockHostEnv::kPayloadCount));
    acc += r;
  }
  const double sample_mean = acc / kTrials;
  const double se = std::sqrt(var / kTrials);
  CHECK(std::fabs(sample_mean - mean) < 3.0 * se);
}

TEST_CASE("out-of-range payloads are rejected") {
  MockHostEnv env(VulnTable::generate(1));
  env.reset(5);
  CHECK_THROWS(env.step(-1));
  CHECK_THROWS(env.step(593));
}
