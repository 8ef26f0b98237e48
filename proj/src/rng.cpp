#include "gailpt/rng.hpp"

#include <cassert>
#include <limits>

namespace gailpt {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// SplitMix64 finalizer.
uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// FNV-1a.
uint64_t hash64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RunStreams seed_everything(uint64_t seed) { return RunStreams{seed}; }

RandomStream run_stream(const RunStreams& rs, std::string_view name) {
  return RandomStream(rs.seed, name);
}

RandomStream::RandomStream(uint64_t seed, std::string_view name)
    : key_(mix64(seed + kGolden * mix64(hash64(name)))), counter_(0) {}

RandomStream RandomStream::child(std::string_view name, uint64_t index) const {
  RandomStream s;
  s.key_ = mix64(key_ + kGolden * (mix64(hash64(name)) ^ mix64(index + 1)));
  s.counter_ = 0;
  return s;
}

uint64_t RandomStream::next_u64() {
  return mix64(key_ + kGolden * ++counter_);
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int RandomStream::next_int(int n) {
  assert(n >= 1);
  const uint64_t un = static_cast<uint64_t>(n);
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % un;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

bool RandomStream::bernoulli(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return next_double() < p;
}

double RandomStream::next_range(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

}  // namespace gailpt
