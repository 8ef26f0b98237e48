#ifndef GAILPT_RNG_HPP
#define GAILPT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace gailpt {

uint64_t hash64(std::string_view s);
uint64_t mix64(uint64_t x);

class RandomStream;

/// The run-scoped named streams. Streams are mutually independent; a new
/// consumer gets its own name instead of sharing draws.
struct RunStreams {
  uint64_t seed = 0;
};
RunStreams seed_everything(uint64_t seed);
RandomStream run_stream(const RunStreams& rs, std::string_view name);

/// Counter-based random stream. A stream is identified by (seed, name) and
/// every draw is a pure function of that key and a per-stream counter, so
/// adding new named streams never perturbs the output of existing ones.
class RandomStream {
 public:
  RandomStream() = default;
  RandomStream(uint64_t seed, std::string_view name);

  uint64_t next_u64();
  double next_double();              // uniform in [0, 1)
  int next_int(int n);               // uniform in [0, n), n >= 1, unbiased
  bool bernoulli(double p);
  double next_range(double lo, double hi);

  /// Derive a child stream; deterministic in (parent key, name, index).
  RandomStream child(std::string_view name, uint64_t index = 0) const;

  uint64_t key() const { return key_; }

 private:
  uint64_t key_ = 0;
  uint64_t counter_ = 0;
};

}  // namespace gailpt

#endif
