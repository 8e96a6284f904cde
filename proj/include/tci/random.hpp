#pragma once

// Counter-based random numbers for reproducible Monte Carlo.
//
// The engine is Philox4x32-10 (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3", SC'11), bit-compatible with the Random123 reference
// implementation. A RandomStream is addressed by (seed, stream id); the
// sampler gives every point its own stream, so results do not depend on how
// work is split across threads.

#include <array>
#include <cstdint>

namespace tci {

using Seed = std::uint64_t;

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// One Philox4x32-10 block: 10 rounds of the bijection keyed by `key`.
Counter block(Counter ctr, Key key);

}  // namespace philox

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for a labelled sub-computation (repetition, chunk, body...).
Seed derive_seed(Seed parent, std::uint64_t label);

class RandomStream {
 public:
  RandomStream(Seed seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double exponential();

 private:
  philox::Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tci
