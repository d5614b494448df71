#pragma once

#include <cmath>
#include <cstdint>

// Counter-based generator (splitmix64 finalizer applied to key + counter).
// Monte Carlo trials each get their own stream derived from (seed, stream),
// so trial i is reproducible bit for bit no matter how trials are scheduled.
namespace seba::rng {

inline constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed + golden) ^
             mix64(stream * golden + 0x6a09e667f3bcc909ull)) {}

  std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * golden); }

  // uniform on the open interval (0,1)
  double uniform() { return ((next_u64() >> 11) + 0.5) * 0x1p-53; }

  // exponential with the given rate; log1p keeps small gaps accurate
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace seba::rng
