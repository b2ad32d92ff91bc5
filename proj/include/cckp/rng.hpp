#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cckp {

// Seeded generator with a fully specified output sequence: std::mt19937_64
// for raw bits, and explicit conversions below instead of the
// implementation-defined standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);

  // Fisher-Yates, last position first.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto k = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[k]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based seed derivation:
// splitmix64(splitmix64(master ^ splitmix64(a)) ^ b).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace cckp
