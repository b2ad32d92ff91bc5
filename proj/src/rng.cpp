#include "cckp/rng.hpp"

namespace cckp {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Largest multiple of bound representable, minus one.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % bound;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(master ^ splitmix64(a)) ^ b);
}

}  // namespace cckp
