#include "mdm/rng.hpp"

#include <numeric>
#include <utility>

namespace mdm {

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 WordRng(std::uint64_t seed, std::string_view word) {
  return std::mt19937_64(SplitMix64(seed ^ Fnv1a64(word)));
}

std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  // Largest multiple of bound representable; draws above it are rejected.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % bound;
}

std::vector<std::size_t> SampleWithoutReplacement(std::mt19937_64& rng, std::size_t size,
                                                  std::size_t count) {
  if (count > size) count = size;
  std::vector<std::size_t> pool(size);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(UniformBelow(rng, size - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace mdm
