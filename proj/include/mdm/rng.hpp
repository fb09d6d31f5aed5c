#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mdm {

// Identifier written to manifests; bump the suffix if the sampling scheme
// changes in any way that alters outputs.
inline constexpr std::string_view kRngName = "mt19937_64/fnv1a64-splitmix64/fisher-yates/v1";

std::uint64_t Fnv1a64(std::string_view bytes);
std::uint64_t SplitMix64(std::uint64_t x);

// Generator for one word, independent of how words are distributed over
// worker threads.
std::mt19937_64 WordRng(std::uint64_t seed, std::string_view word);

// Uniform integer in [0, bound) by rejection; bound must be positive.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound);

// Uniformly chooses `count` distinct positions of [0, size) via a partial
// Fisher-Yates shuffle. The result for count c is a prefix of the result for
// any larger count drawn from an identically seeded generator.
std::vector<std::size_t> SampleWithoutReplacement(std::mt19937_64& rng, std::size_t size,
                                                  std::size_t count);

}  // namespace mdm
