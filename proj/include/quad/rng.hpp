#pragma once
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace quad {

using Rng = std::mt19937_64;

// Independent stream for (seed, tags...). Streams with different tag paths do
// not share state.
inline Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * tags.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  return derive_rng(seed, tags)();
}

// Stream tags.
namespace stream {
inline constexpr std::uint64_t kQuality = 1;
inline constexpr std::uint64_t kSplit = 2;
inline constexpr std::uint64_t kTiebreak = 3;
inline constexpr std::uint64_t kGenerate = 4;
inline constexpr std::uint64_t kBenchmark = 5;
inline constexpr std::uint64_t kDeviation = 6;
inline constexpr std::uint64_t kCompletion = 7;
inline constexpr std::uint64_t kTrial = 8;
}  // namespace stream

}  // namespace quad
