#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace opinionlearn {

using Rng = std::mt19937_64;

// Child stream keyed by a path of integers (e.g. {master, graph, horizon}).
// std::seed_seq is fully specified by the standard, so the mapping is stable
// across platforms and independent of scheduling.
inline Rng derive_rng(std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(path.size() * 2);
  for (std::uint64_t v : path) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// True with probability p; p <= 0 never fires, p >= 1 always does.
inline bool coin(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [0, k) by rejection on 64-bit draws.
inline std::size_t uniform_index(Rng& rng, std::size_t k) {
  const std::uint64_t range = static_cast<std::uint64_t>(k);
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % range);
}

}  // namespace opinionlearn
