#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fuzzyid {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable sub-seed for a labeled stream, optionally indexed (generation,
/// individual, ...). Independent of platform and call order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(splitmix64(master ^ h) ^ a) ^ b);
}

inline Rng make_rng(std::uint64_t master, std::string_view label, std::uint64_t a = 0,
                    std::uint64_t b = 0) {
  return Rng(derive_seed(master, label, a, b));
}

}  // namespace fuzzyid
