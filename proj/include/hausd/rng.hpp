#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hausd::rng {

// splitmix64; used to derive independent substreams from one config seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_name(std::string_view name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Named substream: adding a new suite never perturbs the streams of others.
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view name,
                                 std::uint64_t counter = 0) {
  std::uint64_t s = seed ^ hash_name(name);
  std::uint64_t mixed = splitmix64(s);
  s ^= counter * 0x9e3779b97f4a7c15ULL;
  mixed ^= splitmix64(s);
  return std::mt19937_64(mixed);
}

}  // namespace hausd::rng
