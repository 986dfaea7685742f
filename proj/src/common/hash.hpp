#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace archbench {

// 64-bit FNV-1a over bytes followed by a splitmix finalizer. Stable across
// platforms; used for run ids, derived seeds and i.i.d. synthetic values.
inline std::uint64_t hash_bytes(std::string_view bytes,
                                std::uint64_t seed = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char *digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace archbench
