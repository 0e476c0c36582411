#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace bkm {

// FNV-1a 64-bit digest. Used for domain/config identities and file
// integrity checks; not cryptographic.
inline uint64_t fnv1a(std::string_view data, uint64_t seed = 0xcbf29ce484222325ull) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a_bytes(const void* data, size_t n, uint64_t seed = 0xcbf29ce484222325ull) {
  return fnv1a(std::string_view(static_cast<const char*>(data), n), seed);
}

inline std::string hex64(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bkm
