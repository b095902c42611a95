#pragma once

#include <cstdint>
#include <string>

namespace ige {

/// 64-bit FNV-1a of a byte string.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// FNV-1a rendered as lowercase hex, used as a content fingerprint.
inline std::string fnv1a_hex(const std::string& text) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(text);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace ige
