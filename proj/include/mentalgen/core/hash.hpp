#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace mentalgen {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

/// Standard base64 with padding.
std::string base64_encode(std::string_view bytes);
/// Throws ParseError on invalid input.
std::string base64_decode(std::string_view text);

/// 64-bit FNV-1a; cheap stable hash for parameter derivation.
constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mentalgen
