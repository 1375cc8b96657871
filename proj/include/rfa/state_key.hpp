#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace rfa {

/// 128-bit digest of a canonical state encoding. Opaque, fixed width, and
/// byte-stable across runs and platforms; lexicographic byte order is the
/// serialization order everywhere.
struct StateKey {
  std::array<std::uint8_t, 16> bytes{};

  auto operator<=>(const StateKey&) const = default;

  std::string hex() const;
  static StateKey from_hex(std::string_view s);  // throws bad-file on malformed input
};

/// MurmurHash3 x64 128-bit (public domain) over `data`, seed 0.
StateKey digest128(std::span<const std::uint8_t> data);

}  // namespace rfa

template <>
struct std::hash<rfa::StateKey> {
  std::size_t operator()(const rfa::StateKey& k) const noexcept {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::memcpy(&a, k.bytes.data(), 8);
    std::memcpy(&b, k.bytes.data() + 8, 8);
    return static_cast<std::size_t>(a ^ (b * 0x9e3779b97f4a7c15ull));
  }
};
