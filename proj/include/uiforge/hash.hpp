#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace uiforge {

/// 128-bit digest, stored big-endian-as-printed.
struct Hash128 {
  std::array<std::uint8_t, 16> bytes{};

  std::string hex() const;
  friend bool operator==(const Hash128&, const Hash128&) = default;
  friend auto operator<=>(const Hash128&, const Hash128&) = default;
};

struct Hash128Hasher {
  std::size_t operator()(const Hash128& h) const noexcept;
};

/// SipHash-2-4 with 128-bit output under the library's fixed key.
Hash128 keyed_hash128(std::span<const std::uint8_t> data);

/// Hex SHA-256 of arbitrary content; used for manifests.
std::string sha256_hex(std::string_view content);

}  // namespace uiforge
