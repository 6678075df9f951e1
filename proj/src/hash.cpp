#include "uiforge/hash.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace uiforge {

namespace {

// Fixed so that hashes are stable across runs and machines.
constexpr std::array<std::uint8_t, crypto_shorthash_siphashx24_KEYBYTES> kKey = {
    0x75, 0x69, 0x66, 0x6f, 0x72, 0x67, 0x65, 0x2d, 0x6d, 0x6f, 0x74, 0x69, 0x66, 0x2d, 0x76, 0x31};

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium failed to initialise");
}

constexpr char kHex[] = "0123456789abcdef";

}  // namespace

std::string Hash128::hex() const {
  std::string out;
  out.reserve(32);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

std::size_t Hash128Hasher::operator()(const Hash128& h) const noexcept {
  std::size_t v = 0;
  std::memcpy(&v, h.bytes.data(), sizeof v);
  return v;
}

Hash128 keyed_hash128(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Hash128 h;
  crypto_shorthash_siphashx24(h.bytes.data(), data.data(), data.size(), kKey.data());
  return h;
}

std::string sha256_hex(std::string_view content) {
  ensure_sodium();
  std::array<unsigned char, crypto_hash_sha256_BYTES> out{};
  crypto_hash_sha256(out.data(), reinterpret_cast<const unsigned char*>(content.data()),
                     content.size());
  std::string hex;
  hex.reserve(out.size() * 2);
  for (auto b : out) {
    hex.push_back(kHex[b >> 4]);
    hex.push_back(kHex[b & 0xf]);
  }
  return hex;
}

}  // namespace uiforge
