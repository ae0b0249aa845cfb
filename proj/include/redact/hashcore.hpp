#pragma once
// Hashing layer. Two domain-separated SHA-256 instances drive the whole
// protocol:
//
//   link digests    H(parts...) = SHA-256( 0x48 || enc(parts) )
//   content digests G(parts...) = SHA-256( 0x47 || enc(parts) )
//
// where enc() prefixes every part with its u64-LE byte length and
// concatenates. The length prefixes make the encoding injective: distinct
// part lists never produce the same image, so H and G collisions reduce to
// SHA-256 collisions.
//
// Difficulty targets are 256-bit big-endian thresholds; a digest satisfies
// the proof of work when, read as a big-endian integer, it is strictly below
// the target.

#include <array>
#include <span>

#include "redact/bytes.hpp"

namespace redact {

using ByteView = std::span<const std::uint8_t>;

struct Digest {
  std::array<std::uint8_t, 32> b{};

  auto operator<=>(const Digest&) const = default;

  ByteView view() const { return ByteView(b.data(), b.size()); }
  std::string hex() const { return to_hex(b.data(), b.size()); }
  static Digest parse_hex(std::string_view h);
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    return std::size_t(read_u64_le(d.b.data()));
  }
};

struct Target {
  std::array<std::uint8_t, 32> b{};  // big-endian threshold

  auto operator<=>(const Target&) const = default;

  static Target max();               // 2^256 - 1 (every digest qualifies)
  static Target pow2(unsigned bit);  // 2^bit, bit in [0, 255]
  bool is_zero() const;
  std::string hex() const { return to_hex(b.data(), b.size()); }
  static Target parse_hex(std::string_view h);
};

// Strict big-endian comparison: digest < target.
bool meets_target(const Digest& d, const Target& t);

// Canonical multipart encoding (exposed for tests and file formats).
Bytes encode_parts(std::span<const Bytes> parts);

// Streaming tagged digests; no intermediate concatenation buffers.
Digest hash_h(std::initializer_list<ByteView> parts);
Digest hash_g(std::initializer_list<ByteView> parts);
Digest hash_h(std::span<const Bytes> parts);
Digest hash_g(std::span<const Bytes> parts);

// 8-byte little-endian image of a mining counter, for feeding counters into
// the tagged hashes.
inline std::array<std::uint8_t, 8> ctr_image(std::uint64_t ctr) {
  std::array<std::uint8_t, 8> a{};
  for (int i = 0; i < 8; ++i) a[std::size_t(i)] = std::uint8_t(ctr >> (8 * i));
  return a;
}

}  // namespace redact
