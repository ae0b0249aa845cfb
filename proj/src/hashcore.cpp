#include "redact/hashcore.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

namespace redact {

namespace {

constexpr std::uint8_t kTagLink = 0x48;     // 'H'
constexpr std::uint8_t kTagContent = 0x47;  // 'G'

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
  });
}

struct Sha256Stream {
  crypto_hash_sha256_state st;

  explicit Sha256Stream(std::uint8_t tag) {
    ensure_sodium();
    crypto_hash_sha256_init(&st);
    crypto_hash_sha256_update(&st, &tag, 1);
  }

  void part(ByteView p) {
    std::uint8_t len[8];
    std::uint64_t n = p.size();
    for (int i = 0; i < 8; ++i) len[i] = std::uint8_t(n >> (8 * i));
    crypto_hash_sha256_update(&st, len, 8);
    if (!p.empty()) crypto_hash_sha256_update(&st, p.data(), p.size());
  }

  Digest finish() {
    Digest d;
    crypto_hash_sha256_final(&st, d.b.data());
    return d;
  }
};

template <typename Range>
Digest hash_tagged(std::uint8_t tag, const Range& parts) {
  Sha256Stream s(tag);
  for (const auto& p : parts) s.part(ByteView(p.data(), p.size()));
  return s.finish();
}

}  // namespace

Digest Digest::parse_hex(std::string_view h) {
  Bytes raw = from_hex(h);
  if (raw.size() != 32) fail(Errc::bad_hex, "digest must be 32 bytes");
  Digest d;
  std::memcpy(d.b.data(), raw.data(), 32);
  return d;
}

Target Target::max() {
  Target t;
  t.b.fill(0xff);
  return t;
}

Target Target::pow2(unsigned bit) {
  if (bit > 255) fail(Errc::config_invalid, "target exponent out of range");
  Target t;
  t.b[31 - bit / 8] = std::uint8_t(1u << (bit % 8));
  return t;
}

bool Target::is_zero() const {
  for (auto v : b)
    if (v) return false;
  return true;
}

Target Target::parse_hex(std::string_view h) {
  Bytes raw = from_hex(h);
  if (raw.size() != 32) fail(Errc::bad_hex, "target must be 32 bytes");
  Target t;
  std::memcpy(t.b.data(), raw.data(), 32);
  return t;
}

bool meets_target(const Digest& d, const Target& t) {
  return std::memcmp(d.b.data(), t.b.data(), 32) < 0;
}

Bytes encode_parts(std::span<const Bytes> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += 8 + p.size();
  Bytes out;
  out.reserve(total);
  for (const auto& p : parts) {
    put_u64_le(out, p.size());
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

Digest hash_h(std::initializer_list<ByteView> parts) {
  return hash_tagged(kTagLink, parts);
}

Digest hash_g(std::initializer_list<ByteView> parts) {
  return hash_tagged(kTagContent, parts);
}

Digest hash_h(std::span<const Bytes> parts) {
  return hash_tagged(kTagLink, parts);
}

Digest hash_g(std::span<const Bytes> parts) {
  return hash_tagged(kTagContent, parts);
}

}  // namespace redact
