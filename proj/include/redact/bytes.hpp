#pragma once
// Byte-string helpers shared across the library: hex codecs, little-endian
// scalar packing, error codes, and a deterministic RNG used everywhere a
// seeded choice is needed (std:: distributions are not portable bit-for-bit).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace redact {

using Bytes = std::vector<std::uint8_t>;

// ── error reporting ─────────────────────────────────────────────────────────

enum class Errc {
  empty_chain,
  mode_violation,
  policy_not_accepted,
  candidate_invalid,
  index_out_of_range,
  genesis_immutable,
  target_not_stable,
  votes_tampered,
  noop_edit,
  fee_too_low,
  candidate_malformed,
  tx_not_found,
  not_a_redacted_slot,
  already_spent,
  unknown_output,
  data_output_unspendable,
  empty_leaves,
  bad_hex,
  bad_spec,
  dump_corrupt,
  config_invalid,
  unknown_scenario,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

// ── little-endian scalar packing ────────────────────────────────────────────

inline void put_u32_le(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

inline void put_u64_le(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

inline std::uint32_t read_u32_le(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline std::uint64_t read_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

// ── hex ─────────────────────────────────────────────────────────────────────

std::string to_hex(const std::uint8_t* data, std::size_t n);
std::string to_hex(const Bytes& b);
Bytes from_hex(std::string_view hex);  // throws Error(bad_hex)

// ── deterministic RNG ───────────────────────────────────────────────────────

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable sub-seed derivation: same (master, a, b) always yields the same seed
// on every platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t m = splitmix64(s);
  s = m ^ (a * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  m = splitmix64(s);
  s = m ^ (b * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // uniform in [0, n) without modulo bias worth worrying about at our scale
  std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }

  double next_unit() {  // uniform in [0,1)
    return double(next() >> 11) * (1.0 / 9007199254740992.0);
  }

  Bytes bytes(std::size_t n) {
    Bytes out;
    out.reserve(n);
    while (out.size() < n) {
      std::uint64_t v = next();
      for (int i = 0; i < 8 && out.size() < n; ++i)
        out.push_back(std::uint8_t(v >> (8 * i)));
    }
    return out;
  }

 private:
  std::uint64_t state_;
};

}  // namespace redact
