#pragma once
// Editable proof-of-work blocks and chains.
//
// A block is the quadruple ⟨s, x, ctr, y⟩:
//   s   link digest binding the block to its predecessor's content
//   x   payload: opaque data entries plus endorsement vote digests
//   ctr mining counter
//   y   old-state list: digests of every payload the block has carried,
//       oldest first; y[0] anchors the proof of work forever
//
// At creation y = [G(s, x)], so the block digest H(ctr, G(s, x), y) both
// seals the proof of work and serves as the link stored by the successor.
// An approved rewrite replaces x while keeping s, ctr, and y, which is why a
// rewritten block still proves its original work (H(ctr, y[0], y[0]) < D)
// and why its successor's stored link equals H(ctr, y[0], y[0]) rather than
// the recomputed content digest. Chain validation walks head to genesis,
// accepts either link form, and for the rewritten form additionally demands
// an approved candidate (see redaction.hpp).
//
// Genesis is proof-of-work exempt: all-zero link, counter 0, y = [G(s, x)].
// Validators check that shape structurally and, when given a pinned genesis
// digest, the exact identity.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redact/hashcore.hpp"
#include "redact/policy.hpp"

namespace redact {

struct BlockPayload {
  std::vector<Bytes> entries;
  std::vector<Digest> votes;

  bool operator==(const BlockPayload&) const = default;

  // Canonical image: entry count, length-prefixed entries, vote count, raw
  // vote digests. Injective, so equal images mean equal payloads.
  Bytes image() const;
  bool contains_vote(const Digest& token) const;
};

struct OldState {
  std::vector<Digest> segments;  // never empty in a well-formed block

  bool operator==(const OldState&) const = default;

  Bytes image() const;  // raw concatenation of all segments
  const Digest& original() const { return segments.front(); }
};

struct Block {
  Digest s;
  BlockPayload x;
  std::uint64_t ctr = 0;
  OldState y;

  bool operator==(const Block&) const = default;
};

struct Chain {
  std::vector<Block> blocks;  // height h lives at blocks[h-1]
  Target difficulty;          // constant for the whole run

  std::size_t length() const { return blocks.size(); }
  const Block& at_height(std::size_t h) const;  // 1-based, throws
  Block& at_height(std::size_t h);
};

struct GenesisConfig {
  BlockPayload payload;
};

// ── digests ─────────────────────────────────────────────────────────────────

// G(s, x): digest of the payload a block currently carries.
Digest content_digest(const Digest& s, const BlockPayload& x);

// H(ctr, g, y): the proof-of-work / link image over explicit pieces.
Digest link_digest(std::uint64_t ctr, const Digest& g, const OldState& y);

// H(ctr, G(s,x), y): identity of the block's current content. Doubles as the
// successor link for fresh blocks and as the vote token of a candidate.
Digest block_digest(const Block& b);

// H(ctr, y[0], y[0]): the link a successor stored if it was mined before any
// rewrite of this block; equals block_digest while the block is unredacted.
Digest old_state_link(const Block& b);

bool is_redacted(const Block& b);  // current payload digest differs from y[0]

// ── construction ────────────────────────────────────────────────────────────

Block make_genesis(const GenesisConfig& g);
Chain make_chain(const GenesisConfig& g, const Target& difficulty);

struct MineResult {
  Block block;
  std::uint64_t attempts = 0;  // counter values tried, including the winner
};

// Bounded deterministic mining: counter candidates start at a seed-derived
// value and increment; fails (nullopt) after max_attempts misses.
std::optional<MineResult> mine_block(const Chain& parent, BlockPayload payload,
                                     std::uint64_t max_attempts,
                                     std::uint64_t seed);

// ── validation ──────────────────────────────────────────────────────────────

struct ValidationIssue {
  std::size_t height = 0;
  std::string reason;
};

// Single-rewrite rules: y must stay a single digest (multi-segment input is a
// caller error and throws Error(mode_violation)). A block passes on either
// proof-of-work disjunct: current content or original content.
bool validate_block(const Block& b, const Target& difficulty);

// Repeated-rewrite rules: any number of segments, original work anchored at
// y[0].
bool validate_block_ext(const Block& b, const Target& difficulty);

// Serial reference walks, head to genesis, exactly one verdict per chain.
// `pinned_genesis`, when given, must equal block_digest(genesis).
bool validate_chain(const Chain& c, const PolicyParams& params,
                    const Digest* pinned_genesis = nullptr,
                    ValidationIssue* issue = nullptr);
bool validate_chain_ext(const Chain& c, const PolicyParams& params,
                        const Digest* pinned_genesis = nullptr,
                        ValidationIssue* issue = nullptr);

// Baseline that ignores the rewrite machinery entirely: every link must be
// the fresh-content form and every block must prove work on its current
// payload. Agrees with the validators above on rewrite-free chains.
bool validate_chain_immutable(const Chain& c,
                              const Digest* pinned_genesis = nullptr,
                              ValidationIssue* issue = nullptr);

// OpenMP kernels; bit-identical verdicts to the serial walks, checked by the
// test suite on redacted, tampered, and honest chains alike.
bool validate_chain_parallel(const Chain& c, const PolicyParams& params,
                             const Digest* pinned_genesis = nullptr);
bool validate_chain_ext_parallel(const Chain& c, const PolicyParams& params,
                                 const Digest* pinned_genesis = nullptr);
bool validate_chain_immutable_parallel(const Chain& c,
                                       const Digest* pinned_genesis = nullptr);

// Canonical byte image of a whole block / chain (dump hashing, wire digests).
Bytes block_image(const Block& b);
Bytes chain_image(const Chain& c);

}  // namespace redact
