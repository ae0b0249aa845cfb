#pragma once
// Rewrite candidates, the consensus vote policy, and the candidate pool.
//
// A candidate proposes replacement content for one mined block: it copies the
// target's link, counter, and old-state list and swaps the data entries
// (votes in the payload are untouchable). Its identity — the vote token other
// miners embed in their own payloads to endorse it — is the digest of its
// content, H(ctr, G(s, x*), y*).
//
// Verdict of the (k, ell, rho) policy for a token on a chain:
//   voting  no block carries the token yet, or the window of ell blocks
//           starting at the first vote-bearing height is not yet complete
//           and k blocks deep
//   accept  the window is complete and stable and at least ceil(rho*ell) of
//           its blocks carry the token (several votes in one block count
//           once)
//   reject  the window closed stable but the tally fell short

#include <cstddef>
#include <map>
#include <vector>

#include "redact/chain.hpp"

namespace redact {

struct CandidateBlock {
  std::size_t target_height = 0;  // 1-based height of the block to rewrite
  Block block;

  bool operator==(const CandidateBlock&) const = default;
};

inline Digest candidate_digest(const CandidateBlock& cand) {
  return block_digest(cand.block);
}

// ── proposing ───────────────────────────────────────────────────────────────

// Builds a candidate for height j of c. Rules enforced here:
//   j inside the chain            -> Error(index_out_of_range)
//   j != 1                        -> Error(genesis_immutable)
//   j stable, j <= length - k     -> Error(target_not_stable)
//   new payload != old payload    -> Error(noop_edit)
//   votes list byte-identical     -> Error(votes_tampered)
// Mode single/ledger reuses the old-state list unchanged; mode ext appends
// the digest of the payload being replaced (first rewrite appends nothing,
// the digest is already y[0]).
CandidateBlock propose_edit(const Chain& c, std::size_t j,
                            BlockPayload new_payload, std::uint32_t k,
                            Mode mode);

// ── candidate validation ────────────────────────────────────────────────────

// Single-rewrite rules: the candidate must prove work (either disjunct), sit
// at 2 <= j <= length-1, carry the link its predecessor implies, and be the
// block its successor's stored link was built from.
bool validate_cand(const Chain& c, const CandidateBlock& cand);

// Repeated-rewrite rules: same link checks anchored at y[0], plus every
// historical rewrite recorded in the old-state list must have reached an
// accepted vote tally on c: segment i >= 2 was installed by a rewrite whose
// token is H(ctr, y[i], y[1]||…||y[i-1]) (1-based segments).
bool validate_cand_ext(const Chain& c, const CandidateBlock& cand,
                       const PolicyParams& params);

// Digest-aware forms with identical behavior, for callers that already hold
// the candidate's content digest G(s*, x*). The chain validators compute that
// digest for every block during the link walk; recomputing it here would
// re-hash the full payload of each rewritten block.
bool validate_cand(const Chain& c, std::size_t target_height, const Block& star,
                   const Digest& g_star);
bool validate_cand_ext(const Chain& c, std::size_t target_height,
                       const Block& star, const Digest& g_star,
                       const PolicyParams& params);

// ── policy evaluation ───────────────────────────────────────────────────────

struct PolicyReport {
  Verdict verdict = Verdict::voting;
  std::size_t first_vote_height = 0;  // 0 = no vote seen
  std::size_t window_close = 0;       // first_vote_height + ell - 1
  std::uint32_t votes_in_window = 0;
  std::uint32_t votes_needed = 0;
};

PolicyReport evaluate_vote_token(const Chain& c, const Digest& token,
                                 const PolicyParams& params);

Verdict evaluate_policy(const Chain& c, const CandidateBlock& cand,
                        const PolicyParams& params);
PolicyReport evaluate_policy_report(const Chain& c, const CandidateBlock& cand,
                                    const PolicyParams& params);

// ── applying ────────────────────────────────────────────────────────────────

// Returns c with the target block replaced by the candidate.
//   candidate fails validation (mode-appropriate) -> Error(candidate_invalid)
//   policy verdict != accept                      -> Error(policy_not_accepted)
Chain apply_redaction(const Chain& c, const CandidateBlock& cand,
                      const PolicyParams& params, Mode mode);

// ── candidate pool ──────────────────────────────────────────────────────────

// Keyed by vote token; std::map keeps iteration deterministic.
using CandidatePool = std::map<Digest, CandidateBlock>;

// Admits a candidate iff it validates against c under the given mode.
// Re-inserting an existing token refreshes the stored candidate.
bool pool_upsert(CandidatePool& pool, const Chain& c,
                 const CandidateBlock& cand, Mode mode,
                 const PolicyParams& params);

struct SweepResult {
  // Policy-accepted candidates, ordered by (target height, window close,
  // token); accepted and rejected entries leave the pool, voting ones stay.
  std::vector<CandidateBlock> accepted;
  std::size_t rejected = 0;
};

SweepResult pool_sweep(CandidatePool& pool, const Chain& c,
                       const PolicyParams& params);

}  // namespace redact
