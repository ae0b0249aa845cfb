#pragma once
// Per-party round state machine driven by the simulator.
//
// One round, in order:
//   1. chain update    adopt the longest valid delivered chain if it is
//                      strictly longer than the current one (ties keep the
//                      incumbent, first-seen)
//   2. candidate pool  rebuild every delivered rewrite proposal against the
//                      local chain, verify its declared digest, admit it to
//                      the pool; undecodable or invalid proposals are dropped
//                      (messages that fail only because the local chain lags
//                      are retried for a bounded number of rounds)
//   3. chain editing   sweep the pool and apply every policy-accepted
//                      candidate
//   4. block creation  assemble a payload from environment entries plus one
//                      vote per endorsed pooled candidate, mine with the
//                      round budget, extend and broadcast only if the
//                      extended chain validates
//   5. edit proposals  turn externally requested rewrites into candidates,
//                      pool them, broadcast them
//
// Honest endorsement scrutinizes candidates: a vote is cast only for a
// candidate that validates on the local chain right now and strictly removes
// data (entry count preserved, every entry byte-wise truncated/zeroed or
// unchanged, at least one changed). In ledger mode the changed entries must
// additionally decode as transactions forming a destructive rewrite pair
// whose announcement is already buried k blocks deep in the local chain;
// unannounced proposals are treated as spam and never pooled.

#include <cstdint>
#include <deque>
#include <optional>
#include <variant>
#include <vector>

#include "redact/chain.hpp"
#include "redact/redaction.hpp"

namespace redact::node {

// ── wire messages ───────────────────────────────────────────────────────────

struct ChainMsg {
  Chain chain;

  bool operator==(const ChainMsg&) const = default;
};

// A rewrite proposal names its target height and the replacement data
// entries; votes are untouchable, so receivers rebuild the full candidate
// from their own copy of the target block and check the declared digest.
struct CandidateMsg {
  std::size_t target_height = 0;
  std::vector<Bytes> entries;
  Digest declared_digest;

  bool operator==(const CandidateMsg&) const = default;
};

using Message = std::variant<ChainMsg, CandidateMsg>;

// ── node state ──────────────────────────────────────────────────────────────

enum class Role { honest, corrupted };

enum class EndorsementRule {
  destructive_only,  // honest default: full scrutiny, vote only for erasures
  endorse_none,      // abstain from every vote
  endorse_all        // rubber-stamp anything that validates (test hook)
};

struct PendingCandidate {
  CandidateMsg msg;
  std::size_t first_seen_round = 0;
};

// An environment request to rewrite one block's data entries.
struct EditRequest {
  std::size_t target_height = 0;
  std::vector<Bytes> entries;  // replacement data entries
};

// An edit request whose target the local chain cannot honor yet (block not
// mined, or not yet buried to the stability depth); retried each round.
struct PendingEdit {
  EditRequest req;
  std::size_t first_seen_round = 0;
};

struct NodeState {
  std::size_t id = 0;
  Role role = Role::honest;
  Mode mode = Mode::single;
  PolicyParams params;
  EndorsementRule endorsement = EndorsementRule::destructive_only;
  std::uint64_t miner_seed = 0;
  Digest genesis_digest;  // pinned: foreign-genesis chains are never adopted
  Chain chain;
  CandidatePool pool;
  std::deque<PendingCandidate> pending;  // proposals waiting for the chain to catch up
  std::deque<PendingEdit> deferred_edits;  // requests waiting for their target to stabilize
};

NodeState make_node(std::size_t id, Mode mode, const PolicyParams& params,
                    std::uint64_t miner_seed, Chain initial_chain);

// ── round input / output ────────────────────────────────────────────────────

struct RoundInput {
  std::size_t round = 0;
  std::vector<Message> inbox;
  std::vector<Bytes> env_entries;
  std::vector<EditRequest> edit_requests;
};

struct AppliedRewrite {
  std::size_t height = 0;
  Digest token;  // the applied candidate's digest = the block's new digest
};

struct Outbound {
  std::vector<Message> messages;
  bool adopted = false;             // switched to a delivered chain
  bool mined = false;               // extended own chain this round
  std::uint64_t attempts_used = 0;  // mining counters burned
  std::vector<Digest> votes_cast;
  std::vector<AppliedRewrite> redactions_applied;
  std::size_t proposals_made = 0;
  std::size_t dropped_messages = 0;
};

// Executes one round. Deterministic in (state, input, difficulty, q); never
// throws on malformed input — bad messages and impossible edit requests are
// counted and dropped.
Outbound step_round(NodeState& state, const RoundInput& input,
                    const Target& difficulty, std::uint64_t q);

// Builds a candidate for the node's own chain, pools it, and returns its
// broadcast form. Precondition failures propagate from propose_edit.
CandidateMsg submit_edit_proposal(NodeState& state, std::size_t target_height,
                                  BlockPayload new_payload);

// ── helpers shared with the simulator and tests ─────────────────────────────

CandidateMsg candidate_to_msg(const CandidateBlock& cand);

// Rebuilds the candidate a message describes against this node's chain.
// Empty result means the message cannot be honored right now (bad height,
// unstable target, digest mismatch, malformed payload).
std::optional<CandidateBlock> reconstruct_candidate(const NodeState& state,
                                                    const CandidateMsg& msg);

// True when `after` is `before` with data strictly removed: same entry
// count, every entry byte-wise equal / truncated / zeroed, at least one
// entry changed.
bool destructive_entries(const std::vector<Bytes>& before,
                         const std::vector<Bytes>& after);

// The honest vote decision for a pooled candidate, including the ledger-mode
// announcement check.
bool endorses(const NodeState& state, const CandidateBlock& cand);

}  // namespace redact::node
