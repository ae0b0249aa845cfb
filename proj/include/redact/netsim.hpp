#pragma once
// Deterministic round-based network simulator with adversarial delivery,
// plus empirical checkers for chain growth, chain quality, and the editable
// common-prefix property, and scripted attack scenarios.
//
// Execution model. Time advances in rounds. Each round, every node receives
// the messages scheduled for it, steps its state machine (see node.hpp), and
// hands its broadcasts to the scheduler, which assigns every (message,
// recipient) pair a delivery delay of 1..max_delay rounds. The scheduler may
// reorder and delay but never alters content; both properties are audited
// from the trace. Corrupt nodes follow an adversary strategy instead of the
// honest step; an uncorrupted node restarts from genesis like a freshly
// spawned party. Everything derives from one master seed, so a (config,
// adversary) pair replays bit-identically.
//
// Editable common prefix. For honest chains C1 (round r1) and C2 (round
// r2 >= r1), either C1 without its last k blocks is a prefix of C2, or every
// aligned position where they differ must be explained by an approved
// rewrite. The checker reports two tiers: a mismatch whose C2-side block has
// an accepted tally on C2 satisfies the property as literally stated; a
// mismatch whose C1-side block has an accepted tally on C1 is the benign
// transient of a node that performed an approved rewrite a round or two
// before a laggard (counted separately, not a violation). The tally is
// evaluated on the chain that carries the rewrite because that is the chain
// whose vote window is deep enough to rule: a laggard one block short of the
// stability depth still reports "voting" for a rewrite the rest of the
// network has already applied. Anything else is a violation. The plain
// checker applies the prefix clause only, which is the property redactions
// deliberately break.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "redact/ledger.hpp"
#include "redact/node.hpp"

namespace redact::sim {

// ── configuration ───────────────────────────────────────────────────────────

// Replacement request the environment hands one node at one round. The node
// rewrites its own copy of the target block's entries: listed indexes (all,
// when empty) are zeroed in place, or replaced with seeded junk of the same
// count when junk_entries is set (a proposal no honest scrutiny endorses).
struct EditScriptEntry {
  std::size_t round = 0;
  std::size_t node = 0;
  std::size_t target_height = 0;
  std::vector<std::size_t> zero_entries;
  bool junk_entries = false;
};

struct SimConfig {
  std::size_t n_nodes = 10;
  std::size_t n_corrupt = 0;  // ids n_nodes-n_corrupt .. n_nodes-1 start corrupt
  std::size_t rounds = 100;
  std::uint64_t q = 64;       // mining attempts per node per round
  std::size_t max_delay = 1;  // scheduler bound, rounds (>= 1)
  Target difficulty = Target::pow2(246);
  PolicyParams params;
  Mode mode = Mode::single;
  std::uint64_t master_seed = 1;
  std::string scenario = "plain";
  std::size_t env_entry_every = 0;   // issue one data entry every N rounds (0 = never)
  std::size_t env_entry_bytes = 64;  // size of each issued entry
  std::vector<EditScriptEntry> edit_script;
};

enum class Strategy {
  none,                 // corrupt nodes go silent
  delay_only,           // corrupt nodes act honestly; the attack is latency
  unapproved_edit,      // rewrite a stable block without any vote, keep mining on it
  malicious_candidate,  // propose a data-adding rewrite and vote for it
  spam                  // flood candidate messages that nobody can admit
};

struct CorruptionEvent {
  std::size_t round = 0;
  std::size_t node = 0;
  bool corrupt = true;  // false: release the node, which restarts from genesis
};

struct AdversarySpec {
  std::size_t max_delay = 1;     // actual delays drawn from 1..max_delay
  bool randomize_delays = true;  // false: every delay is exactly max_delay
  Strategy strategy = Strategy::none;
  std::vector<CorruptionEvent> schedule;
  std::size_t tamper_round = 0;     // unapproved_edit: first round to tamper (0 = auto)
  std::size_t spam_per_round = 8;   // spam: candidate messages per corrupt node
  std::size_t white_box_node = SIZE_MAX;   // overwrite this node's chain in place…
  std::size_t white_box_round = 0;         // …at this round (fault injection)
  std::size_t white_box_height = 2;        // …at this height
};

// ── trace ───────────────────────────────────────────────────────────────────

// 128-bit order-sensitive fold over block digests; equal folds mean equal
// prefixes for every practical purpose of the checkers.
struct Sig128 {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  auto operator<=>(const Sig128&) const = default;
};

struct Sig128Hash {
  std::size_t operator()(const Sig128& s) const noexcept {
    return std::size_t(s.a ^ (s.b * 0x9e3779b97f4a7c15ULL));
  }
};

Sig128 fold_digest(Sig128 acc, const Digest& d);

// One node's chain at the end of one round, as block digests plus cumulative
// prefix signatures (sigs[i] covers digests[0..i]).
struct Snapshot {
  std::vector<Digest> digests;
  std::vector<Sig128> sigs;
  bool corrupted = false;

  std::size_t length() const { return digests.size(); }
  Sig128 full_sig() const { return sigs.empty() ? Sig128{} : sigs.back(); }
};

struct NodeRoundStats {
  std::size_t chain_len = 0;
  bool corrupted = false;
  bool mined = false;
  bool adopted = false;
  std::uint64_t attempts = 0;
  std::uint32_t votes_cast = 0;
  std::uint32_t redactions_applied = 0;
  std::uint32_t proposals_made = 0;
  std::uint32_t dropped_messages = 0;
  std::uint32_t pool_size = 0;
};

struct MessageRecord {
  std::uint32_t send_round = 0;
  std::uint32_t deliver_round = 0;
  std::uint16_t sender = 0;
  std::uint16_t recipient = 0;
  bool sender_honest = true;
  std::uint8_t kind = 0;  // 0 chain, 1 candidate
  Sig128 sent_sig;
  Sig128 delivered_sig;
};

struct EnvRecord {
  std::size_t issue_round = 0;
  Bytes entry;
  std::uint64_t entry_hash = 0;
};

struct RedactionEvent {
  std::size_t round = 0;
  std::size_t node = 0;
  Digest token;
};

struct MinerMark {
  int node = -1;  // -1: forged by the adversary outside any node step
  bool corrupt = false;
};

struct SimTrace {
  SimConfig cfg;
  AdversarySpec adv;
  std::vector<std::vector<Snapshot>> snaps;        // [round][node]
  std::vector<std::vector<NodeRoundStats>> stats;  // [round][node]
  std::unordered_map<Digest, Block, DigestHash> blocks;  // every block ever held
  std::unordered_map<Digest, std::vector<std::uint64_t>, DigestHash> entry_hashes;
  std::unordered_map<Digest, MinerMark, DigestHash> miner_of;  // keyed by work anchor
  std::vector<MessageRecord> messages;
  std::vector<EnvRecord> env;
  std::vector<RedactionEvent> redactions;
  std::vector<CorruptionEvent> corruption_applied;
  std::vector<Digest> adversary_blocks;      // digests honest chains must never hold
  std::vector<Digest> adversary_candidates;  // tokens honest nodes must never accept
  std::vector<node::NodeState> final_nodes;
};

SimTrace run_simulation(const SimConfig& cfg, const AdversarySpec& adv);

// Rebuilds the chain a snapshot describes from the trace's block store.
Chain chain_of(const SimTrace& trace, const Snapshot& snap);

// ── property checkers ───────────────────────────────────────────────────────

struct GrowthReport {
  double tau = 0;
  std::size_t window = 0;
  double min_rate = 0;  // slowest observed (len2 - len1) / s over all pairs
  std::size_t windows_checked = 0;
  bool pass = false;
};

GrowthReport check_chain_growth(const SimTrace& trace, double tau, std::size_t window);

struct QualityReport {
  double mu = 0;
  std::size_t window = 0;
  double max_ratio = 0;  // worst adversarial fraction over all windows
  std::size_t windows_checked = 0;
  bool pass = false;
};

QualityReport check_chain_quality(const SimTrace& trace, double mu, std::size_t window);

struct PrefixViolation {
  std::size_t node1 = 0, round1 = 0;
  std::size_t node2 = 0, round2 = 0;
  std::size_t height = 0;  // 0: length truncation rather than a content mismatch
  std::string detail;
};

struct PrefixReport {
  std::size_t pairs_checked = 0;
  std::size_t mismatched_pairs = 0;    // pairs that needed the rewrite clause
  std::size_t laggard_passes = 0;      // explained by C1's approved rewrite
  std::size_t violations_total = 0;    // violating pairs (list below is capped)
  std::vector<PrefixViolation> violations;
  bool pass = false;  // violations_total == 0
};

PrefixReport check_editable_common_prefix(const SimTrace& trace, std::uint32_t k,
                                          std::size_t exclude_node = SIZE_MAX);
PrefixReport check_plain_common_prefix(const SimTrace& trace, std::uint32_t k,
                                       std::size_t exclude_node = SIZE_MAX);

// ── trace audits ────────────────────────────────────────────────────────────

struct DeliveryReport {
  std::size_t messages = 0;
  std::size_t late = 0;        // outside 1..max_delay for an honest sender
  std::size_t mismatched = 0;  // content changed between send and delivery
  bool pass = false;
};

DeliveryReport audit_delivery(const SimTrace& trace);

struct LivenessReport {
  std::size_t entries = 0;
  std::size_t confirmed = 0;          // entries k-deep in every audited chain
  std::size_t max_rounds_to_confirm = 0;  // the measured confirmation bound u
  bool all_confirmed = false;
};

LivenessReport audit_liveness(const SimTrace& trace);

struct ApplicationReport {
  std::size_t tokens = 0;
  std::size_t max_spread = 0;  // rounds between first and last holder per token
  std::size_t never_held = 0;  // (token, node) pairs that never saw the rewrite
  bool pass = false;           // spread within max_delay + 1 and no absentees
};

ApplicationReport audit_redaction_application(const SimTrace& trace);

// ── export and scenarios ────────────────────────────────────────────────────

std::string trace_to_jsonl(const SimTrace& trace);

// Deterministic transaction-ledger chain with one data-bearing transaction at
// a known slot; with perform_redaction the edit is announced, funded, voted
// through its window, stabilised, and applied, so the result exercises the
// whole edit life cycle. Used by attack scenarios and tests.
struct LedgerExample {
  ledger::LedgerChain chain;
  ledger::Transaction old_tx;       // the original (pre-rewrite) transaction
  ledger::Transaction cand_tx;      // its approved replacement
  std::size_t target_height = 0;    // block holding old_tx
  std::size_t old_slot = 0;         // slot of old_tx in that block
  ledger::KeyPair victim;           // owns the data-bearing transaction
  ledger::KeyPair attacker;         // owns the retained spendable output
  ledger::KeyPair miner;            // receives coinbase outputs
};

LedgerExample build_ledger_example(std::uint64_t seed, const PolicyParams& params,
                                   bool perform_redaction);

struct ScenarioReport {
  std::string scenario;
  std::vector<std::uint64_t> seeds;
  std::size_t passes = 0;
  std::vector<std::string> failures;
  std::string details;  // JSON object with per-scenario measurements
};

// Names: unapproved-editing, dos, false-victim, double-spend,
// consensus-delays. Unknown names throw Error(unknown_scenario).
ScenarioReport run_attack_scenario(const std::string& name, const SimConfig& base);

std::string scenario_report_json(const ScenarioReport& report);

}  // namespace redact::sim
