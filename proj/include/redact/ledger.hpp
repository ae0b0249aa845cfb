#pragma once
// Transaction layer: Bitcoin-style blocks whose headers commit to both the
// current and the original transaction set, so one approved rewrite keeps the
// original proof of work checkable forever.
//
// Conventions:
//  - a transaction id is the tagged link hash of its witness-stripped
//    serialization: rewriting a witness never changes the id, rewriting any
//    payload byte always does
//  - spendable outputs hold a 32-byte Ed25519 verification key; an input's
//    witness is a detached signature over the 32-byte id of the spending
//    transaction
//  - data outputs carry at most 80 bytes and can never be spent
//  - an edit announcement ("edit tx") is a fee-paying transaction whose first
//    data output is "EDT0" || old tx id || replacement tx id; its vote token
//    is H(old id || new id); miners endorse it by listing the token in their
//    coinbase's "VOTE"-tagged data output
//  - a rewritten slot keeps the old tx id beside the replacement, the header
//    keeps the old merkle root, and the proof of work is re-checked with the
//    old root substituted when the two roots differ
//  - rewrites must be strictly destructive: only data-output payloads may
//    change, and every changed byte is either dropped from the tail or
//    zeroed; vote outputs and edit announcements are untouchable

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "redact/chain.hpp"
#include "redact/redaction.hpp"

namespace redact::ledger {

// ── transactions ────────────────────────────────────────────────────────────

struct TxInput {
  Digest prev_txid;
  std::uint32_t output_index = 0;
  Bytes witness;

  bool operator==(const TxInput&) const = default;
};

enum class OutputKind : std::uint8_t { spendable = 0, data = 1 };

struct TxOutput {
  OutputKind kind = OutputKind::spendable;
  std::uint64_t amount = 0;
  Bytes script;  // spendable: 32-byte key; data: payload, <= 80 bytes

  bool operator==(const TxOutput&) const = default;
};

struct Transaction {
  bool coinbase = false;
  std::vector<TxInput> inputs;
  std::vector<TxOutput> outputs;

  bool operator==(const Transaction&) const = default;
};

inline constexpr std::size_t kMaxDataBytes = 80;
inline constexpr std::uint64_t kBlockSubsidy = 5'000'000'000ULL;

Bytes edit_tag();  // "EDT0"
Bytes vote_tag();  // "VOTE"

Bytes serialize_tx(const Transaction& tx);  // with witnesses
std::optional<Transaction> parse_tx(ByteView bytes);  // strict, no trailing bytes
Bytes tx_id_image(const Transaction& tx);  // witness-stripped serialization
Digest tx_id(const Transaction& tx);

// Structural rules: data outputs carry amount 0 and <= 80 bytes, spendable
// outputs a 32-byte key, coinbases have no inputs, others at least one.
bool tx_shape_ok(const Transaction& tx);

// ── keys and witnesses ──────────────────────────────────────────────────────

struct KeyPair {
  std::array<std::uint8_t, 32> pk{};
  std::array<std::uint8_t, 64> sk{};
};

KeyPair keypair_from_seed(std::uint64_t seed);
Bytes sign_spend(const KeyPair& kp, const Digest& spending_txid);
bool verify_spend(ByteView verification_key, const Digest& spending_txid, ByteView witness);

// ── merkle commitment ───────────────────────────────────────────────────────

// Parent = H(left || right); an odd node pairs with itself; a single leaf is
// its own root. Throws Error(empty_leaves) on an empty list.
Digest merkle_root_of(const std::vector<Digest>& leaves);

// ── rewrite candidates at the transaction level ─────────────────────────────

// True iff cand equals old in inputs, witnesses, coinbase flag, output
// count/kinds, and all spendable outputs, differing only by destructive
// changes to data-output payloads; "VOTE" and "EDT0" data outputs must stay
// byte-identical.
bool validate_candidate_tx(const Transaction& old_tx, const Transaction& cand_tx);

// ── edit announcements ──────────────────────────────────────────────────────

struct EditTx {
  Transaction tx;
  std::uint64_t fee = 0;

  bool operator==(const EditTx&) const = default;
};

// Errors: fee below the configured minimum -> Error(fee_too_low); candidate
// failing validate_candidate_tx, or equal ids -> Error(candidate_malformed).
EditTx build_edit_tx(const Transaction& old_tx, const Transaction& cand_tx,
                     const TxInput& funding, std::uint64_t fee, std::uint64_t min_fee);

// The (old id, new id) pair if tx carries an "EDT0" data output.
std::optional<std::pair<Digest, Digest>> edit_pair_of(const Transaction& tx);

Digest vote_token(const Digest& old_id, const Digest& new_id);
Digest vote_token(const EditTx& etx);

// ── blocks ──────────────────────────────────────────────────────────────────

struct BlockHeader {
  Digest hash_prev;
  Digest merkle_root;
  Target difficulty;
  std::uint64_t timestamp = 0;  // round number in simulations
  std::uint64_t nonce = 0;
  Digest old_merkle_root;

  bool operator==(const BlockHeader&) const = default;
};

struct TxList {
  std::vector<Transaction> txs;
  std::map<std::size_t, Digest> redacted_old_ids;  // slot index -> original id

  bool operator==(const TxList&) const = default;
};

// Leaf of slot i: the tx id, or H(current id || old id) for a rewritten slot
// so the retained old id is bound into the current commitment.
Digest slot_leaf(const TxList& txs, std::size_t i);
Digest current_merkle_root(const TxList& txs);
Digest original_merkle_root(const TxList& txs);  // old ids at rewritten slots

struct LedgerBlock {
  BlockHeader header;
  TxList txs;

  bool operator==(const LedgerBlock&) const = default;
};

struct LedgerChain {
  std::vector<LedgerBlock> blocks;
  Target difficulty;
  PolicyParams params;
  std::uint64_t min_edit_fee = 0;

  std::size_t length() const { return blocks.size(); }
  const LedgerBlock& at_height(std::size_t h) const;
};

Digest header_digest(const BlockHeader& h);           // over the stored fields
Digest header_digest_original(const BlockHeader& h);  // old root substituted in
bool header_work_ok(const BlockHeader& h, const Target& difficulty);
bool is_redacted_block(const LedgerBlock& b);

// Vote tokens listed in the coinbase's "VOTE" data outputs.
std::vector<Digest> coinbase_votes(const TxList& txs);

LedgerChain make_ledger_chain(const Target& difficulty, const PolicyParams& params,
                              std::uint64_t min_edit_fee, TxList genesis_txs);

std::optional<LedgerBlock> mine_ledger_block(const LedgerChain& chain, TxList txs,
                                             std::uint64_t timestamp,
                                             std::uint64_t max_attempts, std::uint64_t seed);

// ── applying a rewrite ──────────────────────────────────────────────────────

// Replaces the slot holding old_tx with cand_tx, records the old id, and
// returns the updated list plus its new merkle root.
//   old_tx not present (by id, unredacted slot) -> Error(tx_not_found)
//   candidate fails validate_candidate_tx       -> Error(candidate_malformed)
struct TxRedactionResult {
  TxList txs;
  Digest new_root;
};
TxRedactionResult apply_tx_redaction(const TxList& txs, const Transaction& old_tx,
                                     const Transaction& cand_tx);

// In-place convenience for whole chains: rewrites the slot and refreshes the
// header's merkle root (the old root and proof of work stay untouched).
void apply_block_redaction(LedgerChain& chain, std::size_t height,
                           const Transaction& old_tx, const Transaction& cand_tx);

// ── vote policy over ledger chains ──────────────────────────────────────────

// The voting window for an edit announced in block h opens once the
// announcement is k blocks deep: it spans heights h+k+1 … h+k+ell, and the
// verdict fires only after the window's last block is itself k deep.
PolicyReport evaluate_edit(const LedgerChain& chain, const Digest& old_id,
                           const Digest& new_id);

// ── unspent outputs and spend lineage ───────────────────────────────────────

struct OutPoint {
  Digest txid;
  std::uint32_t index = 0;

  auto operator<=>(const OutPoint&) const = default;
};

class UtxoSet {
 public:
  // Maps an id to the newest id in its rewrite lineage.
  Digest canonical(const Digest& txid) const;

  void add_lineage(const Digest& old_id, const Digest& new_id);
  void add_outputs(const Transaction& tx);

  // Marks the output spent under every lineage alias.
  //   unknown outpoint            -> Error(unknown_output)
  //   data output                 -> Error(data_output_unspendable)
  //   already marked spent        -> Error(already_spent)
  void register_spend(const OutPoint& op, const Digest& spender_txid);

  const TxOutput* find(const OutPoint& op) const;  // live outputs only
  std::size_t live_count() const { return live_.size(); }

 private:
  std::map<OutPoint, TxOutput> live_;
  std::map<OutPoint, Digest> spent_;  // outpoint -> spender id
  std::map<Digest, Digest> old_to_new_;
};

// Replays the whole chain: registers rewrite lineages, spends inputs, adds
// outputs. Throws the register_spend errors on conflicting history.
UtxoSet build_utxo(const LedgerChain& chain);

// ── validation ──────────────────────────────────────────────────────────────

// Full-chain validation. A chain is rejected iff it contains an unapproved
// rewrite, a merkle root inconsistent with its transaction set, a proof of
// work satisfied by neither root form, a broken link, a bad witness, a
// conserved-value violation, a double spend — or an approved rewrite that was
// never performed.
bool validate_ledger_chain(const LedgerChain& chain, ValidationIssue* issue = nullptr);

// One block against the state before it: structure, work, witnesses, value
// conservation; `utxo` is consumed (spends registered, outputs added).
bool validate_ledger_block(const BlockHeader& header, const TxList& txs, UtxoSet& utxo,
                           const LedgerChain& context, std::size_t height,
                           ValidationIssue* issue = nullptr);

// ── victim accountability ───────────────────────────────────────────────────

// True iff the claimed bytes parse as a transaction whose witness-stripped
// id equals the old id retained at the given rewritten slot.
//   slot not rewritten -> Error(not_a_redacted_slot)
bool verify_victim_claim(const LedgerChain& chain, std::size_t block_height,
                         std::size_t tx_index, ByteView claimed_old_tx_bytes);

// ── convenience builders (tests, scenarios, fixtures) ───────────────────────

TxOutput spend_output(const KeyPair& to, std::uint64_t amount);
TxOutput data_output(Bytes payload);
Transaction make_coinbase(const KeyPair& miner, std::uint64_t amount,
                          const std::vector<Digest>& votes);

}  // namespace redact::ledger
