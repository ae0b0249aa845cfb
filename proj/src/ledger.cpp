#include "redact/ledger.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

namespace redact::ledger {

namespace {

void ensure_sodium() {
  static bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    return true;
  }();
  (void)ready;
}

// Bounded sequential reader for strict parsing.
struct Reader {
  const std::uint8_t* p;
  std::size_t left;

  bool take(std::size_t n, const std::uint8_t** out) {
    if (left < n) return false;
    *out = p;
    p += n;
    left -= n;
    return true;
  }
  bool u8(std::uint8_t* v) {
    const std::uint8_t* q;
    if (!take(1, &q)) return false;
    *v = *q;
    return true;
  }
  bool u32(std::uint32_t* v) {
    const std::uint8_t* q;
    if (!take(4, &q)) return false;
    *v = read_u32_le(q);
    return true;
  }
  bool u64(std::uint64_t* v) {
    const std::uint8_t* q;
    if (!take(8, &q)) return false;
    *v = read_u64_le(q);
    return true;
  }
  bool bytes(std::uint64_t n, Bytes* out) {
    if (left < n) return false;
    out->assign(p, p + n);
    p += n;
    left -= n;
    return true;
  }
  bool digest(Digest* d) {
    const std::uint8_t* q;
    if (!take(32, &q)) return false;
    std::memcpy(d->b.data(), q, 32);
    return true;
  }
};

bool starts_with(const Bytes& b, const Bytes& prefix) {
  return b.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), b.begin());
}

}  // namespace

Bytes edit_tag() { return Bytes{'E', 'D', 'T', '0'}; }
Bytes vote_tag() { return Bytes{'V', 'O', 'T', 'E'}; }

// ── serialization ───────────────────────────────────────────────────────────

Bytes serialize_tx(const Transaction& tx) {
  Bytes out;
  out.push_back(tx.coinbase ? 1 : 0);
  put_u64_le(out, tx.inputs.size());
  for (const auto& in : tx.inputs) {
    out.insert(out.end(), in.prev_txid.b.begin(), in.prev_txid.b.end());
    put_u32_le(out, in.output_index);
    put_u64_le(out, in.witness.size());
    out.insert(out.end(), in.witness.begin(), in.witness.end());
  }
  put_u64_le(out, tx.outputs.size());
  for (const auto& o : tx.outputs) {
    out.push_back(std::uint8_t(o.kind));
    put_u64_le(out, o.amount);
    put_u64_le(out, o.script.size());
    out.insert(out.end(), o.script.begin(), o.script.end());
  }
  return out;
}

std::optional<Transaction> parse_tx(ByteView bytes) {
  Reader r{bytes.data(), bytes.size()};
  Transaction tx;
  std::uint8_t cb;
  if (!r.u8(&cb) || cb > 1) return std::nullopt;
  tx.coinbase = cb == 1;
  std::uint64_t n_in;
  if (!r.u64(&n_in) || n_in > r.left) return std::nullopt;
  tx.inputs.reserve(std::size_t(n_in));
  for (std::uint64_t i = 0; i < n_in; ++i) {
    TxInput in;
    if (!r.digest(&in.prev_txid) || !r.u32(&in.output_index)) return std::nullopt;
    std::uint64_t wlen;
    if (!r.u64(&wlen) || !r.bytes(wlen, &in.witness)) return std::nullopt;
    tx.inputs.push_back(std::move(in));
  }
  std::uint64_t n_out;
  if (!r.u64(&n_out) || n_out > r.left) return std::nullopt;
  tx.outputs.reserve(std::size_t(n_out));
  for (std::uint64_t i = 0; i < n_out; ++i) {
    TxOutput o;
    std::uint8_t kind;
    if (!r.u8(&kind) || kind > 1) return std::nullopt;
    o.kind = OutputKind(kind);
    std::uint64_t slen;
    if (!r.u64(&o.amount) || !r.u64(&slen) || !r.bytes(slen, &o.script)) return std::nullopt;
    tx.outputs.push_back(std::move(o));
  }
  if (r.left != 0) return std::nullopt;  // trailing bytes are not a transaction
  return tx;
}

Bytes tx_id_image(const Transaction& tx) {
  Bytes out;
  out.push_back(tx.coinbase ? 1 : 0);
  put_u64_le(out, tx.inputs.size());
  for (const auto& in : tx.inputs) {
    out.insert(out.end(), in.prev_txid.b.begin(), in.prev_txid.b.end());
    put_u32_le(out, in.output_index);
  }
  put_u64_le(out, tx.outputs.size());
  for (const auto& o : tx.outputs) {
    out.push_back(std::uint8_t(o.kind));
    put_u64_le(out, o.amount);
    put_u64_le(out, o.script.size());
    out.insert(out.end(), o.script.begin(), o.script.end());
  }
  return out;
}

Digest tx_id(const Transaction& tx) {
  Bytes img = tx_id_image(tx);
  return hash_h({ByteView(img.data(), img.size())});
}

bool tx_shape_ok(const Transaction& tx) {
  if (tx.coinbase && !tx.inputs.empty()) return false;
  if (!tx.coinbase && tx.inputs.empty()) return false;
  for (const auto& o : tx.outputs) {
    if (o.kind == OutputKind::data) {
      if (o.amount != 0 || o.script.size() > kMaxDataBytes) return false;
    } else {
      if (o.script.size() != 32) return false;
    }
  }
  return true;
}

// ── keys and witnesses ──────────────────────────────────────────────────────

KeyPair keypair_from_seed(std::uint64_t seed) {
  ensure_sodium();
  std::array<std::uint8_t, 32> material{};
  std::uint64_t s = seed;
  for (int i = 0; i < 4; ++i) {
    std::uint64_t v = splitmix64(s);
    for (int j = 0; j < 8; ++j) material[std::size_t(i * 8 + j)] = std::uint8_t(v >> (8 * j));
  }
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pk.data(), kp.sk.data(), material.data());
  return kp;
}

Bytes sign_spend(const KeyPair& kp, const Digest& spending_txid) {
  ensure_sodium();
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, spending_txid.b.data(), 32, kp.sk.data());
  return sig;
}

bool verify_spend(ByteView verification_key, const Digest& spending_txid, ByteView witness) {
  ensure_sodium();
  if (verification_key.size() != 32 || witness.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(witness.data(), spending_txid.b.data(), 32,
                                     verification_key.data()) == 0;
}

// ── merkle ──────────────────────────────────────────────────────────────────

Digest merkle_root_of(const std::vector<Digest>& leaves) {
  if (leaves.empty()) fail(Errc::empty_leaves, "merkle root of an empty leaf list");
  std::vector<Digest> level = leaves;
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Digest> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(hash_h({level[i].view(), level[i + 1].view()}));
    level = std::move(next);
  }
  return level.front();
}

// ── candidate transactions ──────────────────────────────────────────────────

namespace {

// Destructive payload change: tail-truncated and/or bytes zeroed, nothing new.
bool destructive_bytes(const Bytes& before, const Bytes& after) {
  if (after.size() > before.size()) return false;
  for (std::size_t i = 0; i < after.size(); ++i)
    if (after[i] != before[i] && after[i] != 0) return false;
  return true;
}

}  // namespace

bool validate_candidate_tx(const Transaction& old_tx, const Transaction& cand_tx) {
  if (!tx_shape_ok(old_tx) || !tx_shape_ok(cand_tx)) return false;
  if (old_tx.coinbase != cand_tx.coinbase) return false;
  if (old_tx.inputs != cand_tx.inputs) return false;  // witnesses included
  if (old_tx.outputs.size() != cand_tx.outputs.size()) return false;
  for (std::size_t i = 0; i < old_tx.outputs.size(); ++i) {
    const TxOutput& a = old_tx.outputs[i];
    const TxOutput& b = cand_tx.outputs[i];
    if (a.kind != b.kind || a.amount != b.amount) return false;
    if (a.kind == OutputKind::spendable) {
      if (a.script != b.script) return false;
      continue;
    }
    // vote records and edit announcements can never be rewritten
    if (starts_with(a.script, vote_tag()) || starts_with(a.script, edit_tag())) {
      if (a.script != b.script) return false;
      continue;
    }
    if (!destructive_bytes(a.script, b.script)) return false;
  }
  return true;
}

// ── edit announcements ──────────────────────────────────────────────────────

EditTx build_edit_tx(const Transaction& old_tx, const Transaction& cand_tx,
                     const TxInput& funding, std::uint64_t fee, std::uint64_t min_fee) {
  if (fee < min_fee)
    fail(Errc::fee_too_low, "edit fee " + std::to_string(fee) + " below the minimum " +
                                std::to_string(min_fee));
  if (!validate_candidate_tx(old_tx, cand_tx))
    fail(Errc::candidate_malformed, "replacement transaction is not a destructive rewrite");
  Digest old_id = tx_id(old_tx);
  Digest new_id = tx_id(cand_tx);
  if (old_id == new_id)
    fail(Errc::candidate_malformed, "replacement transaction changes nothing");

  Bytes pair = edit_tag();
  pair.insert(pair.end(), old_id.b.begin(), old_id.b.end());
  pair.insert(pair.end(), new_id.b.begin(), new_id.b.end());

  EditTx etx;
  etx.tx.coinbase = false;
  etx.tx.inputs = {funding};
  etx.tx.outputs = {TxOutput{OutputKind::data, 0, std::move(pair)}};
  etx.fee = fee;
  return etx;
}

std::optional<std::pair<Digest, Digest>> edit_pair_of(const Transaction& tx) {
  Bytes tag = edit_tag();
  for (const auto& o : tx.outputs) {
    if (o.kind != OutputKind::data) continue;
    if (o.script.size() != tag.size() + 64 || !starts_with(o.script, tag)) continue;
    Digest old_id, new_id;
    std::memcpy(old_id.b.data(), o.script.data() + tag.size(), 32);
    std::memcpy(new_id.b.data(), o.script.data() + tag.size() + 32, 32);
    return std::make_pair(old_id, new_id);
  }
  return std::nullopt;
}

Digest vote_token(const Digest& old_id, const Digest& new_id) {
  return hash_h({old_id.view(), new_id.view()});
}

Digest vote_token(const EditTx& etx) {
  auto pair = edit_pair_of(etx.tx);
  if (!pair) fail(Errc::candidate_malformed, "transaction carries no edit announcement");
  return vote_token(pair->first, pair->second);
}

// ── blocks ──────────────────────────────────────────────────────────────────

Digest slot_leaf(const TxList& txs, std::size_t i) {
  Digest cur = tx_id(txs.txs.at(i));
  auto it = txs.redacted_old_ids.find(i);
  if (it == txs.redacted_old_ids.end()) return cur;
  return hash_h({cur.view(), it->second.view()});
}

Digest current_merkle_root(const TxList& txs) {
  std::vector<Digest> leaves;
  leaves.reserve(txs.txs.size());
  for (std::size_t i = 0; i < txs.txs.size(); ++i) leaves.push_back(slot_leaf(txs, i));
  return merkle_root_of(leaves);
}

Digest original_merkle_root(const TxList& txs) {
  std::vector<Digest> leaves;
  leaves.reserve(txs.txs.size());
  for (std::size_t i = 0; i < txs.txs.size(); ++i) {
    auto it = txs.redacted_old_ids.find(i);
    leaves.push_back(it == txs.redacted_old_ids.end() ? tx_id(txs.txs[i]) : it->second);
  }
  return merkle_root_of(leaves);
}

const LedgerBlock& LedgerChain::at_height(std::size_t h) const {
  if (h < 1 || h > blocks.size())
    fail(Errc::index_out_of_range, "height " + std::to_string(h) + " outside chain of length " +
                                       std::to_string(blocks.size()));
  return blocks[h - 1];
}

namespace {

Digest header_image(const BlockHeader& h, const Digest& root_field) {
  auto ts = ctr_image(h.timestamp);
  auto nn = ctr_image(h.nonce);
  return hash_h({h.hash_prev.view(), root_field.view(),
                 ByteView(h.difficulty.b.data(), h.difficulty.b.size()),
                 ByteView(ts.data(), ts.size()), ByteView(nn.data(), nn.size()),
                 h.old_merkle_root.view()});
}

}  // namespace

Digest header_digest(const BlockHeader& h) { return header_image(h, h.merkle_root); }

Digest header_digest_original(const BlockHeader& h) {
  return header_image(h, h.old_merkle_root);
}

bool header_work_ok(const BlockHeader& h, const Target& difficulty) {
  if (meets_target(header_digest(h), difficulty)) return true;
  if (h.merkle_root == h.old_merkle_root) return false;
  return meets_target(header_digest_original(h), difficulty);
}

bool is_redacted_block(const LedgerBlock& b) {
  return !b.txs.redacted_old_ids.empty() || b.header.merkle_root != b.header.old_merkle_root;
}

std::vector<Digest> coinbase_votes(const TxList& txs) {
  std::vector<Digest> out;
  if (txs.txs.empty() || !txs.txs.front().coinbase) return out;
  Bytes tag = vote_tag();
  for (const auto& o : txs.txs.front().outputs) {
    if (o.kind != OutputKind::data || !starts_with(o.script, tag)) continue;
    std::size_t body = o.script.size() - tag.size();
    if (body % 32 != 0) continue;
    for (std::size_t off = tag.size(); off + 32 <= o.script.size(); off += 32) {
      Digest d;
      std::memcpy(d.b.data(), o.script.data() + off, 32);
      out.push_back(d);
    }
  }
  return out;
}

LedgerChain make_ledger_chain(const Target& difficulty, const PolicyParams& params,
                              std::uint64_t min_edit_fee, TxList genesis_txs) {
  if (difficulty.is_zero()) fail(Errc::config_invalid, "difficulty target must be positive");
  check_policy_params(params);
  if (genesis_txs.txs.empty() || !genesis_txs.redacted_old_ids.empty())
    fail(Errc::config_invalid, "genesis needs transactions and no rewritten slots");
  LedgerChain c;
  c.difficulty = difficulty;
  c.params = params;
  c.min_edit_fee = min_edit_fee;
  LedgerBlock g;
  g.header.hash_prev = Digest{};
  g.header.difficulty = difficulty;
  g.header.timestamp = 0;
  g.header.nonce = 0;
  g.header.merkle_root = current_merkle_root(genesis_txs);
  g.header.old_merkle_root = g.header.merkle_root;
  g.txs = std::move(genesis_txs);
  c.blocks.push_back(std::move(g));
  return c;
}

std::optional<LedgerBlock> mine_ledger_block(const LedgerChain& chain, TxList txs,
                                             std::uint64_t timestamp,
                                             std::uint64_t max_attempts, std::uint64_t seed) {
  if (chain.blocks.empty()) fail(Errc::empty_chain, "mining needs a parent chain");
  if (!txs.redacted_old_ids.empty())
    fail(Errc::config_invalid, "freshly mined blocks cannot carry rewritten slots");
  LedgerBlock b;
  b.header.hash_prev = header_digest(chain.blocks.back().header);
  b.header.difficulty = chain.difficulty;
  b.header.timestamp = timestamp;
  b.header.merkle_root = current_merkle_root(txs);
  b.header.old_merkle_root = b.header.merkle_root;
  b.txs = std::move(txs);
  auto start = derive_seed(seed, 0x6c656467ULL);
  for (std::uint64_t i = 0; i < max_attempts; ++i) {
    b.header.nonce = start + i;
    if (meets_target(header_digest(b.header), chain.difficulty)) return b;
  }
  return std::nullopt;
}

// ── applying a rewrite ──────────────────────────────────────────────────────

TxRedactionResult apply_tx_redaction(const TxList& txs, const Transaction& old_tx,
                                     const Transaction& cand_tx) {
  Digest old_id = tx_id(old_tx);
  std::size_t slot = txs.txs.size();
  for (std::size_t i = 0; i < txs.txs.size(); ++i) {
    if (txs.redacted_old_ids.count(i)) continue;  // already rewritten
    if (tx_id(txs.txs[i]) == old_id) {
      slot = i;
      break;
    }
  }
  if (slot == txs.txs.size())
    fail(Errc::tx_not_found, "no unrewritten slot carries the target transaction");
  if (!validate_candidate_tx(old_tx, cand_tx))
    fail(Errc::candidate_malformed, "replacement transaction is not a destructive rewrite");
  TxRedactionResult res;
  res.txs = txs;
  res.txs.txs[slot] = cand_tx;
  res.txs.redacted_old_ids[slot] = old_id;
  res.new_root = current_merkle_root(res.txs);
  return res;
}

void apply_block_redaction(LedgerChain& chain, std::size_t height, const Transaction& old_tx,
                           const Transaction& cand_tx) {
  if (height < 2 || height > chain.length())
    fail(height == 1 ? Errc::genesis_immutable : Errc::index_out_of_range,
         "cannot rewrite height " + std::to_string(height));
  LedgerBlock& b = chain.blocks[height - 1];
  TxRedactionResult res = apply_tx_redaction(b.txs, old_tx, cand_tx);
  b.txs = std::move(res.txs);
  b.header.merkle_root = res.new_root;
}

// ── vote policy ─────────────────────────────────────────────────────────────

PolicyReport evaluate_edit(const LedgerChain& chain, const Digest& old_id,
                           const Digest& new_id) {
  const PolicyParams& p = chain.params;
  check_policy_params(p);
  PolicyReport rep;
  rep.votes_needed = required_votes(p);
  Digest token = vote_token(old_id, new_id);
  std::size_t n = chain.length();
  std::size_t announce = 0;
  for (std::size_t h = 1; h <= n && !announce; ++h)
    for (const auto& tx : chain.blocks[h - 1].txs.txs) {
      auto pair = edit_pair_of(tx);
      if (pair && pair->first == old_id && pair->second == new_id) {
        announce = h;
        break;
      }
    }
  if (!announce) return rep;  // voting: nothing announced yet
  std::size_t open = announce + p.k + 1;  // first block able to vote
  rep.first_vote_height = open;
  rep.window_close = open + p.ell - 1;
  if (rep.window_close + p.k > n) return rep;  // window open or not stable
  std::uint32_t count = 0;
  for (std::size_t h = open; h <= rep.window_close; ++h) {
    auto votes = coinbase_votes(chain.blocks[h - 1].txs);
    if (std::find(votes.begin(), votes.end(), token) != votes.end()) ++count;
  }
  rep.votes_in_window = count;
  rep.verdict = count >= rep.votes_needed ? Verdict::accept : Verdict::reject;
  return rep;
}

// ── UTXO ────────────────────────────────────────────────────────────────────

Digest UtxoSet::canonical(const Digest& txid) const {
  Digest cur = txid;
  for (int hops = 0; hops < 64; ++hops) {  // lineage chains are tiny; bound defensively
    auto it = old_to_new_.find(cur);
    if (it == old_to_new_.end()) return cur;
    cur = it->second;
  }
  return cur;
}

void UtxoSet::add_lineage(const Digest& old_id, const Digest& new_id) {
  if (old_id == new_id) return;
  old_to_new_[old_id] = new_id;
  // re-key anything recorded under the superseded id
  std::vector<std::pair<OutPoint, TxOutput>> moved_live;
  for (auto it = live_.begin(); it != live_.end();) {
    if (it->first.txid == old_id) {
      moved_live.emplace_back(OutPoint{new_id, it->first.index}, it->second);
      it = live_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto& [op, out] : moved_live) live_.emplace(op, std::move(out));
  std::vector<std::pair<OutPoint, Digest>> moved_spent;
  for (auto it = spent_.begin(); it != spent_.end();) {
    if (it->first.txid == old_id) {
      moved_spent.emplace_back(OutPoint{new_id, it->first.index}, it->second);
      it = spent_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto& [op, sp] : moved_spent) spent_.emplace(op, sp);
}

void UtxoSet::add_outputs(const Transaction& tx) {
  Digest id = canonical(tx_id(tx));
  for (std::size_t i = 0; i < tx.outputs.size(); ++i)
    live_.emplace(OutPoint{id, std::uint32_t(i)}, tx.outputs[i]);
}

void UtxoSet::register_spend(const OutPoint& op, const Digest& spender_txid) {
  OutPoint key{canonical(op.txid), op.index};
  if (spent_.count(key))
    fail(Errc::already_spent, "output already consumed under a lineage alias");
  auto it = live_.find(key);
  if (it == live_.end()) fail(Errc::unknown_output, "no such unspent output");
  if (it->second.kind == OutputKind::data)
    fail(Errc::data_output_unspendable, "data outputs carry no spendable value");
  live_.erase(it);
  spent_.emplace(key, spender_txid);
}

const TxOutput* UtxoSet::find(const OutPoint& op) const {
  auto it = live_.find(OutPoint{canonical(op.txid), op.index});
  return it == live_.end() ? nullptr : &it->second;
}

UtxoSet build_utxo(const LedgerChain& chain) {
  UtxoSet utxo;
  for (const auto& block : chain.blocks) {
    for (const auto& [slot, old_id] : block.txs.redacted_old_ids)
      utxo.add_lineage(old_id, tx_id(block.txs.txs[slot]));
    for (const auto& tx : block.txs.txs) {
      if (!tx.coinbase) {
        Digest spender = tx_id(tx);
        for (const auto& in : tx.inputs)
          utxo.register_spend(OutPoint{in.prev_txid, in.output_index}, spender);
      }
      utxo.add_outputs(tx);
    }
  }
  return utxo;
}

// ── validation ──────────────────────────────────────────────────────────────

namespace {

void set_issue(ValidationIssue* issue, std::size_t height, const std::string& reason) {
  if (issue) {
    issue->height = height;
    issue->reason = reason;
  }
}

// Witness checks plus value conservation for one block; spends and outputs
// land in `utxo`. Witnesses of rewritten slots verify against the retained
// old id — the signatures were produced for the original transaction.
bool apply_block_txs(const LedgerBlock& b, std::size_t height, UtxoSet& utxo,
                     ValidationIssue* issue) {
  for (const auto& [slot, old_id] : b.txs.redacted_old_ids) {
    if (slot >= b.txs.txs.size()) {
      set_issue(issue, height, "rewritten slot index outside the transaction list");
      return false;
    }
    utxo.add_lineage(old_id, tx_id(b.txs.txs[slot]));
  }
  std::uint64_t fees = 0;
  for (std::size_t i = 0; i < b.txs.txs.size(); ++i) {
    const Transaction& tx = b.txs.txs[i];
    if (!tx_shape_ok(tx)) {
      set_issue(issue, height, "malformed transaction in slot " + std::to_string(i));
      return false;
    }
    if (tx.coinbase) {
      if (i != 0) {
        set_issue(issue, height, "coinbase outside slot 0");
        return false;
      }
      continue;  // value checked after fees are known
    }
    auto redacted = b.txs.redacted_old_ids.find(i);
    Digest signed_id = redacted == b.txs.redacted_old_ids.end() ? tx_id(tx) : redacted->second;
    std::uint64_t in_total = 0;
    for (const auto& in : tx.inputs) {
      const TxOutput* prev = utxo.find(OutPoint{in.prev_txid, in.output_index});
      if (!prev) {
        set_issue(issue, height, "input references no unspent output");
        return false;
      }
      if (prev->kind != OutputKind::spendable) {
        set_issue(issue, height, "input references an unspendable data output");
        return false;
      }
      if (!verify_spend(ByteView(prev->script.data(), prev->script.size()), signed_id,
                        ByteView(in.witness.data(), in.witness.size()))) {
        set_issue(issue, height, "witness fails verification in slot " + std::to_string(i));
        return false;
      }
      in_total += prev->amount;
      try {
        utxo.register_spend(OutPoint{in.prev_txid, in.output_index}, tx_id(tx));
      } catch (const Error&) {
        set_issue(issue, height, "double spend in slot " + std::to_string(i));
        return false;
      }
    }
    std::uint64_t out_total = 0;
    for (const auto& o : tx.outputs) out_total += o.amount;
    if (out_total > in_total) {
      set_issue(issue, height, "transaction creates value out of nothing");
      return false;
    }
    fees += in_total - out_total;
    utxo.add_outputs(tx);
  }
  if (!b.txs.txs.empty() && b.txs.txs.front().coinbase) {
    const Transaction& cb = b.txs.txs.front();
    std::uint64_t minted = 0;
    for (const auto& o : cb.outputs) minted += o.amount;
    if (minted > kBlockSubsidy + fees) {
      set_issue(issue, height, "coinbase mints more than subsidy plus fees");
      return false;
    }
    utxo.add_outputs(cb);
  }
  return true;
}

}  // namespace

bool validate_ledger_block(const BlockHeader& header, const TxList& txs, UtxoSet& utxo,
                           const LedgerChain& context, std::size_t height,
                           ValidationIssue* issue) {
  if (header.merkle_root != current_merkle_root(txs)) {
    set_issue(issue, height, "merkle root does not match the transaction set");
    return false;
  }
  if (header.old_merkle_root != original_merkle_root(txs)) {
    set_issue(issue, height, "old merkle root does not match the retained ids");
    return false;
  }
  if (header.difficulty != context.difficulty) {
    set_issue(issue, height, "difficulty changed mid-run");
    return false;
  }
  if (!header_work_ok(header, context.difficulty)) {
    set_issue(issue, height, "header satisfies neither proof-of-work form");
    return false;
  }
  for (const auto& [slot, old_id] : txs.redacted_old_ids) {
    if (slot >= txs.txs.size()) {
      set_issue(issue, height, "rewritten slot index outside the transaction list");
      return false;
    }
    PolicyReport rep = evaluate_edit(context, old_id, tx_id(txs.txs[slot]));
    if (rep.verdict != Verdict::accept) {
      set_issue(issue, height, "rewrite in slot " + std::to_string(slot) +
                                   " has no accepted vote tally");
      return false;
    }
  }
  LedgerBlock b{header, txs};
  return apply_block_txs(b, height, utxo, issue);
}

bool validate_ledger_chain(const LedgerChain& chain, ValidationIssue* issue) {
  if (chain.blocks.empty()) fail(Errc::empty_chain, "cannot validate an empty chain");
  std::size_t n = chain.length();

  // genesis: work-exempt, pinned shape, never rewritten
  const LedgerBlock& g = chain.blocks.front();
  if (g.header.hash_prev != Digest{} || g.header.nonce != 0 ||
      g.header.difficulty != chain.difficulty || !g.txs.redacted_old_ids.empty() ||
      g.header.merkle_root != current_merkle_root(g.txs) ||
      g.header.old_merkle_root != g.header.merkle_root) {
    set_issue(issue, 1, "malformed genesis block");
    return false;
  }

  UtxoSet utxo;
  if (!apply_block_txs(g, 1, utxo, issue)) return false;

  for (std::size_t h = 2; h <= n; ++h) {
    const LedgerBlock& b = chain.blocks[h - 1];
    const LedgerBlock& prev = chain.blocks[h - 2];
    bool fresh = b.header.hash_prev == header_digest(prev.header);
    bool original = !fresh && is_redacted_block(prev) &&
                    b.header.hash_prev == header_digest_original(prev.header);
    if (!fresh && !original) {
      set_issue(issue, h, "link to predecessor matches neither header form");
      return false;
    }
    if (!validate_ledger_block(b.header, b.txs, utxo, chain, h, issue)) return false;
  }

  // an approved rewrite must actually have been performed: the superseded id
  // may survive only as the retained old id of a rewritten slot
  for (std::size_t h = 1; h <= n; ++h) {
    for (const auto& tx : chain.blocks[h - 1].txs.txs) {
      auto pair = edit_pair_of(tx);
      if (!pair) continue;
      if (evaluate_edit(chain, pair->first, pair->second).verdict != Verdict::accept) continue;
      for (std::size_t h2 = 1; h2 <= n; ++h2) {
        const TxList& txs2 = chain.blocks[h2 - 1].txs;
        for (std::size_t i = 0; i < txs2.txs.size(); ++i) {
          if (txs2.redacted_old_ids.count(i)) continue;
          if (tx_id(txs2.txs[i]) == pair->first) {
            set_issue(issue, h2, "approved rewrite was never performed");
            return false;
          }
        }
      }
    }
  }
  return true;
}

// ── victim accountability ───────────────────────────────────────────────────

bool verify_victim_claim(const LedgerChain& chain, std::size_t block_height,
                         std::size_t tx_index, ByteView claimed_old_tx_bytes) {
  const LedgerBlock& b = chain.at_height(block_height);
  auto it = b.txs.redacted_old_ids.find(tx_index);
  if (it == b.txs.redacted_old_ids.end())
    fail(Errc::not_a_redacted_slot, "slot " + std::to_string(tx_index) + " at height " +
                                        std::to_string(block_height) + " was never rewritten");
  auto parsed = parse_tx(claimed_old_tx_bytes);
  if (!parsed) return false;
  return tx_id(*parsed) == it->second;
}

// ── builders ────────────────────────────────────────────────────────────────

TxOutput spend_output(const KeyPair& to, std::uint64_t amount) {
  TxOutput o;
  o.kind = OutputKind::spendable;
  o.amount = amount;
  o.script.assign(to.pk.begin(), to.pk.end());
  return o;
}

TxOutput data_output(Bytes payload) {
  if (payload.size() > kMaxDataBytes)
    fail(Errc::config_invalid, "data output exceeds 80 bytes");
  TxOutput o;
  o.kind = OutputKind::data;
  o.amount = 0;
  o.script = std::move(payload);
  return o;
}

Transaction make_coinbase(const KeyPair& miner, std::uint64_t amount,
                          const std::vector<Digest>& votes) {
  Transaction tx;
  tx.coinbase = true;
  tx.outputs.push_back(spend_output(miner, amount));
  if (!votes.empty()) {
    Bytes script = vote_tag();
    for (const auto& v : votes) script.insert(script.end(), v.b.begin(), v.b.end());
    if (script.size() > kMaxDataBytes)
      fail(Errc::config_invalid, "too many votes for one coinbase data output");
    tx.outputs.push_back(TxOutput{OutputKind::data, 0, std::move(script)});
  }
  return tx;
}

}  // namespace redact::ledger
