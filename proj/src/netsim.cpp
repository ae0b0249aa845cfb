// Round-based network simulator: scheduling, adversary strategies, trace
// capture, the empirical property checkers, trace audits, and the scripted
// attack scenarios.

#include "redact/netsim.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <unordered_set>
#include <utility>
#include <variant>

namespace redact::sim {

using nlohmann::json;
using node::CandidateMsg;
using node::ChainMsg;
using node::Message;

// ── signatures ────────────────────────────────────────────────────────────────

namespace {

Sig128 fold_u64(Sig128 acc, std::uint64_t v) {
  std::uint64_t sa = acc.a ^ v;
  acc.a = splitmix64(sa);
  std::uint64_t sb = acc.b ^ acc.a ^ 0x9e3779b97f4a7c15ULL;
  acc.b = splitmix64(sb);
  return acc;
}

Sig128 fold_bytes(Sig128 acc, const Bytes& data) {
  std::size_t i = 0;
  for (; i + 8 <= data.size(); i += 8) acc = fold_u64(acc, read_u64_le(data.data() + i));
  if (i < data.size()) {
    std::uint64_t tail = 0;
    for (std::size_t j = i; j < data.size(); ++j)
      tail |= std::uint64_t(data[j]) << (8 * (j - i));
    acc = fold_u64(acc, tail);
  }
  return fold_u64(acc, data.size());
}

std::uint64_t entry_hash_of(const Bytes& entry) {
  Sig128 s = fold_bytes(Sig128{0x0123456789abcdefULL, 0xfedcba9876543210ULL}, entry);
  return s.a ^ s.b;
}

Sig128 fold_block(Sig128 acc, const Block& b) {
  acc = fold_digest(acc, b.s);
  acc = fold_u64(acc, b.ctr);
  acc = fold_u64(acc, b.x.entries.size());
  for (const Bytes& e : b.x.entries) acc = fold_bytes(acc, e);
  acc = fold_u64(acc, b.x.votes.size());
  for (const Digest& v : b.x.votes) acc = fold_digest(acc, v);
  acc = fold_u64(acc, b.y.segments.size());
  for (const Digest& seg : b.y.segments) acc = fold_digest(acc, seg);
  return acc;
}

Sig128 message_sig(const Message& m) {
  if (const auto* cm = std::get_if<ChainMsg>(&m)) {
    Sig128 s = fold_u64(Sig128{}, 0xC0DEC0DEULL);
    for (const Block& b : cm->chain.blocks) s = fold_block(s, b);
    return s;
  }
  const auto& cand = std::get<CandidateMsg>(m);
  Sig128 s = fold_u64(Sig128{}, 0xCA4D1DA7ULL);
  s = fold_u64(s, cand.target_height);
  s = fold_u64(s, cand.entries.size());
  for (const Bytes& e : cand.entries) s = fold_bytes(s, e);
  return fold_digest(s, cand.declared_digest);
}

constexpr std::uint64_t kSeedGenesis = 0x67656e65ULL;
constexpr std::uint64_t kSeedNode = 0x6e6f6465ULL;
constexpr std::uint64_t kSeedDelay = 0x64656c61ULL;
constexpr std::uint64_t kSeedEnv = 0x656e7672ULL;
constexpr std::uint64_t kSeedJunk = 0x6a756e6bULL;
constexpr std::uint64_t kSeedSpam = 0x7370616dULL;
constexpr std::uint64_t kSeedScenario = 0x7363656eULL;

}  // namespace

Sig128 fold_digest(Sig128 acc, const Digest& d) {
  for (std::size_t off = 0; off < 32; off += 8)
    acc = fold_u64(acc, read_u64_le(d.b.data() + off));
  return acc;
}

// ── the simulator ─────────────────────────────────────────────────────────────

namespace {

struct Sim {
  SimConfig cfg;
  AdversarySpec adv;
  SimTrace t;

  std::vector<node::NodeState> nodes;
  std::vector<char> corrupt;
  std::vector<char> tampered;  // unapproved_edit: fork already created
  std::vector<std::vector<std::vector<Message>>> inbox;        // [round][node]
  std::vector<std::vector<std::vector<std::size_t>>> rec_idx;  // message record indexes
  std::unordered_map<Sig128, Digest, Sig128Hash> digest_memo;
  Chain genesis;
  std::size_t feed_ttl = 0;

  Sim(const SimConfig& c, const AdversarySpec& a) : cfg(c), adv(a) {}

  void validate() const;
  void init();
  void run();

  void do_round(std::size_t r);
  void honest_step(std::size_t i, std::size_t r, node::RoundInput& in);
  void unapproved_step(std::size_t i, std::size_t r, node::RoundInput& in);
  void spam_step(std::size_t i, std::size_t r, node::RoundInput& in);
  void finish_node_round(std::size_t i, std::size_t r, const node::Outbound& out);
  void broadcast(std::size_t i, std::size_t r, const Message& m);
  void inject_white_box(std::size_t r);
  void reset_node(std::size_t i);

  std::vector<Bytes> collect_env(std::size_t i, std::size_t r);
  std::vector<node::EditRequest> collect_script(std::size_t i, std::size_t r);

  Digest cached_block_digest(const Block& b);
  void rebuild_snapshot(std::size_t i, std::size_t r);
};

void Sim::validate() const {
  if (cfg.n_nodes < 1 || cfg.n_nodes > 256)
    fail(Errc::config_invalid, "node count must be within 1..256");
  if (cfg.n_corrupt >= cfg.n_nodes)
    fail(Errc::config_invalid, "at least one node must stay honest");
  if (cfg.rounds < 1 || cfg.rounds > 1'000'000)
    fail(Errc::config_invalid, "round count must be within 1..1000000");
  if (cfg.q < 1) fail(Errc::config_invalid, "mining attempts per round must be positive");
  if (cfg.max_delay < 1) fail(Errc::config_invalid, "delivery delay bound must be >= 1");
  if (adv.max_delay < 1 || adv.max_delay > cfg.max_delay)
    fail(Errc::config_invalid, "adversary delay bound must be within 1..max_delay");
  if (cfg.difficulty.is_zero()) fail(Errc::config_invalid, "difficulty target is zero");
  check_policy_params(cfg.params);
  if (cfg.env_entry_every && cfg.env_entry_bytes < 1)
    fail(Errc::config_invalid, "environment entries must carry at least one byte");
  if (adv.white_box_node != SIZE_MAX) {
    if (adv.white_box_node >= cfg.n_nodes)
      fail(Errc::config_invalid, "white-box node id out of range");
    if (adv.white_box_height < 2)
      fail(Errc::config_invalid, "white-box target height must be >= 2");
  }
  for (const CorruptionEvent& ev : adv.schedule)
    if (ev.node >= cfg.n_nodes || ev.round >= cfg.rounds)
      fail(Errc::config_invalid, "corruption event outside the simulation");
  for (const EditScriptEntry& se : cfg.edit_script)
    if (se.node >= cfg.n_nodes)
      fail(Errc::config_invalid, "edit script names a node outside the simulation");
}

void Sim::init() {
  t.cfg = cfg;
  t.adv = adv;

  GenesisConfig g;
  g.payload.entries.push_back(Rng(derive_seed(cfg.master_seed, kSeedGenesis)).bytes(32));
  genesis = make_chain(g, cfg.difficulty);

  nodes.reserve(cfg.n_nodes);
  corrupt.assign(cfg.n_nodes, 0);
  tampered.assign(cfg.n_nodes, 0);
  for (std::size_t i = 0; i < cfg.n_nodes; ++i) {
    nodes.push_back(node::make_node(i, cfg.mode, cfg.params,
                                    derive_seed(cfg.master_seed, kSeedNode, i), genesis));
    corrupt[i] = i >= cfg.n_nodes - cfg.n_corrupt;
    if (corrupt[i] && adv.strategy == Strategy::malicious_candidate)
      nodes[i].endorsement = node::EndorsementRule::endorse_all;
  }

  inbox.assign(cfg.rounds + cfg.max_delay + 2,
               std::vector<std::vector<Message>>(cfg.n_nodes));
  rec_idx.assign(cfg.rounds + cfg.max_delay + 2,
                 std::vector<std::vector<std::size_t>>(cfg.n_nodes));
  t.snaps.assign(cfg.rounds, std::vector<Snapshot>(cfg.n_nodes));
  t.stats.assign(cfg.rounds, std::vector<NodeRoundStats>(cfg.n_nodes));

  feed_ttl = 4 * std::size_t(cfg.params.k) + 4 * cfg.max_delay + 16;
}

void Sim::reset_node(std::size_t i) {
  nodes[i] = node::make_node(i, cfg.mode, cfg.params,
                             derive_seed(cfg.master_seed, kSeedNode, i), genesis);
  tampered[i] = 0;
  if (corrupt[i] && adv.strategy == Strategy::malicious_candidate)
    nodes[i].endorsement = node::EndorsementRule::endorse_all;
}

Digest Sim::cached_block_digest(const Block& b) {
  Sig128 key = fold_block(fold_u64(Sig128{}, 0xB10CULL), b);
  auto it = digest_memo.find(key);
  if (it != digest_memo.end()) return it->second;
  Digest d = block_digest(b);
  digest_memo.emplace(key, d);
  return d;
}

void Sim::rebuild_snapshot(std::size_t i, std::size_t r) {
  const Chain& c = nodes[i].chain;
  Snapshot& sn = t.snaps[r][i];
  sn.corrupted = corrupt[i] != 0;
  sn.digests.resize(c.length());
  sn.sigs.resize(c.length());
  Sig128 acc{};
  for (std::size_t h = 0; h < c.length(); ++h) {
    const Block& b = c.blocks[h];
    Digest d = cached_block_digest(b);
    sn.digests[h] = d;
    acc = fold_digest(acc, d);
    sn.sigs[h] = acc;
    if (!t.blocks.count(d)) {
      t.blocks.emplace(d, b);
      std::vector<std::uint64_t> hs;
      hs.reserve(b.x.entries.size());
      for (const Bytes& e : b.x.entries) hs.push_back(entry_hash_of(e));
      t.entry_hashes.emplace(d, std::move(hs));
    }
  }
}

std::vector<Bytes> Sim::collect_env(std::size_t i, std::size_t r) {
  std::vector<Bytes> out;
  if (!cfg.env_entry_every || t.env.empty()) return out;
  std::unordered_set<std::uint64_t> contained;
  for (const Block& b : nodes[i].chain.blocks)
    for (const Bytes& e : b.x.entries) contained.insert(entry_hash_of(e));
  for (const EnvRecord& rec : t.env) {
    if (rec.issue_round + feed_ttl <= r) continue;  // stop nagging, assume settled
    if (contained.count(rec.entry_hash)) continue;
    out.push_back(rec.entry);
  }
  return out;
}

std::vector<node::EditRequest> Sim::collect_script(std::size_t i, std::size_t r) {
  std::vector<node::EditRequest> reqs;
  for (const EditScriptEntry& se : cfg.edit_script) {
    if (se.round != r || se.node != i) continue;
    if (se.target_height < 2 || se.target_height > nodes[i].chain.length()) continue;
    const Block& b = nodes[i].chain.at_height(se.target_height);
    node::EditRequest req;
    req.target_height = se.target_height;
    req.entries = b.x.entries;
    std::vector<std::size_t> idxs = se.zero_entries;
    if (idxs.empty())
      for (std::size_t ix = 0; ix < req.entries.size(); ++ix) idxs.push_back(ix);
    Rng jr(derive_seed(cfg.master_seed ^ kSeedJunk, r, se.target_height));
    for (std::size_t ix : idxs) {
      if (ix >= req.entries.size()) continue;
      Bytes& e = req.entries[ix];
      if (se.junk_entries) {
        e = jr.bytes(std::max<std::size_t>(e.size(), 8));
        e[0] = 0xEE;  // guaranteed additive change: neither zero nor an erasure
      } else {
        std::fill(e.begin(), e.end(), std::uint8_t(0));
      }
    }
    reqs.push_back(std::move(req));
  }
  return reqs;
}

void Sim::broadcast(std::size_t i, std::size_t r, const Message& m) {
  Sig128 sig = message_sig(m);
  std::uint8_t kind = std::holds_alternative<ChainMsg>(m) ? 0 : 1;
  if (corrupt[i] && kind == 1)
    t.adversary_candidates.push_back(std::get<CandidateMsg>(m).declared_digest);
  Rng drng(derive_seed(cfg.master_seed ^ kSeedDelay, r, i));
  for (std::size_t j = 0; j < cfg.n_nodes; ++j) {
    if (j == i) continue;
    std::size_t d = adv.randomize_delays ? 1 + drng.next_below(adv.max_delay) : adv.max_delay;
    std::size_t dr = r + d;
    if (dr >= cfg.rounds) continue;  // would land after the last round
    inbox[dr][j].push_back(m);
    rec_idx[dr][j].push_back(t.messages.size());
    t.messages.push_back({std::uint32_t(r), std::uint32_t(dr), std::uint16_t(i),
                          std::uint16_t(j), corrupt[i] == 0, kind, sig, Sig128{}});
  }
}

void Sim::finish_node_round(std::size_t i, std::size_t r, const node::Outbound& out) {
  for (const node::AppliedRewrite& ar : out.redactions_applied)
    t.redactions.push_back({r, i, ar.token});
  if (out.mined) {
    const Block& head = nodes[i].chain.blocks.back();
    t.miner_of[old_state_link(head)] = MinerMark{int(i), corrupt[i] != 0};
  }
  for (const Message& m : out.messages) broadcast(i, r, m);

  NodeRoundStats& st = t.stats[r][i];
  st.chain_len = nodes[i].chain.length();
  st.corrupted = corrupt[i] != 0;
  st.mined = out.mined;
  st.adopted = out.adopted;
  st.attempts = out.attempts_used;
  st.votes_cast = std::uint32_t(out.votes_cast.size());
  st.redactions_applied = std::uint32_t(out.redactions_applied.size());
  st.proposals_made = std::uint32_t(out.proposals_made);
  st.dropped_messages = std::uint32_t(out.dropped_messages);
  st.pool_size = std::uint32_t(nodes[i].pool.size());

  rebuild_snapshot(i, r);
}

void Sim::honest_step(std::size_t i, std::size_t r, node::RoundInput& in) {
  in.env_entries = collect_env(i, r);
  in.edit_requests = collect_script(i, r);
  node::Outbound out = node::step_round(nodes[i], in, cfg.difficulty, cfg.q);
  finish_node_round(i, r, out);
}

void Sim::unapproved_step(std::size_t i, std::size_t r, node::RoundInput& in) {
  if (!tampered[i]) {
    // Behave until the chain is deep enough, then rewrite a stable block in
    // place without any vote and advertise the result.
    node::Outbound out = node::step_round(nodes[i], in, cfg.difficulty, cfg.q);
    bool due = r >= adv.tamper_round &&
               nodes[i].chain.length() >= std::size_t(cfg.params.k) + 3;
    if (due) {
      Block& b = nodes[i].chain.at_height(2);
      if (b.x.entries.empty()) b.x.entries.push_back(Bytes(16, 0xEE));
      for (Bytes& e : b.x.entries) {
        if (e.empty()) e.resize(8);
        std::fill(e.begin(), e.end(), std::uint8_t(0xEE));
      }
      tampered[i] = 1;
      t.adversary_blocks.push_back(block_digest(b));
      out.messages.push_back(ChainMsg{nodes[i].chain});
    }
    finish_node_round(i, r, out);
    return;
  }
  // Committed to the forged fork: ignore deliveries, keep mining on it, and
  // keep advertising it in the hope somebody adopts.
  node::Outbound out;
  BlockPayload payload;
  payload.entries.push_back(Rng(derive_seed(nodes[i].miner_seed, r, 0xEE)).bytes(24));
  auto mined = mine_block(nodes[i].chain, payload, cfg.q,
                          derive_seed(nodes[i].miner_seed, r));
  out.attempts_used = mined ? mined->attempts : cfg.q;
  if (mined) {
    nodes[i].chain.blocks.push_back(std::move(mined->block));
    out.mined = true;
    t.adversary_blocks.push_back(block_digest(nodes[i].chain.blocks.back()));
    out.messages.push_back(ChainMsg{nodes[i].chain});
  }
  finish_node_round(i, r, out);
}

void Sim::spam_step(std::size_t i, std::size_t r, node::RoundInput& in) {
  // Track the honest frontier (q = 0: adopt and pool, never mine), then
  // flood proposals: junk that nobody can reconstruct, plus — against
  // announcement-gated chains — a well-formed but never-announced erasure.
  node::Outbound out = node::step_round(nodes[i], in, cfg.difficulty, 0);
  out.messages.clear();
  Rng rng(derive_seed(cfg.master_seed ^ kSeedSpam, r, i));
  for (std::size_t s = 0; s < adv.spam_per_round; ++s) {
    CandidateMsg junk;
    junk.target_height = 2 + rng.next_below(std::max<std::size_t>(nodes[i].chain.length(), 3));
    junk.entries.push_back(rng.bytes(16));
    Bytes d = rng.bytes(32);
    std::copy(d.begin(), d.end(), junk.declared_digest.b.begin());
    out.messages.push_back(junk);
    t.adversary_candidates.push_back(junk.declared_digest);
  }
  if (cfg.mode == Mode::ledger &&
      nodes[i].chain.length() > std::size_t(cfg.params.k) + 2) {
    std::size_t span = nodes[i].chain.length() - cfg.params.k - 2;
    std::size_t h = 2 + std::size_t(rng.next_below(span));
    try {
      const Block& tb = nodes[i].chain.at_height(h);
      BlockPayload np;
      np.entries = tb.x.entries;
      for (Bytes& e : np.entries) std::fill(e.begin(), e.end(), std::uint8_t(0));
      np.votes = tb.x.votes;
      if (np.entries != tb.x.entries) {
        CandidateBlock cand = propose_edit(nodes[i].chain, h, np, cfg.params.k, cfg.mode);
        out.messages.push_back(node::candidate_to_msg(cand));
        t.adversary_candidates.push_back(candidate_digest(cand));
      }
    } catch (const Error&) {
      // nothing worth spamming this round
    }
  }
  finish_node_round(i, r, out);
}

void Sim::inject_white_box(std::size_t r) {
  std::size_t i = adv.white_box_node;
  if (nodes[i].chain.length() < adv.white_box_height + 1) return;
  Block& b = nodes[i].chain.at_height(adv.white_box_height);
  if (b.x.entries.empty()) b.x.entries.push_back(Bytes(16, 0xC3));
  for (Bytes& e : b.x.entries) {
    if (e.empty()) e.resize(8);
    std::fill(e.begin(), e.end(), std::uint8_t(0xC3));
  }
  t.adversary_blocks.push_back(block_digest(b));
  (void)r;
}

void Sim::do_round(std::size_t r) {
  for (const CorruptionEvent& ev : adv.schedule) {
    if (ev.round != r) continue;
    bool was = corrupt[ev.node] != 0;
    if (was == ev.corrupt) continue;
    corrupt[ev.node] = ev.corrupt;
    if (!ev.corrupt) reset_node(ev.node);
    if (ev.corrupt && adv.strategy == Strategy::malicious_candidate)
      nodes[ev.node].endorsement = node::EndorsementRule::endorse_all;
    t.corruption_applied.push_back(ev);
  }

  if (adv.white_box_node < cfg.n_nodes && r == adv.white_box_round) inject_white_box(r);

  if (cfg.env_entry_every && r > 0 && r % cfg.env_entry_every == 0) {
    Bytes e = Rng(derive_seed(cfg.master_seed ^ kSeedEnv, r)).bytes(cfg.env_entry_bytes);
    e[0] |= 0x01;  // erasing it is always a real change
    t.env.push_back({r, e, entry_hash_of(e)});
  }

  for (std::size_t i = 0; i < cfg.n_nodes; ++i) {
    const auto& idxs = rec_idx[r][i];
    for (std::size_t m = 0; m < idxs.size(); ++m)
      t.messages[idxs[m]].delivered_sig = message_sig(inbox[r][i][m]);
  }

  for (std::size_t i = 0; i < cfg.n_nodes; ++i) {
    node::RoundInput in;
    in.round = r;
    in.inbox = std::move(inbox[r][i]);
    if (!corrupt[i]) {
      honest_step(i, r, in);
      continue;
    }
    switch (adv.strategy) {
      case Strategy::none: {
        node::Outbound idle;  // struck node: consume deliveries, do nothing
        finish_node_round(i, r, idle);
        break;
      }
      case Strategy::delay_only:
      case Strategy::malicious_candidate:
        honest_step(i, r, in);
        break;
      case Strategy::unapproved_edit:
        unapproved_step(i, r, in);
        break;
      case Strategy::spam:
        spam_step(i, r, in);
        break;
    }
  }
}

void Sim::run() {
  for (std::size_t r = 0; r < cfg.rounds; ++r) do_round(r);
  t.final_nodes = std::move(nodes);
}

}  // namespace

SimTrace run_simulation(const SimConfig& cfg, const AdversarySpec& adv) {
  Sim sim(cfg, adv);
  sim.validate();
  sim.init();
  sim.run();
  return std::move(sim.t);
}

Chain chain_of(const SimTrace& trace, const Snapshot& snap) {
  Chain c;
  c.difficulty = trace.cfg.difficulty;
  c.blocks.reserve(snap.digests.size());
  for (const Digest& d : snap.digests) c.blocks.push_back(trace.blocks.at(d));
  return c;
}

// ── property checkers ─────────────────────────────────────────────────────────

GrowthReport check_chain_growth(const SimTrace& trace, double tau, std::size_t window) {
  GrowthReport rep;
  rep.tau = tau;
  rep.window = window;
  rep.min_rate = 1e300;
  std::size_t rounds = trace.snaps.size();
  if (window == 0 || rounds <= window) {
    rep.min_rate = 0;
    return rep;
  }
  for (std::size_t r = 0; r + window < rounds; ++r) {
    std::size_t max1 = 0, min2 = SIZE_MAX;
    bool any1 = false, any2 = false;
    for (std::size_t i = 0; i < trace.cfg.n_nodes; ++i) {
      const Snapshot& s1 = trace.snaps[r][i];
      if (!s1.corrupted) {
        max1 = std::max(max1, s1.length());
        any1 = true;
      }
      const Snapshot& s2 = trace.snaps[r + window][i];
      if (!s2.corrupted) {
        min2 = std::min(min2, s2.length());
        any2 = true;
      }
    }
    if (!any1 || !any2) continue;
    double rate = (double(min2) - double(max1)) / double(window);
    rep.min_rate = std::min(rep.min_rate, rate);
    ++rep.windows_checked;
  }
  if (!rep.windows_checked) rep.min_rate = 0;
  rep.pass = rep.windows_checked > 0 && rep.min_rate >= tau - 1e-12;
  return rep;
}

QualityReport check_chain_quality(const SimTrace& trace, double mu, std::size_t window) {
  QualityReport rep;
  rep.mu = mu;
  rep.window = window;
  if (trace.snaps.empty() || window == 0) return rep;
  const auto& last = trace.snaps.back();
  for (std::size_t i = 0; i < trace.cfg.n_nodes; ++i) {
    const Snapshot& sn = last[i];
    if (sn.corrupted || sn.length() < 2) continue;
    std::vector<int> bad;
    bad.reserve(sn.length() - 1);
    for (std::size_t h = 2; h <= sn.length(); ++h) {
      const Block& b = trace.blocks.at(sn.digests[h - 1]);
      auto it = trace.miner_of.find(old_state_link(b));
      bad.push_back(it == trace.miner_of.end() ? 1 : (it->second.corrupt ? 1 : 0));
    }
    std::size_t w = std::min(window, bad.size());
    std::size_t sum = 0;
    for (std::size_t j = 0; j < w; ++j) sum += std::size_t(bad[j]);
    rep.max_ratio = std::max(rep.max_ratio, double(sum) / double(w));
    ++rep.windows_checked;
    for (std::size_t j = w; j < bad.size(); ++j) {
      sum += std::size_t(bad[j]) - std::size_t(bad[j - w]);
      rep.max_ratio = std::max(rep.max_ratio, double(sum) / double(w));
      ++rep.windows_checked;
    }
  }
  rep.pass = rep.windows_checked > 0 && rep.max_ratio <= mu + 1e-12;
  return rep;
}

namespace {

struct Uniq {
  const Snapshot* sn = nullptr;
  std::size_t min_round = 0, max_round = 0;
  std::size_t node_at_min = 0, node_at_max = 0;
};

std::vector<Uniq> unique_honest_snaps(const SimTrace& trace, std::size_t exclude) {
  std::unordered_map<Sig128, std::size_t, Sig128Hash> index;
  std::vector<Uniq> out;
  for (std::size_t r = 0; r < trace.snaps.size(); ++r) {
    for (std::size_t i = 0; i < trace.cfg.n_nodes; ++i) {
      const Snapshot& sn = trace.snaps[r][i];
      if (sn.corrupted || i == exclude || sn.digests.empty()) continue;
      Sig128 key = sn.full_sig();
      auto [it, fresh] = index.emplace(key, out.size());
      if (fresh) {
        out.push_back({&sn, r, r, i, i});
      } else {
        Uniq& u = out[it->second];
        u.max_round = r;
        u.node_at_max = i;
      }
    }
  }
  return out;
}

// Memoized "does this chain's tally accept this token".
struct AcceptCache {
  const SimTrace& trace;
  std::unordered_map<Sig128, Chain, Sig128Hash> chains;
  std::map<std::pair<Sig128, Digest>, bool> verdicts;

  bool accepted(const Uniq& u, const Digest& token) {
    Sig128 sig = u.sn->full_sig();
    auto key = std::make_pair(sig, token);
    auto it = verdicts.find(key);
    if (it != verdicts.end()) return it->second;
    auto [cit, fresh] = chains.try_emplace(sig);
    if (fresh) cit->second = chain_of(trace, *u.sn);
    bool ok = evaluate_vote_token(cit->second, token, trace.cfg.params).verdict ==
              Verdict::accept;
    verdicts.emplace(key, ok);
    return ok;
  }
};

PrefixReport run_prefix_check(const SimTrace& trace, std::uint32_t k,
                              std::size_t exclude, bool editable) {
  PrefixReport rep;
  std::vector<Uniq> uniq = unique_honest_snaps(trace, exclude);
  AcceptCache cache{trace, {}, {}};
  constexpr std::size_t kMaxStored = 100;

  auto record = [&](const Uniq& u1, const Uniq& u2, std::size_t height,
                    std::string detail) {
    ++rep.violations_total;
    if (rep.violations.size() < kMaxStored)
      rep.violations.push_back({u1.node_at_min, u1.min_round, u2.node_at_max,
                                u2.max_round, height, std::move(detail)});
  };

  for (const Uniq& u1 : uniq) {
    std::size_t l1 = u1.sn->length();
    if (l1 <= k) continue;  // pruned prefix is empty: trivially satisfied
    std::size_t cut = l1 - k;
    for (const Uniq& u2 : uniq) {
      if (u1.min_round > u2.max_round) continue;  // no ordered (r1 <= r2) pair
      ++rep.pairs_checked;
      const Snapshot& s2 = *u2.sn;
      if (s2.length() < cut) {
        record(u1, u2, 0, "later chain is shorter than the earlier chain pruned by k");
        continue;
      }
      if (u1.sn->sigs[cut - 1] == s2.sigs[cut - 1]) continue;  // literal prefix
      ++rep.mismatched_pairs;
      std::size_t first_diff = 0;
      for (std::size_t j = 1; j <= cut; ++j) {
        if (u1.sn->digests[j - 1] != s2.digests[j - 1]) {
          first_diff = j;
          break;
        }
      }
      if (!editable) {
        record(u1, u2, first_diff, "pruned prefixes diverge");
        continue;
      }
      bool bad = false;
      for (std::size_t j = first_diff; j <= cut && j != 0; ++j) {
        const Digest& d1 = u1.sn->digests[j - 1];
        const Digest& d2 = s2.digests[j - 1];
        if (d1 == d2) continue;
        bool literal = cache.accepted(u2, d2);
        bool explained = literal || cache.accepted(u1, d1);
        if (!explained) {
          record(u1, u2, j,
                 "differing block carries no accepted rewrite tally on its own chain");
          bad = true;
          break;
        }
        if (!literal) ++rep.laggard_passes;
      }
      (void)bad;
    }
  }
  rep.pass = rep.violations_total == 0;
  return rep;
}

}  // namespace

PrefixReport check_editable_common_prefix(const SimTrace& trace, std::uint32_t k,
                                          std::size_t exclude_node) {
  return run_prefix_check(trace, k, exclude_node, true);
}

PrefixReport check_plain_common_prefix(const SimTrace& trace, std::uint32_t k,
                                       std::size_t exclude_node) {
  return run_prefix_check(trace, k, exclude_node, false);
}

// ── audits ────────────────────────────────────────────────────────────────────

DeliveryReport audit_delivery(const SimTrace& trace) {
  DeliveryReport rep;
  for (const MessageRecord& m : trace.messages) {
    ++rep.messages;
    std::size_t delay = m.deliver_round - m.send_round;
    if (m.sender_honest && (delay < 1 || delay > trace.adv.max_delay)) ++rep.late;
    if (m.sent_sig != m.delivered_sig) ++rep.mismatched;
  }
  rep.pass = rep.late == 0 && rep.mismatched == 0;
  return rep;
}

LivenessReport audit_liveness(const SimTrace& trace) {
  LivenessReport rep;
  rep.entries = trace.env.size();
  if (trace.env.empty()) {
    rep.all_confirmed = true;
    return rep;
  }
  std::size_t rounds = trace.snaps.size();
  std::size_t n = trace.cfg.n_nodes;
  std::uint32_t k = trace.cfg.params.k;

  std::vector<char> audited(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < rounds && audited[i]; ++r)
      if (trace.stats[r][i].corrupted) audited[i] = 0;

  std::unordered_map<std::uint64_t, std::size_t> env_index;
  for (std::size_t e = 0; e < trace.env.size(); ++e)
    env_index.emplace(trace.env[e].entry_hash, e);

  // first_seen[i][e]: first round entry e is k-deep in node i's chain
  std::vector<std::vector<std::size_t>> first_seen(
      n, std::vector<std::size_t>(trace.env.size(), SIZE_MAX));

  for (std::size_t i = 0; i < n; ++i) {
    if (!audited[i]) continue;
    std::size_t prev_kd = 0;
    const Snapshot* prev = nullptr;
    for (std::size_t r = 0; r < rounds; ++r) {
      const Snapshot& sn = trace.snaps[r][i];
      std::size_t kd = sn.length() > k ? sn.length() - k : 0;
      std::size_t start = 1;
      if (prev && prev_kd >= 1 && kd >= prev_kd &&
          sn.sigs[prev_kd - 1] == prev->sigs[prev_kd - 1])
        start = prev_kd + 1;  // stable frontier: only scan the newly buried part
      for (std::size_t h = start; h <= kd; ++h) {
        for (std::uint64_t eh : trace.entry_hashes.at(sn.digests[h - 1])) {
          auto it = env_index.find(eh);
          if (it == env_index.end()) continue;
          std::size_t& slot = first_seen[i][it->second];
          if (slot == SIZE_MAX) slot = r;
        }
      }
      prev = &sn;
      prev_kd = kd;
    }
  }

  for (std::size_t e = 0; e < trace.env.size(); ++e) {
    bool everywhere = false;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!audited[i]) continue;
      if (first_seen[i][e] == SIZE_MAX) {
        everywhere = false;
        break;
      }
      everywhere = true;
      worst = std::max(worst, first_seen[i][e] - trace.env[e].issue_round);
    }
    if (everywhere) {
      ++rep.confirmed;
      rep.max_rounds_to_confirm = std::max(rep.max_rounds_to_confirm, worst);
    }
  }
  rep.all_confirmed = rep.confirmed == rep.entries;
  return rep;
}

ApplicationReport audit_redaction_application(const SimTrace& trace) {
  ApplicationReport rep;
  std::size_t rounds = trace.snaps.size();
  std::size_t n = trace.cfg.n_nodes;
  std::map<Digest, std::size_t> first_event;
  for (const RedactionEvent& ev : trace.redactions)
    if (!first_event.count(ev.token)) first_event.emplace(ev.token, ev.round);
  rep.tokens = first_event.size();

  for (const auto& [token, r0] : first_event) {
    std::size_t first_min = SIZE_MAX, first_max = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool honest_since = true;
      for (std::size_t r = r0; r < rounds && honest_since; ++r)
        if (trace.stats[r][i].corrupted) honest_since = false;
      if (!honest_since) continue;
      std::size_t found = SIZE_MAX;
      for (std::size_t r = r0 >= 2 ? r0 - 2 : 0; r < rounds && found == SIZE_MAX; ++r) {
        const Snapshot& sn = trace.snaps[r][i];
        for (const Digest& d : sn.digests) {
          if (d == token) {
            found = r;
            break;
          }
        }
      }
      if (found == SIZE_MAX) {
        ++rep.never_held;
      } else {
        first_min = std::min(first_min, found);
        first_max = std::max(first_max, found);
      }
    }
    if (first_min != SIZE_MAX)
      rep.max_spread = std::max(rep.max_spread, first_max - first_min);
  }
  rep.pass = rep.never_held == 0 && rep.max_spread <= trace.adv.max_delay + 2;
  return rep;
}

// ── export ────────────────────────────────────────────────────────────────────

std::string trace_to_jsonl(const SimTrace& trace) {
  std::string out;
  json hdr = {
      {"type", "header"},
      {"scenario", trace.cfg.scenario},
      {"mode", mode_name(trace.cfg.mode)},
      {"n_nodes", trace.cfg.n_nodes},
      {"n_corrupt", trace.cfg.n_corrupt},
      {"rounds", trace.cfg.rounds},
      {"q", trace.cfg.q},
      {"max_delay", trace.adv.max_delay},
      {"difficulty_hex", trace.cfg.difficulty.hex()},
      {"master_seed", trace.cfg.master_seed},
      {"k", trace.cfg.params.k},
      {"ell", trace.cfg.params.ell},
      {"rho", trace.cfg.params.rho},
  };
  out += hdr.dump();
  out += '\n';
  for (std::size_t r = 0; r < trace.snaps.size(); ++r) {
    json nodes = json::array();
    for (std::size_t i = 0; i < trace.cfg.n_nodes; ++i) {
      const Snapshot& sn = trace.snaps[r][i];
      const NodeRoundStats& st = trace.stats[r][i];
      nodes.push_back({
          {"id", i},
          {"len", sn.length()},
          {"head_hex", sn.digests.empty() ? std::string() : sn.digests.back().hex()},
          {"corrupted", sn.corrupted},
          {"mined", st.mined},
          {"adopted", st.adopted},
          {"attempts", st.attempts},
          {"votes", st.votes_cast},
          {"redactions", st.redactions_applied},
          {"proposals", st.proposals_made},
          {"dropped", st.dropped_messages},
          {"pool", st.pool_size},
      });
    }
    json line = {{"type", "round"}, {"round", r}, {"nodes", std::move(nodes)}};
    out += line.dump();
    out += '\n';
  }
  json reds = json::array();
  for (const RedactionEvent& ev : trace.redactions)
    reds.push_back({{"round", ev.round}, {"node", ev.node}, {"token_hex", ev.token.hex()}});
  json summary = {
      {"type", "summary"},
      {"messages", trace.messages.size()},
      {"env_entries", trace.env.size()},
      {"redaction_events", std::move(reds)},
      {"adversary_blocks", trace.adversary_blocks.size()},
      {"adversary_candidates", trace.adversary_candidates.size()},
      {"corruption_events", trace.corruption_applied.size()},
  };
  out += summary.dump();
  out += '\n';
  return out;
}

// ── ledger example builder ────────────────────────────────────────────────────

namespace {

void append_ledger_block(ledger::LedgerChain& chain, std::vector<ledger::Transaction> txs,
                         std::uint64_t seed) {
  ledger::TxList list;
  list.txs = std::move(txs);
  auto mined = ledger::mine_ledger_block(chain, std::move(list), chain.length() + 1,
                                         4'000'000, seed);
  if (!mined) fail(Errc::config_invalid, "mining budget exhausted building the example chain");
  chain.blocks.push_back(std::move(*mined));
}

}  // namespace

LedgerExample build_ledger_example(std::uint64_t seed, const PolicyParams& params,
                                   bool perform_redaction) {
  check_policy_params(params);
  LedgerExample ex;
  ex.victim = ledger::keypair_from_seed(derive_seed(seed, 0xA1));
  ex.attacker = ledger::keypair_from_seed(derive_seed(seed, 0xA2));
  ex.miner = ledger::keypair_from_seed(derive_seed(seed, 0xA3));

  ledger::Transaction gcb;
  gcb.coinbase = true;
  gcb.outputs = {ledger::spend_output(ex.victim, 10'000),
                 ledger::spend_output(ex.attacker, 6'000),
                 ledger::spend_output(ex.miner, 1'000)};
  ledger::TxList genesis_txs;
  genesis_txs.txs = {gcb};
  ledger::LedgerChain chain = ledger::make_ledger_chain(Target::pow2(252), params,
                                                        1'000, std::move(genesis_txs));
  Digest gid = ledger::tx_id(gcb);

  // height 2: the transaction that will be rewritten — a data payload plus a
  // spendable output the attacker keeps either way
  ledger::Transaction old_tx;
  old_tx.inputs = {ledger::TxInput{gid, 0, {}}};
  Bytes secret = Rng(derive_seed(seed, 0x5EC)).bytes(48);
  secret[0] |= 0x01;
  old_tx.outputs = {ledger::data_output(secret), ledger::spend_output(ex.attacker, 9'000)};
  old_tx.inputs[0].witness = ledger::sign_spend(ex.victim, ledger::tx_id(old_tx));
  append_ledger_block(chain,
                      {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy + 1'000, {}),
                       old_tx},
                      derive_seed(seed, 0xB0, 2));
  ex.old_tx = old_tx;
  ex.target_height = 2;
  ex.old_slot = 1;

  ledger::Transaction cand = old_tx;
  std::fill(cand.outputs[0].script.begin(), cand.outputs[0].script.end(),
            std::uint8_t(0));
  ex.cand_tx = cand;

  // height 3: fee-paying announcement of (old -> cand)
  ledger::EditTx etx =
      ledger::build_edit_tx(old_tx, cand, ledger::TxInput{gid, 1, {}}, 6'000,
                            chain.min_edit_fee);
  etx.tx.inputs[0].witness = ledger::sign_spend(ex.attacker, ledger::tx_id(etx.tx));
  append_ledger_block(chain,
                      {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy + 6'000, {}),
                       etx.tx},
                      derive_seed(seed, 0xB0, 3));

  Digest token = ledger::vote_token(ledger::tx_id(old_tx), ledger::tx_id(cand));

  // k blocks bury the announcement, then the voting window, then (when the
  // rewrite is to be performed) k more blocks make the verdict stable
  for (std::uint32_t f = 0; f < params.k; ++f)
    append_ledger_block(chain, {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy, {})},
                        derive_seed(seed, 0xB0, chain.length() + 1));
  std::uint32_t need = required_votes(params);
  for (std::uint32_t w = 0; w < params.ell; ++w) {
    std::vector<Digest> votes;
    if (w < need) votes.push_back(token);
    append_ledger_block(chain,
                        {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy, votes)},
                        derive_seed(seed, 0xB0, chain.length() + 1));
  }
  if (perform_redaction) {
    for (std::uint32_t f = 0; f < params.k; ++f)
      append_ledger_block(chain,
                          {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy, {})},
                          derive_seed(seed, 0xB0, chain.length() + 1));
    if (ledger::evaluate_edit(chain, ledger::tx_id(old_tx), ledger::tx_id(cand)).verdict !=
        Verdict::accept)
      fail(Errc::config_invalid, "example edit did not reach an accepted tally");
    ledger::apply_block_redaction(chain, ex.target_height, old_tx, cand);
  }
  ex.chain = std::move(chain);
  return ex;
}

// ── attack scenarios ──────────────────────────────────────────────────────────

namespace {

std::uint64_t scenario_seed(const SimConfig& base, std::size_t idx) {
  return derive_seed(base.master_seed, kSeedScenario, idx);
}

bool honest_chains_clean(const SimTrace& tr) {
  std::unordered_set<Digest, DigestHash> advset(tr.adversary_blocks.begin(),
                                                tr.adversary_blocks.end());
  if (advset.empty()) return true;
  for (const auto& row : tr.snaps)
    for (const Snapshot& sn : row) {
      if (sn.corrupted) continue;
      for (const Digest& d : sn.digests)
        if (advset.count(d)) return false;
    }
  return true;
}

bool final_honest_chains_valid(const SimTrace& tr) {
  if (tr.snaps.empty()) return false;
  for (std::size_t i = 0; i < tr.cfg.n_nodes; ++i) {
    const Snapshot& sn = tr.snaps.back()[i];
    if (sn.corrupted) continue;
    Chain c = chain_of(tr, sn);
    bool ok = tr.cfg.mode == Mode::ext
                  ? validate_chain_ext(c, tr.cfg.params)
                  : validate_chain(c, tr.cfg.params);
    if (!ok) return false;
  }
  return true;
}

ScenarioReport scen_unapproved(const SimConfig& base) {
  ScenarioReport rep;
  rep.scenario = "unapproved-editing";
  json details = json::array();
  for (std::size_t idx = 0; idx < 8; ++idx) {
    std::uint64_t seed = scenario_seed(base, idx);
    rep.seeds.push_back(seed);
    SimConfig cfg = base;
    cfg.scenario = rep.scenario;
    cfg.master_seed = seed;
    cfg.n_nodes = std::max<std::size_t>(base.n_nodes, 6);
    cfg.n_corrupt = base.n_corrupt ? base.n_corrupt : 2;
    cfg.rounds = std::max<std::size_t>(base.rounds, 120);
    cfg.env_entry_every = base.env_entry_every ? base.env_entry_every : 3;
    if (cfg.mode == Mode::ledger) cfg.mode = Mode::single;
    AdversarySpec adv;
    adv.strategy = Strategy::unapproved_edit;
    adv.max_delay = std::max<std::size_t>(base.max_delay, 1);
    cfg.max_delay = adv.max_delay;

    SimTrace tr = run_simulation(cfg, adv);
    bool tampering = !tr.adversary_blocks.empty();
    bool clean = honest_chains_clean(tr);
    bool valid = final_honest_chains_valid(tr);
    PrefixReport pr = check_editable_common_prefix(tr, cfg.params.k);
    bool ok = tampering && clean && valid && pr.pass;
    if (ok) {
      ++rep.passes;
    } else {
      rep.failures.push_back("seed " + std::to_string(seed) +
                             (tampering ? "" : ": adversary never tampered") +
                             (clean ? "" : ": forged block reached an honest chain") +
                             (valid ? "" : ": an honest chain failed validation") +
                             (pr.pass ? "" : ": editable common prefix violated"));
    }
    details.push_back({{"seed", seed},
                       {"forged_blocks", tr.adversary_blocks.size()},
                       {"honest_chains_clean", clean},
                       {"honest_chains_valid", valid},
                       {"prefix_pairs", pr.pairs_checked},
                       {"prefix_violations", pr.violations_total}});
  }
  rep.details = details.dump();
  return rep;
}

ScenarioReport scen_dos(const SimConfig& base) {
  ScenarioReport rep;
  rep.scenario = "dos";
  json details = json::array();
  for (std::size_t idx = 0; idx < 4; ++idx) {
    std::uint64_t seed = scenario_seed(base, idx);
    rep.seeds.push_back(seed);
    std::string why;

    // Fee accounting: announcement spam is linear in paid fees.
    const std::uint64_t fee = 1'000;
    const std::size_t m = 6;
    std::uint64_t cost_m = 0, cost_2m = 0;
    bool fee_floor = false;
    try {
      ledger::KeyPair attacker = ledger::keypair_from_seed(derive_seed(seed, 1));
      ledger::KeyPair victim = ledger::keypair_from_seed(derive_seed(seed, 2));
      ledger::KeyPair miner = ledger::keypair_from_seed(derive_seed(seed, 3));
      auto build = [&](std::size_t count) -> std::uint64_t {
        ledger::Transaction gcb;
        gcb.coinbase = true;
        for (std::size_t j = 0; j < 2 * m; ++j)
          gcb.outputs.push_back(ledger::spend_output(attacker, fee));
        for (std::size_t j = 0; j < 2 * m; ++j)
          gcb.outputs.push_back(ledger::spend_output(victim, 500));
        ledger::TxList gtx;
        gtx.txs = {gcb};
        ledger::LedgerChain chain =
            ledger::make_ledger_chain(Target::pow2(252), base.params, fee, std::move(gtx));
        Digest gid = ledger::tx_id(gcb);

        std::vector<ledger::Transaction> olds, edits;
        for (std::size_t j = 0; j < count; ++j) {
          ledger::Transaction old_tx;
          old_tx.inputs = {ledger::TxInput{gid, std::uint32_t(2 * m + j), {}}};
          Bytes payload = Rng(derive_seed(seed, 0xDA7A, j)).bytes(24);
          payload[0] |= 0x01;
          old_tx.outputs = {ledger::data_output(payload),
                            ledger::spend_output(victim, 500)};
          old_tx.inputs[0].witness =
              ledger::sign_spend(victim, ledger::tx_id(old_tx));
          olds.push_back(std::move(old_tx));
        }
        std::vector<ledger::Transaction> b1{{
            ledger::make_coinbase(miner, ledger::kBlockSubsidy, {})}};
        for (const auto& o : olds) b1.push_back(o);
        append_ledger_block(chain, std::move(b1), derive_seed(seed, 0xD0, 2));

        for (std::size_t j = 0; j < count; ++j) {
          ledger::Transaction cand = olds[j];
          std::fill(cand.outputs[0].script.begin(), cand.outputs[0].script.end(),
                    std::uint8_t(0));
          ledger::EditTx etx = ledger::build_edit_tx(
              olds[j], cand, ledger::TxInput{gid, std::uint32_t(j), {}}, fee, fee);
          etx.tx.inputs[0].witness =
              ledger::sign_spend(attacker, ledger::tx_id(etx.tx));
          edits.push_back(std::move(etx.tx));
        }
        std::vector<ledger::Transaction> b2{{ledger::make_coinbase(
            miner, ledger::kBlockSubsidy + std::uint64_t(count) * fee, {})}};
        for (const auto& e : edits) b2.push_back(e);
        append_ledger_block(chain, std::move(b2), derive_seed(seed, 0xD0, 3));

        if (!ledger::validate_ledger_chain(chain))
          fail(Errc::config_invalid, "spam accounting chain failed validation");
        ledger::UtxoSet utxo = ledger::build_utxo(chain);
        std::uint64_t left = 0;
        for (std::size_t j = 0; j < 2 * m; ++j)
          if (utxo.find(ledger::OutPoint{gid, std::uint32_t(j)})) left += fee;
        return 2 * m * fee - left;
      };
      cost_m = build(m);
      cost_2m = build(2 * m);
      try {
        ledger::Transaction any_old;
        any_old.inputs = {ledger::TxInput{Digest{}, 0, {}}};
        Bytes p(24, 0x55);
        any_old.outputs = {ledger::data_output(p), ledger::spend_output(victim, 1)};
        ledger::Transaction any_cand = any_old;
        std::fill(any_cand.outputs[0].script.begin(), any_cand.outputs[0].script.end(),
                  std::uint8_t(0));
        ledger::build_edit_tx(any_old, any_cand, ledger::TxInput{Digest{}, 0, {}},
                              fee - 1, fee);
      } catch (const Error& e) {
        fee_floor = e.code() == Errc::fee_too_low;
      }
    } catch (const Error& e) {
      why += std::string(": ledger accounting failed (") + e.what() + ")";
    }
    bool linear = cost_m == m * fee && cost_2m == 2 * m * fee;
    if (!linear) why += ": announcement cost is not linear in fees";
    if (!fee_floor) why += ": fee floor not enforced";

    // Candidate flooding: honest pools stay empty, honest progress continues.
    SimConfig cfg = base;
    cfg.scenario = rep.scenario;
    cfg.master_seed = seed;
    cfg.n_nodes = std::max<std::size_t>(base.n_nodes, 6);
    cfg.n_corrupt = base.n_corrupt ? base.n_corrupt : 1;
    cfg.rounds = std::max<std::size_t>(base.rounds, 80);
    cfg.mode = Mode::ledger;
    cfg.env_entry_every = base.env_entry_every ? base.env_entry_every : 4;
    AdversarySpec adv;
    adv.strategy = Strategy::spam;
    adv.max_delay = std::max<std::size_t>(base.max_delay, 1);
    cfg.max_delay = adv.max_delay;
    SimTrace tr = run_simulation(cfg, adv);
    bool pools_empty = true, no_votes = true;
    for (const auto& row : tr.stats)
      for (std::size_t i = 0; i < cfg.n_nodes; ++i) {
        if (row[i].corrupted) continue;
        if (row[i].pool_size != 0) pools_empty = false;
        if (row[i].votes_cast != 0) no_votes = false;
      }
    bool no_redactions = tr.redactions.empty();
    GrowthReport gr = check_chain_growth(tr, 0.05, 40);
    if (!pools_empty) why += ": spam reached an honest candidate pool";
    if (!no_votes) why += ": an honest node voted for spam";
    if (!no_redactions) why += ": spam caused a rewrite";
    if (!gr.pass) why += ": chain growth stalled under flooding";

    bool ok = linear && fee_floor && pools_empty && no_votes && no_redactions && gr.pass;
    if (ok) ++rep.passes;
    else rep.failures.push_back("seed " + std::to_string(seed) + why);
    details.push_back({{"seed", seed},
                       {"cost_m", cost_m},
                       {"cost_2m", cost_2m},
                       {"fee", fee},
                       {"announcements", m},
                       {"spam_messages", tr.adversary_candidates.size()},
                       {"growth_min_rate", gr.min_rate}});
  }
  rep.details = details.dump();
  return rep;
}

ScenarioReport scen_false_victim(const SimConfig& base) {
  ScenarioReport rep;
  rep.scenario = "false-victim";
  json details = json::array();
  for (std::size_t idx = 0; idx < 6; ++idx) {
    std::uint64_t seed = scenario_seed(base, idx);
    rep.seeds.push_back(seed);
    std::string why;
    std::size_t true_accepted = 0, forged_rejected = 0;
    bool guard_ok = false, chain_ok = false;
    try {
      LedgerExample ex = build_ledger_example(seed, base.params, true);
      chain_ok = ledger::validate_ledger_chain(ex.chain);

      Bytes honest_claim = ledger::serialize_tx(ex.old_tx);
      if (ledger::verify_victim_claim(ex.chain, ex.target_height, ex.old_slot,
                                      honest_claim))
        ++true_accepted;

      std::vector<ledger::Transaction> forgeries;
      ledger::Transaction f1 = ex.old_tx;
      f1.outputs[0].script[0] ^= 0x01;  // different data payload
      forgeries.push_back(f1);
      ledger::Transaction f2 = ex.old_tx;
      f2.outputs[1].amount += 1;  // different value flow
      forgeries.push_back(f2);
      forgeries.push_back(ex.cand_tx);  // the replacement passed off as the original
      ledger::Transaction f4 = ex.old_tx;
      f4.outputs.push_back(ledger::data_output(Bytes{0x99}));  // padded claim
      forgeries.push_back(f4);
      for (const auto& f : forgeries)
        if (!ledger::verify_victim_claim(ex.chain, ex.target_height, ex.old_slot,
                                         ledger::serialize_tx(f)))
          ++forged_rejected;
      Bytes garbage = Rng(derive_seed(seed, 0xBAD)).bytes(40);
      if (!ledger::verify_victim_claim(ex.chain, ex.target_height, ex.old_slot, garbage))
        ++forged_rejected;

      try {
        ledger::verify_victim_claim(ex.chain, ex.target_height, 0, honest_claim);
      } catch (const Error& e) {
        guard_ok = e.code() == Errc::not_a_redacted_slot;
      }
    } catch (const Error& e) {
      why += std::string(": ") + e.what();
    }
    bool ok = chain_ok && true_accepted == 1 && forged_rejected == 5 && guard_ok;
    if (!chain_ok) why += ": rewritten chain failed validation";
    if (true_accepted != 1) why += ": genuine claim rejected";
    if (forged_rejected != 5) why += ": a forged claim verified";
    if (!guard_ok) why += ": unrewritten slot not guarded";
    if (ok) ++rep.passes;
    else rep.failures.push_back("seed " + std::to_string(seed) + why);
    details.push_back({{"seed", seed},
                       {"true_claims_accepted", true_accepted},
                       {"forged_claims_rejected", forged_rejected},
                       {"chain_valid", chain_ok}});
  }
  rep.details = details.dump();
  return rep;
}

ScenarioReport scen_double_spend(const SimConfig& base) {
  ScenarioReport rep;
  rep.scenario = "double-spend";
  json details = json::array();
  for (std::size_t idx = 0; idx < 6; ++idx) {
    std::uint64_t seed = scenario_seed(base, idx);
    rep.seeds.push_back(seed);
    std::string why;
    bool first_ok = false, evil_rejected = false, utxo_guard = false;
    try {
      LedgerExample ex = build_ledger_example(seed, base.params, true);
      Digest old_id = ledger::tx_id(ex.old_tx);
      Digest new_id = ledger::tx_id(ex.cand_tx);

      // spend the retained output once, addressing it by its pre-rewrite id
      ledger::Transaction spend1;
      spend1.inputs = {ledger::TxInput{old_id, 1, {}}};
      spend1.outputs = {ledger::spend_output(ex.attacker, 8'000)};
      spend1.inputs[0].witness =
          ledger::sign_spend(ex.attacker, ledger::tx_id(spend1));
      append_ledger_block(
          ex.chain,
          {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy + 1'000, {}), spend1},
          derive_seed(seed, 0xDD, 1));
      first_ok = ledger::validate_ledger_chain(ex.chain);

      // then try to spend it again through the post-rewrite id
      ledger::Transaction spend2;
      spend2.inputs = {ledger::TxInput{new_id, 1, {}}};
      spend2.outputs = {ledger::spend_output(ex.attacker, 8'500)};
      spend2.inputs[0].witness =
          ledger::sign_spend(ex.attacker, ledger::tx_id(spend2));
      ledger::LedgerChain evil = ex.chain;
      append_ledger_block(
          evil,
          {ledger::make_coinbase(ex.miner, ledger::kBlockSubsidy + 500, {}), spend2},
          derive_seed(seed, 0xDD, 2));
      ValidationIssue issue;
      evil_rejected = !ledger::validate_ledger_chain(evil, &issue);

      ledger::UtxoSet utxo = ledger::build_utxo(ex.chain);
      try {
        utxo.register_spend(ledger::OutPoint{new_id, 1}, ledger::tx_id(spend2));
      } catch (const Error& e) {
        utxo_guard = e.code() == Errc::already_spent;
      }
    } catch (const Error& e) {
      why += std::string(": ") + e.what();
    }
    bool ok = first_ok && evil_rejected && utxo_guard;
    if (!first_ok) why += ": legitimate spend rejected";
    if (!evil_rejected) why += ": double spend accepted";
    if (!utxo_guard) why += ": lineage-aliased respend not detected";
    if (ok) ++rep.passes;
    else rep.failures.push_back("seed " + std::to_string(seed) + why);
    details.push_back({{"seed", seed},
                       {"first_spend_valid", first_ok},
                       {"double_spend_rejected", evil_rejected},
                       {"utxo_alias_guard", utxo_guard}});
  }
  rep.details = details.dump();
  return rep;
}

ScenarioReport scen_consensus_delays(const SimConfig& base) {
  ScenarioReport rep;
  rep.scenario = "consensus-delays";
  json details = json::array();
  for (std::size_t idx = 0; idx < 4; ++idx) {
    std::uint64_t seed = scenario_seed(base, idx);
    rep.seeds.push_back(seed);
    SimConfig cfg = base;
    cfg.scenario = rep.scenario;
    cfg.master_seed = seed;
    cfg.n_nodes = std::max<std::size_t>(base.n_nodes, 8);
    cfg.n_corrupt = 0;
    cfg.rounds = std::max<std::size_t>(base.rounds, 170);
    cfg.mode = Mode::single;
    cfg.max_delay = std::max<std::size_t>(base.max_delay, 3);
    cfg.env_entry_every = base.env_entry_every ? base.env_entry_every : 3;
    cfg.edit_script = {{90, 1, 2, {}, false}};
    AdversarySpec adv;
    adv.strategy = Strategy::none;
    adv.max_delay = cfg.max_delay;
    adv.white_box_node = 4;
    adv.white_box_round = 140;
    adv.white_box_height = 3;

    SimTrace tr = run_simulation(cfg, adv);
    bool redacted = !tr.redactions.empty();
    PrefixReport full = check_editable_common_prefix(tr, cfg.params.k);
    PrefixReport excl = check_editable_common_prefix(tr, cfg.params.k, 4);
    PrefixReport plain = check_plain_common_prefix(tr, cfg.params.k, 4);
    DeliveryReport del = audit_delivery(tr);
    ApplicationReport app = audit_redaction_application(tr);

    std::string why;
    if (!redacted) why += ": the scripted rewrite never happened";
    if (full.pass) why += ": injected unapproved rewrite went undetected";
    if (!excl.pass) why += ": honest nodes violated the editable prefix";
    if (plain.pass) why += ": plain prefix unexpectedly survived a rewrite";
    if (!del.pass) why += ": delivery audit failed";
    if (!app.pass) why += ": rewrite application did not converge";
    bool ok = why.empty();
    if (ok) ++rep.passes;
    else rep.failures.push_back("seed " + std::to_string(seed) + why);
    details.push_back({{"seed", seed},
                       {"redactions", tr.redactions.size()},
                       {"violations_with_injected_node", full.violations_total},
                       {"violations_without_injected_node", excl.violations_total},
                       {"plain_prefix_violations", plain.violations_total},
                       {"laggard_passes", excl.laggard_passes},
                       {"application_spread", app.max_spread}});
  }
  rep.details = details.dump();
  return rep;
}

}  // namespace

ScenarioReport run_attack_scenario(const std::string& name, const SimConfig& base) {
  if (name == "unapproved-editing") return scen_unapproved(base);
  if (name == "dos") return scen_dos(base);
  if (name == "false-victim") return scen_false_victim(base);
  if (name == "double-spend") return scen_double_spend(base);
  if (name == "consensus-delays") return scen_consensus_delays(base);
  fail(Errc::unknown_scenario, "unknown attack scenario: " + name);
}

std::string scenario_report_json(const ScenarioReport& report) {
  json j = {
      {"scenario", report.scenario},
      {"seeds", report.seeds},
      {"passes", report.passes},
      {"total", report.seeds.size()},
      {"failures", report.failures},
      {"details", json::parse(report.details.empty() ? "[]" : report.details)},
  };
  return j.dump(2);
}

}  // namespace redact::sim
