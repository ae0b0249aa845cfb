#include "redact/node.hpp"

#include <algorithm>

#include "redact/ledger.hpp"

namespace redact::node {

namespace {

constexpr std::size_t kPendingCap = 64;

// How many rounds a not-yet-admittable proposal is retried before being
// discarded. Generous relative to one voting cycle so delivery lag and short
// forks cannot starve a legitimate proposal.
std::size_t pending_ttl(const PolicyParams& p) {
  return 8 * (std::size_t(p.k) + std::size_t(p.ell)) + 32;
}

bool chain_valid(const NodeState& state, const Chain& c) {
  return state.mode == Mode::ext
             ? validate_chain_ext(c, state.params, &state.genesis_digest)
             : validate_chain(c, state.params, &state.genesis_digest);
}

bool candidate_valid(const NodeState& state, const CandidateBlock& cand) {
  return state.mode == Mode::ext ? validate_cand_ext(state.chain, cand, state.params)
                                 : validate_cand(state.chain, cand);
}

// Ledger-mode spam rule: every changed entry must be a destructive
// transaction rewrite whose announcement already sits at least k blocks deep
// in this node's chain.
bool ledger_announcement_stable(const NodeState& state, const Block& target,
                                const CandidateBlock& cand) {
  const auto& before = target.x.entries;
  const auto& after = cand.block.x.entries;
  if (before.size() != after.size()) return false;
  std::size_t stable_top =
      state.chain.length() > state.params.k ? state.chain.length() - state.params.k : 0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] == after[i]) continue;
    auto old_tx = ledger::parse_tx(ByteView(before[i].data(), before[i].size()));
    auto new_tx = ledger::parse_tx(ByteView(after[i].data(), after[i].size()));
    if (!old_tx || !new_tx) return false;
    if (!ledger::validate_candidate_tx(*old_tx, *new_tx)) return false;
    Digest old_id = ledger::tx_id(*old_tx);
    Digest new_id = ledger::tx_id(*new_tx);
    bool announced = false;
    for (std::size_t h = 1; h <= stable_top && !announced; ++h) {
      for (const Bytes& entry : state.chain.blocks[h - 1].x.entries) {
        auto tx = ledger::parse_tx(ByteView(entry.data(), entry.size()));
        if (!tx) continue;
        auto pair = ledger::edit_pair_of(*tx);
        if (pair && pair->first == old_id && pair->second == new_id) {
          announced = true;
          break;
        }
      }
    }
    if (!announced) return false;
  }
  return true;
}

}  // namespace

NodeState make_node(std::size_t id, Mode mode, const PolicyParams& params,
                    std::uint64_t miner_seed, Chain initial_chain) {
  if (initial_chain.blocks.empty())
    fail(Errc::empty_chain, "a node needs at least a genesis block");
  NodeState state;
  state.id = id;
  state.mode = mode;
  state.params = params;
  state.miner_seed = miner_seed;
  state.genesis_digest = block_digest(initial_chain.blocks.front());
  state.chain = std::move(initial_chain);
  return state;
}

CandidateMsg candidate_to_msg(const CandidateBlock& cand) {
  return CandidateMsg{cand.target_height, cand.block.x.entries, candidate_digest(cand)};
}

std::optional<CandidateBlock> reconstruct_candidate(const NodeState& state,
                                                    const CandidateMsg& msg) {
  try {
    const Block& target = state.chain.at_height(msg.target_height);
    BlockPayload payload{msg.entries, target.x.votes};
    CandidateBlock cand =
        propose_edit(state.chain, msg.target_height, std::move(payload), state.params.k,
                     state.mode);
    if (candidate_digest(cand) != msg.declared_digest) return std::nullopt;
    return cand;
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool destructive_entries(const std::vector<Bytes>& before, const std::vector<Bytes>& after) {
  if (before.size() != after.size()) return false;
  bool changed = false;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i] == after[i]) continue;
    if (after[i].size() > before[i].size()) return false;
    for (std::size_t j = 0; j < after[i].size(); ++j)
      if (after[i][j] != before[i][j] && after[i][j] != 0) return false;
    changed = true;
  }
  return changed;
}

bool endorses(const NodeState& state, const CandidateBlock& cand) {
  if (state.endorsement == EndorsementRule::endorse_none) return false;
  if (!candidate_valid(state, cand)) return false;
  if (state.endorsement == EndorsementRule::endorse_all) return true;
  const Block& target = state.chain.at_height(cand.target_height);
  if (!destructive_entries(target.x.entries, cand.block.x.entries)) return false;
  if (state.mode == Mode::ledger && !ledger_announcement_stable(state, target, cand))
    return false;
  return true;
}

CandidateMsg submit_edit_proposal(NodeState& state, std::size_t target_height,
                                  BlockPayload new_payload) {
  CandidateBlock cand =
      propose_edit(state.chain, target_height, std::move(new_payload), state.params.k,
                   state.mode);
  pool_upsert(state.pool, state.chain, cand, state.mode, state.params);
  return candidate_to_msg(cand);
}

Outbound step_round(NodeState& state, const RoundInput& input, const Target& difficulty,
                    std::uint64_t q) {
  Outbound out;

  // 1. chain update: longest strictly-longer valid chain wins, first-seen
  // breaks ties. Sorting is stable, so equal lengths keep inbox order.
  {
    std::vector<const Chain*> longer;
    for (const Message& m : input.inbox)
      if (const auto* cm = std::get_if<ChainMsg>(&m))
        if (cm->chain.length() > state.chain.length()) longer.push_back(&cm->chain);
    std::stable_sort(longer.begin(), longer.end(),
                     [](const Chain* a, const Chain* b) { return a->length() > b->length(); });
    for (const Chain* c : longer) {
      if (c->length() <= state.chain.length()) break;  // adopted something longer already
      if (c->difficulty != difficulty || !chain_valid(state, *c)) {
        ++out.dropped_messages;
        continue;
      }
      state.chain = *c;
      out.adopted = true;
    }
  }

  // 2. candidate pool: retry parked proposals first (oldest first), then the
  // freshly delivered ones. A proposal parks when the local chain cannot
  // honor it yet; it leaves the park on admission, on TTL expiry, or when
  // the park overflows.
  {
    std::vector<CandidateMsg> arrivals;
    for (const Message& m : input.inbox)
      if (const auto* cm = std::get_if<CandidateMsg>(&m)) arrivals.push_back(*cm);

    std::deque<PendingCandidate> work = std::move(state.pending);
    state.pending.clear();
    for (const CandidateMsg& cm : arrivals) work.push_back({cm, input.round});

    auto parked = [&](const Digest& d) {
      return std::any_of(state.pending.begin(), state.pending.end(),
                         [&](const PendingCandidate& p) {
                           return p.msg.declared_digest == d;
                         });
    };
    std::size_t ttl = pending_ttl(state.params);
    for (PendingCandidate& p : work) {
      if (state.pool.count(p.msg.declared_digest)) continue;  // already admitted
      if (input.round - p.first_seen_round > ttl) {
        ++out.dropped_messages;
        continue;
      }
      auto cand = reconstruct_candidate(state, p.msg);
      bool admitted = false;
      if (cand) {
        if (state.mode == Mode::ledger &&
            !ledger_announcement_stable(state, state.chain.at_height(cand->target_height),
                                        *cand)) {
          admitted = false;  // spam until the announcement is buried
        } else {
          admitted = pool_upsert(state.pool, state.chain, *cand, state.mode, state.params);
        }
      }
      if (admitted || parked(p.msg.declared_digest)) continue;
      state.pending.push_back(std::move(p));
      if (state.pending.size() > kPendingCap) {
        state.pending.pop_front();
        ++out.dropped_messages;
      }
    }
  }

  // 3. chain editing: apply policy-accepted candidates. Outside repeated-
  // rewrite mode a block is rewritten at most once, so later acceptances for
  // an already rewritten target are skipped; in repeated-rewrite mode a
  // stale candidate simply fails revalidation inside apply_redaction.
  {
    SweepResult swept = pool_sweep(state.pool, state.chain, state.params);
    for (const CandidateBlock& cand : swept.accepted) {
      if (state.mode != Mode::ext && cand.target_height <= state.chain.length() &&
          is_redacted(state.chain.at_height(cand.target_height)))
        continue;
      try {
        state.chain = apply_redaction(state.chain, cand, state.params, state.mode);
        out.redactions_applied.push_back({cand.target_height, candidate_digest(cand)});
      } catch (const Error&) {
        ++out.dropped_messages;
      }
    }
  }

  // 4. block creation: environment data plus one vote per endorsed pooled
  // candidate (the pool is token-keyed, so votes are unique and ordered).
  {
    BlockPayload payload;
    payload.entries = input.env_entries;
    for (const auto& [token, cand] : state.pool)
      if (endorses(state, cand)) payload.votes.push_back(token);

    auto mined = mine_block(state.chain, payload, q, derive_seed(state.miner_seed, input.round));
    out.attempts_used = mined ? mined->attempts : q;
    if (mined) {
      Chain extended = state.chain;
      extended.blocks.push_back(std::move(mined->block));
      if (chain_valid(state, extended)) {
        state.chain = std::move(extended);
        out.mined = true;
        out.votes_cast = payload.votes;
        out.messages.push_back(ChainMsg{state.chain});
      }
    }
  }

  // 5. edit proposals requested by the environment. A request whose target is
  // not yet stable on the local chain waits in a bounded park and is retried,
  // mirroring the candidate park above; permanently impossible requests
  // (genesis, no-op payload) are counted and dropped.
  {
    std::deque<PendingEdit> work = std::move(state.deferred_edits);
    state.deferred_edits.clear();
    for (const EditRequest& req : input.edit_requests)
      work.push_back({req, input.round});

    std::size_t ttl = pending_ttl(state.params);
    for (PendingEdit& p : work) {
      if (input.round - p.first_seen_round > ttl) {
        ++out.dropped_messages;
        continue;
      }
      // propose_edit demands target_height <= length - k; anything later is
      // premature rather than wrong, so it parks instead of dropping.
      if (p.req.target_height + state.params.k <= state.chain.length()) {
        try {
          const Block& target = state.chain.at_height(p.req.target_height);
          CandidateMsg msg = submit_edit_proposal(
              state, p.req.target_height, BlockPayload{p.req.entries, target.x.votes});
          out.messages.push_back(std::move(msg));
          ++out.proposals_made;
        } catch (const Error&) {
          ++out.dropped_messages;
        }
        continue;
      }
      state.deferred_edits.push_back(std::move(p));
      if (state.deferred_edits.size() > kPendingCap) {
        state.deferred_edits.pop_front();
        ++out.dropped_messages;
      }
    }
  }

  return out;
}

}  // namespace redact::node
