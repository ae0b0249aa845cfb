#include <vector>

#include "doctest.h"
#include "redact/ledger.hpp"
#include "redact/node.hpp"

using namespace redact::node;
using redact::Bytes;
using redact::Chain;
using redact::Digest;
using redact::Mode;
using redact::PolicyParams;
using redact::Target;

namespace {

PolicyParams quick_params() {
  PolicyParams p;
  p.k = 2;
  p.ell = 3;
  p.rho = 0.6;
  return p;
}

Chain genesis_chain(std::uint64_t seed, unsigned bits = 250) {
  redact::GenesisConfig g;
  g.payload.entries.push_back(redact::Rng(redact::derive_seed(seed, 1, 1)).bytes(16));
  return redact::make_chain(g, Target::pow2(bits));
}

Chain extended(Chain c, std::size_t blocks, std::uint64_t seed) {
  for (std::size_t i = 0; i < blocks; ++i) {
    redact::BlockPayload p;
    p.entries.push_back(redact::Rng(redact::derive_seed(seed, 2, c.length() + 1)).bytes(20));
    auto mined = redact::mine_block(c, std::move(p), 1'000'000,
                                    redact::derive_seed(seed, 3, c.length() + 1));
    REQUIRE(mined.has_value());
    c.blocks.push_back(std::move(mined->block));
  }
  return c;
}

Outbound run_round(NodeState& state, std::size_t round, std::vector<Message> inbox = {},
                   std::vector<Bytes> env = {}, std::vector<EditRequest> edits = {},
                   std::uint64_t q = 1 << 14) {
  RoundInput input;
  input.round = round;
  input.inbox = std::move(inbox);
  input.env_entries = std::move(env);
  input.edit_requests = std::move(edits);
  return step_round(state, input, state.chain.difficulty, q);
}

std::vector<Bytes> zeroed_entries(const Chain& c, std::size_t height) {
  std::vector<Bytes> entries = c.at_height(height).x.entries;
  for (auto& e : entries) std::fill(e.begin(), e.end(), std::uint8_t{0});
  return entries;
}

}  // namespace

TEST_CASE("node construction pins the genesis") {
  const Chain g = genesis_chain(1);
  NodeState n = make_node(4, Mode::single, quick_params(), 99, g);
  CHECK(n.id == 4);
  CHECK(n.genesis_digest == redact::block_digest(g.blocks.front()));
  CHECK(n.chain.length() == 1);
  CHECK(n.role == Role::honest);
  CHECK_THROWS_AS((void)make_node(0, Mode::single, quick_params(), 1, Chain{}), redact::Error);
}

TEST_CASE("destructive entry scrutiny") {
  const std::vector<Bytes> before = {{1, 2, 3}, {4, 5}};
  CHECK_FALSE(destructive_entries(before, before));                      // unchanged
  CHECK(destructive_entries(before, {{1, 0, 3}, {4, 5}}));               // zeroed byte
  CHECK(destructive_entries(before, {{1, 2}, {4, 5}}));                  // truncated
  CHECK(destructive_entries(before, {{}, {}}));                          // fully erased
  CHECK_FALSE(destructive_entries(before, {{1, 2, 3, 0}, {4, 5}}));      // grew
  CHECK_FALSE(destructive_entries(before, {{1, 9, 3}, {4, 5}}));         // new value
  CHECK_FALSE(destructive_entries(before, {{1, 2, 3}}));                 // count changed
  CHECK_FALSE(destructive_entries(before, {{1, 2, 3}, {4, 5}, {}}));     // count changed
}

TEST_CASE("a solo node mines, proposes, votes, and applies its own rewrite") {
  NodeState n = make_node(0, Mode::single, quick_params(), 7, genesis_chain(2));

  // a few mining rounds with an environment entry in the first
  auto out = run_round(n, 1, {}, {Bytes{0xC0, 0xFF, 0xEE}});
  CHECK(out.mined);
  CHECK(n.chain.length() == 2);
  bool env_included = false;
  for (const auto& e : n.chain.at_height(2).x.entries)
    env_included = env_included || e == Bytes{0xC0, 0xFF, 0xEE};
  CHECK(env_included);
  REQUIRE_FALSE(out.messages.empty());
  CHECK(std::holds_alternative<ChainMsg>(out.messages.front()));

  for (std::size_t r = 2; r <= 3; ++r) (void)run_round(n, r);
  REQUIRE(n.chain.length() == 4);  // height 2 is now k=2 deep

  // the environment asks for height 2 to be blanked
  EditRequest req;
  req.target_height = 2;
  req.entries = zeroed_entries(n.chain, 2);
  out = run_round(n, 4, {}, {}, {req});
  CHECK(out.proposals_made == 1);
  CHECK(n.pool.size() == 1);
  bool candidate_broadcast = false;
  for (const auto& m : out.messages)
    candidate_broadcast = candidate_broadcast || std::holds_alternative<CandidateMsg>(m);
  CHECK(candidate_broadcast);

  // it endorses its own destructive proposal and votes while mining
  std::size_t votes = 0;
  bool applied = false;
  std::size_t applied_height = 0;
  for (std::size_t r = 5; r <= 16 && !applied; ++r) {
    out = run_round(n, r);
    votes += out.votes_cast.size();
    if (!out.redactions_applied.empty()) {
      applied = true;
      applied_height = out.redactions_applied.front().height;
    }
  }
  REQUIRE(applied);
  CHECK(applied_height == 2);
  CHECK(votes >= 2);
  CHECK(redact::is_redacted(n.chain.at_height(2)));
  CHECK(n.chain.at_height(2).x.entries == req.entries);
  CHECK(redact::validate_chain(n.chain, n.params));
  CHECK(n.pool.empty());
}

TEST_CASE("nodes adopt strictly longer valid chains, first seen on ties") {
  const Chain g = genesis_chain(3);
  NodeState n = make_node(1, Mode::single, quick_params(), 8, g);

  const Chain a = extended(g, 2, 100);
  const Chain b = extended(g, 2, 200);
  REQUIRE(a.blocks != b.blocks);

  auto out = run_round(n, 1, {ChainMsg{a}, ChainMsg{b}}, {}, {}, /*q=*/0);
  CHECK(out.adopted);
  CHECK(n.chain.blocks == a.blocks);  // tie goes to the first delivered

  // an equally long chain does not displace the current one
  out = run_round(n, 2, {ChainMsg{b}}, {}, {}, 0);
  CHECK_FALSE(out.adopted);
  CHECK(n.chain.blocks == a.blocks);

  // a longer but corrupted chain is dropped
  Chain longer = extended(a, 2, 300);
  longer.at_height(3).x.entries[0][0] ^= 1;
  out = run_round(n, 3, {ChainMsg{longer}}, {}, {}, 0);
  CHECK_FALSE(out.adopted);
  CHECK(out.dropped_messages == 1);
  CHECK(n.chain.blocks == a.blocks);

  // a longer chain from a different genesis is rejected too
  const Chain foreign = extended(genesis_chain(4), 3, 400);
  out = run_round(n, 4, {ChainMsg{foreign}}, {}, {}, 0);
  CHECK_FALSE(out.adopted);
  CHECK(out.dropped_messages == 1);
}

TEST_CASE("endorsement rules control voting, not pool admission") {
  const PolicyParams params = quick_params();
  const Chain shared = extended(genesis_chain(5), 4, 500);  // length 5, height 2 stable

  // a destructive proposal and a junk (content-replacing) proposal
  NodeState proposer = make_node(0, Mode::single, params, 9, shared);
  const CandidateMsg destructive =
      submit_edit_proposal(proposer, 2, {zeroed_entries(shared, 2), shared.at_height(2).x.votes});

  std::vector<Bytes> junk = shared.at_height(2).x.entries;
  junk[0] = Bytes(junk[0].size(), 0xEE);
  NodeState junker = make_node(0, Mode::single, params, 9, shared);
  const CandidateMsg junky =
      submit_edit_proposal(junker, 2, {junk, shared.at_height(2).x.votes});

  auto votes_next_round = [&](EndorsementRule rule, const CandidateMsg& msg) {
    NodeState voter = make_node(1, Mode::single, params, 10, shared);
    voter.endorsement = rule;
    (void)run_round(voter, 1, {msg}, {}, {}, 0);     // admit
    const auto out = run_round(voter, 2);            // mine, possibly voting
    CHECK(voter.pool.size() == 1);                   // admission is scrutiny-free
    return out.votes_cast.size();
  };

  CHECK(votes_next_round(EndorsementRule::destructive_only, destructive) == 1);
  CHECK(votes_next_round(EndorsementRule::destructive_only, junky) == 0);
  CHECK(votes_next_round(EndorsementRule::endorse_none, destructive) == 0);
  CHECK(votes_next_round(EndorsementRule::endorse_all, junky) == 1);

  // the vote token lands in the freshly mined payload
  NodeState voter = make_node(2, Mode::single, params, 11, shared);
  (void)run_round(voter, 1, {destructive}, {}, {}, 0);
  (void)run_round(voter, 2);
  REQUIRE(voter.chain.length() >= 6);
  const auto& votes = voter.chain.blocks.back().x.votes;
  REQUIRE(votes.size() == 1);
  CHECK(votes[0] == destructive.declared_digest);
}

TEST_CASE("proposals park until the chain can honor them, then expire") {
  const PolicyParams params = quick_params();
  const Chain shared = extended(genesis_chain(6), 4, 600);

  // a candidate for a height this node does not have yet
  const Chain future = extended(shared, 3, 700);
  NodeState proposer = make_node(0, Mode::single, params, 12, future);
  const CandidateMsg far = submit_edit_proposal(
      proposer, 6, {zeroed_entries(future, 6), future.at_height(6).x.votes});

  NodeState n = make_node(1, Mode::single, params, 13, shared);
  (void)run_round(n, 1, {far}, {}, {}, 0);
  CHECK(n.pool.empty());
  CHECK(n.pending.size() == 1);

  // once the node learns the longer chain, the parked proposal is admitted
  (void)run_round(n, 2, {ChainMsg{future}}, {}, {}, 0);
  CHECK(n.chain.length() == 8);
  CHECK(n.pool.size() == 1);
  CHECK(n.pending.empty());

  // an unserviceable proposal eventually times out of the park
  NodeState stuck = make_node(2, Mode::single, params, 14, shared);
  (void)run_round(stuck, 1, {far}, {}, {}, 0);
  CHECK(stuck.pending.size() == 1);
  const std::size_t ttl_bound = 8 * (params.k + params.ell) + 40;
  for (std::size_t r = 2; r <= ttl_bound && !stuck.pending.empty(); ++r)
    (void)run_round(stuck, r, {}, {}, {}, 0);
  CHECK(stuck.pending.empty());
  CHECK(stuck.pool.empty());
}

TEST_CASE("ledger-mode nodes demand a buried announcement before endorsing") {
  namespace lg = redact::ledger;
  const PolicyParams params = quick_params();

  // the transaction being rewritten, its replacement, and the announcement
  const lg::KeyPair owner = lg::keypair_from_seed(42);
  lg::Transaction old_tx;
  old_tx.inputs.push_back(lg::TxInput{Digest{}, 0, Bytes(64, 1)});
  old_tx.outputs.push_back(lg::TxOutput{lg::OutputKind::data, 0, Bytes{5, 6, 7, 8}});
  old_tx.outputs.push_back(lg::spend_output(owner, 100));
  lg::Transaction cand_tx = old_tx;
  cand_tx.outputs[0].script = Bytes{0, 0, 0, 0};
  const lg::EditTx announce = lg::build_edit_tx(
      old_tx, cand_tx, lg::TxInput{Digest{}, 1, Bytes(64, 2)}, 10, 0);

  // chain layout: h2 carries the transaction, h3 the announcement
  Chain c = genesis_chain(7);
  auto push_entries = [&](std::vector<Bytes> entries) {
    redact::BlockPayload p;
    p.entries = std::move(entries);
    auto mined = redact::mine_block(c, std::move(p), 1'000'000, c.length() * 31 + 5);
    REQUIRE(mined.has_value());
    c.blocks.push_back(std::move(mined->block));
  };
  push_entries({lg::serialize_tx(old_tx)});
  push_entries({lg::serialize_tx(announce.tx)});
  push_entries({Bytes{1}});  // h4: announcement 1 deep, target k deep

  NodeState proposer = make_node(0, Mode::single, params, 15, c);
  std::vector<Bytes> new_entries = {lg::serialize_tx(cand_tx)};
  const CandidateMsg msg =
      submit_edit_proposal(proposer, 2, {new_entries, c.at_height(2).x.votes});

  // with the announcement only 1 deep, the proposal parks instead of pooling
  NodeState n = make_node(1, Mode::ledger, params, 16, c);
  (void)run_round(n, 1, {msg}, {}, {}, 0);
  CHECK(n.pool.empty());
  CHECK(n.pending.size() == 1);

  // mining two more blocks buries the announcement; the park drains
  std::size_t votes = 0;
  for (std::size_t r = 2; r <= 6 && n.pool.empty(); ++r) {
    const auto out = run_round(n, r);
    votes += out.votes_cast.size();
  }
  CHECK(n.pool.size() == 1);

  // and the now-admitted candidate earns votes in later blocks
  for (std::size_t r = 7; r <= 9 && votes == 0; ++r)
    votes += run_round(n, r).votes_cast.size();
  CHECK(votes >= 1);
}
