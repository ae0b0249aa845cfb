#include <vector>

#include "doctest.h"
#include "redact/bench.hpp"
#include "redact/redaction.hpp"

using redact::BlockPayload;
using redact::Bytes;
using redact::CandidateBlock;
using redact::Chain;
using redact::Digest;
using redact::Mode;
using redact::PolicyParams;
using redact::Target;
using redact::Verdict;

namespace {

PolicyParams tight_params() {
  PolicyParams p;
  p.k = 2;
  p.ell = 3;
  p.rho = 0.6;  // 2 of 3 votes needed
  return p;
}

void grow_to(Chain& c, std::size_t n_blocks, std::uint64_t seed) {
  while (c.length() < n_blocks) {
    const std::size_t h = c.length() + 1;
    BlockPayload p;
    p.entries.push_back(redact::Rng(redact::derive_seed(seed, 2, h)).bytes(24));
    auto mined = redact::mine_block(c, std::move(p), 1'000'000, redact::derive_seed(seed, 3, h));
    REQUIRE(mined.has_value());
    c.blocks.push_back(std::move(mined->block));
  }
}

Chain base_chain(std::size_t n_blocks, std::uint64_t seed) {
  redact::GenesisConfig g;
  g.payload.entries.push_back(redact::Rng(redact::derive_seed(seed, 1, 1)).bytes(16));
  Chain c = redact::make_chain(g, Target::pow2(250));
  grow_to(c, n_blocks, seed);
  return c;
}

void append_block(Chain& c, std::uint64_t seed, std::vector<Digest> votes) {
  const std::size_t h = c.length() + 1;
  BlockPayload p;
  p.entries.push_back(redact::Rng(redact::derive_seed(seed, 2, h)).bytes(24));
  p.votes = std::move(votes);
  auto mined = redact::mine_block(c, std::move(p), 1'000'000, redact::derive_seed(seed, 3, h));
  REQUIRE(mined.has_value());
  c.blocks.push_back(std::move(mined->block));
}

BlockPayload zeroed_payload(const Chain& c, std::size_t height) {
  BlockPayload p = c.at_height(height).x;
  for (auto& e : p.entries) std::fill(e.begin(), e.end(), std::uint8_t{0});
  return p;
}

}  // namespace

TEST_CASE("policy parameter checks and the quorum arithmetic") {
  CHECK(redact::required_votes(PolicyParams{6, 5, 0.6}) == 3);
  CHECK(redact::required_votes(PolicyParams{6, 10, 0.6}) == 6);
  CHECK(redact::required_votes(PolicyParams{6, 3, 1.0}) == 3);
  // an exactly-representable quorum must not round up through fp dust
  CHECK(redact::required_votes(PolicyParams{6, 1024, 513.0 / 1024.0}) == 513);
  CHECK(redact::required_votes(PolicyParams{6, 20, 0.55}) == 11);

  CHECK_THROWS_AS(redact::check_policy_params(PolicyParams{0, 5, 0.6}), redact::Error);
  CHECK_THROWS_AS(redact::check_policy_params(PolicyParams{6, 0, 0.6}), redact::Error);
  CHECK_THROWS_AS(redact::check_policy_params(PolicyParams{6, 5, 0.0}), redact::Error);
  CHECK_THROWS_AS(redact::check_policy_params(PolicyParams{6, 5, 1.5}), redact::Error);

  CHECK(redact::mode_from_name("single") == Mode::single);
  CHECK(redact::mode_from_name("ext") == Mode::ext);
  CHECK(redact::mode_from_name("ledger") == Mode::ledger);
  CHECK(redact::mode_name(Mode::ext) == "ext");
  CHECK_THROWS_AS(redact::mode_from_name("bogus"), redact::Error);
  CHECK(std::string(redact::verdict_name(Verdict::accept)) == "accept");
}

TEST_CASE("propose_edit enforces the candidate rules") {
  const PolicyParams params = tight_params();
  Chain c = base_chain(6, 7);

  CHECK_THROWS_WITH_AS(
      (void)redact::propose_edit(c, 9, zeroed_payload(c, 2), params.k, Mode::single),
      doctest::Contains("outside chain"), redact::Error);
  CHECK_THROWS_AS((void)redact::propose_edit(c, 1, zeroed_payload(c, 1), params.k, Mode::single),
                  redact::Error);
  // height 5 is not yet k=2 deep on a 6-block chain
  CHECK_THROWS_AS((void)redact::propose_edit(c, 5, zeroed_payload(c, 5), params.k, Mode::single),
                  redact::Error);
  // unchanged payload is a no-op
  CHECK_THROWS_AS((void)redact::propose_edit(c, 2, c.at_height(2).x, params.k, Mode::single),
                  redact::Error);
  // votes are untouchable
  BlockPayload tampered = zeroed_payload(c, 2);
  tampered.votes.push_back(Digest{});
  CHECK_THROWS_AS((void)redact::propose_edit(c, 2, tampered, params.k, Mode::single),
                  redact::Error);

  const CandidateBlock cand =
      redact::propose_edit(c, 2, zeroed_payload(c, 2), params.k, Mode::single);
  CHECK(cand.target_height == 2);
  CHECK(redact::validate_cand(c, cand));
  // the candidate keeps the mined link material, so its rewrite-invariant
  // link form equals the original block's digest
  CHECK(redact::old_state_link(cand.block) == redact::block_digest(c.at_height(2)));
}

TEST_CASE("vote windows open at the first vote and settle when k-deep") {
  const PolicyParams params = tight_params();
  Chain c = base_chain(4, 13);
  const CandidateBlock cand =
      redact::propose_edit(c, 2, zeroed_payload(c, 2), params.k, Mode::single);
  const Digest token = redact::candidate_digest(cand);

  CHECK(redact::evaluate_policy(c, cand, params) == Verdict::voting);

  append_block(c, 13, {token});  // height 5: first vote, window [5, 7]
  auto report = redact::evaluate_vote_token(c, token, params);
  CHECK(report.verdict == Verdict::voting);
  CHECK(report.first_vote_height == 5);
  CHECK(report.window_close == 7);

  append_block(c, 13, {token});  // height 6: second vote
  append_block(c, 13, {});       // height 7: window closes
  CHECK(redact::evaluate_vote_token(c, token, params).verdict == Verdict::voting);

  append_block(c, 13, {});  // height 8: close is 1 deep
  CHECK(redact::evaluate_vote_token(c, token, params).verdict == Verdict::voting);

  append_block(c, 13, {});  // height 9: close is k=2 deep, tally 2/2
  report = redact::evaluate_vote_token(c, token, params);
  CHECK(report.verdict == Verdict::accept);
  CHECK(report.votes_in_window == 2);
  CHECK(report.votes_needed == 2);
}

TEST_CASE("repeated votes in one block count once") {
  const PolicyParams params = tight_params();
  Chain c = base_chain(4, 17);
  const CandidateBlock cand =
      redact::propose_edit(c, 2, zeroed_payload(c, 2), params.k, Mode::single);
  const Digest token = redact::candidate_digest(cand);

  append_block(c, 17, {token, token, token});  // one block, one voter
  grow_to(c, 9, 17);
  const auto report = redact::evaluate_vote_token(c, token, params);
  CHECK(report.votes_in_window == 1);
  CHECK(report.verdict == Verdict::reject);
}

TEST_CASE("late votes outside the window do not count") {
  const PolicyParams params = tight_params();
  Chain c = base_chain(4, 19);
  const CandidateBlock cand =
      redact::propose_edit(c, 2, zeroed_payload(c, 2), params.k, Mode::single);
  const Digest token = redact::candidate_digest(cand);

  append_block(c, 19, {token});  // height 5 opens window [5, 7]
  append_block(c, 19, {});
  append_block(c, 19, {});
  append_block(c, 19, {token});  // height 8: outside the window
  grow_to(c, 11, 19);
  const auto report = redact::evaluate_vote_token(c, token, params);
  CHECK(report.votes_in_window == 1);
  CHECK(report.verdict == Verdict::reject);
}

TEST_CASE("apply_redaction gates on candidate validity and the verdict") {
  const PolicyParams params = tight_params();
  Chain c = base_chain(4, 23);
  const CandidateBlock cand =
      redact::propose_edit(c, 2, zeroed_payload(c, 2), params.k, Mode::single);
  const Digest token = redact::candidate_digest(cand);

  CHECK_THROWS_AS((void)redact::apply_redaction(c, cand, params, Mode::single), redact::Error);

  CandidateBlock corrupt = cand;
  corrupt.block.ctr ^= 1;
  CHECK_FALSE(redact::validate_cand(c, corrupt));

  append_block(c, 23, {token});
  append_block(c, 23, {token});
  grow_to(c, 9, 23);
  REQUIRE(redact::evaluate_policy(c, cand, params) == Verdict::accept);
  CHECK_THROWS_AS((void)redact::apply_redaction(c, corrupt, params, Mode::single),
                  redact::Error);

  const Chain after = redact::apply_redaction(c, cand, params, Mode::single);
  CHECK(after.length() == c.length());
  CHECK(redact::is_redacted(after.at_height(2)));
  CHECK(after.at_height(2).x.entries == cand.block.x.entries);
  // the rewritten block still anchors its successor through the old-state link
  CHECK(after.at_height(3).s == redact::old_state_link(after.at_height(2)));

  CHECK(redact::validate_chain(after, params));
  CHECK_FALSE(redact::validate_chain_immutable(after));

  // zeroing the history out from under the rewrite invalidates the chain
  Chain stripped = after;
  for (std::size_t h = 5; h <= 6; ++h) stripped.at_height(h).x.votes.clear();
  CHECK_FALSE(redact::validate_chain(stripped, params));
}

TEST_CASE("candidate pool admits, sweeps, and orders accepted rewrites") {
  const PolicyParams params = tight_params();
  Chain c = base_chain(5, 29);
  redact::CandidatePool pool;

  const CandidateBlock c2 = redact::propose_edit(c, 2, zeroed_payload(c, 2), params.k,
                                                 Mode::single);
  const CandidateBlock c3 = redact::propose_edit(c, 3, zeroed_payload(c, 3), params.k,
                                                 Mode::single);
  CHECK(redact::pool_upsert(pool, c, c2, Mode::single, params));
  CHECK(redact::pool_upsert(pool, c, c3, Mode::single, params));
  CHECK(pool.size() == 2);

  CandidateBlock bad = c2;
  bad.block.s.b[0] ^= 1;
  CHECK_FALSE(redact::pool_upsert(pool, c, bad, Mode::single, params));
  CHECK(pool.size() == 2);

  // still voting: nothing leaves the pool
  auto sweep = redact::pool_sweep(pool, c, params);
  CHECK(sweep.accepted.empty());
  CHECK(sweep.rejected == 0);
  CHECK(pool.size() == 2);

  // approve both, then sweep: accepted come out ordered by target height
  const Digest t2 = redact::candidate_digest(c2);
  const Digest t3 = redact::candidate_digest(c3);
  append_block(c, 29, {t3, t2});
  append_block(c, 29, {t2, t3});
  grow_to(c, 10, 29);
  sweep = redact::pool_sweep(pool, c, params);
  REQUIRE(sweep.accepted.size() == 2);
  CHECK(sweep.accepted[0].target_height == 2);
  CHECK(sweep.accepted[1].target_height == 3);
  CHECK(pool.empty());

  // a rejected candidate (votes never arrive) is dropped by the sweep
  Chain c_late = base_chain(4, 31);
  const CandidateBlock never = redact::propose_edit(c_late, 2, zeroed_payload(c_late, 2),
                                                    params.k, Mode::single);
  redact::CandidatePool pool2;
  CHECK(redact::pool_upsert(pool2, c_late, never, Mode::single, params));
  append_block(c_late, 31, {redact::candidate_digest(never)});
  grow_to(c_late, 11, 31);  // window closed stable with 1 of 2 votes
  sweep = redact::pool_sweep(pool2, c_late, params);
  CHECK(sweep.accepted.empty());
  CHECK(sweep.rejected == 1);
  CHECK(pool2.empty());
}

TEST_CASE("repeated rewrites accumulate old state and validate against history") {
  PolicyParams params = tight_params();
  const auto ex = redact::bench::generate_ext_chain(3, params, 99);
  REQUIRE(ex.tokens.size() == 3);

  const auto& target = ex.chain.at_height(ex.target_height);
  CHECK(target.y.segments.size() == 3);  // original digest + two replaced payloads
  CHECK(redact::is_redacted(target));
  CHECK(redact::validate_chain_ext(ex.chain, params));

  // the single-rewrite validator refuses multi-segment old states outright
  CHECK_FALSE(redact::validate_chain(ex.chain, params));
  CHECK_FALSE(redact::validate_chain_immutable(ex.chain));

  // each accumulated token still carries an accepted tally on the final chain
  for (const Digest& token : ex.tokens)
    CHECK(redact::evaluate_vote_token(ex.chain, token, params).verdict == Verdict::accept);

  SUBCASE("mutating an old-state segment is detected") {
    Chain m = ex.chain;
    m.at_height(ex.target_height).y.segments[1].b[5] ^= 0x20;
    CHECK_FALSE(redact::validate_chain_ext(m, params));
  }
  SUBCASE("erasing historical votes is detected") {
    Chain m = ex.chain;
    bool stripped = false;
    for (auto& b : m.blocks) {
      if (!b.x.votes.empty()) {
        b.x.votes.clear();
        stripped = true;
      }
    }
    REQUIRE(stripped);
    CHECK_FALSE(redact::validate_chain_ext(m, params));
  }
  SUBCASE("reordering old-state segments is detected") {
    Chain m = ex.chain;
    auto& segs = m.at_height(ex.target_height).y.segments;
    std::swap(segs[1], segs[2]);
    CHECK_FALSE(redact::validate_chain_ext(m, params));
  }

  // a fresh proposal on the rewritten chain records the replaced payload
  const CandidateBlock next = redact::propose_edit(
      ex.chain, ex.target_height, zeroed_payload(ex.chain, ex.target_height), params.k,
      Mode::ext);
  CHECK(next.block.y.segments.size() == 4);
  CHECK(next.block.y.segments[3] ==
        redact::content_digest(target.s, target.x));
}
