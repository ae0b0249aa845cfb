#include "redact/redaction.hpp"

#include <algorithm>
#include <tuple>

namespace redact {

CandidateBlock propose_edit(const Chain& c, std::size_t j, BlockPayload new_payload,
                            std::uint32_t k, Mode mode) {
  std::size_t n = c.length();
  if (j < 1 || j > n)
    fail(Errc::index_out_of_range,
         "edit target " + std::to_string(j) + " outside chain of length " + std::to_string(n));
  if (j == 1) fail(Errc::genesis_immutable, "genesis cannot be edited");
  if (n < k || j > n - k)
    fail(Errc::target_not_stable,
         "edit target must be at least " + std::to_string(k) + " blocks deep");
  const Block& orig = c.at_height(j);
  if (new_payload.votes != orig.x.votes)
    fail(Errc::votes_tampered, "an edit must leave the original vote list untouched");
  if (new_payload.entries == orig.x.entries)
    fail(Errc::noop_edit, "an edit must change the data entries");

  Block b = orig;
  b.x = std::move(new_payload);
  if (mode == Mode::ext) {
    Digest g_cur = content_digest(orig.s, orig.x);
    bool first_rewrite = orig.y.segments.size() == 1 && orig.y.segments.front() == g_cur;
    if (!first_rewrite) b.y.segments.push_back(g_cur);
  }
  return CandidateBlock{j, std::move(b)};
}

namespace {

// Checks shared by both candidate validators once the candidate's content
// digest is in hand: proof of work (either disjunct), position inside the
// chain, the link the predecessor implies, and the link the successor stored.
bool cand_links_ok(const Chain& c, std::size_t j, const Block& star, const Digest& g_star) {
  std::size_t n = c.length();
  if (j < 2 || j + 1 > n) return false;
  if (!meets_target(link_digest(star.ctr, g_star, star.y), c.difficulty) &&
      !meets_target(old_state_link(star), c.difficulty))
    return false;
  if (star.s != old_state_link(c.at_height(j - 1))) return false;
  if (c.at_height(j + 1).s != old_state_link(star)) return false;
  return true;
}

}  // namespace

bool validate_cand(const Chain& c, std::size_t target_height, const Block& star,
                   const Digest& g_star) {
  if (star.y.segments.size() != 1) return false;
  return cand_links_ok(c, target_height, star, g_star);
}

bool validate_cand(const Chain& c, const CandidateBlock& cand) {
  if (cand.block.y.segments.size() != 1) return false;
  return cand_links_ok(c, cand.target_height, cand.block,
                       content_digest(cand.block.s, cand.block.x));
}

bool validate_cand_ext(const Chain& c, std::size_t target_height, const Block& star,
                       const Digest& g_star, const PolicyParams& params) {
  if (star.y.segments.empty()) return false;
  if (!cand_links_ok(c, target_height, star, g_star)) return false;

  // Every rewrite already recorded in the old-state list must have won its
  // vote: segment i (1-based, i >= 2) was installed by the rewrite whose
  // token hashed the new content digest against the history before it.
  const auto& segs = star.y.segments;
  auto cimg = ctr_image(star.ctr);
  Bytes history;
  history.reserve((segs.size() - 1) * 32);
  history.insert(history.end(), segs[0].b.begin(), segs[0].b.end());
  for (std::size_t i = 2; i <= segs.size(); ++i) {
    Digest token = hash_h({ByteView(cimg.data(), cimg.size()), segs[i - 1].view(),
                           ByteView(history.data(), history.size())});
    if (evaluate_vote_token(c, token, params).verdict != Verdict::accept) return false;
    history.insert(history.end(), segs[i - 1].b.begin(), segs[i - 1].b.end());
  }
  return true;
}

bool validate_cand_ext(const Chain& c, const CandidateBlock& cand, const PolicyParams& params) {
  return validate_cand_ext(c, cand.target_height, cand.block,
                           content_digest(cand.block.s, cand.block.x), params);
}

PolicyReport evaluate_vote_token(const Chain& c, const Digest& token,
                                 const PolicyParams& params) {
  check_policy_params(params);
  PolicyReport rep;
  rep.votes_needed = required_votes(params);
  std::size_t n = c.length();
  std::size_t r = 0;
  for (std::size_t h = 1; h <= n; ++h) {
    if (c.blocks[h - 1].x.contains_vote(token)) {
      r = h;
      break;
    }
  }
  if (r == 0) return rep;  // voting: nobody has voted yet
  rep.first_vote_height = r;
  rep.window_close = r + params.ell - 1;
  if (rep.window_close + params.k > n) return rep;  // window open or not stable yet
  std::uint32_t count = 0;
  for (std::size_t h = r; h <= rep.window_close; ++h)
    if (c.blocks[h - 1].x.contains_vote(token)) ++count;
  rep.votes_in_window = count;
  rep.verdict = count >= rep.votes_needed ? Verdict::accept : Verdict::reject;
  return rep;
}

Verdict evaluate_policy(const Chain& c, const CandidateBlock& cand, const PolicyParams& params) {
  return evaluate_vote_token(c, candidate_digest(cand), params).verdict;
}

PolicyReport evaluate_policy_report(const Chain& c, const CandidateBlock& cand,
                                    const PolicyParams& params) {
  return evaluate_vote_token(c, candidate_digest(cand), params);
}

Chain apply_redaction(const Chain& c, const CandidateBlock& cand, const PolicyParams& params,
                      Mode mode) {
  bool valid = (mode == Mode::ext) ? validate_cand_ext(c, cand, params) : validate_cand(c, cand);
  if (!valid) fail(Errc::candidate_invalid, "candidate does not validate against this chain");
  if (evaluate_policy(c, cand, params) != Verdict::accept)
    fail(Errc::policy_not_accepted, "candidate has no accepted vote tally");
  Chain out = c;
  out.at_height(cand.target_height) = cand.block;
  return out;
}

bool pool_upsert(CandidatePool& pool, const Chain& c, const CandidateBlock& cand, Mode mode,
                 const PolicyParams& params) {
  bool valid = (mode == Mode::ext) ? validate_cand_ext(c, cand, params) : validate_cand(c, cand);
  if (!valid) return false;
  pool.insert_or_assign(candidate_digest(cand), cand);
  return true;
}

SweepResult pool_sweep(CandidatePool& pool, const Chain& c, const PolicyParams& params) {
  SweepResult res;
  std::vector<std::tuple<std::size_t, std::size_t, Digest>> order;
  for (auto it = pool.begin(); it != pool.end();) {
    PolicyReport rep = evaluate_vote_token(c, it->first, params);
    if (rep.verdict == Verdict::accept) {
      order.emplace_back(it->second.target_height, rep.window_close, it->first);
      ++it;
    } else if (rep.verdict == Verdict::reject) {
      ++res.rejected;
      it = pool.erase(it);
    } else {
      ++it;
    }
  }
  std::sort(order.begin(), order.end());
  for (const auto& [height, close, token] : order) {
    auto it = pool.find(token);
    res.accepted.push_back(it->second);
    pool.erase(it);
  }
  return res;
}

}  // namespace redact
