#include "redact/chain.hpp"

#include <algorithm>

#include "redact/redaction.hpp"

namespace redact {

// ── payload / old-state images ──────────────────────────────────────────────

Bytes BlockPayload::image() const {
  std::size_t total = 16 + votes.size() * 32;
  for (const auto& e : entries) total += 8 + e.size();
  Bytes out;
  out.reserve(total);
  put_u64_le(out, entries.size());
  for (const auto& e : entries) {
    put_u64_le(out, e.size());
    out.insert(out.end(), e.begin(), e.end());
  }
  put_u64_le(out, votes.size());
  for (const auto& v : votes) out.insert(out.end(), v.b.begin(), v.b.end());
  return out;
}

bool BlockPayload::contains_vote(const Digest& token) const {
  return std::find(votes.begin(), votes.end(), token) != votes.end();
}

Bytes OldState::image() const {
  Bytes out;
  out.reserve(segments.size() * 32);
  for (const auto& s : segments) out.insert(out.end(), s.b.begin(), s.b.end());
  return out;
}

const Block& Chain::at_height(std::size_t h) const {
  if (h < 1 || h > blocks.size())
    fail(Errc::index_out_of_range, "height " + std::to_string(h) + " outside chain of length " +
                                       std::to_string(blocks.size()));
  return blocks[h - 1];
}

Block& Chain::at_height(std::size_t h) {
  return const_cast<Block&>(std::as_const(*this).at_height(h));
}

// ── digests ─────────────────────────────────────────────────────────────────

Digest content_digest(const Digest& s, const BlockPayload& x) {
  Bytes pimg = x.image();
  return hash_g({s.view(), ByteView(pimg.data(), pimg.size())});
}

Digest link_digest(std::uint64_t ctr, const Digest& g, const OldState& y) {
  auto c = ctr_image(ctr);
  Bytes yimg = y.image();
  return hash_h({ByteView(c.data(), c.size()), g.view(), ByteView(yimg.data(), yimg.size())});
}

Digest block_digest(const Block& b) {
  return link_digest(b.ctr, content_digest(b.s, b.x), b.y);
}

Digest old_state_link(const Block& b) {
  if (b.y.segments.empty()) fail(Errc::mode_violation, "block has an empty old-state list");
  auto c = ctr_image(b.ctr);
  const Digest& y0 = b.y.segments.front();
  return hash_h({ByteView(c.data(), c.size()), y0.view(), y0.view()});
}

bool is_redacted(const Block& b) {
  if (b.y.segments.empty()) return false;
  return b.y.segments.size() > 1 || content_digest(b.s, b.x) != b.y.segments.front();
}

// ── construction ────────────────────────────────────────────────────────────

Block make_genesis(const GenesisConfig& g) {
  Block b;
  b.s = Digest{};
  b.ctr = 0;
  b.x = g.payload;
  b.y.segments = {content_digest(b.s, b.x)};
  return b;
}

Chain make_chain(const GenesisConfig& g, const Target& difficulty) {
  if (difficulty.is_zero()) fail(Errc::config_invalid, "difficulty target must be positive");
  Chain c;
  c.difficulty = difficulty;
  c.blocks.push_back(make_genesis(g));
  return c;
}

std::optional<MineResult> mine_block(const Chain& parent, BlockPayload payload,
                                     std::uint64_t max_attempts, std::uint64_t seed) {
  if (parent.blocks.empty()) fail(Errc::empty_chain, "mining needs a parent chain");
  Block b;
  b.s = block_digest(parent.blocks.back());
  b.x = std::move(payload);
  Digest g = content_digest(b.s, b.x);
  b.y.segments = {g};
  auto start = derive_seed(seed, 0x6d696e65ULL);
  for (std::uint64_t i = 0; i < max_attempts; ++i) {
    std::uint64_t ctr = start + i;  // wraps harmlessly
    auto cimg = ctr_image(ctr);
    Digest d = hash_h({ByteView(cimg.data(), cimg.size()), g.view(), g.view()});
    if (meets_target(d, parent.difficulty)) {
      b.ctr = ctr;
      return MineResult{std::move(b), i + 1};
    }
  }
  return std::nullopt;
}

// ── validation ──────────────────────────────────────────────────────────────

namespace {

void set_issue(ValidationIssue* issue, std::size_t height, const char* reason) {
  if (issue) {
    issue->height = height;
    issue->reason = reason;
  }
}

bool genesis_ok(const Chain& c, const Digest* pinned, ValidationIssue* issue) {
  const Block& g = c.blocks.front();
  if (g.s != Digest{} || g.ctr != 0 || g.y.segments.size() != 1 ||
      g.y.segments.front() != content_digest(g.s, g.x)) {
    set_issue(issue, 1, "malformed genesis block");
    return false;
  }
  if (pinned && block_digest(g) != *pinned) {
    set_issue(issue, 1, "genesis digest does not match the pinned identity");
    return false;
  }
  return true;
}

// Proof-of-work disjunction with the content digest already in hand.
bool block_work_ok(const Block& b, const Digest& g, const Target& difficulty) {
  if (meets_target(link_digest(b.ctr, g, b.y), difficulty)) return true;
  return meets_target(old_state_link(b), difficulty);
}

enum class WalkMode { single, ext, immutable };

// Head-to-genesis reference walk shared by the three serial validators; the
// only differences are the y shape rule and which link forms are admissible.
bool walk_chain(const Chain& c, WalkMode wm, const PolicyParams* params,
                const Digest* pinned, ValidationIssue* issue) {
  if (c.blocks.empty()) fail(Errc::empty_chain, "cannot validate an empty chain");
  std::size_t n = c.length();
  if (wm != WalkMode::ext) {
    // Chain validators yield verdicts, never throw: a repeatedly rewritten
    // block is simply not a valid chain under the single-rewrite rules.
    for (std::size_t h = 2; h <= n; ++h)
      if (c.blocks[h - 1].y.segments.size() != 1) {
        set_issue(issue, h, "multi-segment old state under single-rewrite rules");
        return false;
      }
  }
  for (std::size_t h = 1; h <= n; ++h)
    if (c.blocks[h - 1].y.segments.empty()) {
      set_issue(issue, h, "block has an empty old-state list");
      return false;
    }

  std::size_t j = n;
  if (j == 1) return genesis_ok(c, pinned, issue);

  Digest g_cur = content_digest(c.blocks[j - 1].s, c.blocks[j - 1].x);
  while (j >= 2) {
    const Block& bj = c.blocks[j - 1];
    const Block& bp = c.blocks[j - 2];
    bool work_ok;
    if (wm == WalkMode::immutable)
      work_ok = meets_target(link_digest(bj.ctr, g_cur, bj.y), c.difficulty);
    else
      work_ok = block_work_ok(bj, g_cur, c.difficulty);
    if (!work_ok) {
      set_issue(issue, j, "block fails the proof-of-work check");
      return false;
    }

    Digest g_pred = content_digest(bp.s, bp.x);
    Digest fresh = link_digest(bp.ctr, g_pred, bp.y);
    if (bj.s == fresh) {
      g_cur = g_pred;
      --j;
      continue;
    }
    if (wm != WalkMode::immutable && bj.s == old_state_link(bp)) {
      if (j - 1 == 1) {
        set_issue(issue, 1, "genesis cannot be rewritten");
        return false;
      }
      bool cand_ok = (wm == WalkMode::ext)
                         ? validate_cand_ext(c, j - 1, bp, g_pred, *params)
                         : validate_cand(c, j - 1, bp, g_pred);
      if (!cand_ok) {
        set_issue(issue, j - 1, "rewritten block fails candidate validation");
        return false;
      }
      // The rewrite's vote token is its fresh link, already computed above.
      if (evaluate_vote_token(c, fresh, *params).verdict != Verdict::accept) {
        set_issue(issue, j - 1, "rewrite lacks an accepted vote tally");
        return false;
      }
      g_cur = g_pred;
      --j;
      continue;
    }
    set_issue(issue, j, "link to predecessor matches neither content form");
    return false;
  }
  return genesis_ok(c, pinned, issue);
}

}  // namespace

bool validate_block(const Block& b, const Target& difficulty) {
  if (b.y.segments.empty()) return false;
  if (b.y.segments.size() > 1)
    fail(Errc::mode_violation, "single-rewrite validator given a multi-segment old state");
  return block_work_ok(b, content_digest(b.s, b.x), difficulty);
}

bool validate_block_ext(const Block& b, const Target& difficulty) {
  if (b.y.segments.empty()) return false;
  return block_work_ok(b, content_digest(b.s, b.x), difficulty);
}

bool validate_chain(const Chain& c, const PolicyParams& params, const Digest* pinned_genesis,
                    ValidationIssue* issue) {
  check_policy_params(params);
  return walk_chain(c, WalkMode::single, &params, pinned_genesis, issue);
}

bool validate_chain_ext(const Chain& c, const PolicyParams& params, const Digest* pinned_genesis,
                        ValidationIssue* issue) {
  check_policy_params(params);
  return walk_chain(c, WalkMode::ext, &params, pinned_genesis, issue);
}

bool validate_chain_immutable(const Chain& c, const Digest* pinned_genesis,
                              ValidationIssue* issue) {
  return walk_chain(c, WalkMode::immutable, nullptr, pinned_genesis, issue);
}

// ── OpenMP kernels ──────────────────────────────────────────────────────────

namespace {

// Shared parallel body. Throws only before entering parallel regions.
bool parallel_walk(const Chain& c, WalkMode wm, const PolicyParams* params,
                   const Digest* pinned) {
  if (c.blocks.empty()) fail(Errc::empty_chain, "cannot validate an empty chain");
  const std::size_t n = c.length();
  if (wm != WalkMode::ext) {
    for (std::size_t h = 2; h <= n; ++h)
      if (c.blocks[h - 1].y.segments.size() != 1) return false;
  }
  for (std::size_t h = 1; h <= n; ++h)
    if (c.blocks[h - 1].y.segments.empty()) return false;
  if (!genesis_ok(c, pinned, nullptr)) return false;
  if (n == 1) return true;

  std::vector<Digest> g(n);
  bool ok = true;

#pragma omp parallel for schedule(static)
  for (long i = 0; i < long(n); ++i)
    g[std::size_t(i)] = content_digest(c.blocks[std::size_t(i)].s, c.blocks[std::size_t(i)].x);

  // Blocks 2..n: proof of work on each block, then classify the link to the
  // predecessor; heights whose successor stored the original-content link are
  // rewrites and face the candidate + vote checks afterwards.
  std::vector<std::uint8_t> rewritten(n, 0);
#pragma omp parallel for schedule(static) reduction(&& : ok)
  for (long jj = 2; jj <= long(n); ++jj) {
    const std::size_t j = std::size_t(jj);
    const Block& bj = c.blocks[j - 1];
    const Block& bp = c.blocks[j - 2];
    bool good;
    if (wm == WalkMode::immutable)
      good = meets_target(link_digest(bj.ctr, g[j - 1], bj.y), c.difficulty);
    else
      good = block_work_ok(bj, g[j - 1], c.difficulty);
    if (good) {
      Digest fresh = link_digest(bp.ctr, g[j - 2], bp.y);
      if (bj.s == fresh) {
        // fresh link, nothing more to check
      } else if (wm != WalkMode::immutable && bj.s == old_state_link(bp) && j - 1 >= 2) {
        rewritten[j - 2] = 1;
      } else {
        good = false;
      }
    }
    ok = ok && good;
  }
  if (!ok) return false;
  if (wm == WalkMode::immutable) return true;

  std::vector<std::size_t> targets;
  for (std::size_t h = 2; h <= n; ++h)
    if (rewritten[h - 1]) targets.push_back(h);

  bool redactions_ok = true;
#pragma omp parallel for schedule(dynamic) reduction(&& : redactions_ok)
  for (long t = 0; t < long(targets.size()); ++t) {
    std::size_t h = targets[std::size_t(t)];
    const Block& star = c.blocks[h - 1];
    bool good = (wm == WalkMode::ext)
                    ? validate_cand_ext(c, h, star, g[h - 1], *params)
                    : validate_cand(c, h, star, g[h - 1]);
    // The rewrite's vote token is its fresh link over the digest table.
    good = good && evaluate_vote_token(c, link_digest(star.ctr, g[h - 1], star.y),
                                       *params).verdict == Verdict::accept;
    redactions_ok = redactions_ok && good;
  }
  return redactions_ok;
}

}  // namespace

bool validate_chain_parallel(const Chain& c, const PolicyParams& params,
                             const Digest* pinned_genesis) {
  check_policy_params(params);
  return parallel_walk(c, WalkMode::single, &params, pinned_genesis);
}

bool validate_chain_ext_parallel(const Chain& c, const PolicyParams& params,
                                 const Digest* pinned_genesis) {
  check_policy_params(params);
  return parallel_walk(c, WalkMode::ext, &params, pinned_genesis);
}

bool validate_chain_immutable_parallel(const Chain& c, const Digest* pinned_genesis) {
  return parallel_walk(c, WalkMode::immutable, nullptr, pinned_genesis);
}

// ── canonical images ────────────────────────────────────────────────────────

Bytes block_image(const Block& b) {
  Bytes out;
  Bytes pimg = b.x.image();
  Bytes yimg = b.y.image();
  out.reserve(8 * 4 + 32 + pimg.size() + yimg.size());
  put_u64_le(out, 32);
  out.insert(out.end(), b.s.b.begin(), b.s.b.end());
  put_u64_le(out, pimg.size());
  out.insert(out.end(), pimg.begin(), pimg.end());
  put_u64_le(out, 8);
  put_u64_le(out, b.ctr);
  put_u64_le(out, yimg.size());
  out.insert(out.end(), yimg.begin(), yimg.end());
  return out;
}

Bytes chain_image(const Chain& c) {
  Bytes out;
  out.insert(out.end(), c.difficulty.b.begin(), c.difficulty.b.end());
  put_u64_le(out, c.blocks.size());
  for (const auto& b : c.blocks) {
    Bytes bi = block_image(b);
    put_u64_le(out, bi.size());
    out.insert(out.end(), bi.begin(), bi.end());
  }
  return out;
}

}  // namespace redact
