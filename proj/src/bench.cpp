#include "redact/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "redact/redaction.hpp"

namespace redact::bench {
namespace {

// Easy fixed difficulty: workload cost should come from validation, not mining.
Target bench_difficulty() { return Target::pow2(252); }

constexpr std::uint64_t kMineBudget = 1'000'000;

// derive_seed tags, one per independent byte stream
constexpr std::uint64_t kTagEntry = 0xB1;
constexpr std::uint64_t kTagDummy = 0xB2;
constexpr std::uint64_t kTagMine = 0xB3;
constexpr std::uint64_t kTagExtPayload = 0xB4;
constexpr std::uint64_t kTagExtMine = 0xB5;

void append_mined(Chain& c, BlockPayload payload, std::uint64_t mine_seed) {
  auto mined = mine_block(c, std::move(payload), kMineBudget, mine_seed);
  if (!mined) fail(Errc::config_invalid, "mining budget exhausted during generation");
  c.blocks.push_back(std::move(mined->block));
}

std::size_t planned_rewrites(const BenchSpec& spec) {
  return static_cast<std::size_t>(spec.redact_fraction *
                                  static_cast<double>(spec.n_blocks));
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

bool run_validator(ValidatorKind kind, const Chain& c, const PolicyParams& params) {
  switch (kind) {
    case ValidatorKind::redactable:
      return validate_chain(c, params);
    case ValidatorKind::redactable_ext:
      return validate_chain_ext(c, params);
    case ValidatorKind::immutable:
      return validate_chain_immutable(c);
    case ValidatorKind::redactable_parallel:
      return validate_chain_parallel(c, params);
    case ValidatorKind::redactable_ext_parallel:
      return validate_chain_ext_parallel(c, params);
    case ValidatorKind::immutable_parallel:
      return validate_chain_immutable_parallel(c);
  }
  fail(Errc::config_invalid, "unknown validator kind");
}

std::string fmt(double v, const char* spec_str) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec_str, v);
  return buf;
}

}  // namespace

void check_bench_spec(const BenchSpec& spec) {
  if (spec.n_blocks < 2 || spec.n_blocks > 1'000'000)
    fail(Errc::config_invalid, "n_blocks out of range");
  if (spec.tx_per_block < 1 || spec.tx_per_block > 100'000)
    fail(Errc::config_invalid, "tx_per_block out of range");
  if (!(spec.redact_fraction >= 0.0) || !(spec.redact_fraction <= 1.0))
    fail(Errc::config_invalid, "redact_fraction must lie in [0, 1]");
  if (spec.repetitions < 1)
    fail(Errc::config_invalid, "repetitions must be at least 1");
  if (spec.entry_bytes < 4 || spec.entry_bytes > 65'536)
    fail(Errc::config_invalid, "entry_bytes out of range");
  const double total_bytes = static_cast<double>(spec.n_blocks) *
                             static_cast<double>(spec.tx_per_block) *
                             static_cast<double>(spec.entry_bytes);
  if (total_bytes > 2e9) fail(Errc::config_invalid, "workload exceeds 2 GB of entries");
  check_policy_params(spec.params);
  if (spec.mode == Mode::ledger)
    fail(Errc::config_invalid, "ledger mode has its own generator");

  const std::size_t want = planned_rewrites(spec);
  if (want > 0) {
    const std::size_t span = 2 * spec.params.k + spec.params.ell;
    const std::size_t t_max = spec.n_blocks > span ? spec.n_blocks - span : 0;
    if (t_max < 2 || want > t_max - 1)
      fail(Errc::config_invalid, "chain too short for the requested rewrite count");
  }
}

Chain generate_chain(const BenchSpec& spec) {
  check_bench_spec(spec);
  const std::uint32_t k = spec.params.k;
  const std::uint32_t need = required_votes(spec.params);
  const std::size_t n = spec.n_blocks;
  const std::size_t want = planned_rewrites(spec);

  // Rewrite targets, evenly spread over the stable range. Target t's votes
  // occupy heights t+k+1 .. t+k+need, and its tally is final once height
  // t+2k+ell exists, hence the t_max bound checked above.
  std::vector<std::size_t> targets;
  if (want > 0) {
    const std::size_t t_max = n - (2 * k + spec.params.ell);
    const double stride = static_cast<double>(t_max - 1) / static_cast<double>(want);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < want; ++i) {
      std::size_t t = 2 + static_cast<std::size_t>(static_cast<double>(i) * stride);
      if (t <= prev) t = prev + 1;  // strict monotonicity under fp rounding
      targets.push_back(t);
      prev = t;
    }
    if (targets.back() > t_max)
      fail(Errc::config_invalid, "rewrite schedule overflowed the stable range");
  }

  GenesisConfig genesis;
  genesis.payload.entries.push_back(Rng(derive_seed(spec.seed, kTagEntry, 1)).bytes(32));
  Chain c = make_chain(genesis, bench_difficulty());

  std::map<std::size_t, std::vector<Digest>> votes_at;
  std::vector<CandidateBlock> cands;
  std::size_t next_target = 0;
  for (std::size_t h = 2; h <= n; ++h) {
    const bool is_target = next_target < targets.size() && targets[next_target] == h;
    BlockPayload p;
    if (is_target)
      p.entries.push_back(Rng(derive_seed(spec.seed, kTagDummy, h)).bytes(4));
    Rng er(derive_seed(spec.seed, kTagEntry, h));
    for (std::size_t j = 0; j < spec.tx_per_block; ++j)
      p.entries.push_back(er.bytes(spec.entry_bytes));
    if (auto it = votes_at.find(h); it != votes_at.end()) p.votes = it->second;

    append_mined(c, std::move(p), derive_seed(spec.seed, kTagMine, h));

    if (is_target) {
      Block cb = c.blocks.back();
      cb.x.entries[0].clear();  // erase the 4-byte dummy
      CandidateBlock cand{h, std::move(cb)};
      const Digest token = candidate_digest(cand);
      for (std::uint32_t v = 0; v < need; ++v)
        votes_at[h + k + 1 + v].push_back(token);
      cands.push_back(std::move(cand));
      ++next_target;
    }
  }

  // Same gate as apply_redaction, applied in place: copying a chain this
  // large once per rewrite would dominate generation time.
  for (const CandidateBlock& cand : cands) {
    const bool ok = spec.mode == Mode::ext ? validate_cand_ext(c, cand, spec.params)
                                           : validate_cand(c, cand);
    if (!ok || evaluate_policy(c, cand, spec.params) != Verdict::accept)
      fail(Errc::config_invalid, "workload rewrite did not reach acceptance");
    c.at_height(cand.target_height) = cand.block;
  }
  return c;
}

ExtChainExample generate_ext_chain(std::size_t rewrites, const PolicyParams& params,
                                   std::uint64_t seed) {
  check_policy_params(params);
  if (rewrites < 1 || rewrites > 64)
    fail(Errc::config_invalid, "rewrites out of range");
  const std::uint32_t k = params.k;
  const std::uint32_t ell = params.ell;
  const std::uint32_t need = required_votes(params);

  ExtChainExample ex;
  ex.target_height = 2;

  GenesisConfig genesis;
  genesis.payload.entries.push_back(Rng(derive_seed(seed, kTagEntry, 1)).bytes(32));
  Chain c = make_chain(genesis, bench_difficulty());

  std::size_t h = 2;
  auto grow = [&](std::vector<Digest> votes) {
    BlockPayload p;
    p.entries.push_back(Rng(derive_seed(seed, kTagEntry, h)).bytes(32));
    p.votes = std::move(votes);
    append_mined(c, std::move(p), derive_seed(seed, kTagExtMine, h));
    ++h;
  };

  // Make the target block and bury it k deep.
  for (std::size_t i = 0; i < k + 1; ++i) grow({});

  for (std::size_t stage = 1; stage <= rewrites; ++stage) {
    BlockPayload np;
    np.entries.push_back(Rng(derive_seed(seed, kTagExtPayload, stage)).bytes(48));
    np.votes = c.at_height(ex.target_height).x.votes;
    CandidateBlock cand = propose_edit(c, ex.target_height, std::move(np), k, Mode::ext);
    const Digest token = candidate_digest(cand);
    ex.tokens.push_back(token);
    // need vote blocks open the window; the rest close and stabilize it.
    for (std::uint32_t j = 0; j < ell + k; ++j)
      grow(j < need ? std::vector<Digest>{token} : std::vector<Digest>{});
    c = apply_redaction(c, cand, params, Mode::ext);
  }

  ex.chain = std::move(c);
  return ex;
}

std::string validator_name(ValidatorKind kind) {
  switch (kind) {
    case ValidatorKind::redactable: return "redactable";
    case ValidatorKind::redactable_ext: return "redactable_ext";
    case ValidatorKind::immutable: return "immutable";
    case ValidatorKind::redactable_parallel: return "redactable_parallel";
    case ValidatorKind::redactable_ext_parallel: return "redactable_ext_parallel";
    case ValidatorKind::immutable_parallel: return "immutable_parallel";
  }
  return "unknown";
}

BenchResult bench_validate(const Chain& chain, const PolicyParams& params,
                           ValidatorKind kind, std::size_t repetitions,
                           const std::string& config_name) {
  if (repetitions < 1) fail(Errc::config_invalid, "repetitions must be at least 1");
  BenchResult r;
  r.config_name = config_name;
  r.validator = validator_name(kind);
  r.runs = repetitions;

  // One untimed pass first: the initial touch of a freshly generated chain
  // pays page-fault and cache-fill costs that would otherwise be billed to
  // whichever validator happens to run first.
  r.valid = run_validator(kind, chain, params);

  std::vector<double> ms;
  ms.reserve(repetitions);
  for (std::size_t i = 0; i < repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool ok = run_validator(kind, chain, params);
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    r.valid = ok;
  }
  r.mean_ms = mean_of(ms);
  r.stddev_ms = sample_stddev(ms, r.mean_ms);
  return r;
}

void set_overhead(BenchResult& result, const BenchResult& baseline) {
  if (baseline.mean_ms <= 0)
    fail(Errc::config_invalid, "baseline mean must be positive");
  result.overhead_pct = 100.0 * (result.mean_ms - baseline.mean_ms) / baseline.mean_ms;
  result.baseline_name = baseline.config_name;
}

std::string bench_csv_header() {
  return "name,validator,mode,n_blocks,tx_per_block,redact_fraction,k,ell,rho,"
         "repetitions,seed,entry_bytes,mean_ms,stddev_ms,overhead_pct,baseline_name";
}

std::string bench_csv_row(const BenchSpec& spec, const BenchResult& result) {
  std::string row;
  row += result.config_name;
  row += ',';
  row += result.validator;
  row += ',';
  row += mode_name(spec.mode);
  row += ',';
  row += std::to_string(spec.n_blocks);
  row += ',';
  row += std::to_string(spec.tx_per_block);
  row += ',';
  row += fmt(spec.redact_fraction, "%.6g");
  row += ',';
  row += std::to_string(spec.params.k);
  row += ',';
  row += std::to_string(spec.params.ell);
  row += ',';
  row += fmt(spec.params.rho, "%.6g");
  row += ',';
  row += std::to_string(spec.repetitions);
  row += ',';
  row += std::to_string(spec.seed);
  row += ',';
  row += std::to_string(spec.entry_bytes);
  row += ',';
  row += fmt(result.mean_ms, "%.4f");
  row += ',';
  row += fmt(result.stddev_ms, "%.4f");
  row += ',';
  row += fmt(result.overhead_pct, "%.3f");
  row += ',';
  row += result.baseline_name;
  return row;
}

QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  QuadFit f;
  const std::size_t n = x.size();
  if (n != y.size() || n == 0) return f;
  for (double v : x) f.x_max = std::max(f.x_max, std::fabs(v));

  if (n < 3) {
    // Degenerate: fit what the points allow, residuals are zero.
    if (n == 1) {
      f.a = y[0];
    } else {
      f.b = (x[1] != x[0]) ? (y[1] - y[0]) / (x[1] - x[0]) : 0.0;
      f.a = y[0] - f.b * x[0];
    }
  } else {
    // Normal equations for y = a + b x + c x^2, solved with Cramer's rule.
    double s0 = static_cast<double>(n), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x[i], x2 = xi * xi;
      s1 += xi;
      s2 += x2;
      s3 += x2 * xi;
      s4 += x2 * x2;
      t0 += y[i];
      t1 += y[i] * xi;
      t2 += y[i] * x2;
    }
    const auto det3 = [](double a11, double a12, double a13, double a21, double a22,
                         double a23, double a31, double a32, double a33) {
      return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
             a13 * (a21 * a32 - a22 * a31);
    };
    const double d = det3(s0, s1, s2, s1, s2, s3, s2, s3, s4);
    if (std::fabs(d) > 1e-12) {
      f.a = det3(t0, s1, s2, t1, s2, s3, t2, s3, s4) / d;
      f.b = det3(s0, t0, s2, s1, t1, s3, s2, t2, s4) / d;
      f.c = det3(s0, s1, t0, s1, s2, t1, s2, s3, t2) / d;
    }
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pred = f.a + f.b * x[i] + f.c * x[i] * x[i];
      ssr += (y[i] - pred) * (y[i] - pred);
    }
    if (n > 3) f.sigma = std::sqrt(ssr / static_cast<double>(n - 3));
  }

  const double lin = std::fabs(f.b) * f.x_max;
  const double quad = std::fabs(f.c) * f.x_max * f.x_max;
  const double noise_floor = 2.0 * f.sigma;
  f.slope_nonneg = f.b >= 0.0 || lin < noise_floor;
  f.at_most_linear = quad < 0.2 * lin || quad < noise_floor;
  return f;
}

}  // namespace redact::bench
