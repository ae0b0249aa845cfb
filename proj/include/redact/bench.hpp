#pragma once
// Benchmark harness: deterministic workload generation at configurable scale
// and wall-clock timing of full-chain validation, reported as mean/stddev
// with overhead percentages against an explicitly named baseline.
//
// Workloads. generate_chain builds an n-block chain whose blocks each carry
// tx_per_block data entries of entry_bytes bytes (stand-ins for serialized
// transactions). floor(redact_fraction * n_blocks) evenly spread stable
// blocks additionally carry one 4-byte dummy entry (slot 0) which an approved
// rewrite then erases: the required votes are embedded in the blocks mined
// after each target becomes k deep, and every rewrite is applied through the
// regular candidate/tally path, so the finished chain revalidates end to end.
//
// Timing covers the validation call only — parsing and generation are
// excluded — on a monotonic clock, repetitions run sequentially.

#include <cstdint>
#include <string>
#include <vector>

#include "redact/chain.hpp"

namespace redact::bench {

struct BenchSpec {
  std::size_t n_blocks = 2000;
  std::size_t tx_per_block = 100;
  double redact_fraction = 0.0;
  PolicyParams params;
  std::size_t repetitions = 20;
  std::uint64_t seed = 1;
  Mode mode = Mode::single;
  std::size_t entry_bytes = 250;  // per simulated transaction
};

void check_bench_spec(const BenchSpec& spec);  // throws Error(config_invalid)

// Deterministic workload chain as described above. Throws Error(config_invalid)
// on an unsatisfiable spec (ledger mode, or no room for the requested rewrites).
Chain generate_chain(const BenchSpec& spec);

// Repeated-rewrite workload: one stable block rewritten `rewrites` times in
// sequence, each pass approved by fresh embedded votes. `tokens[i]` is the
// digest the i-th rewrite installed (the block's digest right after that
// pass); the last one is the block's current digest.
struct ExtChainExample {
  Chain chain;
  std::size_t target_height = 0;
  std::vector<Digest> tokens;
};

ExtChainExample generate_ext_chain(std::size_t rewrites, const PolicyParams& params,
                                   std::uint64_t seed);

// ── timing ──────────────────────────────────────────────────────────────────

enum class ValidatorKind {
  redactable,          // serial single-rewrite validator
  redactable_ext,      // serial repeated-rewrite validator
  immutable,           // serial baseline that ignores the rewrite machinery
  redactable_parallel,
  redactable_ext_parallel,
  immutable_parallel,
};

std::string validator_name(ValidatorKind kind);

struct BenchResult {
  std::string config_name;
  std::string validator;
  std::size_t runs = 0;
  double mean_ms = 0;
  double stddev_ms = 0;          // sample standard deviation
  double overhead_pct = 0;       // vs the named baseline, 0 when none
  std::string baseline_name;     // empty when no baseline was named
  bool valid = false;            // the validator's verdict on the chain
};

BenchResult bench_validate(const Chain& chain, const PolicyParams& params,
                           ValidatorKind kind, std::size_t repetitions,
                           const std::string& config_name);

// overhead_pct = 100 * (result.mean - baseline.mean) / baseline.mean
void set_overhead(BenchResult& result, const BenchResult& baseline);

// ── CSV emission ────────────────────────────────────────────────────────────

// Columns: name,validator,mode,n_blocks,tx_per_block,redact_fraction,k,ell,
//          rho,repetitions,seed,entry_bytes,mean_ms,stddev_ms,overhead_pct,
//          baseline_name
std::string bench_csv_header();
std::string bench_csv_row(const BenchSpec& spec, const BenchResult& result);

// ── trend fitting ───────────────────────────────────────────────────────────

// Least-squares y = a + b x + c x^2 with a residual noise floor. slope_nonneg
// holds when b >= 0 or the slope's total contribution across the x range is
// below twice the residual standard deviation (statistically flat).
// at_most_linear holds when the quadratic term contributes, at the largest x,
// less than 20% of the linear term's contribution or less than twice the
// residual standard deviation.
struct QuadFit {
  double a = 0, b = 0, c = 0;
  double sigma = 0;   // residual standard deviation
  double x_max = 0;
  bool slope_nonneg = false;
  bool at_most_linear = false;
};

QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace redact::bench
