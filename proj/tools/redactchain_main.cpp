// Command-line front end: chain files in and out, one subcommand per task.
// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "redact/bench.hpp"
#include "redact/dump.hpp"
#include "redact/ledger.hpp"
#include "redact/netsim.hpp"
#include "redact/redaction.hpp"

namespace {

using redact::Bytes;
using redact::CandidateBlock;
using redact::Chain;
using redact::Digest;
using redact::Errc;
using redact::Mode;
using redact::PolicyParams;
using redact::Target;

int code_for(const redact::Error& e) {
  switch (e.code()) {
    case Errc::config_invalid:
    case Errc::bad_spec:
    case Errc::bad_hex:
    case Errc::unknown_scenario:
      return 2;
    default:
      return 1;
  }
}

struct PolicyFlags {
  std::uint32_t k = PolicyParams{}.k;
  std::uint32_t ell = PolicyParams{}.ell;
  double rho = PolicyParams{}.rho;

  PolicyParams params() const {
    PolicyParams p;
    p.k = k;
    p.ell = ell;
    p.rho = rho;
    redact::check_policy_params(p);
    return p;
  }
};

void add_policy_flags(CLI::App* cmd, PolicyFlags& f) {
  cmd->add_option("--k", f.k, "stability depth k");
  cmd->add_option("--ell", f.ell, "voting window length");
  cmd->add_option("--rho", f.rho, "vote quorum fraction");
}

bool is_ledger_dump(const std::string& text) {
  const auto nl = text.find('\n');
  const std::string head = text.substr(0, nl);
  return head.find("\"mode\":\"ledger\"") != std::string::npos;
}

redact::io::LoadedChain load_payload_chain(const std::string& path) {
  const std::string text = redact::io::read_text_file(path);
  if (is_ledger_dump(text))
    redact::fail(Errc::config_invalid, "this subcommand takes a block-payload chain, "
                                       "not a transaction-ledger dump");
  return redact::io::load_chain(text);
}

redact::ledger::LedgerChain load_ledger_dump(const std::string& path) {
  const std::string text = redact::io::read_text_file(path);
  if (!is_ledger_dump(text))
    redact::fail(Errc::config_invalid, "this subcommand takes a transaction-ledger dump");
  return redact::io::load_ledger_chain(text);
}

std::vector<std::size_t> redacted_heights(const Chain& c) {
  std::vector<std::size_t> out;
  for (std::size_t h = 1; h <= c.length(); ++h)
    if (redact::is_redacted(c.at_height(h))) out.push_back(h);
  return out;
}

std::string joined(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t x : v) {
    if (!s.empty()) s += ", ";
    s += std::to_string(x);
  }
  return s.empty() ? "none" : s;
}

redact::sim::Strategy strategy_from_name(const std::string& name) {
  using redact::sim::Strategy;
  if (name == "none") return Strategy::none;
  if (name == "delay-only") return Strategy::delay_only;
  if (name == "unapproved-edit") return Strategy::unapproved_edit;
  if (name == "malicious-candidate") return Strategy::malicious_candidate;
  if (name == "spam") return Strategy::spam;
  redact::fail(Errc::config_invalid, "unknown strategy: " + name);
}

redact::sim::EditScriptEntry parse_edit_entry(const std::string& text) {
  redact::sim::EditScriptEntry e;
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() < 3 || parts.size() > 4)
    redact::fail(Errc::config_invalid, "--edit wants round:node:height[:junk]");
  try {
    e.round = std::stoull(parts[0]);
    e.node = std::stoull(parts[1]);
    e.target_height = std::stoull(parts[2]);
  } catch (const std::exception&) {
    redact::fail(Errc::config_invalid, "--edit fields must be numbers");
  }
  if (parts.size() == 4) {
    if (parts[3] == "junk")
      e.junk_entries = true;
    else
      redact::fail(Errc::config_invalid, "--edit trailing field must be 'junk'");
  }
  return e;
}

// ── subcommand option bags ──────────────────────────────────────────────────

struct InitOpts {
  std::string out, config, mode = "single";
  PolicyFlags policy;
  unsigned difficulty_bits = 240;
  std::uint64_t min_fee = 0, seed = 1;
  std::string genesis_hex;
};

int run_init(const InitOpts& o) {
  redact::io::RunConfig cfg;
  cfg.mode = redact::mode_from_name(o.mode);
  cfg.params = o.policy.params();
  if (o.difficulty_bits < 1 || o.difficulty_bits > 255)
    redact::fail(Errc::config_invalid, "--difficulty-bits must lie in 1..255");
  cfg.difficulty = Target::pow2(o.difficulty_bits);
  cfg.min_edit_fee = o.min_fee;

  std::string dump;
  if (cfg.mode == Mode::ledger) {
    const auto kp = redact::ledger::keypair_from_seed(o.seed);
    redact::ledger::TxList genesis_txs;
    genesis_txs.txs.push_back(
        redact::ledger::make_coinbase(kp, redact::ledger::kBlockSubsidy, {}));
    auto chain = redact::ledger::make_ledger_chain(cfg.difficulty, cfg.params,
                                                   cfg.min_edit_fee, genesis_txs);
    dump = redact::io::dump_ledger_chain(chain);
    std::cout << "genesis coinbase key derived from seed " << o.seed << "\n";
  } else {
    redact::GenesisConfig g;
    g.payload.entries.push_back(o.genesis_hex.empty()
                                    ? redact::Rng(redact::derive_seed(o.seed, 0x9e, 1)).bytes(32)
                                    : redact::from_hex(o.genesis_hex));
    dump = redact::io::dump_chain(redact::make_chain(g, cfg.difficulty), cfg.mode);
  }
  redact::io::write_text_file(o.out, dump);
  std::cout << "wrote " << o.out << " (mode " << redact::mode_name(cfg.mode)
            << ", difficulty " << cfg.difficulty.hex().substr(0, 16) << "…)\n";
  if (!o.config.empty()) {
    redact::io::write_text_file(o.config, redact::io::config_text(cfg));
    std::cout << "wrote " << o.config << "\n";
  }
  return 0;
}

struct MineOpts {
  std::string chain, out;
  std::vector<std::string> entry_hex, vote_hex;
  std::size_t entries = 1, entry_bytes = 64, count = 1;
  std::uint64_t seed = 1, budget = 10'000'000;
};

int run_mine(const MineOpts& o) {
  auto loaded = load_payload_chain(o.chain);
  Chain& c = loaded.chain;
  for (std::size_t i = 0; i < o.count; ++i) {
    const std::size_t h = c.length() + 1;
    redact::BlockPayload p;
    if (!o.entry_hex.empty()) {
      for (const auto& hex : o.entry_hex) p.entries.push_back(redact::from_hex(hex));
    } else {
      redact::Rng er(redact::derive_seed(o.seed, 0x6d71, h));
      for (std::size_t j = 0; j < o.entries; ++j) p.entries.push_back(er.bytes(o.entry_bytes));
    }
    if (i == 0)
      for (const auto& hex : o.vote_hex) p.votes.push_back(Digest::parse_hex(hex));
    auto mined = redact::mine_block(c, std::move(p), o.budget,
                                    redact::derive_seed(o.seed, 0x6d32, h));
    if (!mined) redact::fail(Errc::config_invalid, "mining budget exhausted");
    c.blocks.push_back(std::move(mined->block));
    std::cout << "height " << h << "  digest " << redact::block_digest(c.blocks.back()).hex()
              << "  attempts " << mined->attempts << "\n";
  }
  redact::io::write_text_file(o.out.empty() ? o.chain : o.out,
                              redact::io::dump_chain(c, loaded.mode));
  return 0;
}

struct ProposeOpts {
  std::string chain, out;
  std::size_t height = 0;
  std::vector<std::size_t> zero_entries, drop_entries;
  PolicyFlags policy;
  bool apply = false;
};

int run_propose(const ProposeOpts& o) {
  auto loaded = load_payload_chain(o.chain);
  const PolicyParams params = o.policy.params();
  if (o.height < 1 || o.height > loaded.chain.length())
    redact::fail(Errc::config_invalid, "--height outside the chain");

  redact::BlockPayload np = loaded.chain.at_height(o.height).x;
  auto check_index = [&](std::size_t i) {
    if (i >= np.entries.size())
      redact::fail(Errc::config_invalid, "entry index " + std::to_string(i) + " out of range");
  };
  if (o.zero_entries.empty() && o.drop_entries.empty()) {
    for (auto& e : np.entries) std::fill(e.begin(), e.end(), std::uint8_t{0});
  } else {
    for (std::size_t i : o.zero_entries) {
      check_index(i);
      std::fill(np.entries[i].begin(), np.entries[i].end(), std::uint8_t{0});
    }
    for (std::size_t i : o.drop_entries) {
      check_index(i);
      np.entries[i].clear();
    }
  }

  const CandidateBlock cand =
      redact::propose_edit(loaded.chain, o.height, std::move(np), params.k, loaded.mode);
  const auto report = redact::evaluate_policy_report(loaded.chain, cand, params);
  std::cout << "token " << redact::candidate_digest(cand).hex() << "\n"
            << "verdict " << redact::verdict_name(report.verdict) << " ("
            << report.votes_in_window << "/" << report.votes_needed << " votes)\n";

  if (o.apply) {
    if (report.verdict != redact::Verdict::accept) {
      std::cerr << "cannot apply: verdict is " << redact::verdict_name(report.verdict) << "\n";
      return 1;
    }
    const Chain next = redact::apply_redaction(loaded.chain, cand, params, loaded.mode);
    redact::io::write_text_file(o.out.empty() ? o.chain : o.out,
                                redact::io::dump_chain(next, loaded.mode));
    std::cout << "applied rewrite at height " << o.height << "\n";
  }
  return 0;
}

struct VoteStatusOpts {
  std::string chain, token;
  PolicyFlags policy;
};

int run_vote_status(const VoteStatusOpts& o) {
  auto loaded = load_payload_chain(o.chain);
  const auto report = redact::evaluate_vote_token(loaded.chain, Digest::parse_hex(o.token),
                                                  o.policy.params());
  std::cout << "verdict " << redact::verdict_name(report.verdict) << "\n";
  if (report.first_vote_height == 0) {
    std::cout << "no vote on chain yet\n";
  } else {
    std::cout << "window " << report.first_vote_height << ".." << report.window_close
              << "  votes " << report.votes_in_window << "/" << report.votes_needed << "\n";
  }
  return 0;
}

struct ValidateOpts {
  std::string chain, config;
  PolicyFlags policy;
  bool immutable = false, parallel = false;
};

int run_validate(const ValidateOpts& o) {
  const std::string text = redact::io::read_text_file(o.chain);
  PolicyParams params = o.policy.params();
  if (!o.config.empty())
    params = redact::io::parse_config(redact::io::read_text_file(o.config)).params;

  redact::ValidationIssue issue;
  bool ok = false;
  std::string shape;
  if (is_ledger_dump(text)) {
    if (o.immutable || o.parallel)
      redact::fail(Errc::config_invalid, "--immutable/--parallel apply to payload chains");
    const auto chain = redact::io::load_ledger_chain(text);
    ok = redact::ledger::validate_ledger_chain(chain, &issue);
    shape = std::to_string(chain.length()) + " blocks (ledger)";
  } else {
    const auto loaded = redact::io::load_chain(text);
    if (o.immutable) {
      ok = o.parallel ? redact::validate_chain_immutable_parallel(loaded.chain)
                      : redact::validate_chain_immutable(loaded.chain, nullptr, &issue);
    } else if (loaded.mode == Mode::ext) {
      ok = o.parallel ? redact::validate_chain_ext_parallel(loaded.chain, params)
                      : redact::validate_chain_ext(loaded.chain, params, nullptr, &issue);
    } else {
      ok = o.parallel ? redact::validate_chain_parallel(loaded.chain, params)
                      : redact::validate_chain(loaded.chain, params, nullptr, &issue);
    }
    shape = std::to_string(loaded.chain.length()) + " blocks, rewritten heights: " +
            joined(redacted_heights(loaded.chain));
  }
  if (ok) {
    std::cout << "valid: " << shape << "\n";
    return 0;
  }
  if (o.parallel)
    std::cout << "invalid\n";  // parallel kernels report the verdict only
  else
    std::cout << "invalid at height " << issue.height << ": " << issue.reason << "\n";
  return 1;
}

struct SimulateOpts {
  std::size_t nodes = 10, corrupt = 0, rounds = 100;
  std::uint64_t q = 64, seed = 1;
  std::size_t delay = 1;
  bool fixed_delay = false;
  unsigned difficulty_bits = 246;
  std::string mode = "single", strategy = "none", trace_path;
  PolicyFlags policy;
  std::size_t env_every = 0, env_bytes = 64;
  std::vector<std::string> edits;
  std::size_t tamper_round = 0, spam_per_round = 8;
  double tau = 0, mu = 0;
  std::size_t growth_window = 40, quality_window = 60;
};

int run_simulate(const SimulateOpts& o) {
  redact::sim::SimConfig cfg;
  cfg.n_nodes = o.nodes;
  cfg.n_corrupt = o.corrupt;
  cfg.rounds = o.rounds;
  cfg.q = o.q;
  cfg.max_delay = o.delay;
  cfg.difficulty = Target::pow2(o.difficulty_bits);
  cfg.params = o.policy.params();
  cfg.mode = redact::mode_from_name(o.mode);
  cfg.master_seed = o.seed;
  cfg.scenario = o.strategy;
  cfg.env_entry_every = o.env_every;
  cfg.env_entry_bytes = o.env_bytes;
  for (const auto& e : o.edits) cfg.edit_script.push_back(parse_edit_entry(e));

  redact::sim::AdversarySpec adv;
  adv.max_delay = o.delay;
  adv.randomize_delays = !o.fixed_delay;
  adv.strategy = strategy_from_name(o.strategy);
  adv.tamper_round = o.tamper_round;
  adv.spam_per_round = o.spam_per_round;

  const auto trace = redact::sim::run_simulation(cfg, adv);
  if (!o.trace_path.empty()) {
    redact::io::write_text_file(o.trace_path, redact::sim::trace_to_jsonl(trace));
    std::cout << "trace written to " << o.trace_path << "\n";
  }

  std::size_t min_len = SIZE_MAX, max_len = 0;
  const auto& last = trace.snaps.back();
  for (std::size_t i = 0; i < last.size(); ++i) {
    if (last[i].corrupted) continue;
    min_len = std::min(min_len, last[i].length());
    max_len = std::max(max_len, last[i].length());
  }
  std::cout << "rounds " << cfg.rounds << ", honest chain length " << min_len << ".."
            << max_len << ", rewrites observed " << trace.redactions.size()
            << ", messages " << trace.messages.size() << "\n";

  bool all_pass = true;
  auto line = [&](const char* name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    all_pass = all_pass && pass;
  };

  const auto delivery = redact::sim::audit_delivery(trace);
  line("delivery", delivery.pass,
       std::to_string(delivery.messages) + " messages, " + std::to_string(delivery.late) +
           " late, " + std::to_string(delivery.mismatched) + " altered");

  const auto prefix = redact::sim::check_editable_common_prefix(trace, cfg.params.k);
  line("editable-common-prefix", prefix.pass,
       std::to_string(prefix.pairs_checked) + " pairs, " +
           std::to_string(prefix.violations_total) + " violations, " +
           std::to_string(prefix.laggard_passes) + " laggard passes");

  if (o.tau > 0) {
    const auto growth = redact::sim::check_chain_growth(trace, o.tau, o.growth_window);
    line("chain-growth", growth.pass,
         "min rate " + std::to_string(growth.min_rate) + " vs tau " + std::to_string(o.tau));
  }
  if (o.mu > 0) {
    const auto quality = redact::sim::check_chain_quality(trace, o.mu, o.quality_window);
    line("chain-quality", quality.pass,
         "max adversarial ratio " + std::to_string(quality.max_ratio));
  }
  if (cfg.env_entry_every > 0) {
    const auto live = redact::sim::audit_liveness(trace);
    line("liveness", live.all_confirmed,
         std::to_string(live.confirmed) + "/" + std::to_string(live.entries) +
             " entries confirmed, worst " + std::to_string(live.max_rounds_to_confirm) +
             " rounds");
  }
  if (!trace.redactions.empty()) {
    const auto app = redact::sim::audit_redaction_application(trace);
    line("rewrite-application", app.pass,
         std::to_string(app.tokens) + " tokens, max spread " + std::to_string(app.max_spread) +
             " rounds, " + std::to_string(app.never_held) + " absentees");
  }
  return all_pass ? 0 : 1;
}

struct AttackOpts {
  std::string scenario;
  std::size_t nodes = 8, corrupt = 2, rounds = 160;
  std::uint64_t q = 64, seed = 1;
  std::size_t delay = 2;
  unsigned difficulty_bits = 246;
  PolicyFlags policy;
  std::size_t env_every = 3;
};

int run_attack(const AttackOpts& o) {
  redact::sim::SimConfig cfg;
  cfg.n_nodes = o.nodes;
  cfg.n_corrupt = o.corrupt;
  cfg.rounds = o.rounds;
  cfg.q = o.q;
  cfg.max_delay = o.delay;
  cfg.difficulty = Target::pow2(o.difficulty_bits);
  cfg.params = o.policy.params();
  cfg.master_seed = o.seed;
  cfg.env_entry_every = o.env_every;

  const auto report = redact::sim::run_attack_scenario(o.scenario, cfg);
  std::cout << redact::sim::scenario_report_json(report) << "\n";
  return report.passes == report.seeds.size() ? 0 : 1;
}

struct BenchOpts {
  std::size_t blocks = 2000, tx = 100, reps = 20, entry_bytes = 250;
  double redact = 0.0;
  std::uint64_t seed = 1;
  std::string out = "bench.csv", mode = "single";
  PolicyFlags policy;
  bool parallel = false;
};

int run_bench(const BenchOpts& o) {
  namespace bench = redact::bench;
  bench::BenchSpec spec;
  spec.n_blocks = o.blocks;
  spec.tx_per_block = o.tx;
  spec.redact_fraction = o.redact;
  spec.params = o.policy.params();
  spec.repetitions = o.reps;
  spec.seed = o.seed;
  spec.mode = redact::mode_from_name(o.mode);
  spec.entry_bytes = o.entry_bytes;
  check_bench_spec(spec);

  const auto imm_kind = o.parallel ? bench::ValidatorKind::immutable_parallel
                                   : bench::ValidatorKind::immutable;
  auto red_kind = o.parallel ? bench::ValidatorKind::redactable_parallel
                             : bench::ValidatorKind::redactable;
  if (spec.mode == Mode::ext)
    red_kind = o.parallel ? bench::ValidatorKind::redactable_ext_parallel
                          : bench::ValidatorKind::redactable_ext;

  bench::BenchSpec spec0 = spec;
  spec0.redact_fraction = 0.0;
  const Chain chain0 = bench::generate_chain(spec0);

  auto base_imm = bench::bench_validate(chain0, spec.params, imm_kind, o.reps, "immutable_f0");
  auto base_red = bench::bench_validate(chain0, spec.params, red_kind, o.reps, "redactable_f0");
  set_overhead(base_red, base_imm);

  std::string csv = bench::bench_csv_header() + "\n";
  csv += bench::bench_csv_row(spec0, base_imm) + "\n";
  csv += bench::bench_csv_row(spec0, base_red) + "\n";
  bool all_valid = base_imm.valid && base_red.valid;

  auto narrate = [](const bench::BenchResult& r) {
    std::cout << r.config_name << " [" << r.validator << "]: " << r.mean_ms << " ms ± "
              << r.stddev_ms;
    if (!r.baseline_name.empty())
      std::cout << "  (" << r.overhead_pct << "% vs " << r.baseline_name << ")";
    std::cout << (r.valid ? "" : "  INVALID CHAIN") << "\n";
  };
  narrate(base_imm);
  narrate(base_red);

  if (spec.redact_fraction > 0) {
    const Chain chain_f = bench::generate_chain(spec);
    char name[64];
    std::snprintf(name, sizeof(name), "redactable_f%g", spec.redact_fraction);
    auto measured = bench::bench_validate(chain_f, spec.params, red_kind, o.reps, name);
    set_overhead(measured, base_red);
    csv += bench::bench_csv_row(spec, measured) + "\n";
    all_valid = all_valid && measured.valid;
    narrate(measured);
  }

  redact::io::write_text_file(o.out, csv);
  std::cout << "wrote " << o.out << "\n";
  if (!all_valid) {
    std::cerr << "a generated chain failed validation\n";
    return 1;
  }
  return 0;
}

struct DumpOpts {
  std::string chain, out;
};

int run_dump(const DumpOpts& o) {
  const std::string text = redact::io::read_text_file(o.chain);
  if (is_ledger_dump(text)) {
    const auto chain = redact::io::load_ledger_chain(text);
    std::size_t rewritten = 0, txs = 0;
    for (const auto& b : chain.blocks) {
      txs += b.txs.txs.size();
      rewritten += b.txs.redacted_old_ids.size();
    }
    std::cout << "ledger chain: " << chain.length() << " blocks, " << txs
              << " transactions, " << rewritten << " rewritten slots, policy k="
              << chain.params.k << " ell=" << chain.params.ell << " rho=" << chain.params.rho
              << "\n";
    if (!o.out.empty()) redact::io::write_text_file(o.out, redact::io::dump_ledger_chain(chain));
  } else {
    const auto loaded = redact::io::load_chain(text);
    std::cout << "payload chain: mode " << redact::mode_name(loaded.mode) << ", "
              << loaded.chain.length() << " blocks, head "
              << redact::block_digest(loaded.chain.blocks.back()).hex().substr(0, 16)
              << "…, rewritten heights: " << joined(redacted_heights(loaded.chain)) << "\n";
    if (!o.out.empty())
      redact::io::write_text_file(o.out, redact::io::dump_chain(loaded.chain, loaded.mode));
  }
  if (!o.out.empty()) std::cout << "wrote " << o.out << "\n";
  return 0;
}

struct ClaimOpts {
  std::string chain, claim_hex;
  std::size_t height = 0, tx = 0;
};

int run_verify_claim(const ClaimOpts& o) {
  const auto chain = load_ledger_dump(o.chain);
  const Bytes claimed = redact::from_hex(o.claim_hex);
  if (redact::ledger::verify_victim_claim(chain, o.height, o.tx, claimed)) {
    std::cout << "claim verified: bytes match the retained transaction id\n";
    return 0;
  }
  std::cout << "claim rejected\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redactable proof-of-work chain toolkit"};
  app.require_subcommand(1);

  InitOpts init_o;
  auto* init = app.add_subcommand("init", "create a genesis chain file and run config");
  init->add_option("--out", init_o.out, "chain file to write")->required();
  init->add_option("--config", init_o.config, "run config file to write");
  init->add_option("--mode", init_o.mode, "single | ext | ledger");
  add_policy_flags(init, init_o.policy);
  init->add_option("--difficulty-bits", init_o.difficulty_bits,
                   "proof-of-work target as a power of two");
  init->add_option("--min-fee", init_o.min_fee, "edit fee floor (ledger mode)");
  init->add_option("--seed", init_o.seed, "deterministic seed");
  init->add_option("--genesis-hex", init_o.genesis_hex, "genesis entry bytes (hex)");

  MineOpts mine_o;
  auto* mine = app.add_subcommand("mine", "append mined blocks to a chain file");
  mine->add_option("--chain", mine_o.chain, "chain file")->required();
  mine->add_option("--out", mine_o.out, "output file (default: rewrite --chain)");
  mine->add_option("--entry-hex", mine_o.entry_hex, "explicit entry bytes (repeatable)");
  mine->add_option("--entries", mine_o.entries, "generated entries per block");
  mine->add_option("--entry-bytes", mine_o.entry_bytes, "size of generated entries");
  mine->add_option("--vote-hex", mine_o.vote_hex,
                   "vote tokens for the first mined block (repeatable)");
  mine->add_option("--count", mine_o.count, "number of blocks to mine");
  mine->add_option("--seed", mine_o.seed, "deterministic seed");
  mine->add_option("--budget", mine_o.budget, "mining attempts per block");

  ProposeOpts prop_o;
  auto* prop = app.add_subcommand("propose-edit", "build a rewrite candidate for one block");
  prop->add_option("--chain", prop_o.chain, "chain file")->required();
  prop->add_option("--height", prop_o.height, "block to rewrite")->required();
  prop->add_option("--zero-entry", prop_o.zero_entries, "entry index to zero (repeatable)");
  prop->add_option("--drop-entry", prop_o.drop_entries, "entry index to empty (repeatable)");
  add_policy_flags(prop, prop_o.policy);
  prop->add_flag("--apply", prop_o.apply, "apply the rewrite if the vote passed");
  prop->add_option("--out", prop_o.out, "output file for --apply (default: --chain)");

  VoteStatusOpts vote_o;
  auto* vote = app.add_subcommand("vote-status", "report the tally for a vote token");
  vote->add_option("--chain", vote_o.chain, "chain file")->required();
  vote->add_option("--token", vote_o.token, "vote token (hex digest)")->required();
  add_policy_flags(vote, vote_o.policy);

  ValidateOpts val_o;
  auto* val = app.add_subcommand("validate", "validate a chain file");
  val->add_option("--chain", val_o.chain, "chain file")->required();
  val->add_option("--config", val_o.config, "run config file (overrides --k/--ell/--rho)");
  add_policy_flags(val, val_o.policy);
  val->add_flag("--immutable", val_o.immutable, "use the rewrite-unaware baseline validator");
  val->add_flag("--parallel", val_o.parallel, "use the OpenMP kernels");

  SimulateOpts sim_o;
  auto* sim = app.add_subcommand("simulate", "run the round-based network simulator");
  sim->add_option("--nodes", sim_o.nodes, "number of nodes");
  sim->add_option("--corrupt", sim_o.corrupt, "corrupt nodes (highest ids)");
  sim->add_option("--rounds", sim_o.rounds, "rounds to run");
  sim->add_option("--q", sim_o.q, "mining attempts per node per round");
  sim->add_option("--delay", sim_o.delay, "max delivery delay in rounds");
  sim->add_flag("--fixed-delay", sim_o.fixed_delay, "always deliver at the max delay");
  sim->add_option("--difficulty-bits", sim_o.difficulty_bits, "target as a power of two");
  sim->add_option("--mode", sim_o.mode, "single | ext | ledger");
  sim->add_option("--strategy", sim_o.strategy,
                  "none | delay-only | unapproved-edit | malicious-candidate | spam");
  add_policy_flags(sim, sim_o.policy);
  sim->add_option("--seed", sim_o.seed, "master seed");
  sim->add_option("--env-every", sim_o.env_every, "issue a data entry every N rounds");
  sim->add_option("--env-bytes", sim_o.env_bytes, "issued entry size");
  sim->add_option("--edit", sim_o.edits, "edit request round:node:height[:junk] (repeatable)");
  sim->add_option("--tamper-round", sim_o.tamper_round, "unapproved-edit start round (0=auto)");
  sim->add_option("--spam-per-round", sim_o.spam_per_round, "spam messages per corrupt node");
  sim->add_option("--trace", sim_o.trace_path, "write the JSON Lines trace here");
  sim->add_option("--tau", sim_o.tau, "check chain growth at this rate");
  sim->add_option("--growth-window", sim_o.growth_window, "growth window in rounds");
  sim->add_option("--mu", sim_o.mu, "check chain quality against this adversary share");
  sim->add_option("--quality-window", sim_o.quality_window, "quality window in blocks");

  AttackOpts atk_o;
  auto* atk = app.add_subcommand("attack", "run a scripted attack scenario");
  atk->add_option("--scenario", atk_o.scenario,
                  "unapproved-editing | dos | false-victim | double-spend | consensus-delays")
      ->required();
  atk->add_option("--nodes", atk_o.nodes, "number of nodes");
  atk->add_option("--corrupt", atk_o.corrupt, "corrupt nodes");
  atk->add_option("--rounds", atk_o.rounds, "rounds per seed");
  atk->add_option("--q", atk_o.q, "mining attempts per node per round");
  atk->add_option("--delay", atk_o.delay, "max delivery delay");
  atk->add_option("--difficulty-bits", atk_o.difficulty_bits, "target as a power of two");
  add_policy_flags(atk, atk_o.policy);
  atk->add_option("--seed", atk_o.seed, "base seed");
  atk->add_option("--env-every", atk_o.env_every, "issue a data entry every N rounds");

  BenchOpts bench_o;
  auto* ben = app.add_subcommand("bench", "time chain validation on generated workloads");
  ben->add_option("--blocks", bench_o.blocks, "chain length");
  ben->add_option("--tx", bench_o.tx, "entries per block");
  ben->add_option("--redact", bench_o.redact, "fraction of blocks rewritten");
  ben->add_option("--reps", bench_o.reps, "timing repetitions");
  ben->add_option("--entry-bytes", bench_o.entry_bytes, "bytes per entry");
  add_policy_flags(ben, bench_o.policy);
  ben->add_option("--seed", bench_o.seed, "workload seed");
  ben->add_option("--mode", bench_o.mode, "single | ext");
  ben->add_flag("--parallel", bench_o.parallel, "time the OpenMP kernels instead");
  ben->add_option("--out", bench_o.out, "CSV file to write");

  DumpOpts dump_o;
  auto* dmp = app.add_subcommand("dump", "summarize a chain file, optionally re-emit it");
  dmp->add_option("--chain", dump_o.chain, "chain file")->required();
  dmp->add_option("--out", dump_o.out, "write the canonical dump here");

  ClaimOpts claim_o;
  auto* clm = app.add_subcommand("verify-claim", "check an original-content claim for a "
                                                 "rewritten transaction slot");
  clm->add_option("--chain", claim_o.chain, "ledger chain file")->required();
  clm->add_option("--height", claim_o.height, "block height")->required();
  clm->add_option("--tx", claim_o.tx, "transaction slot index")->required();
  clm->add_option("--claim-hex", claim_o.claim_hex, "claimed original bytes (hex)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (init->parsed()) return run_init(init_o);
    if (mine->parsed()) return run_mine(mine_o);
    if (prop->parsed()) return run_propose(prop_o);
    if (vote->parsed()) return run_vote_status(vote_o);
    if (val->parsed()) return run_validate(val_o);
    if (sim->parsed()) return run_simulate(sim_o);
    if (atk->parsed()) return run_attack(atk_o);
    if (ben->parsed()) return run_bench(bench_o);
    if (dmp->parsed()) return run_dump(dump_o);
    if (clm->parsed()) return run_verify_claim(claim_o);
  } catch (const redact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
