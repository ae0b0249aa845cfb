#pragma once

// Text round-trips for chains and run configuration.
//
// Chains serialize to JSON Lines: one header object on the first line, then
// one object per block. Keys are emitted in sorted order and numbers are
// printed in shortest round-trip form, so dumping the same chain twice
// yields byte-identical text. Loading verifies the recorded genesis digest
// against the reconstructed block and throws Error(dump_corrupt) on any
// malformed input.
//
// Run configuration is a line-oriented key=value file ('#' starts a comment).
// Recognized keys: mode, k, ell, rho, difficulty_hex, min_edit_fee. Missing
// keys fall back to defaults; unknown keys throw Error(config_invalid).

#include <string>
#include <string_view>

#include "redact/chain.hpp"
#include "redact/ledger.hpp"

namespace redact::io {

// ── payload-carrying chains ─────────────────────────────────────────────────

// Header line:  {"difficulty_hex":…, "genesis_digest_hex":…, "mode":…}
// Block line:   {"ctr":…, "height":…, "payload":{"entries_hex":[…],
//                "votes_hex":[…]}, "s_hex":…, "y_segments_hex":[…]}
std::string dump_chain(const Chain& chain, Mode mode);

struct LoadedChain {
  Chain chain;
  Mode mode = Mode::single;
};

LoadedChain load_chain(std::string_view text);

// ── transaction-carrying chains ─────────────────────────────────────────────

// Header line adds the vote policy and fee floor; block lines carry the
// serialized transactions plus (slot, retained id) pairs for rewritten slots.
std::string dump_ledger_chain(const ledger::LedgerChain& chain);

ledger::LedgerChain load_ledger_chain(std::string_view text);

// ── run configuration ───────────────────────────────────────────────────────

struct RunConfig {
  Mode mode = Mode::single;
  PolicyParams params;
  Target difficulty = Target::pow2(240);
  std::uint64_t min_edit_fee = 0;
};

RunConfig parse_config(std::string_view text);
std::string config_text(const RunConfig& cfg);

// ── file helpers ────────────────────────────────────────────────────────────

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace redact::io
