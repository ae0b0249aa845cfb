#pragma once
// Shared redaction-policy vocabulary: operating mode, the (k, ell, rho)
// parameter triple, and the three-way verdict a vote tally can produce.

#include <cmath>
#include <cstdint>
#include <string>

#include "redact/bytes.hpp"

namespace redact {

// single : one rewrite per block, the old-state list stays a single digest
// ext    : repeated rewrites, each one appends the digest of the payload it
//          replaced to the old-state list
// ledger : single-mode chains whose payload entries are serialized
//          transactions with fee-paying edit announcements
enum class Mode { single, ext, ledger };

std::string mode_name(Mode m);
Mode mode_from_name(std::string_view name);  // throws Error(config_invalid)

struct PolicyParams {
  std::uint32_t k = 6;    // stability depth: a block is stable once k blocks follow it
  std::uint32_t ell = 5;  // voting window length, in blocks
  double rho = 0.6;       // required fraction of vote-bearing window blocks

  bool operator==(const PolicyParams&) const = default;
};

// Smallest vote count v with v/ell >= rho. Guarded against floating-point
// drift so an exact rational rho never rounds the requirement up or down.
inline std::uint32_t required_votes(const PolicyParams& p) {
  double t = p.rho * double(p.ell);
  double r = std::nearbyint(t);
  if (std::fabs(t - r) < 1e-9) return std::uint32_t(r);
  return std::uint32_t(std::ceil(t));
}

void check_policy_params(const PolicyParams& p);  // throws Error(config_invalid)

enum class Verdict { accept, reject, voting };

std::string verdict_name(Verdict v);

}  // namespace redact
