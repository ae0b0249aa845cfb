#include "redact/policy.hpp"

namespace redact {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::single: return "single";
    case Mode::ext: return "ext";
    case Mode::ledger: return "ledger";
  }
  return "?";
}

Mode mode_from_name(std::string_view name) {
  if (name == "single") return Mode::single;
  if (name == "ext") return Mode::ext;
  if (name == "ledger") return Mode::ledger;
  fail(Errc::config_invalid, "unknown mode: " + std::string(name));
}

void check_policy_params(const PolicyParams& p) {
  if (p.k < 1) fail(Errc::config_invalid, "stability depth must be at least one block");
  if (p.ell < 1) fail(Errc::config_invalid, "voting window must span at least one block");
  if (!(p.rho > 0.0) || p.rho > 1.0) fail(Errc::config_invalid, "vote fraction must be in (0, 1]");
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    case Verdict::voting: return "voting";
  }
  return "?";
}

}  // namespace redact
