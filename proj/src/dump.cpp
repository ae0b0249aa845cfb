#include "redact/dump.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace redact::io {

using nlohmann::json;

namespace {

[[noreturn]] void corrupt(const std::string& what) { fail(Errc::dump_corrupt, what); }

json parse_line(const std::string& line, std::size_t lineno) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    corrupt("line " + std::to_string(lineno) + " is not a JSON object");
  return j;
}

// Typed field access; anything missing or of the wrong shape is corruption.
const json& field(const json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end())
    corrupt("line " + std::to_string(lineno) + " lacks the '" + key + "' field");
  return *it;
}

std::string str_field(const json& j, const char* key, std::size_t lineno) {
  const json& v = field(j, key, lineno);
  if (!v.is_string()) corrupt("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t u64_field(const json& j, const char* key, std::size_t lineno) {
  const json& v = field(j, key, lineno);
  if (!v.is_number_unsigned()) corrupt("field '" + std::string(key) + "' must be unsigned");
  return v.get<std::uint64_t>();
}

Bytes bytes_field(const json& v, const char* key) {
  if (!v.is_string()) corrupt("field '" + std::string(key) + "' must be a hex string");
  try {
    return from_hex(v.get<std::string>());
  } catch (const Error&) {
    corrupt("field '" + std::string(key) + "' is not valid hex");
  }
}

Digest digest_field(const json& j, const char* key, std::size_t lineno) {
  Bytes raw = bytes_field(field(j, key, lineno), key);
  if (raw.size() != 32) corrupt("field '" + std::string(key) + "' must hold 32 bytes");
  Digest d;
  std::copy(raw.begin(), raw.end(), d.b.begin());
  return d;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

json hex_array(const std::vector<Bytes>& items) {
  json a = json::array();
  for (const auto& b : items) a.push_back(to_hex(b));
  return a;
}

json hex_array(const std::vector<Digest>& items) {
  json a = json::array();
  for (const auto& d : items) a.push_back(d.hex());
  return a;
}

std::vector<Bytes> bytes_array(const json& v, const char* key) {
  if (!v.is_array()) corrupt("field '" + std::string(key) + "' must be an array");
  std::vector<Bytes> out;
  out.reserve(v.size());
  for (const auto& item : v) out.push_back(bytes_field(item, key));
  return out;
}

std::vector<Digest> digest_array(const json& v, const char* key) {
  std::vector<Digest> out;
  for (Bytes& raw : bytes_array(v, key)) {
    if (raw.size() != 32) corrupt("field '" + std::string(key) + "' must hold 32-byte items");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.b.begin());
    out.push_back(d);
  }
  return out;
}

}  // namespace

// ── payload-carrying chains ─────────────────────────────────────────────────

std::string dump_chain(const Chain& chain, Mode mode) {
  if (chain.blocks.empty()) fail(Errc::empty_chain, "cannot dump an empty chain");
  std::string out;
  {
    json header;
    header["difficulty_hex"] = chain.difficulty.hex();
    header["genesis_digest_hex"] = block_digest(chain.blocks.front()).hex();
    header["mode"] = mode_name(mode);
    out += header.dump();
    out += '\n';
  }
  for (std::size_t h = 1; h <= chain.length(); ++h) {
    const Block& b = chain.blocks[h - 1];
    json line;
    line["height"] = h;
    line["s_hex"] = b.s.hex();
    line["ctr"] = b.ctr;
    line["payload"] = {{"entries_hex", hex_array(b.x.entries)},
                       {"votes_hex", hex_array(b.x.votes)}};
    line["y_segments_hex"] = hex_array(b.y.segments);
    out += line.dump();
    out += '\n';
  }
  return out;
}

LoadedChain load_chain(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 2) corrupt("chain dump needs a header line and at least one block");

  LoadedChain loaded;
  json header = parse_line(lines[0], 1);
  try {
    loaded.chain.difficulty = Target::parse_hex(str_field(header, "difficulty_hex", 1));
  } catch (const Error& e) {
    if (e.code() == Errc::dump_corrupt) throw;
    corrupt("header carries an undecodable difficulty target");
  }
  Digest recorded_genesis = digest_field(header, "genesis_digest_hex", 1);
  try {
    loaded.mode = mode_from_name(str_field(header, "mode", 1));
  } catch (const Error&) {
    corrupt("header names an unknown mode");
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::size_t lineno = i + 1;
    json j = parse_line(lines[i], lineno);
    if (u64_field(j, "height", lineno) != i)
      corrupt("line " + std::to_string(lineno) + " is out of height order");
    Block b;
    b.s = digest_field(j, "s_hex", lineno);
    b.ctr = u64_field(j, "ctr", lineno);
    const json& payload = field(j, "payload", lineno);
    if (!payload.is_object()) corrupt("field 'payload' must be an object");
    b.x.entries = bytes_array(field(payload, "entries_hex", lineno), "entries_hex");
    b.x.votes = digest_array(field(payload, "votes_hex", lineno), "votes_hex");
    b.y.segments = digest_array(field(j, "y_segments_hex", lineno), "y_segments_hex");
    if (b.y.segments.empty()) corrupt("block on line " + std::to_string(lineno) +
                                      " has an empty digest history");
    loaded.chain.blocks.push_back(std::move(b));
  }

  if (block_digest(loaded.chain.blocks.front()) != recorded_genesis)
    corrupt("recorded genesis digest does not match the reconstructed block");
  return loaded;
}

// ── transaction-carrying chains ─────────────────────────────────────────────

std::string dump_ledger_chain(const ledger::LedgerChain& chain) {
  if (chain.blocks.empty()) fail(Errc::empty_chain, "cannot dump an empty chain");
  std::string out;
  {
    json header;
    header["difficulty_hex"] = chain.difficulty.hex();
    header["genesis_digest_hex"] = ledger::header_digest(chain.blocks.front().header).hex();
    header["mode"] = mode_name(Mode::ledger);
    header["k"] = chain.params.k;
    header["ell"] = chain.params.ell;
    header["rho"] = chain.params.rho;
    header["min_edit_fee"] = chain.min_edit_fee;
    out += header.dump();
    out += '\n';
  }
  for (std::size_t h = 1; h <= chain.length(); ++h) {
    const ledger::LedgerBlock& b = chain.blocks[h - 1];
    json line;
    line["height"] = h;
    line["hash_prev_hex"] = b.header.hash_prev.hex();
    line["merkle_root_hex"] = b.header.merkle_root.hex();
    line["old_merkle_root_hex"] = b.header.old_merkle_root.hex();
    line["timestamp"] = b.header.timestamp;
    line["nonce"] = b.header.nonce;
    json txs = json::array();
    for (const auto& tx : b.txs.txs) txs.push_back(to_hex(ledger::serialize_tx(tx)));
    line["txs_hex"] = std::move(txs);
    json red = json::array();
    for (const auto& [slot, old_id] : b.txs.redacted_old_ids)
      red.push_back({{"slot", slot}, {"old_txid_hex", old_id.hex()}});
    line["redactions"] = std::move(red);
    out += line.dump();
    out += '\n';
  }
  return out;
}

ledger::LedgerChain load_ledger_chain(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 2) corrupt("chain dump needs a header line and at least one block");

  ledger::LedgerChain chain;
  json header = parse_line(lines[0], 1);
  try {
    chain.difficulty = Target::parse_hex(str_field(header, "difficulty_hex", 1));
  } catch (const Error& e) {
    if (e.code() == Errc::dump_corrupt) throw;
    corrupt("header carries an undecodable difficulty target");
  }
  Digest recorded_genesis = digest_field(header, "genesis_digest_hex", 1);
  if (str_field(header, "mode", 1) != mode_name(Mode::ledger))
    corrupt("header does not describe a transaction-carrying chain");
  chain.params.k = std::size_t(u64_field(header, "k", 1));
  chain.params.ell = std::size_t(u64_field(header, "ell", 1));
  const json& rho = field(header, "rho", 1);
  if (!rho.is_number()) corrupt("field 'rho' must be a number");
  chain.params.rho = rho.get<double>();
  chain.min_edit_fee = u64_field(header, "min_edit_fee", 1);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::size_t lineno = i + 1;
    json j = parse_line(lines[i], lineno);
    if (u64_field(j, "height", lineno) != i)
      corrupt("line " + std::to_string(lineno) + " is out of height order");
    ledger::LedgerBlock b;
    b.header.hash_prev = digest_field(j, "hash_prev_hex", lineno);
    b.header.merkle_root = digest_field(j, "merkle_root_hex", lineno);
    b.header.old_merkle_root = digest_field(j, "old_merkle_root_hex", lineno);
    b.header.timestamp = u64_field(j, "timestamp", lineno);
    b.header.nonce = u64_field(j, "nonce", lineno);
    b.header.difficulty = chain.difficulty;
    const json& txs = field(j, "txs_hex", lineno);
    for (Bytes& raw : bytes_array(txs, "txs_hex")) {
      auto tx = ledger::parse_tx(ByteView(raw.data(), raw.size()));
      if (!tx) corrupt("line " + std::to_string(lineno) + " holds undecodable transaction bytes");
      b.txs.txs.push_back(std::move(*tx));
    }
    const json& red = field(j, "redactions", lineno);
    if (!red.is_array()) corrupt("field 'redactions' must be an array");
    for (const auto& r : red) {
      if (!r.is_object()) corrupt("rewrite records must be objects");
      std::size_t slot = std::size_t(u64_field(r, "slot", lineno));
      if (slot >= b.txs.txs.size())
        corrupt("rewrite record names a slot outside the transaction list");
      b.txs.redacted_old_ids[slot] = digest_field(r, "old_txid_hex", lineno);
    }
    chain.blocks.push_back(std::move(b));
  }

  if (ledger::header_digest(chain.blocks.front().header) != recorded_genesis)
    corrupt("recorded genesis digest does not match the reconstructed block");
  return chain;
}

// ── run configuration ───────────────────────────────────────────────────────

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::size_t lineno = 0;
  for (const std::string& raw : split_lines(text)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::config_invalid, "line " + std::to_string(lineno) + " is not key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty())
      fail(Errc::config_invalid, "line " + std::to_string(lineno) + " is not key = value");
    try {
      if (key == "mode") {
        cfg.mode = mode_from_name(value);
      } else if (key == "k") {
        cfg.params.k = std::stoull(value);
      } else if (key == "ell") {
        cfg.params.ell = std::stoull(value);
      } else if (key == "rho") {
        cfg.params.rho = std::stod(value);
      } else if (key == "difficulty_hex") {
        cfg.difficulty = Target::parse_hex(value);
      } else if (key == "min_edit_fee") {
        cfg.min_edit_fee = std::stoull(value);
      } else {
        fail(Errc::config_invalid, "unknown configuration key '" + key + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Errc::config_invalid, "bad value for key '" + key + "' on line " +
                                     std::to_string(lineno));
    }
  }
  check_policy_params(cfg.params);
  if (cfg.difficulty.is_zero())
    fail(Errc::config_invalid, "difficulty target must be positive");
  return cfg;
}

std::string config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "mode = " << mode_name(cfg.mode) << '\n';
  out << "k = " << cfg.params.k << '\n';
  out << "ell = " << cfg.params.ell << '\n';
  out << "rho = " << json(cfg.params.rho).dump() << '\n';
  out << "difficulty_hex = " << cfg.difficulty.hex() << '\n';
  out << "min_edit_fee = " << cfg.min_edit_fee << '\n';
  return out.str();
}

// ── file helpers ────────────────────────────────────────────────────────────

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::dump_corrupt, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::dump_corrupt, "cannot open '" + path + "' for writing");
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) fail(Errc::dump_corrupt, "short write to '" + path + "'");
}

}  // namespace redact::io
