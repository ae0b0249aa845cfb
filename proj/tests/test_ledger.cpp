#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "redact/ledger.hpp"
#include "redact/netsim.hpp"

using namespace redact::ledger;
using redact::Bytes;
using redact::Digest;
using redact::PolicyParams;
using redact::Verdict;

namespace {

nlohmann::json golden(const std::string& name) {
  const std::string path = std::string(REDACT_FIXTURE_DIR) + "/hash_golden.json";
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json all;
  in >> all;
  for (const auto& vec : all)
    if (vec.at("name") == name) return vec;
  FAIL("fixture vector not found: ", name);
  return {};
}

Digest expected_of(const nlohmann::json& vec) {
  return Digest::parse_hex(vec.at("expected_digest_hex").get<std::string>());
}

PolicyParams quick_params() {
  PolicyParams p;
  p.k = 2;
  p.ell = 3;
  p.rho = 0.6;
  return p;
}

Transaction signed_spend(const KeyPair& owner, const Digest& prev, std::uint32_t index,
                         std::vector<TxOutput> outputs) {
  Transaction tx;
  tx.inputs.push_back(TxInput{prev, index, {}});
  tx.outputs = std::move(outputs);
  const Digest id = tx_id(tx);  // witness-independent
  tx.inputs[0].witness = sign_spend(owner, id);
  return tx;
}

}  // namespace

TEST_CASE("transaction ids match the golden fixture and exclude witnesses") {
  const auto vec = golden("txid_simple");
  Transaction tx;
  tx.coinbase = false;
  tx.inputs.push_back(
      TxInput{redact::hash_h({redact::ByteView((const std::uint8_t*)"prev-tx", 7)}), 3, {}});
  tx.outputs.push_back(TxOutput{OutputKind::spendable, 5000, Bytes(32, 0x11)});
  tx.outputs.push_back(TxOutput{OutputKind::data, 0, Bytes{0xde, 0xad, 0xbe, 0xef}});

  CHECK(tx_id(tx) == expected_of(vec));

  // filling in a witness does not move the id, but moves the serialization
  Transaction with_wit = tx;
  with_wit.inputs[0].witness = Bytes(64, 0xAB);
  CHECK(tx_id(with_wit) == tx_id(tx));
  CHECK(serialize_tx(with_wit) != serialize_tx(tx));
  CHECK(tx_id_image(with_wit) == tx_id_image(tx));
}

TEST_CASE("serialization round-trips strictly") {
  Transaction tx;
  tx.coinbase = true;
  tx.outputs.push_back(TxOutput{OutputKind::spendable, kBlockSubsidy, Bytes(32, 1)});
  tx.outputs.push_back(TxOutput{OutputKind::data, 0, Bytes{'V', 'O', 'T', 'E'}});

  const Bytes wire = serialize_tx(tx);
  const auto back = parse_tx(wire);
  REQUIRE(back.has_value());
  CHECK(*back == tx);

  Bytes trailing = wire;
  trailing.push_back(0);
  CHECK_FALSE(parse_tx(trailing).has_value());

  Bytes truncated(wire.begin(), wire.end() - 1);
  CHECK_FALSE(parse_tx(truncated).has_value());
  CHECK_FALSE(parse_tx(Bytes{}).has_value());
}

TEST_CASE("shape rules: data caps, key sizes, coinbase inputs") {
  Transaction ok;
  ok.coinbase = true;
  ok.outputs.push_back(TxOutput{OutputKind::spendable, 5, Bytes(32, 2)});
  ok.outputs.push_back(TxOutput{OutputKind::data, 0, Bytes(80, 7)});
  CHECK(tx_shape_ok(ok));

  Transaction oversized = ok;
  oversized.outputs[1].script = Bytes(81, 7);
  CHECK_FALSE(tx_shape_ok(oversized));

  Transaction paying_data = ok;
  paying_data.outputs[1].amount = 1;
  CHECK_FALSE(tx_shape_ok(paying_data));

  Transaction short_key = ok;
  short_key.outputs[0].script = Bytes(31, 2);
  CHECK_FALSE(tx_shape_ok(short_key));

  Transaction coinbase_with_input = ok;
  coinbase_with_input.inputs.push_back(TxInput{Digest{}, 0, {}});
  CHECK_FALSE(tx_shape_ok(coinbase_with_input));

  Transaction no_inputs;
  no_inputs.outputs.push_back(TxOutput{OutputKind::spendable, 5, Bytes(32, 2)});
  CHECK_FALSE(tx_shape_ok(no_inputs));  // non-coinbase needs an input
}

TEST_CASE("keys are seed-deterministic and witnesses verify") {
  const KeyPair a = keypair_from_seed(1234);
  const KeyPair b = keypair_from_seed(1234);
  const KeyPair c = keypair_from_seed(1235);
  CHECK(a.pk == b.pk);
  CHECK(a.pk != c.pk);

  const Digest id = redact::hash_h({redact::ByteView((const std::uint8_t*)"spend", 5)});
  const Bytes sig = sign_spend(a, id);
  CHECK(verify_spend(redact::ByteView(a.pk.data(), a.pk.size()), id, sig));
  CHECK_FALSE(verify_spend(redact::ByteView(c.pk.data(), c.pk.size()), id, sig));

  Digest other = id;
  other.b[0] ^= 1;
  CHECK_FALSE(verify_spend(redact::ByteView(a.pk.data(), a.pk.size()), other, sig));

  Bytes bent = sig;
  bent[10] ^= 0x40;
  CHECK_FALSE(verify_spend(redact::ByteView(a.pk.data(), a.pk.size()), id, bent));
}

TEST_CASE("merkle roots match the fixture, including the odd-leaf rule") {
  const auto three = golden("merkle_three_leaves");
  std::vector<Digest> leaves;
  for (const auto& hex : three.at("input_hex_parts"))
    leaves.push_back(Digest::parse_hex(hex.get<std::string>()));
  CHECK(merkle_root_of(leaves) == expected_of(three));

  const auto single = golden("merkle_single_leaf");
  CHECK(merkle_root_of({Digest::parse_hex(
            single.at("input_hex_parts")[0].get<std::string>())}) == expected_of(single));

  CHECK_THROWS_AS((void)merkle_root_of({}), redact::Error);
}

TEST_CASE("candidate transactions must be strictly destructive") {
  const KeyPair owner = keypair_from_seed(5);
  Transaction old_tx;
  old_tx.inputs.push_back(TxInput{Digest{}, 0, Bytes(64, 9)});
  old_tx.outputs.push_back(TxOutput{OutputKind::data, 0, Bytes{1, 2, 3, 4}});
  old_tx.outputs.push_back(spend_output(owner, 500));

  SUBCASE("zeroing data bytes passes") {
    Transaction cand = old_tx;
    cand.outputs[0].script = Bytes{0, 2, 0, 4};
    CHECK(validate_candidate_tx(old_tx, cand));
  }
  SUBCASE("truncating data passes") {
    Transaction cand = old_tx;
    cand.outputs[0].script = Bytes{1, 2};
    CHECK(validate_candidate_tx(old_tx, cand));
  }
  SUBCASE("identical candidate is consistent; the no-op guard lives upstream") {
    CHECK(validate_candidate_tx(old_tx, old_tx));
    CHECK_THROWS_AS((void)build_edit_tx(old_tx, old_tx, TxInput{Digest{}, 3, Bytes(64, 1)},
                                        100, 0),
                    redact::Error);
  }
  SUBCASE("changing a byte to a new value fails") {
    Transaction cand = old_tx;
    cand.outputs[0].script = Bytes{1, 9, 3, 4};
    CHECK_FALSE(validate_candidate_tx(old_tx, cand));
  }
  SUBCASE("growing data fails") {
    Transaction cand = old_tx;
    cand.outputs[0].script = Bytes{1, 2, 3, 4, 0};
    CHECK_FALSE(validate_candidate_tx(old_tx, cand));
  }
  SUBCASE("touching a spendable output fails") {
    Transaction cand = old_tx;
    cand.outputs[0].script = Bytes{0, 0, 0, 0};
    cand.outputs[1].amount = 499;
    CHECK_FALSE(validate_candidate_tx(old_tx, cand));
  }
  SUBCASE("touching inputs or witnesses fails") {
    Transaction cand = old_tx;
    cand.outputs[0].script = Bytes{0, 0, 0, 0};
    cand.inputs[0].witness = Bytes(64, 8);
    CHECK_FALSE(validate_candidate_tx(old_tx, cand));
  }
  SUBCASE("vote and edit outputs are untouchable") {
    Transaction voter = old_tx;
    Bytes vote_script = vote_tag();
    const Digest t = tx_id(old_tx);
    vote_script.insert(vote_script.end(), t.b.begin(), t.b.end());
    voter.outputs[0] = TxOutput{OutputKind::data, 0, vote_script};
    Transaction cand = voter;
    cand.outputs[0].script[4] = 0;
    CHECK_FALSE(validate_candidate_tx(voter, cand));
  }
}

TEST_CASE("edit announcements carry the pair and pay the fee") {
  const KeyPair owner = keypair_from_seed(6);
  Transaction old_tx;
  old_tx.inputs.push_back(TxInput{Digest{}, 1, Bytes(64, 3)});
  old_tx.outputs.push_back(TxOutput{OutputKind::data, 0, Bytes{9, 9, 9, 9}});

  Transaction cand = old_tx;
  cand.outputs[0].script = Bytes{0, 0, 0, 0};

  const TxInput funding{redact::hash_h({redact::ByteView((const std::uint8_t*)"f", 1)}), 0, {}};
  CHECK_THROWS_AS((void)build_edit_tx(old_tx, cand, funding, 10, 100), redact::Error);
  CHECK_THROWS_AS((void)build_edit_tx(old_tx, old_tx, funding, 100, 100), redact::Error);

  const EditTx etx = build_edit_tx(old_tx, cand, funding, 150, 100);
  CHECK(etx.fee == 150);
  const auto pair = edit_pair_of(etx.tx);
  REQUIRE(pair.has_value());
  CHECK(pair->first == tx_id(old_tx));
  CHECK(pair->second == tx_id(cand));
  CHECK(vote_token(etx) == vote_token(tx_id(old_tx), tx_id(cand)));

  // the pair token matches the golden construction H(old || new)
  const auto vec = golden("vote_token_pair");
  const Digest old_id = redact::hash_h({redact::ByteView((const std::uint8_t*)"old", 3)});
  const Digest new_id = redact::hash_h({redact::ByteView((const std::uint8_t*)"new", 3)});
  CHECK(vote_token(old_id, new_id) == expected_of(vec));

  // a transaction without an announcement yields nothing
  CHECK_FALSE(edit_pair_of(old_tx).has_value());
  (void)owner;
}

TEST_CASE("the worked ledger example validates end to end") {
  const auto ex = redact::sim::build_ledger_example(404, quick_params(), true);
  redact::ValidationIssue issue;
  CHECK_MESSAGE(validate_ledger_chain(ex.chain, &issue), issue.reason, " at height ",
                issue.height);

  const auto& blk = ex.chain.at_height(ex.target_height);
  CHECK(is_redacted_block(blk));
  REQUIRE(blk.txs.redacted_old_ids.count(ex.old_slot) == 1);
  CHECK(blk.txs.redacted_old_ids.at(ex.old_slot) == tx_id(ex.old_tx));
  CHECK(blk.txs.txs[ex.old_slot] == ex.cand_tx);

  // the header keeps both roots and the work verifies through the old root
  CHECK(blk.header.old_merkle_root != blk.header.merkle_root);
  CHECK(blk.header.merkle_root == current_merkle_root(blk.txs));
  CHECK(blk.header.old_merkle_root == original_merkle_root(blk.txs));
  CHECK(header_work_ok(blk.header, ex.chain.difficulty));

  // the vote tally reached accept and stayed stable
  const auto report = evaluate_edit(ex.chain, tx_id(ex.old_tx), tx_id(ex.cand_tx));
  CHECK(report.verdict == Verdict::accept);

  // the rewritten slot's witness still verifies against the retained old id
  const Transaction& current = blk.txs.txs[ex.old_slot];
  REQUIRE_FALSE(current.inputs.empty());
  CHECK(verify_spend(redact::ByteView(ex.victim.pk.data(), 32), tx_id(ex.old_tx),
                     current.inputs[0].witness));
}

TEST_CASE("victim claims verify exactly the retained bytes") {
  const auto ex = redact::sim::build_ledger_example(505, quick_params(), true);
  const Bytes genuine = serialize_tx(ex.old_tx);
  CHECK(verify_victim_claim(ex.chain, ex.target_height, ex.old_slot, genuine));

  Bytes forged = genuine;
  forged[forged.size() / 2] ^= 0x01;
  CHECK_FALSE(verify_victim_claim(ex.chain, ex.target_height, ex.old_slot, forged));

  // the current (rewritten) bytes are not the original
  CHECK_FALSE(verify_victim_claim(ex.chain, ex.target_height, ex.old_slot,
                                  serialize_tx(ex.cand_tx)));
  // gibberish that does not even parse
  CHECK_FALSE(verify_victim_claim(ex.chain, ex.target_height, ex.old_slot, Bytes(40, 0x5a)));
  // claims only make sense at rewritten slots
  CHECK_THROWS_AS((void)verify_victim_claim(ex.chain, ex.target_height, 0, genuine),
                  redact::Error);
}

TEST_CASE("an approved but unperformed rewrite invalidates the chain") {
  const auto ex = redact::sim::build_ledger_example(606, quick_params(), true);
  LedgerChain chain = ex.chain;
  auto& blk = chain.blocks[ex.target_height - 1];
  // put the original transaction back without clearing the approved edit
  blk.txs.txs[ex.old_slot] = ex.old_tx;
  blk.txs.redacted_old_ids.clear();
  blk.header.merkle_root = blk.header.old_merkle_root;
  CHECK_FALSE(validate_ledger_chain(chain));
}

TEST_CASE("an unapproved rewrite invalidates the chain") {
  const auto ex = redact::sim::build_ledger_example(707, quick_params(), false);
  REQUIRE(validate_ledger_chain(ex.chain));
  LedgerChain chain = ex.chain;
  // force the rewrite even though the window has not settled on accept
  apply_block_redaction(chain, ex.target_height, ex.old_tx, ex.cand_tx);
  CHECK_FALSE(validate_ledger_chain(chain));
}

TEST_CASE("tampered ledger chains are rejected") {
  const auto ex = redact::sim::build_ledger_example(808, quick_params(), true);

  SUBCASE("merkle root off") {
    LedgerChain chain = ex.chain;
    chain.blocks[3].header.merkle_root.b[0] ^= 1;
    CHECK_FALSE(validate_ledger_chain(chain));
  }
  SUBCASE("witness replaced") {
    LedgerChain chain = ex.chain;
    auto& tx = chain.blocks[ex.target_height - 1].txs.txs[ex.old_slot];
    REQUIRE_FALSE(tx.inputs.empty());
    tx.inputs[0].witness = Bytes(64, 0x77);
    CHECK_FALSE(validate_ledger_chain(chain));
  }
  SUBCASE("coinbase overpays") {
    LedgerChain chain = ex.chain;
    REQUIRE_FALSE(chain.blocks.back().txs.txs.empty());
    chain.blocks.back().txs.txs[0].outputs[0].amount += 1;
    CHECK_FALSE(validate_ledger_chain(chain));
  }
}

TEST_CASE("utxo lineage lets the replacement id spend retained outputs") {
  const auto ex = redact::sim::build_ledger_example(909, quick_params(), true);
  UtxoSet utxo = build_utxo(ex.chain);

  const Digest old_id = tx_id(ex.old_tx);
  const Digest new_id = tx_id(ex.cand_tx);
  CHECK(utxo.canonical(old_id) == new_id);
  CHECK(utxo.canonical(new_id) == new_id);

  // the retained spendable output is live under the replacement id
  const TxOutput* live = utxo.find(OutPoint{new_id, 1});
  REQUIRE(live != nullptr);
  CHECK(live->kind == OutputKind::spendable);
  CHECK(live->amount == 9000);

  // spending it under one alias blocks the other
  utxo.register_spend(OutPoint{old_id, 1}, Digest{});
  CHECK_THROWS_AS(utxo.register_spend(OutPoint{new_id, 1}, Digest{}), redact::Error);

  // data outputs can never be spent
  UtxoSet utxo2 = build_utxo(ex.chain);
  CHECK_THROWS_AS(utxo2.register_spend(OutPoint{new_id, 0}, Digest{}), redact::Error);
  // unknown outpoints are reported as such
  CHECK_THROWS_AS(utxo2.register_spend(OutPoint{Digest{}, 4}, Digest{}), redact::Error);
}

TEST_CASE("double spends across the rewrite lineage are rejected on chain") {
  const auto ex = redact::sim::build_ledger_example(1010, quick_params(), true);
  const Digest old_id = tx_id(ex.old_tx);
  const Digest new_id = tx_id(ex.cand_tx);
  const KeyPair next_owner = keypair_from_seed(0xBEEF);

  // legitimate spend of the retained output via the old id
  LedgerChain chain = ex.chain;
  {
    TxList txs;
    txs.txs.push_back(make_coinbase(ex.miner, kBlockSubsidy, {}));
    txs.txs.push_back(
        signed_spend(ex.attacker, old_id, 1, {spend_output(next_owner, 9000)}));
    auto blk = mine_ledger_block(chain, txs, chain.length() + 1, 4'000'000, 42);
    REQUIRE(blk.has_value());
    chain.blocks.push_back(std::move(*blk));
  }
  CHECK(validate_ledger_chain(chain));

  // spending the same output again via the replacement id must fail
  {
    TxList txs;
    txs.txs.push_back(make_coinbase(ex.miner, kBlockSubsidy, {}));
    txs.txs.push_back(
        signed_spend(ex.attacker, new_id, 1, {spend_output(next_owner, 9000)}));
    auto blk = mine_ledger_block(chain, txs, chain.length() + 1, 4'000'000, 43);
    REQUIRE(blk.has_value());
    chain.blocks.push_back(std::move(*blk));
  }
  CHECK_FALSE(validate_ledger_chain(chain));
}
