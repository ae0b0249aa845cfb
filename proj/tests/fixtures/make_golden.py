#!/usr/bin/env python3
"""Regenerates hash_golden.json with an independent reference (hashlib).

Encodings mirrored here on purpose, so the fixtures pin both the SHA-256
primitive and the canonical byte layouts:
  part encoding   : u64-LE length prefix followed by the raw bytes, concatenated
  tagged digest   : SHA-256( tag || encoded parts ), tag 0x48 for links (H),
                    0x47 for content digests (G)
  payload image   : u64-LE entry count, each entry as a part, u64-LE vote
                    count, votes as raw 32-byte digests
  tx id image     : u8 coinbase flag, u64-LE input count, per input the
                    32-byte source tx id and u32-LE output index (witnesses
                    excluded), u64-LE output count, per output u8 kind,
                    u64-LE amount, u64-LE script length, script bytes
  merkle level    : parent = H(left || right) over raw 32-byte children,
                    odd node duplicated, single leaf is its own root
"""
import hashlib
import json
import struct

TAG_H = b"\x48"
TAG_G = b"\x47"


def enc(parts):
    out = b""
    for p in parts:
        out += struct.pack("<Q", len(p)) + p
    return out


def hash_h(parts):
    return hashlib.sha256(TAG_H + enc(parts)).digest()


def hash_g(parts):
    return hashlib.sha256(TAG_G + enc(parts)).digest()


def payload_image(entries, votes):
    out = struct.pack("<Q", len(entries))
    for e in entries:
        out += struct.pack("<Q", len(e)) + e
    out += struct.pack("<Q", len(votes))
    for v in votes:
        assert len(v) == 32
        out += v
    return out


def tx_id_image(coinbase, inputs, outputs):
    out = struct.pack("<B", 1 if coinbase else 0)
    out += struct.pack("<Q", len(inputs))
    for prev, idx in inputs:
        assert len(prev) == 32
        out += prev + struct.pack("<I", idx)
    out += struct.pack("<Q", len(outputs))
    for kind, amount, script in outputs:
        out += struct.pack("<B", kind) + struct.pack("<Q", amount)
        out += struct.pack("<Q", len(script)) + script
    return out


def merkle_root(leaves):
    assert leaves
    level = list(leaves)
    while len(level) > 1:
        if len(level) % 2 == 1:
            level.append(level[-1])
        level = [hash_h([level[i], level[i + 1]]) for i in range(0, len(level), 2)]
    return level[0]


def case(name, kind, parts, digest):
    return {
        "name": name,
        "kind": kind,
        "input_hex_parts": [p.hex() for p in parts],
        "expected_digest_hex": digest.hex(),
    }


def main():
    vectors = []

    # raw SHA-256 anchors (NIST vectors) for the reference implementation
    vectors.append(
        {
            "name": "sha256_empty",
            "kind": "sha256",
            "input_hex_parts": [],
            "expected_digest_hex": hashlib.sha256(b"").hexdigest(),
        }
    )
    vectors.append(
        {
            "name": "sha256_abc",
            "kind": "sha256",
            "input_hex_parts": [b"abc".hex()],
            "expected_digest_hex": hashlib.sha256(b"abc").hexdigest(),
        }
    )

    # tagged multipart digests
    vectors.append(case("h_single_zero_byte", "H", [b"\x00"], hash_h([b"\x00"])))
    vectors.append(case("g_single_zero_byte", "G", [b"\x00"], hash_g([b"\x00"])))
    vectors.append(case("h_no_parts", "H", [], hash_h([])))
    vectors.append(case("h_abc", "H", [b"abc"], hash_h([b"abc"])))
    vectors.append(case("h_one_empty_part", "H", [b""], hash_h([b""])))
    vectors.append(case("h_two_empty_parts", "H", [b"", b""], hash_h([b"", b""])))
    vectors.append(case("h_split_ab_c", "H", [b"ab", b"c"], hash_h([b"ab", b"c"])))

    # link-shaped call: 8-byte LE counter, 32-byte content digest, 32-byte old state
    ctr = struct.pack("<Q", 7)
    g32 = bytes([0xAA]) * 32
    y32 = bytes([0xBB]) * 32
    vectors.append(case("h_link_shape", "H", [ctr, g32, y32], hash_h([ctr, g32, y32])))

    # content digest of a genesis-shaped block: zero link, two entries, no votes
    s0 = bytes(32)
    pimg = payload_image([b"hello", b"world"], [])
    vectors.append(case("g_genesis_shape", "G", [s0, pimg], hash_g([s0, pimg])))

    # payload image with one vote digest present
    vote = hash_h([b"candidate"])
    pimg_v = payload_image([b"entry"], [vote])
    vectors.append(case("g_payload_with_vote", "G", [s0, pimg_v], hash_g([s0, pimg_v])))

    # three-leaf merkle tree, worked by hand:
    #   n1 = H(L1||L2), n2 = H(L3||L3), root = H(n1||n2)
    l1, l2, l3 = hash_h([b"t1"]), hash_h([b"t2"]), hash_h([b"t3"])
    vectors.append(
        {
            "name": "merkle_three_leaves",
            "kind": "merkle",
            "input_hex_parts": [l1.hex(), l2.hex(), l3.hex()],
            "expected_digest_hex": merkle_root([l1, l2, l3]).hex(),
        }
    )
    vectors.append(
        {
            "name": "merkle_single_leaf",
            "kind": "merkle",
            "input_hex_parts": [l1.hex()],
            "expected_digest_hex": l1.hex(),
        }
    )

    # witness-excluded transaction id: one input, one spendable + one data output
    prev = hash_h([b"prev-tx"])
    txid_img = tx_id_image(
        False,
        [(prev, 3)],
        [(0, 5000, bytes([0x11]) * 32), (1, 0, b"\xde\xad\xbe\xef")],
    )
    vectors.append(
        {
            "name": "txid_simple",
            "kind": "txid",
            "input_hex_parts": [txid_img.hex()],
            "expected_digest_hex": hash_h([txid_img]).hex(),
        }
    )

    # edit announcement vote token: H(old tx id || replacement tx id)
    old_id = hash_h([b"old"])
    new_id = hash_h([b"new"])
    vectors.append(
        case("vote_token_pair", "H", [old_id, new_id], hash_h([old_id, new_id]))
    )

    with open("hash_golden.json", "w") as f:
        json.dump(vectors, f, indent=1)
        f.write("\n")
    print(f"wrote {len(vectors)} vectors")


if __name__ == "__main__":
    main()
