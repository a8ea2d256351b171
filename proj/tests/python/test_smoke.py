import hashlib
import json
import os

import pytest

import fogseal

SK = bytes(range(27))


def test_keystream_matches_hashlib():
    for ctr in (1, 2, 1000, 2**40 - 1):
        d = hashlib.blake2s(SK + ctr.to_bytes(5, "big")).digest()
        assert fogseal.derive_keystream(SK, ctr) == d + d


def test_hash32_length_and_registry():
    assert "blake2s-256" in fogseal.hash_names()
    assert fogseal.hash32(bytes(32)) == hashlib.blake2s(bytes(32)).digest()
    with pytest.raises(fogseal.FogsealError):
        fogseal.hash32(bytes(31))
    with pytest.raises(fogseal.FogsealError):
        fogseal.derive_keystream(SK, 0)


def test_frame_layout():
    block = fogseal.frame_message(b"hello", SK)
    assert block == b"hello" + bytes(50) + b"\x05" + SK[:8]
    assert fogseal.deframe_message(block, SK) == b"hello"
    bad = block[:60] + bytes([block[60] ^ 1]) + block[61:]
    assert fogseal.deframe_message(bad, SK) is None


def test_session_roundtrip_and_replay():
    dev, fog = fogseal.Session(SK), fogseal.Session(SK)
    enc = dev.encrypt_next(b"reading")
    ks = fogseal.derive_keystream(SK, 1)
    plain = bytes(a ^ b for a, b in zip(enc, ks))
    assert plain == fogseal.frame_message(b"reading", SK)
    assert fog.decrypt_next(enc) == b"reading"
    assert fog.decrypt_next(enc) is None
    assert dev.peek_counters() == (1, 0)
    assert fog.peek_counters() == (0, 1)


def test_resync():
    dev, fog = fogseal.Session(SK, window=8), fogseal.Session(SK, window=8)
    for _ in range(3):
        dev.encrypt_next(b"lost")
    assert fog.decrypt_with_resync(dev.encrypt_next(b"late")) == (b"late", 3)


def test_tuple_and_registry():
    reg = fogseal.Registry()
    reg.register_device(1, SK)
    dev = fogseal.Session(SK)
    wire = fogseal.encode_tuple(1, dev.encrypt_next(b"x"))
    assert len(wire) == fogseal.TUPLE_SIZE
    assert fogseal.decode_tuple(wire)[0] == 1
    assert reg.handle_tuple(wire) == ("accepted", 1, b"x", 0)
    assert reg.handle_tuple(wire)[0] == "rejected"
    assert reg.handle_tuple(b"short")[0] == "framing-error"
    assert reg.handle_tuple(bytes(72))[0] == "unknown-device"
    restored = fogseal.Registry.load_state(reg.save_state())
    assert restored.counters(1) == (0, 1)
    assert len(restored) == 1


def test_memory_footprint():
    assert fogseal.memory_footprint(107, 32, False) == (139, 32, 171)
    assert fogseal.memory_footprint(107, 32, True)[2] == 176


def test_census_and_forgery():
    detected = fogseal.bitflip_census(SK, b"hello", 9)
    assert sum(detected[56 * 8:]) == 64
    assert sum(detected[:55 * 8]) == 0
    assert [i % 8 for i in range(55 * 8, 56 * 8) if detected[i]] == [6, 7]
    assert fogseal.forgery_trial(SK, 5000, 16) == 0


def test_bundled_scenario():
    path = os.path.join(os.path.dirname(__file__), "..", "..", "scenarios", "replay.json")
    with open(path) as f:
        report = json.loads(fogseal.run_scenario(f.read()))
    assert report["rejected"] == report["replays_presented"] == 100
    assert report["undetected_modifications"] == 0
