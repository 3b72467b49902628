import random
from pathlib import Path

import pytest

from meshsim import (
    ConfigError,
    Message,
    MessageKey,
    MessageKind,
    NodeSpec,
    Role,
    ScenarioConfig,
    Waypoint,
    decode_message,
    encode_message,
    message_hash,
    message_key,
)
from meshsim.core import sensor_reading

DATA_DIR = Path(__file__).parent / "data"


def test_hash_deterministic():
    assert message_hash(b"reading", 3, 17) == message_hash(b"reading", 3, 17)
    assert message_hash(b"", 0, 0) == message_hash(b"", 0, 0)


def test_hash_differs_across_seq():
    rng = random.Random(11)
    for _ in range(200):
        origin = rng.randrange(100)
        seq = rng.randrange(10_000)
        payload = rng.randbytes(8)
        assert message_hash(payload, origin, seq) != message_hash(payload, origin, seq + 1)


def test_hash_golden_value():
    golden = int((DATA_DIR / "golden_hash.txt").read_text().strip())
    assert message_hash(b"", 0, 0) == golden


def test_hash_fits_64_bits():
    rng = random.Random(5)
    for _ in range(100):
        h = message_hash(rng.randbytes(rng.randrange(32)), rng.randrange(65536), rng.randrange(1 << 32))
        assert 0 <= h < 1 << 64


def test_wire_golden_vectors():
    m = Message(MessageKind.DATA, origin=1, seq=2, hops=3, sender=4, payload=b"\x01\x02")
    assert encode_message(m).hex() == "0200010000000203000400020102"
    hb = Message(MessageKind.HEARTBEAT, origin=0, seq=0, hops=0, sender=0)
    assert encode_message(hb).hex() == "010000000000000000000000"
    ack = Message(MessageKind.ACK, origin=65535, seq=4294967295, hops=127, sender=65535)
    assert encode_message(ack).hex() == "05ffffffffffff7fffff0000"


def test_wire_round_trip():
    rng = random.Random(23)
    for _ in range(300):
        m = Message(
            kind=rng.choice(list(MessageKind)),
            origin=rng.randrange(65536),
            seq=rng.randrange(1 << 32),
            hops=rng.randrange(128),
            sender=rng.randrange(65536),
            payload=rng.randbytes(rng.randrange(64)),
        )
        wire = encode_message(m)
        assert decode_message(wire) == m
        assert encode_message(decode_message(wire)) == wire


def test_encode_rejects_out_of_range():
    base = Message(MessageKind.DATA, origin=0, seq=0, hops=0, sender=0)
    with pytest.raises(ValueError):
        encode_message(Message(MessageKind.DATA, 70000, 0, 0, 0))
    with pytest.raises(ValueError):
        encode_message(Message(MessageKind.DATA, 0, 0, 128, 0))
    with pytest.raises(ValueError):
        encode_message(Message(MessageKind.DATA, 0, 1 << 32, 0, 0))
    assert decode_message(encode_message(base)) == base


def test_decode_rejects_malformed():
    m = Message(MessageKind.DATA, 1, 2, 3, 4, b"xy")
    wire = encode_message(m)
    with pytest.raises(ValueError):
        decode_message(wire[:-1])
    with pytest.raises(ValueError):
        decode_message(wire + b"z")
    with pytest.raises(ValueError):
        decode_message(b"\x00")


def test_message_key_order_matches_seq_order():
    keys = [MessageKey(o, s) for o in range(3) for s in range(5)]
    shuffled = keys[:]
    random.Random(9).shuffle(shuffled)
    assert sorted(shuffled) == keys
    assert MessageKey(1, 99) < MessageKey(2, 0)
    assert message_key(Message(MessageKind.DATA, 7, 3, 0, 7)) == MessageKey(7, 3)


def test_sensor_reading_fixed_size_and_deterministic():
    assert len(sensor_reading(4, 9)) == 8
    assert sensor_reading(4, 9) == sensor_reading(4, 9)


def _topology():
    return [
        NodeSpec(0, 0.0, 0.0, Role.MOBILE_HUB),
        NodeSpec(1, 5.0, 0.0, Role.COMMANDER),
        NodeSpec(2, 10.0, 0.0, Role.SENSOR),
    ]


def _config(**overrides):
    kwargs = dict(topology=_topology(), duration_ms=1000)
    kwargs.update(overrides)
    return ScenarioConfig(**kwargs)


def test_config_valid():
    _config().validate()


@pytest.mark.parametrize("overrides,field", [
    (dict(duration_ms=-1), "duration_ms"),
    (dict(heartbeat_period_ms=0), "heartbeat_period_ms"),
    (dict(data_period_ms=0), "data_period_ms"),
    (dict(delta_ms=0), "delta_ms"),
    (dict(relay_cache_size=0), "relay_cache_size"),
    (dict(tx_queue_capacity=0), "tx_queue_capacity"),
    (dict(latency_ms=0), "latency_ms"),
    (dict(loss_prob=1.0), "loss_prob"),
    (dict(tracker="bloom"), "tracker"),
    (dict(radio_preset=-2.0), "radio_preset"),
])
def test_config_errors_name_the_field(overrides, field):
    with pytest.raises(ConfigError, match=field):
        _config(**overrides).validate()


def test_config_topology_rules():
    with pytest.raises(ConfigError, match="duplicate"):
        _config(topology=_topology() + [NodeSpec(2, 1.0, 1.0, Role.SENSOR)]).validate()
    with pytest.raises(ConfigError, match="sequential"):
        _config(topology=[NodeSpec(0, 0, 0, Role.MOBILE_HUB), NodeSpec(5, 1, 0, Role.SENSOR)]).validate()
    with pytest.raises(ConfigError, match="hub"):
        _config(topology=[NodeSpec(0, 0, 0, Role.SENSOR), NodeSpec(1, 1, 0, Role.SENSOR)]).validate()
    two_hubs = [NodeSpec(0, 0, 0, Role.MOBILE_HUB), NodeSpec(1, 1, 0, Role.MOBILE_HUB)]
    with pytest.raises(ConfigError, match="hub"):
        _config(topology=two_hubs).validate()
    two_cmd = _topology() + [NodeSpec(3, 2.0, 2.0, Role.COMMANDER)]
    with pytest.raises(ConfigError, match="commander"):
        _config(topology=two_cmd).validate()
    # ids may start at 1 instead of 0
    ids_from_one = [NodeSpec(1, 0, 0, Role.MOBILE_HUB), NodeSpec(2, 1, 0, Role.SENSOR)]
    _config(topology=ids_from_one).validate()


def test_config_mobility_rules():
    _config(mobility=[Waypoint(0, 0.0, 0.0), Waypoint(100, 1.0, 0.0)]).validate()
    with pytest.raises(ConfigError, match="mobility"):
        _config(mobility=[]).validate()
    with pytest.raises(ConfigError, match="mobility"):
        _config(mobility=[Waypoint(100, 0.0, 0.0), Waypoint(100, 1.0, 0.0)]).validate()
