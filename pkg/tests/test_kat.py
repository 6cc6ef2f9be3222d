import dataclasses

import pytest

from app.core.errors import EntropyError
from app.services import codec, kat
from app.services.kem import SERVER_ENTROPY_BYTES, gen


def test_record_seed_is_stable():
    a = kat.record_seed(bytes(32), 0)
    assert len(a) == kat.RECORD_SEED_BYTES == 96
    assert a == kat.record_seed(bytes(32), 0)
    assert a != kat.record_seed(bytes(32), 1)


def test_generate_and_replay(params):
    records = kat.kat_generate(params, 3)
    assert len(records) == 3
    for record in records:
        assert len(record.pk) == params.msg1_bytes
        assert len(record.sk) == params.secret_bytes
        assert len(record.msg2) == params.msg2_bytes
        assert len(record.key) == 32
    assert kat.kat_mismatches(params, records) == []
    assert kat.kat_generate(params, 3) == records


def test_file_round_trip_replays(params, tmp_path):
    path = tmp_path / "vectors.txt"
    path.write_text(codec.kat_write(kat.kat_generate(params, 2, master=b"\x11" * 32)))
    records = codec.kat_read(path.read_text())
    assert kat.kat_mismatches(params, records) == []


def test_tampered_record_detected(params):
    records = kat.kat_generate(params, 2)
    bad_key = bytes(b ^ 1 for b in records[1].key)
    records[1] = dataclasses.replace(records[1], key=bad_key)
    assert kat.kat_mismatches(params, records) == [1]


def test_pk_comes_from_server_entropy(params):
    seed = kat.record_seed(bytes(32), 5)
    record = kat.kat_replay(params, seed)
    public, _ = gen(seed[:SERVER_ENTROPY_BYTES], params)
    assert record.pk == codec.encode_msg1(public, params)


def test_seed_length_checked(params):
    with pytest.raises(EntropyError):
        kat.kat_replay(params, bytes(64))


def test_frozen_vectors_replay(params, data_dir):
    records = codec.kat_read((data_dir / f"kat_{params.name}.txt").read_text())
    assert len(records) == 2
    assert [r.seed for r in records] == [kat.record_seed(bytes(32), i) for i in range(2)]
    assert kat.kat_mismatches(params, records) == []
    assert kat.kat_generate(params, 2) == records
