import re

import pytest

from app import cli
from app.core.config import settings


@pytest.fixture
def run(capsys):
    def invoke(*argv):
        code = cli.main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err
    return invoke


@pytest.fixture
def seeded(monkeypatch):
    monkeypatch.setattr(settings, "E8KEM_SEED", "00112233445566778899aabbccddeeff")


def test_params_listing(run):
    code, out, _ = run("params")
    assert code == 0
    assert len(out.strip().splitlines()) == 12
    code, out, _ = run("params", "--preset", "e8kem-2048-p5")
    assert "C=960" in out and "msg2_bytes=1184" in out


def test_unknown_preset_is_usage_error(run):
    code, _, err = run("keygen", "--preset", "nope", "--out", "x")
    assert code == 2
    assert err.startswith("e8kem: error:")


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


def test_key_files_round_trip(run, tmp_path):
    prefix = str(tmp_path / "server")
    assert run("keygen", "--out", prefix)[0] == 0
    assert (tmp_path / "server.pk").read_bytes()[:4] == b"E8K1"
    code, out, _ = run("encaps", "--in", prefix + ".pk", "--out", str(tmp_path / "client"))
    assert code == 0
    client_key = out.strip()
    assert re.fullmatch(r"[0-9a-f]{64}", client_key)
    assert (tmp_path / "client.key").read_text() == client_key + "\n"
    code, out, _ = run("decaps", "--in", prefix + ".sk", "--ct", str(tmp_path / "client.ct"))
    assert code == 0
    assert out.strip() == client_key


def test_malformed_file_exit_code(run, tmp_path):
    prefix = str(tmp_path / "server")
    run("keygen", "--out", prefix)
    (tmp_path / "short.ct").write_bytes(b"E8K1" + bytes(10))
    code, _, err = run("decaps", "--in", prefix + ".sk", "--ct", str(tmp_path / "short.ct"))
    assert code == 3
    assert "expected" in err
    code, _, _ = run("encaps", "--in", str(tmp_path / "missing.pk"), "--out", prefix)
    assert code == 3


def test_seed_requires_flag(run, seeded, tmp_path):
    code, _, err = run("keygen", "--out", str(tmp_path / "a"))
    assert code == 2
    assert "--insecure-deterministic" in err


def test_flag_requires_seed(run, tmp_path):
    code, _, _ = run("keygen", "--insecure-deterministic", "--out", str(tmp_path / "a"))
    assert code == 2


def test_deterministic_keygen(run, seeded, tmp_path):
    run("keygen", "--insecure-deterministic", "--out", str(tmp_path / "a"))
    run("keygen", "--insecure-deterministic", "--out", str(tmp_path / "b"))
    assert (tmp_path / "a.pk").read_bytes() == (tmp_path / "b.pk").read_bytes()


def test_kat_generate_and_verify(run, tmp_path):
    path = tmp_path / "kat.txt"
    assert run("kat-gen", "--count", "2", "--out", str(path))[0] == 0
    code, out, _ = run("kat-verify", "--in", str(path))
    assert code == 0 and "2 records verified" in out
    lines = path.read_text().splitlines()
    key_line = next(i for i, line in enumerate(lines) if line.startswith("key="))
    flipped = "0" if lines[key_line][4] != "0" else "1"
    lines[key_line] = "key=" + flipped + lines[key_line][5:]
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run("kat-verify", "--in", str(path))
    assert code == 4
    assert "differ" in err


def test_estimate_security_report(run):
    code, out, _ = run("estimate-security")
    assert code == 0
    assert "e8kem q=2048 & Primal & 658 & 665 & 194 & 176 & 137" in out
    assert "Kyber768 Round 3 & Dual & 670 & 620 & 181 & 164 & 128" in out


def test_analyze_single_row(run):
    code, out, _ = run("analyze-pe", "--preset", "e8kem-2048-p5")
    assert code == 0
    match = re.search(r"q=2048 k=2 p=5 log2pe=(-?\d+\.\d+)", out)
    assert match and abs(float(match.group(1)) + 174) <= 2


def test_bad_endpoint(run):
    code, _, err = run("exchange-client", "--connect", "localhost")
    assert code == 2
    assert "host:port" in err
