import pytest

from app.core.errors import ParamsError
from app.core.params import DEFAULT_PRESET, PRESETS, get_preset, make_params, preset_names


def test_default_preset_constants(params):
    assert params.name == DEFAULT_PRESET
    assert (params.q, params.k, params.p) == (2048, 2, 5)
    assert params.s1 == 64
    assert params.s2 == 1024
    assert params.C == 960
    assert params.log_q == 11


def test_wire_sizes(params):
    assert params.poly_bytes == 352
    assert params.hint_bytes == 128
    assert params.msg1_bytes == 32 + 3 * 352
    assert params.msg2_bytes == 3 * 352 + 128
    assert params.secret_bytes == 3 * 352 + params.msg1_bytes


def test_rates(params):
    assert params.key_rate == 1
    assert params.rec_rate == params.p - 1


def test_twelve_presets():
    assert len(PRESETS) == 12
    assert set(preset_names()) == set(PRESETS)
    for name in preset_names():
        p = get_preset(name)
        assert p.q % (1 << (p.p + 1)) == 0


def test_constants_at_other_rows():
    p = get_preset("e8kem-8192-p2")
    assert (p.k, p.s1, p.s2) == (4, 2048, 4096)
    assert p.C == 4096 - 2048


@pytest.mark.parametrize("q,k,p,fragment", [
    (3000, 2, 3, "power of two"),
    (2048, 2, 11, "does not divide"),
    (2048, 0, 3, "k=0"),
    (2048, 2, 1, "at least 2"),
])
def test_rejects_invalid(q, k, p, fragment):
    with pytest.raises(ParamsError, match=fragment):
        make_params(q, k, p)


def test_unknown_preset():
    with pytest.raises(ParamsError, match="unknown preset"):
        get_preset("e8kem-1024-p3")


def test_params_are_frozen(params):
    with pytest.raises(Exception):
        params.q = 4096
