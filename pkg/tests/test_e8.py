from itertools import product

import numpy as np
import pytest

from app.core.errors import LatticeError
from app.core.params import make_params
from app.services.e8 import (
    E2, EINV2, all_relevant, cvp_e8, e8_coords, from_coords, hint_label,
    hint_lift, in_voronoi_cell, key_label, key_lift, quantize_scaled,
    relevant_vectors, residual,
)


def _random_lattice_half(rng, count, spread=5):
    return from_coords(rng.integers(-spread, spread + 1, (count, 8)))


def _check_closest(num, den):
    half = cvp_e8(num, den)
    e8_coords(half, den=2)  # raises if not in E8
    assert np.all(in_voronoi_cell(residual(num, den, half), 2 * den))
    # covering radius of E8 is 1
    res = residual(num, den, half)
    assert np.all(np.einsum("...i,...i->...", res, res) <= 4 * den * den)
    return half


def test_basis_inverse():
    assert np.array_equal(E2 @ EINV2, 4 * np.eye(8, dtype=np.int64))


def test_lattice_points_are_fixed(rng):
    half = _random_lattice_half(rng, 200)
    assert np.array_equal(cvp_e8(half, 2), half)


def test_residual_in_voronoi_cell(rng):
    num = rng.integers(-60, 61, (10_000, 8))
    _check_closest(num, 7)


@pytest.mark.slow
def test_residual_in_voronoi_cell_million(rng):
    num = rng.integers(-1000, 1001, (1_000_000, 8))
    _check_closest(num, 97)


def test_translation_equivariance(rng):
    num = rng.integers(-12, 13, (5_000, 8))  # den 4 hits many boundary points
    shift = _random_lattice_half(rng, 5_000)
    base = cvp_e8(num, 4)
    moved = cvp_e8(num + 2 * shift, 4)
    assert np.array_equal(moved, base + shift)


def test_coset_tie_goes_to_smaller_error():
    # (1/4, ..., 1/4) is equidistant from 0 and from (1/2, ..., 1/2)
    assert cvp_e8(np.ones(8, dtype=np.int64), 4).tolist() == [1] * 8


def test_half_rounds_up():
    x = np.array([1, 0, 0, 0, 0, 0, 0, 1])  # (1/2, 0, ..., 0, 1/2) with den 2
    half = cvp_e8(x, 2)
    # D8 candidate (1, 0, ..., 0, 1) at squared distance 1/2 beats the odd coset
    assert half.tolist() == [2, 0, 0, 0, 0, 0, 0, 2]
    assert np.all(in_voronoi_cell(residual(x, 2, half), 4))


def test_quantize_scaled_needs_even_scale():
    with pytest.raises(ValueError):
        quantize_scaled(np.zeros(8, dtype=np.int64), 3)
    x = np.array([64, 0, 0, 0, 0, 0, 0, 0])
    point = quantize_scaled(x, 64)
    assert np.all(point % 32 == 0)
    # (1, 0, ..., 0) sits at distance 1 from its nearest E8 points
    assert int(((point - x) ** 2).sum()) == 64 ** 2


def test_coordinates_round_trip(rng):
    z = rng.integers(-20, 21, (100, 8))
    assert np.array_equal(e8_coords(from_coords(z), den=2), z)


def test_non_lattice_point_rejected():
    with pytest.raises(LatticeError):
        e8_coords(np.array([1, 0, 0, 0, 0, 0, 0, 0]), den=2)


def test_hint_labels_round_trip(params, rng):
    labels = rng.integers(0, 1 << (params.p - 1), (params.L, 8))
    assert np.array_equal(hint_label(hint_lift(labels, params), params), labels)


def test_hint_label_is_coset_invariant(params, rng):
    labels = rng.integers(0, 1 << (params.p - 1), (50, 8))
    point = hint_lift(labels, params)
    # adding a point of s2*E8 keeps the coset of s2*E8
    shift = (params.s2 // 2) * _random_lattice_half(rng, 50)
    assert np.array_equal(hint_label(point + shift, params), labels)


@pytest.mark.parametrize("p", [2, 3])
def test_hint_labels_are_a_bijection(p, rng):
    params = make_params(2048, 2, p)
    labels = np.array(list(product(range(1 << (p - 1)), repeat=8)), dtype=np.int64)
    points = hint_lift(labels, params)
    assert len({tuple(x) for x in points}) == len(labels) == 1 << (8 * (p - 1))
    assert np.array_equal(hint_label(points, params), labels)
    # every coset of s2*E8 in s1*E8 is hit exactly once
    shift = (params.s2 // 2) * _random_lattice_half(rng, len(labels))
    assert np.array_equal(hint_label(points + shift, params), labels)
    others = (params.s1 // 2) * _random_lattice_half(rng, 4096, spread=40)
    found = hint_label(others, params)
    assert found.min() >= 0 and found.max() < 1 << (p - 1)


def test_hint_lift_range_checked(params):
    with pytest.raises(LatticeError):
        hint_lift(np.full(8, 1 << (params.p - 1)), params)


def test_key_labels_round_trip(params):
    labels = np.arange(256, dtype=np.int64)
    points = key_lift(labels, params)
    assert points.min() >= 0 and points.max() < params.q
    assert np.array_equal(key_label(points, params), labels)


def test_key_label_is_defined_modulo_q(params, rng):
    labels = rng.integers(0, 256, 64)
    points = key_lift(labels, params) + params.q * rng.integers(-3, 4, (64, 8))
    assert np.array_equal(key_label(points, params), labels)


def test_key_label_rejects_foreign_point(params):
    quarter = params.q // 4
    with pytest.raises(LatticeError):
        key_label(np.array([quarter, 0, 0, 0, 0, 0, 0, 0]), params)
    with pytest.raises(LatticeError):
        key_label(np.array([2 * quarter, 0, 0, 0, 0, 0, 0, 0]), params)


def test_relevant_vectors():
    vr1, vr2 = relevant_vectors()
    assert vr1.shape == (112, 8)
    assert vr2.shape == (128, 8)
    norms = np.einsum("ij,ij->i", all_relevant(), all_relevant())
    assert np.all(norms == 8)  # |v|^2 = 2
    assert len({tuple(v) for v in all_relevant()}) == 240
    for v in all_relevant()[::17]:
        e8_coords(v, den=2)


def test_voronoi_cell_boundary():
    vh = all_relevant()
    assert in_voronoi_cell(np.zeros(8, dtype=np.int64)).item()
    assert np.all(in_voronoi_cell(vh, 4))       # v / 2 lies on a facet
    assert not np.any(in_voronoi_cell(5 * vh, 8))
