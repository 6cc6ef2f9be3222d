"""
E8 geometry in exact integer arithmetic.

Points are numpy integer arrays whose last axis has length 8. A rational
point is carried as (num, den) with value num / den; lattice points come
back in half-units (integer array h, value h / 2), since E8 lies in
(1/2)Z^8. Every function broadcasts over leading axes, so a whole
polynomial's 32 blocks (or a million test points) decode in one call.

E8 = D8 u (D8 + g), g = (1/2, ..., 1/2).

Tie rules:
  - rounding sends halves up;
  - the D8 parity fix moves the coordinate with the largest rounding
    error (lowest index on ties), a zero error moving up;
  - equal distance to the D8 and the D8 + g candidate goes to the
    candidate whose error vector is lexicographically smaller.
All three depend only on the error vector, so cvp_e8(x + l) = cvp_e8(x) + l
holds exactly for every l in E8, boundary points included.
"""

from functools import lru_cache
from itertools import combinations, product

import numpy as np

from app.core.errors import LatticeError
from app.core.params import Params

# ---- Basis (scaled by 2 to stay integral) ----
# rows of E: (2,0,..,0), (-1,1,0,..), ..., (0,..,-1,1,0), (1/2,...,1/2)
E2 = np.zeros((8, 8), dtype=np.int64)
E2[0, 0] = 4
for _i in range(1, 7):
    E2[_i, _i - 1] = -2
    E2[_i, _i] = 2
E2[7, :] = 1

# 2 * E^-1: column 0 -> (1,..,1,-7), column i -> 2 on rows i..6 and -2(7-i)
# on row 7, column 7 -> 4 on row 7
EINV2 = np.zeros((8, 8), dtype=np.int64)
EINV2[:7, 0] = 1
EINV2[7, 0] = -7
for _i in range(1, 7):
    EINV2[_i:7, _i] = 2
    EINV2[7, _i] = -2 * (7 - _i)
EINV2[7, 7] = 4

GLUE_HALF = np.ones(8, dtype=np.int64)


def _decode_d8(num: np.ndarray, den: int) -> np.ndarray:
    """Nearest D8 point (integer coordinates) to num / den."""
    f = np.floor_divide(2 * num + den, 2 * den)
    err = num - f * den
    odd = (f.sum(axis=-1) & 1).astype(bool)
    if odd.any():
        flat_f = f.reshape(-1, 8)
        flat_err = err.reshape(-1, 8)
        rows = np.flatnonzero(odd.reshape(-1))
        cols = np.argmax(np.abs(flat_err[rows]), axis=1)
        flat_f[rows, cols] += np.where(flat_err[rows, cols] >= 0, 1, -1)
        f = flat_f.reshape(f.shape)
    return f


def cvp_e8(num, den: int = 1) -> np.ndarray:
    """Closest E8 point to num / den, in half-units."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    num = np.asarray(num, dtype=np.int64)
    c0 = _decode_d8(num, den)
    c1 = _decode_d8(2 * num - den, 2 * den)
    # errors in units of 1 / (2 den)
    e0 = 2 * num - 2 * den * c0
    e1 = 2 * num - den * (2 * c1 + 1)
    d0 = np.einsum("...i,...i->...", e0, e0)
    d1 = np.einsum("...i,...i->...", e1, e1)
    take_coset = d1 < d0
    tie = d1 == d0
    if tie.any():
        diff = e1 != e0
        first = np.argmax(diff, axis=-1)
        e1_first = np.take_along_axis(e1, first[..., None], axis=-1)[..., 0]
        e0_first = np.take_along_axis(e0, first[..., None], axis=-1)[..., 0]
        take_coset = np.where(tie, e1_first < e0_first, take_coset)
    return np.where(take_coset[..., None], 2 * c1 + 1, 2 * c0)


def _check_scale(scale: int) -> None:
    if scale <= 0 or scale % 2:
        raise ValueError(f"scale {scale} must be a positive even integer")


def quantize_scaled(x, scale: int) -> np.ndarray:
    """scale * cvp_e8(x / scale) for integer points x; the result is integral."""
    _check_scale(scale)
    half = cvp_e8(x, scale)
    return (scale // 2) * half


def e8_coords(point, den: int = 1) -> np.ndarray:
    """Integer z with z . E = point / den (den in {1, 2})."""
    if den not in (1, 2):
        raise ValueError("den must be 1 or 2")
    half = np.asarray(point, dtype=np.int64) * (2 // den)
    scaled = half @ EINV2
    if np.any(scaled % 4):
        raise LatticeError("point is not in E8")
    return scaled // 4


def from_coords(z) -> np.ndarray:
    """z . E in half-units."""
    return np.asarray(z, dtype=np.int64) @ E2


# ---- Coset labels ----
def hint_label(point, params: Params) -> np.ndarray:
    """Label of a point of s1*E8 in (s1*E8) / (s2*E8), values in [0, 2^(p-1))."""
    point = np.asarray(point, dtype=np.int64)
    unit = params.s1 // 2
    if np.any(point % unit):
        raise LatticeError(f"point is not in {params.s1}*E8")
    z = e8_coords(point // unit, den=2)
    return np.mod(z, 1 << (params.p - 1))


def hint_lift(label, params: Params) -> np.ndarray:
    label = np.asarray(label, dtype=np.int64)
    if label.shape[-1:] != (8,) or np.any(label < 0) or np.any(label >= 1 << (params.p - 1)):
        raise LatticeError("hint label out of range")
    return (params.s1 // 2) * from_coords(label)


_BIT_WEIGHTS = np.left_shift(1, np.arange(7, dtype=np.int64))


def key_label(point, params: Params) -> np.ndarray:
    """Byte label of a point of s2*E8 modulo qZ^8: x_0..x_6 low bits, glue in bit 7."""
    quarter = params.q // 4
    r = np.mod(np.asarray(point, dtype=np.int64), params.q)
    if np.any(r % quarter):
        raise LatticeError("point is not in the key lattice")
    t = r // quarter
    glue = t[..., 0] & 1
    if np.any((t & 1) != glue[..., None]):
        raise LatticeError("mixed coordinate parity: point is not in the key lattice")
    x = (t - glue[..., None]) // 2
    if np.any(x.sum(axis=-1) & 1):
        raise LatticeError("odd D8 parity: point is not in the key lattice")
    return (x[..., :7] @ _BIT_WEIGHTS) | (glue << 7)


def key_lift(label, params: Params) -> np.ndarray:
    """Unique representative in [0, q)^8 of the key coset with this byte label."""
    label = np.asarray(label, dtype=np.int64)
    bits = (label[..., None] >> np.arange(7)) & 1
    x7 = bits.sum(axis=-1) & 1
    x = np.concatenate([bits, x7[..., None]], axis=-1)
    glue = (label >> 7) & 1
    return (2 * x + glue[..., None]) * (params.q // 4)


# ---- Voronoi-relevant vectors (half-units) ----
@lru_cache(maxsize=None)
def _relevant() -> tuple:
    type1 = []
    for i, j in combinations(range(8), 2):
        for si, sj in product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            type1.append(v)
    type2 = [list(signs) for signs in product((1, -1), repeat=8)
             if signs.count(-1) % 2 == 0]
    return np.array(type1, dtype=np.int64), np.array(type2, dtype=np.int64)


def relevant_vectors() -> tuple:
    """(VR1, VR2) in half-units: 112 vectors (+-1,+-1,0^6) and 128 vectors (+-1/2)^8."""
    vr1, vr2 = _relevant()
    return vr1.copy(), vr2.copy()


def all_relevant() -> np.ndarray:
    vr1, vr2 = _relevant()
    return np.vstack([vr1, vr2])


def in_voronoi_cell(num, den: int = 1) -> np.ndarray:
    """Whether num / den lies in the closed Voronoi cell of 0 (all 240 facets)."""
    num = np.asarray(num, dtype=np.int64)
    # <x, v> <= |v|^2 / 2 = 1 with v = vh / 2
    return np.all(num @ all_relevant().T <= 2 * den, axis=-1)


def residual(num, den: int, half: np.ndarray) -> np.ndarray:
    """x - lattice point, in units of 1 / (2 den)."""
    return 2 * np.asarray(num, dtype=np.int64) - den * half
