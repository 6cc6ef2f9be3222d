"""
Arithmetic in R_q = Z_q[X]/(X^n + 1).

Polynomials are int64 numpy arrays of shape (n,) with coefficients in
[0, q); vectors are (d, n) and matrices (d, d, n), row-major. Products stay
exact in int64: coefficients are below 2^13 and n = 256 terms are summed.
"""

from typing import Callable, Optional

import numpy as np
import numpy.typing as npt

from app.core.config import settings
from app.core.params import Params

Poly = npt.NDArray[np.int64]
PolyVec = npt.NDArray[np.int64]
PolyMat = npt.NDArray[np.int64]

KARATSUBA_CUTOFF = 32


def as_poly(coeffs, params: Params) -> Poly:
    """Canonical copy of a coefficient sequence (reduced mod q)."""
    a = np.asarray(coeffs, dtype=np.int64)
    if a.shape != (params.n,):
        raise ValueError(f"expected {params.n} coefficients, got shape {a.shape}")
    return np.mod(a, params.q)


def zero_poly(params: Params) -> Poly:
    return np.zeros(params.n, dtype=np.int64)


def zero_vec(params: Params) -> PolyVec:
    return np.zeros((params.d, params.n), dtype=np.int64)


def poly_add(a: Poly, b: Poly, params: Params) -> Poly:
    return (a + b) % params.q


def poly_sub(a: Poly, b: Poly, params: Params) -> Poly:
    return (a - b) % params.q


# ---- Multiplication ----
def _plain_schoolbook(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # np.convolve in direct mode is the O(n^2) schoolbook product
    return np.convolve(a, b)


def _plain_karatsuba(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    size = len(a)
    if size <= KARATSUBA_CUTOFF or size % 2:
        return np.convolve(a, b)
    h = size // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    low = _plain_karatsuba(a0, b0)
    high = _plain_karatsuba(a1, b1)
    mid = _plain_karatsuba(a0 + a1, b0 + b1) - low - high
    out = np.zeros(2 * size - 1, dtype=np.int64)
    out[: 2 * h - 1] += low
    out[h: h + 2 * h - 1] += mid
    out[2 * h:] += high
    return out


_MULTIPLIERS = {"schoolbook": _plain_schoolbook, "karatsuba": _plain_karatsuba}


def poly_mul(a: Poly, b: Poly, params: Params, method: Optional[str] = None) -> Poly:
    """Negacyclic product: terms with i + j >= n wrap with a minus sign."""
    multiply: Callable = _MULTIPLIERS[method or settings.POLY_MUL]
    full = multiply(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    n = params.n
    out = full[:n].copy()
    out[: n - 1] -= full[n:]
    return out % params.q


def mat_vec_mul(A: PolyMat, x: PolyVec, params: Params, transpose: bool = False) -> PolyVec:
    d = params.d
    out = zero_vec(params)
    for i in range(d):
        acc = zero_poly(params)
        for j in range(d):
            entry = A[j, i] if transpose else A[i, j]
            acc = acc + poly_mul(entry, x[j], params)
        out[i] = acc % params.q
    return out


def dot(x: PolyVec, y: PolyVec, params: Params) -> Poly:
    acc = zero_poly(params)
    for xi, yi in zip(x, y):
        acc = acc + poly_mul(xi, yi, params)
    return acc % params.q


def vec_add(x: PolyVec, y: PolyVec, params: Params) -> PolyVec:
    return (x + y) % params.q


# ---- Splitting into E8 blocks ----
def split(a: Poly, params: Params) -> np.ndarray:
    """Row kappa is (a_kappa, a_{kappa+L}, ..., a_{kappa+n-L})."""
    return np.asarray(a).reshape(params.n0, params.L).T.copy()


def interleave(blocks: np.ndarray, params: Params) -> Poly:
    return np.asarray(blocks).T.reshape(params.n).copy()


def centered(a: np.ndarray, q: int) -> np.ndarray:
    """Representatives in (-q/2, q/2]."""
    r = np.mod(a, q)
    return np.where(r > q // 2, r - q, r)
