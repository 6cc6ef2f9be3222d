"""
Seed expansion and centered-binomial noise over SHAKE-128.

XOF inputs (normative, KAT-relevant):
  matrix entry (i, j):  seed || 0x00 || i || j
  noise polynomial:     seed || 0x01 || counter
Bits are read least-significant-first within each byte.
"""

import hashlib
from math import comb
from typing import Tuple

import numpy as np

from app.core.errors import EntropyError
from app.core.params import Params
from app.services.ring import Poly, PolyMat, PolyVec

SEED_BYTES = 32
MATRIX_DOMAIN = 0x00
NOISE_DOMAIN = 0x01

NoiseNonce = Tuple[int, int]


def noise_nonce(counter: int) -> NoiseNonce:
    if not 0 <= counter < 256:
        raise ValueError(f"nonce counter {counter} out of range")
    return (NOISE_DOMAIN, counter)


def _check_seed(seed: bytes) -> None:
    if len(seed) != SEED_BYTES:
        raise EntropyError(f"seed must be {SEED_BYTES} bytes, got {len(seed)}")


def _xof_bits(data: bytes, nbits: int) -> np.ndarray:
    stream = hashlib.shake_128(data).digest(nbits // 8)
    return np.unpackbits(np.frombuffer(stream, dtype=np.uint8), bitorder="little")


def expand_entry(seed: bytes, i: int, j: int, params: Params) -> Poly:
    _check_seed(seed)
    width = params.log_q
    bits = _xof_bits(seed + bytes([MATRIX_DOMAIN, i, j]), params.n * width)
    weights = np.left_shift(1, np.arange(width, dtype=np.int64))
    # power-of-two q: every chunk is already a valid coefficient
    return bits.reshape(params.n, width).astype(np.int64) @ weights


def expand_matrix(seed: bytes, params: Params) -> PolyMat:
    d = params.d
    A = np.empty((d, d, params.n), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            A[i, j] = expand_entry(seed, i, j, params)
    return A


def cbd_from_bits(bits: np.ndarray, k: int) -> np.ndarray:
    """Signed coefficients: first k bits of each 2k-bit group add, next k subtract."""
    groups = bits.reshape(-1, 2 * k).astype(np.int64)
    return groups[:, :k].sum(axis=1) - groups[:, k:].sum(axis=1)


def sample_cbd_signed(seed: bytes, nonce: NoiseNonce, params: Params) -> np.ndarray:
    _check_seed(seed)
    bits = _xof_bits(seed + bytes(nonce), params.n * 2 * params.k)
    return cbd_from_bits(bits, params.k)


def sample_cbd_poly(seed: bytes, nonce: NoiseNonce, params: Params) -> Poly:
    return np.mod(sample_cbd_signed(seed, nonce, params), params.q)


def sample_cbd_vec(seed: bytes, base_nonce: NoiseNonce, params: Params) -> PolyVec:
    domain, counter = base_nonce
    return np.stack([
        sample_cbd_poly(seed, (domain, counter + i), params)
        for i in range(params.d)
    ])


def cbd_pmf(k: int) -> dict:
    """Exact pmf of psi_k as {value: probability}."""
    total = 4 ** k
    return {c: comb(2 * k, k + c) / total for c in range(-k, k + 1)}
