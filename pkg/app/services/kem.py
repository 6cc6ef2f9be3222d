"""
The three-message exchange as server (gen / decaps) and client (encaps).

Nonce schedule: the server draws s with counters 0..d-1 and e with d..2d-1;
the client draws s' with 0..d-1, e' with d..2d-1 and e'' with 2d.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from app.core.errors import CodecError, EntropyError
from app.core.params import Params
from app.services.e8 import in_voronoi_cell
from app.services.reconcile import help_rec, rec
from app.services.ring import (
    Poly, PolyVec, centered, dot, mat_vec_mul, poly_add, poly_sub,
    split, vec_add,
)
from app.services.sampler import SEED_BYTES, expand_matrix, noise_nonce, sample_cbd_poly, sample_cbd_vec

logger = logging.getLogger(__name__)

SERVER_ENTROPY_BYTES = 64
CLIENT_ENTROPY_BYTES = 32


@dataclass(frozen=True, eq=False)
class PublicKey:
    seed: bytes
    b: PolyVec


@dataclass(frozen=True, eq=False)
class ServerState:
    params: Params
    seed: bytes
    s: PolyVec
    b: PolyVec
    e: Optional[PolyVec] = None  # kept only in debug mode

    @property
    def public(self) -> PublicKey:
        return PublicKey(seed=self.seed, b=self.b)


@dataclass(frozen=True, eq=False)
class Ciphertext:
    u: PolyVec
    hint: np.ndarray


@dataclass(frozen=True, eq=False)
class ClientOutput:
    u: PolyVec
    hint: np.ndarray
    key: bytes
    # debug-only noise and the client's ring element
    s_prime: Optional[PolyVec] = None
    e_prime: Optional[PolyVec] = None
    e_dprime: Optional[Poly] = None
    v: Optional[Poly] = None

    @property
    def ciphertext(self) -> Ciphertext:
        return Ciphertext(u=self.u, hint=self.hint)


def _check_vec(x, params: Params, what: str) -> PolyVec:
    arr = np.asarray(x, dtype=np.int64)
    if arr.shape != (params.d, params.n):
        raise CodecError(f"{what} must have shape ({params.d}, {params.n}), got {arr.shape}")
    if np.any(arr < 0) or np.any(arr >= params.q):
        raise CodecError(f"{what} coefficients must lie in [0, {params.q})")
    return arr


def gen(entropy: bytes, params: Params, debug: bool = False) -> Tuple[PublicKey, ServerState]:
    if len(entropy) != SERVER_ENTROPY_BYTES:
        raise EntropyError(f"gen needs {SERVER_ENTROPY_BYTES} bytes of entropy, got {len(entropy)}")
    seed, noise_seed = entropy[:SEED_BYTES], entropy[SEED_BYTES:]
    A = expand_matrix(seed, params)
    s = sample_cbd_vec(noise_seed, noise_nonce(0), params)
    e = sample_cbd_vec(noise_seed, noise_nonce(params.d), params)
    b = vec_add(mat_vec_mul(A, s, params), e, params)
    logger.debug("gen preset=%s", params.name)
    state = ServerState(params=params, seed=seed, s=s, b=b, e=e if debug else None)
    return state.public, state


def encaps(public: PublicKey, entropy: bytes, params: Params, debug: bool = False) -> ClientOutput:
    if len(entropy) != CLIENT_ENTROPY_BYTES:
        raise EntropyError(f"encaps needs {CLIENT_ENTROPY_BYTES} bytes of entropy, got {len(entropy)}")
    if len(public.seed) != SEED_BYTES:
        raise CodecError(f"public seed must be {SEED_BYTES} bytes")
    b = _check_vec(public.b, params, "public b")
    A = expand_matrix(public.seed, params)
    s_prime = sample_cbd_vec(entropy, noise_nonce(0), params)
    e_prime = sample_cbd_vec(entropy, noise_nonce(params.d), params)
    e_dprime = sample_cbd_poly(entropy, noise_nonce(2 * params.d), params)
    u = vec_add(mat_vec_mul(A, s_prime, params, transpose=True), e_prime, params)
    v = poly_add(dot(b, s_prime, params), e_dprime, params)
    hint = help_rec(v, params)
    key = rec(v, hint, params)
    if debug:
        return ClientOutput(u=u, hint=hint, key=key, s_prime=s_prime,
                            e_prime=e_prime, e_dprime=e_dprime, v=v)
    return ClientOutput(u=u, hint=hint, key=key)


def decaps(state: ServerState, ciphertext: Ciphertext, params: Params) -> bytes:
    u = _check_vec(ciphertext.u, params, "ciphertext u")
    v_prime = dot(u, state.s, params)
    key = rec(v_prime, ciphertext.hint, params)
    return key


# ---- Debug instrumentation ----
def error_polynomial(state: ServerState, client: ClientOutput, params: Params) -> Poly:
    """omega = e.s' - e'.s + e'' (needs both sides' debug noise)."""
    if state.e is None or client.s_prime is None:
        raise ValueError("error polynomial needs debug-mode state and client output")
    lhs = dot(state.e, client.s_prime, params)
    rhs = dot(client.e_prime, state.s, params)
    return poly_add(poly_sub(lhs, rhs, params), client.e_dprime, params)


def decaps_input(state: ServerState, ciphertext: Ciphertext, params: Params) -> Poly:
    """The server's ring element v' = u.s."""
    return dot(ciphertext.u, state.s, params)


def reliability_holds(omega: Poly, params: Params) -> bool:
    """Every block of the centred error lies in C * V(E8)."""
    blocks = split(centered(omega, params.q), params)
    return bool(np.all(in_voronoi_cell(blocks, params.C)))


def server_noise_matches(state: ServerState, params: Params) -> bool:
    """b - A.s equals the retained e, and e has coefficients in [-k, k]."""
    if state.e is None:
        raise ValueError("server state was not generated in debug mode")
    A = expand_matrix(state.seed, params)
    diff = (state.b - mat_vec_mul(A, state.s, params)) % params.q
    small = np.all(np.abs(centered(state.e, params.q)) <= params.k)
    return bool(np.array_equal(diff, state.e) and small)
