"""
HelpRec / Rec over the nested lattices

    Lambda3 = qZ^8  <=  Lambda2 = (q/2) E8  <=  Lambda1 = (q/2^p) E8

applied blockwise to the 32 split blocks of a ring element. The key is
one key_label byte per block, in block order; the hint is a (32, 8) array
of hint labels.
"""

import numpy as np

from app.core.errors import HintError
from app.core.params import Params
from app.services.e8 import hint_label, hint_lift, key_label, key_lift, quantize_scaled
from app.services.ring import Poly, interleave, split

KEY_BYTES = 32


def check_hint(hint, params: Params) -> np.ndarray:
    r = np.asarray(hint, dtype=np.int64)
    if r.shape != (params.L, params.n0):
        raise HintError(f"hint must have shape ({params.L}, {params.n0}), got {r.shape}")
    if np.any(r < 0) or np.any(r >= 1 << (params.p - 1)):
        raise HintError(f"hint labels must lie in [0, {1 << (params.p - 1)})")
    return r


def _key_bytes(key: bytes, params: Params) -> np.ndarray:
    if len(key) != params.L:
        raise HintError(f"key must be {params.L} bytes, got {len(key)}")
    return np.frombuffer(key, dtype=np.uint8).astype(np.int64)


def help_rec(v: Poly, params: Params) -> np.ndarray:
    blocks = split(v, params)
    return hint_label(quantize_scaled(blocks, params.s1), params)


def rec(v: Poly, hint, params: Params) -> bytes:
    r = check_hint(hint, params)
    blocks = split(v, params) - hint_lift(r, params)
    labels = key_label(quantize_scaled(blocks, params.s2), params)
    return labels.astype(np.uint8).tobytes()


def permute_pi(v: Poly, k: bytes, k2: bytes, params: Params) -> Poly:
    """(v - lift(k) + lift(k2)) mod qZ^8, blockwise."""
    shift = key_lift(_key_bytes(k2, params), params) - key_lift(_key_bytes(k, params), params)
    return np.mod(interleave(split(v, params) + shift, params), params.q)
