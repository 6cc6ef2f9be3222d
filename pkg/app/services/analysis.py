"""
Decryption-failure bound.

For a relevant vector v (scaled by C) the failure event in one block is

    sum of m block terms  >  |Cv|^2 / 2 - <e'', Cv>

where each block term is <sigma, e * v> for independent 8-vectors sigma, e
of psi_k coefficients and * is multiplication modulo Y^8 + 1. Values are
kept on an integer grid in units of C/4: a block term t contributes 4t,
and the thresholds are 4C - 8k (|v|_1 = 2) and 4C - 16k (|v|_1 = 4).

The bound is L * sum over relevant vectors of P(event). Relevant vectors
are grouped into orbits of the maps v -> +-Y^j v and v(Y) -> v(Y^a), a odd,
which leave the block-term law unchanged; one distribution is computed per
orbit.

Block-term law: given sigma, the term is sum_i c_i e_i with c = M_v sigma,
so it only depends on the multiset {|c_i|}. sigma is enumerated in numpy
chunks, multisets are aggregated, and the conditional laws are combined on
a prefix tree of the sorted multisets.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.errors import AnalysisBudgetError
from app.core.params import PRESET_DEPTHS, PRESET_ROWS, Params, make_params
from app.services.e8 import all_relevant

logger = logging.getLogger(__name__)

Probability = Union[float, Fraction]


# ---- Distributions ----
@dataclass(frozen=True, eq=False)
class DyadicDist:
    """Law on the grid offset + step * i.

    Float mode: probs are float64 probabilities. Exact mode: probs is an
    object array of non-negative ints and P = probs[i] / 2**log2_den.
    """

    offset: int
    step: int
    probs: np.ndarray
    exact: bool = False
    log2_den: int = 0

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def support(self) -> Tuple[int, int]:
        return self.offset, self.offset + self.step * (len(self.probs) - 1)

    def values(self) -> np.ndarray:
        return self.offset + self.step * np.arange(len(self.probs), dtype=np.int64)

    def pmf(self) -> Dict[int, Probability]:
        out = {}
        for x, p in zip(self.values().tolist(), self.probs.tolist()):
            if p:
                out[x] = Fraction(p, 1 << self.log2_den) if self.exact else p
        return out

    def total(self) -> Probability:
        if self.exact:
            return Fraction(sum(self.probs.tolist()), 1 << self.log2_den)
        return math.fsum(self.probs.tolist())

    def mean(self) -> Probability:
        xs = self.values().tolist()
        if self.exact:
            num = sum(x * p for x, p in zip(xs, self.probs.tolist()))
            return Fraction(num, 1 << self.log2_den)
        return math.fsum(x * p for x, p in zip(xs, self.probs.tolist()))

    def variance(self) -> Probability:
        xs = self.values().tolist()
        mu = self.mean()
        if self.exact:
            num = sum(x * x * p for x, p in zip(xs, self.probs.tolist()))
            return Fraction(num, 1 << self.log2_den) - mu * mu
        return math.fsum(x * x * p for x, p in zip(xs, self.probs.tolist())) - mu * mu

    def is_symmetric(self) -> bool:
        lo, hi = self.support
        if lo != -hi:
            return False
        probs = self.probs.tolist()
        return probs == probs[::-1]

    def to_float(self) -> "DyadicDist":
        if not self.exact:
            return self
        # int / int true division rounds correctly even past the float range
        den = 1 << self.log2_den
        probs = np.array([p / den for p in self.probs.tolist()], dtype=np.float64)
        return DyadicDist(self.offset, self.step, probs)


def _trim(dist: DyadicDist, floor: float = 0.0) -> DyadicDist:
    if dist.exact:
        keep = np.flatnonzero(np.array([p != 0 for p in dist.probs.tolist()], dtype=bool))
    else:
        keep = np.flatnonzero(dist.probs > floor)
    if keep.size == 0 or (keep[0] == 0 and keep[-1] == len(dist.probs) - 1):
        return dist
    lo, hi = int(keep[0]), int(keep[-1]) + 1
    return DyadicDist(dist.offset + lo * dist.step, dist.step, dist.probs[lo:hi],
                      dist.exact, dist.log2_den)


def _int_convolve(a: List[int], b: List[int]) -> List[int]:
    """Exact convolution of non-negative int sequences via one big-int product."""
    slot_bits = max(a).bit_length() + max(b).bit_length() + min(len(a), len(b)).bit_length() + 1
    width = (slot_bits + 7) // 8
    pa = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in a), "little")
    pb = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in b), "little")
    size = len(a) + len(b) - 1
    raw = (pa * pb).to_bytes(width * size, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(size)]


def convolve(a: DyadicDist, b: DyadicDist) -> DyadicDist:
    if a.step != b.step or a.exact != b.exact:
        raise ValueError("distributions must share step and mode")
    size = len(a) + len(b) - 1
    if size > settings.ANALYSIS_SUPPORT_CAP:
        raise AnalysisBudgetError(f"support of {size} entries exceeds cap {settings.ANALYSIS_SUPPORT_CAP}")
    offset = a.offset + b.offset
    if a.exact:
        probs = np.array(_int_convolve(a.probs.tolist(), b.probs.tolist()), dtype=object)
        return DyadicDist(offset, a.step, probs, True, a.log2_den + b.log2_den)
    # direct summation keeps small tail entries relatively accurate
    probs = np.convolve(a.probs, b.probs)
    return _trim(DyadicDist(offset, a.step, probs), settings.ANALYSIS_FLOAT_FLOOR)


def convolve_power(dist: DyadicDist, m: int) -> DyadicDist:
    if m < 1:
        raise ValueError("m must be at least 1")
    result: Optional[DyadicDist] = None
    base = dist
    while m:
        if m & 1:
            result = base if result is None else convolve(result, base)
        m >>= 1
        if m:
            base = convolve(base, base)
    return result


def tail_prob(dist: DyadicDist, threshold: int) -> Probability:
    """P(Z > threshold), strict."""
    first = (threshold - dist.offset) // dist.step + 1
    first = min(max(first, 0), len(dist.probs))
    tail = dist.probs[first:]
    if dist.exact:
        return Fraction(sum(tail.tolist()), 1 << dist.log2_den)
    return math.fsum(np.sort(tail).tolist())


def log2_prob(p: Probability) -> float:
    if p == 0:
        return float("-inf")
    if isinstance(p, Fraction):
        return math.log2(p.numerator) - math.log2(p.denominator)
    return math.log2(p)


# ---- Relevant-vector classes ----
@dataclass(frozen=True)
class VoronoiTypeSpec:
    type_tag: int
    representative: Tuple[int, ...]  # half-units
    threshold: int                   # grid units of C/4
    multiplicity: int


def _times_y(v: Tuple[int, ...]) -> Tuple[int, ...]:
    return (-v[7],) + v[:7]


def _galois(v: Tuple[int, ...], a: int) -> Tuple[int, ...]:
    out = [0] * 8
    for i, x in enumerate(v):
        m = (a * i) % 16
        if m < 8:
            out[m] += x
        else:
            out[m - 8] -= x
    return tuple(out)


def _orbit(v: Tuple[int, ...]) -> set:
    seen = {v}
    frontier = [v]
    while frontier:
        w = frontier.pop()
        for image in (_times_y(w), _galois(w, 3), _galois(w, 5), _galois(w, 15)):
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return seen


@lru_cache(maxsize=None)
def relevant_orbits() -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """Partition of the 240 relevant vectors into symmetry orbits (half-units)."""
    remaining = {tuple(int(x) for x in v) for v in all_relevant()}
    classes = []
    while remaining:
        seed = max(remaining)
        members = _orbit(seed) & remaining
        remaining -= members
        classes.append(tuple(sorted(members, reverse=True)))
    return tuple(classes)


def type_tag(half_vector: Tuple[int, ...]) -> int:
    return 1 if max(abs(x) for x in half_vector) == 2 else 2


def threshold_for(tag: int, params: Params) -> int:
    threshold = 4 * params.C - 8 * tag * params.k
    if threshold <= 0:
        raise ValueError(f"non-positive threshold for type {tag} at {params.name}")
    return threshold


def voronoi_classes(params: Params, union: str = "types") -> List[VoronoiTypeSpec]:
    if union == "types":
        return [
            VoronoiTypeSpec(1, (2, 2, 0, 0, 0, 0, 0, 0), threshold_for(1, params), 112),
            VoronoiTypeSpec(2, (1,) * 8, threshold_for(2, params), 128),
        ]
    if union != "classes":
        raise ValueError(f"unknown union mode {union!r}")
    specs = []
    for members in relevant_orbits():
        rep = members[0]
        tag = type_tag(rep)
        specs.append(VoronoiTypeSpec(tag, rep, threshold_for(tag, params), len(members)))
    return sorted(specs, key=lambda s: (s.type_tag, -s.multiplicity, s.representative))


# ---- Block-term law ----
def negacyclic_matrix(w) -> np.ndarray:
    """Row i holds the coefficients of Y^i * w modulo Y^8 + 1."""
    rows = [tuple(int(x) for x in w)]
    for _ in range(7):
        rows.append(_times_y(rows[-1]))
    return np.array(rows, dtype=np.int64)


def _integer_form(representative: Tuple[int, ...]) -> Tuple[np.ndarray, int]:
    """(w, grid step): block term t = <sigma, e*w> * 2g / 4 with w = half / g."""
    half = np.array(representative, dtype=np.int64)
    g = int(np.gcd.reduce(np.abs(half[half != 0])))
    return half // g, 2 * g


def _psi_weights(k: int) -> np.ndarray:
    return np.array([math.comb(2 * k, k + j) for j in range(-k, k + 1)], dtype=np.int64)


def _multiset_weights(matrix: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted-descending |M sigma| multisets (K, 8) and their weights over 4^(8k)."""
    width = 2 * k + 1
    if width ** 8 > settings.ANALYSIS_ENUM_BUDGET:
        raise AnalysisBudgetError(f"k={k} needs {width ** 8} sigma vectors, budget {settings.ANALYSIS_ENUM_BUDGET}")
    psi = _psi_weights(k)
    values = np.arange(-k, k + 1, dtype=np.int64)
    tail = np.array(list(product(range(width), repeat=6)), dtype=np.int64)
    tail_sigma = values[tail]
    tail_weight = np.prod(psi[tail], axis=1)
    base = int(np.abs(matrix).sum(axis=1).max()) * k + 1
    powers = base ** np.arange(7, -1, -1, dtype=np.int64)

    keys = np.empty(0, dtype=np.int64)
    weights = np.empty(0, dtype=np.uint64)
    for i0, i1 in product(range(width), repeat=2):
        head = np.broadcast_to(values[[i0, i1]], (len(tail), 2))
        sigma = np.hstack([head, tail_sigma])
        mags = -np.sort(-np.abs(sigma @ matrix.T), axis=1)
        chunk_keys, chunk_weights = _reduce_keys(mags @ powers, tail_weight * (psi[i0] * psi[i1]))
        keys, weights = _reduce_keys(
            np.concatenate([keys, chunk_keys]),
            np.concatenate([weights, chunk_weights.astype(np.uint64)]),
        )
    digits = (keys[:, None] // powers) % base
    return digits, weights


def _reduce_keys(keys: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sort by key and sum the weights of equal keys."""
    order = np.argsort(keys, kind="stable")
    keys, weights = keys[order], weights[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    return keys[starts], np.add.reduceat(weights, starts)


def _spread(dist: np.ndarray, a: int, coeffs: list) -> np.ndarray:
    """Convolve a centred array with the law of a * e, e ~ psi_k."""
    k = (len(coeffs) - 1) // 2
    out = np.zeros(len(dist) + 2 * k * a, dtype=dist.dtype)
    for j, c in enumerate(coeffs):
        out[a * j: a * j + len(dist)] += c * dist
    return out


def _add_centred(acc: np.ndarray, arr: np.ndarray) -> np.ndarray:
    if len(arr) > len(acc):
        acc, arr = arr, acc
    pad = (len(acc) - len(arr)) // 2
    acc[pad: pad + len(arr)] += arr
    return acc


def _mixture(digits: np.ndarray, weights: list, coeffs: list, dtype) -> np.ndarray:
    """sum over rows of weight * prod_l law(digit_l * e), on the prefix tree of rows."""

    def node(level: int, lo: int, hi: int) -> np.ndarray:
        if level == digits.shape[1]:
            return np.array([weights[lo]], dtype=dtype)
        col = digits[lo:hi, level]
        cuts = (np.flatnonzero(col[1:] != col[:-1]) + 1 + lo).tolist()
        bounds = [lo] + cuts + [hi]
        acc = None
        for start, stop in zip(bounds[:-1], bounds[1:]):
            child = node(level + 1, start, stop)
            contrib = _spread(child, int(digits[start, level]), coeffs)
            acc = contrib if acc is None else _add_centred(acc, contrib)
        return acc

    return node(0, 0, len(digits))


@lru_cache(maxsize=64)
def _block_term_cached(k: int, representative: Tuple[int, ...], exact: bool) -> DyadicDist:
    w, step = _integer_form(representative)
    digits, weights = _multiset_weights(negacyclic_matrix(w), k)
    psi = _psi_weights(k).tolist()
    if exact:
        probs = _mixture(digits, weights.tolist(), psi, object)
        dist = DyadicDist(0, step, probs, True, 32 * k)
    else:
        scale = 2.0 ** (-16 * k)
        coeffs = [c / 4 ** k for c in psi]
        probs = _mixture(digits, (weights.astype(np.float64) * scale).tolist(), coeffs, np.float64)
        dist = DyadicDist(0, step, probs)
    radius = (len(dist.probs) - 1) // 2
    dist = DyadicDist(-radius * step, step, dist.probs, dist.exact, dist.log2_den)
    logger.debug("block term k=%d rep=%s: %d multisets", k, representative, len(digits))
    return _trim(dist)


def block_term_dist(spec: VoronoiTypeSpec, params: Params, mode: Optional[str] = None) -> DyadicDist:
    mode = mode or settings.ANALYSIS_MODE
    return _block_term_cached(params.k, tuple(spec.representative), mode == "exact")


def brute_force_block_term(spec: VoronoiTypeSpec, k: int) -> DyadicDist:
    """Exact law by enumerating every (sigma, e) pair; a reference oracle for small k."""
    width = 2 * k + 1
    if width ** 16 > settings.ANALYSIS_ENUM_BUDGET:
        raise AnalysisBudgetError(f"brute force over {width ** 16} pairs exceeds budget")
    w, step = _integer_form(tuple(spec.representative))
    matrix = negacyclic_matrix(w)
    psi = _psi_weights(k)
    values = np.arange(-k, k + 1, dtype=np.int64)
    idx = np.array(list(product(range(width), repeat=8)), dtype=np.int64)
    vecs = values[idx]
    vec_w = np.prod(psi[idx], axis=1).astype(np.float64)
    radius = int(np.abs(matrix).sum()) * k * k
    counts = np.zeros(2 * radius + 1, dtype=np.float64)
    for lo in range(0, len(vecs), 729):
        sigma = vecs[lo:lo + 729]
        terms = (sigma @ matrix.T) @ vecs.T
        weights = vec_w[lo:lo + 729, None] * vec_w[None, :]
        counts += np.bincount((terms + radius).ravel(), weights=weights.ravel(), minlength=len(counts))
    probs = np.array([int(c) for c in np.rint(counts)], dtype=object)
    return _trim(DyadicDist(-radius * step, step, probs, True, 32 * k))


# ---- Union bound ----
def default_blocks(params: Params) -> int:
    return 2 * params.L * params.d


@lru_cache(maxsize=64)
def _sum_cached(k: int, representative: Tuple[int, ...], m: int, exact: bool) -> DyadicDist:
    return convolve_power(_block_term_cached(k, representative, exact), m)


def summed_dist(spec: VoronoiTypeSpec, params: Params, m: int, mode: Optional[str] = None) -> DyadicDist:
    mode = mode or settings.ANALYSIS_MODE
    return _sum_cached(params.k, tuple(spec.representative), m, mode == "exact")


def pe_breakdown(params: Params, mode: Optional[str] = None, blocks: Optional[int] = None,
                 union: str = "types") -> List[Tuple[VoronoiTypeSpec, Probability]]:
    m = blocks or default_blocks(params)
    out = []
    for spec in voronoi_classes(params, union):
        p = tail_prob(summed_dist(spec, params, m, mode), spec.threshold)
        out.append((spec, p))
    return out


def pe_bound(params: Params, mode: Optional[str] = None, blocks: Optional[int] = None,
             union: str = "types") -> float:
    """log2 of L * sum(multiplicity * P) over the relevant-vector classes."""
    total: Probability = 0
    for spec, p in pe_breakdown(params, mode, blocks, union):
        total += spec.multiplicity * p
    return log2_prob(params.L * total)


def pe_table(mode: Optional[str] = None, union: str = "types") -> List[dict]:
    rows = []
    for q, k in PRESET_ROWS:
        for p in PRESET_DEPTHS:
            params = make_params(q, k, p)
            value = pe_bound(params, mode, union=union)
            logger.info("q=%d k=%d p=%d log2pe=%.2f", q, k, p, value)
            rows.append({"q": q, "k": k, "p": p, "log2pe": value})
    return rows
