"""
Core-SVP cost of the primal and dual BKZ attacks on an LWE instance.

Model:
  delta(b)   = ((pi b)^(1/b) * b / (2 pi e))^(1/(2b - 2))
  svp(b)     = b * log2 sqrt(3/2)   classical
               b * log2 sqrt(13/9)  quantum
               b * log2 sqrt(4/3)   best plausible
  primal     D = n + m; succeeds when sigma sqrt(b) < delta^(2b - D - 1) q^(m/D);
             cost svp(b)
  dual       D = n + m; l = delta^D q^(n/D); tau = l sigma / q;
             log2 eps = -2 pi^2 tau^2 / ln 2;
             cost svp(b) + max(0, -2 log2 eps - b log2 sqrt(4/3))

Each cost model is minimised separately over b >= 50 and
max(1, b - n) <= m < max_m, scanning b upwards and m upwards with strict
improvement, so ties resolve to the smallest b and then the smallest m.
Reported figures are floored; (m, b) come from the classical run.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from app.core.errors import EstimatorError
from app.core.params import Params

logger = logging.getLogger(__name__)

B_MIN = 50

LOG2_SQRT_3_2 = math.log2(math.sqrt(1.5))
LOG2_SQRT_13_9 = math.log2(math.sqrt(13 / 9))
LOG2_SQRT_4_3 = math.log2(math.sqrt(4 / 3))


def svp_classical(b: int) -> float:
    return b * LOG2_SQRT_3_2


def svp_quantum(b: int) -> float:
    return b * LOG2_SQRT_13_9


def svp_plausible(b: int) -> float:
    return b * LOG2_SQRT_4_3


def nvec_sieve(b: int) -> float:
    return b * LOG2_SQRT_4_3


COST_MODELS: Dict[str, Callable[[int], float]] = {
    "classical": svp_classical,
    "quantum": svp_quantum,
    "plausible": svp_plausible,
}


def delta0(b: int) -> float:
    if b < B_MIN:
        raise ValueError(f"block size {b} below model validity ({B_MIN})")
    return ((math.pi * b) ** (1.0 / b) * b / (2 * math.pi * math.e)) ** (1.0 / (2.0 * b - 2.0))


@dataclass(frozen=True)
class LweInstance:
    name: str
    q: int
    sigma: float
    n: int
    max_m: int

    @classmethod
    def from_params(cls, params: Params) -> "LweInstance":
        n = params.n * params.d
        return cls(f"e8kem q={params.q}", params.q, math.sqrt(params.k / 2), n, n)


@dataclass(frozen=True)
class AttackCost:
    attack: str
    m: int
    b: int
    classical: int
    quantum: int
    plausible: int

    def row(self) -> str:
        title = self.attack.capitalize()
        return f"{title} & {self.m} & {self.b} & {self.classical} & {self.quantum} & {self.plausible}"


def _primal_costs(inst: LweInstance, b: int, ms: np.ndarray, svp: Callable[[int], float]) -> np.ndarray:
    dim = inst.n + ms
    delta = delta0(b)
    lhs = inst.sigma * math.sqrt(b)
    log_rhs = (2 * b - dim - 1) * math.log(delta) + ms / dim * math.log(inst.q)
    feasible = math.log(lhs) < log_rhs
    return np.where(feasible, svp(b), np.inf)


def _dual_costs(inst: LweInstance, b: int, ms: np.ndarray, svp: Callable[[int], float]) -> np.ndarray:
    dim = inst.n + ms
    delta = delta0(b)
    length = np.exp(dim * math.log(delta) + inst.n / dim * math.log(inst.q))
    tau = length * inst.sigma / inst.q
    log2_eps = -2 * math.pi ** 2 * tau ** 2 / math.log(2)
    log2_repeat = np.maximum(0.0, -2 * log2_eps - nvec_sieve(b))
    return svp(b) + log2_repeat


_ATTACKS = {"primal": _primal_costs, "dual": _dual_costs}


def optimize(inst: LweInstance, attack: str, svp: Callable[[int], float]) -> Tuple[int, int, float]:
    """(m, b, cost) minimising one cost model."""
    costs_at = _ATTACKS[attack]
    best: Optional[Tuple[int, int, float]] = None
    for b in range(B_MIN, inst.n + inst.max_m + 1):
        if best is not None and svp(b) > best[2]:
            break
        lo = max(1, b - inst.n)
        if lo >= inst.max_m:
            continue
        ms = np.arange(lo, inst.max_m, dtype=np.int64)
        costs = costs_at(inst, b, ms, svp)
        i = int(np.argmin(costs))
        if np.isfinite(costs[i]) and (best is None or costs[i] < best[2]):
            best = (int(ms[i]), b, float(costs[i]))
    if best is None:
        raise EstimatorError(f"no feasible {attack} attack for {inst.name}")
    return best


def attack_cost(inst: LweInstance, attack: str) -> AttackCost:
    figures = {}
    m = b = 0
    for model, svp in COST_MODELS.items():
        m_i, b_i, cost = optimize(inst, attack, svp)
        figures[model] = int(math.floor(cost))
        if model == "classical":
            m, b = m_i, b_i
    logger.info("%s %s: m=%d b=%d %s", inst.name, attack, m, b, figures)
    return AttackCost(attack=attack, m=m, b=b, **figures)


def primal_cost(params: Params, n_total: Optional[int] = None) -> AttackCost:
    inst = LweInstance.from_params(params)
    if n_total is not None:
        inst = LweInstance(inst.name, inst.q, inst.sigma, n_total, n_total)
    return attack_cost(inst, "primal")


def dual_cost(params: Params, n_total: Optional[int] = None) -> AttackCost:
    inst = LweInstance.from_params(params)
    if n_total is not None:
        inst = LweInstance(inst.name, inst.q, inst.sigma, n_total, n_total)
    return attack_cost(inst, "dual")


# ---- Comparison rows ----
def comparison_rows() -> List[LweInstance]:
    return [
        LweInstance("Saber-KEM", 8192, math.sqrt(8 / 2), 768, 768),
        LweInstance("Kyber768 Round 1", 7681, math.sqrt(4 / 2), 768, 768),
        LweInstance("Kyber768 Round 3", 3329, math.sqrt(2 / 2), 768, 768),
    ]


def security_report(params: Params) -> List[Tuple[str, AttackCost, AttackCost]]:
    """(name, primal, dual) for the preset followed by the comparison rows."""
    instances = [LweInstance.from_params(params)] + comparison_rows()
    return [(inst.name, attack_cost(inst, "primal"), attack_cost(inst, "dual")) for inst in instances]


def quantum_gain(ours: AttackCost, reference: AttackCost) -> float:
    """Relative quantum security improvement, e.g. 176 vs 164 -> 0.073."""
    return (ours.quantum - reference.quantum) / reference.quantum
