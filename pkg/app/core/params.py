"""
Parameter sets: validated (q, k, p) constructor plus the named presets.

Ring degree, module rank and the block split are fixed: n = 256, d = 3,
L = 32 blocks of n0 = 8 coefficients.
"""

from typing import Dict, List

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from app.core.errors import ParamsError


def check_constraints(q: int, k: int, p: int) -> None:
    if q < 4 or q & (q - 1):
        raise ParamsError(f"q={q} is not a power of two")
    if p < 2:
        raise ParamsError(f"p={p} must be at least 2")
    if q % (1 << (p + 1)):
        raise ParamsError(f"2^(p+1)={1 << (p + 1)} does not divide q={q}")
    if k < 1:
        raise ParamsError(f"k={k} must be at least 1")


class Params(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: int
    k: int
    p: int
    n: int = 256
    d: int = 3
    L: int = 32
    n0: int = 8

    @model_validator(mode="after")
    def _validate(self):
        check_constraints(self.q, self.k, self.p)
        if self.n != self.L * self.n0 or self.n0 != 8:
            raise ParamsError(f"n={self.n} must equal L*n0 with n0=8")
        return self

    # ---- Derived constants ----
    @property
    def name(self) -> str:
        return f"e8kem-{self.q}-p{self.p}"

    @property
    def log_q(self) -> int:
        return self.q.bit_length() - 1

    @property
    def s1(self) -> int:
        return self.q >> self.p

    @property
    def s2(self) -> int:
        return self.q // 2

    @property
    def C(self) -> int:
        # (q/2)(1 - 2^-(p-1)), integral since 2^(p+1) | q
        return self.s2 - (self.s2 >> (self.p - 1))

    @property
    def key_rate(self) -> int:
        return 1

    @property
    def rec_rate(self) -> int:
        return self.p - 1

    # ---- Wire sizes (bytes) ----
    @property
    def poly_bytes(self) -> int:
        return self.n * self.log_q // 8

    @property
    def hint_bytes(self) -> int:
        return self.n * self.rec_rate // 8

    @property
    def msg1_bytes(self) -> int:
        return 32 + self.d * self.poly_bytes

    @property
    def msg2_bytes(self) -> int:
        return self.d * self.poly_bytes + self.hint_bytes

    @property
    def secret_bytes(self) -> int:
        return self.d * self.poly_bytes + self.msg1_bytes

    def summary(self) -> dict:
        return {
            "name": self.name,
            "q": self.q, "k": self.k, "p": self.p,
            "n": self.n, "d": self.d, "L": self.L, "n0": self.n0,
            "s1": self.s1, "s2": self.s2, "C": self.C,
            "key_rate": self.key_rate, "rec_rate": self.rec_rate,
            "msg1_bytes": self.msg1_bytes, "msg2_bytes": self.msg2_bytes,
            "secret_bytes": self.secret_bytes,
        }


def make_params(q: int, k: int, p: int) -> Params:
    try:
        return Params(q=q, k=k, p=p)
    except ValidationError as exc:
        err = exc.errors()[0]
        cause = err.get("ctx", {}).get("error")
        raise ParamsError(str(cause) if cause else err["msg"]) from None


# ---- Presets: one per (q, k, p) cell of the failure table ----
PRESET_ROWS = ((2048, 2), (4096, 4), (8192, 4))
PRESET_DEPTHS = (2, 3, 4, 5)

PRESETS: Dict[str, Params] = {}
for _q, _k in PRESET_ROWS:
    for _p in PRESET_DEPTHS:
        _params = make_params(_q, _k, _p)
        PRESETS[_params.name] = _params

DEFAULT_PRESET = "e8kem-2048-p5"


def get_preset(name: str) -> Params:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(PRESETS)
        raise ParamsError(f"unknown preset {name!r} (known: {known})") from None


def preset_names() -> List[str]:
    return list(PRESETS)
