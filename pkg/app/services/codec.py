"""
Wire and file formats.

Bit packing is little-endian: values are written least-significant bit
first into a continuous bit stream, and the stream fills each byte from
bit 0 up.

    msg1   = seed (32) || pack(b)
    msg2   = pack(u) || pack_hint(r)
    secret = pack(s) || msg1
    file   = b"E8K1" || payload
    KAT    = blank-line separated records of name=hex lines
"""

from dataclasses import dataclass, fields
from typing import Iterable, List, Tuple

import numpy as np

from app.core.errors import CodecError
from app.core.params import Params
from app.services.kem import Ciphertext, PublicKey, ServerState
from app.services.reconcile import check_hint
from app.services.ring import Poly, PolyVec
from app.services.sampler import SEED_BYTES

FILE_MAGIC = b"E8K1"


# ---- Bit packing ----
def pack_bits(values: np.ndarray, width: int) -> bytes:
    v = np.asarray(values, dtype=np.int64).reshape(-1)
    bits = ((v[:, None] >> np.arange(width)) & 1).astype(np.uint8)
    return np.packbits(bits.reshape(-1), bitorder="little").tobytes()


def unpack_bits(data: bytes, width: int, count: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    chunks = bits[: count * width].reshape(count, width).astype(np.int64)
    return chunks @ np.left_shift(1, np.arange(width, dtype=np.int64))


def _expect_len(data: bytes, size: int, what: str) -> None:
    if len(data) != size:
        raise CodecError(f"{what}: expected {size} bytes, got {len(data)}")


def pack_poly(a: Poly, params: Params) -> bytes:
    return pack_bits(a, params.log_q)


def unpack_poly(data: bytes, params: Params) -> Poly:
    _expect_len(data, params.poly_bytes, "polynomial")
    return unpack_bits(data, params.log_q, params.n)


def pack_polyvec(x: PolyVec, params: Params) -> bytes:
    return b"".join(pack_poly(xi, params) for xi in x)


def unpack_polyvec(data: bytes, params: Params) -> PolyVec:
    size = params.poly_bytes
    _expect_len(data, params.d * size, "polynomial vector")
    return np.stack([unpack_poly(data[i * size:(i + 1) * size], params) for i in range(params.d)])


def pack_hint(hint, params: Params) -> bytes:
    r = check_hint(hint, params)
    return pack_bits(r, params.rec_rate)


def unpack_hint(data: bytes, params: Params) -> np.ndarray:
    _expect_len(data, params.hint_bytes, "hint")
    return unpack_bits(data, params.rec_rate, params.n).reshape(params.L, params.n0)


# ---- Messages ----
def encode_msg1(public: PublicKey, params: Params) -> bytes:
    return public.seed + pack_polyvec(public.b, params)


def decode_msg1(data: bytes, params: Params) -> PublicKey:
    _expect_len(data, params.msg1_bytes, "msg1")
    return PublicKey(seed=bytes(data[:SEED_BYTES]), b=unpack_polyvec(data[SEED_BYTES:], params))


def encode_msg2(ciphertext: Ciphertext, params: Params) -> bytes:
    return pack_polyvec(ciphertext.u, params) + pack_hint(ciphertext.hint, params)


def decode_msg2(data: bytes, params: Params) -> Ciphertext:
    _expect_len(data, params.msg2_bytes, "msg2")
    cut = params.d * params.poly_bytes
    return Ciphertext(u=unpack_polyvec(data[:cut], params), hint=unpack_hint(data[cut:], params))


def encode_secret(state: ServerState, params: Params) -> bytes:
    return pack_polyvec(state.s, params) + encode_msg1(state.public, params)


def decode_secret(data: bytes, params: Params) -> ServerState:
    _expect_len(data, params.secret_bytes, "secret key")
    cut = params.d * params.poly_bytes
    public = decode_msg1(data[cut:], params)
    return ServerState(params=params, seed=public.seed, s=unpack_polyvec(data[:cut], params), b=public.b)


# ---- Files ----
def with_magic(payload: bytes) -> bytes:
    return FILE_MAGIC + payload


def strip_magic(blob: bytes) -> bytes:
    if blob[:4] != FILE_MAGIC:
        raise CodecError("missing E8K1 file header")
    return blob[4:]


# ---- Known-answer records ----
@dataclass(frozen=True)
class KatRecord:
    seed: bytes
    pk: bytes
    sk: bytes
    msg2: bytes
    key: bytes


KAT_FIELDS: Tuple[str, ...] = tuple(f.name for f in fields(KatRecord))


def kat_write(records: Iterable[KatRecord]) -> str:
    blocks = []
    for record in records:
        lines = [f"{name}={getattr(record, name).hex()}" for name in KAT_FIELDS]
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def kat_read(text: str) -> List[KatRecord]:
    records: List[KatRecord] = []
    current: dict = {}

    def flush(lineno: int) -> None:
        if not current:
            return
        missing = [name for name in KAT_FIELDS if name not in current]
        if missing:
            raise CodecError(f"line {lineno}: record missing {', '.join(missing)}")
        records.append(KatRecord(**current))
        current.clear()

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush(lineno)
            continue
        name, sep, value = line.partition("=")
        if not sep:
            raise CodecError(f"line {lineno}: expected name=hex")
        name = name.strip()
        if name not in KAT_FIELDS:
            raise CodecError(f"line {lineno}: unknown key {name!r}")
        if name in current:
            raise CodecError(f"line {lineno}: duplicate key {name!r}")
        value = value.strip()
        if value != value.lower():
            raise CodecError(f"line {lineno}: hex must be lowercase")
        try:
            current[name] = bytes.fromhex(value)
        except ValueError:
            raise CodecError(f"line {lineno}: invalid hex for {name!r}") from None
    flush(len(lines) + 1)
    return records
