"""
Known-answer vectors: generation and replay of full exchanges.

A record's seed is the 64-byte server entropy followed by the 32-byte
client entropy; everything else is recomputed from it.
"""

import hashlib
import logging
from typing import List, Optional

from app.core.errors import EntropyError
from app.core.params import Params
from app.services.codec import KatRecord, encode_msg1, encode_msg2, encode_secret
from app.services.kem import CLIENT_ENTROPY_BYTES, SERVER_ENTROPY_BYTES, decaps, encaps, gen

logger = logging.getLogger(__name__)

RECORD_SEED_BYTES = SERVER_ENTROPY_BYTES + CLIENT_ENTROPY_BYTES


class KatKeyMismatch(AssertionError):
    """Server and client disagreed while building a record."""


def record_seed(master: bytes, index: int) -> bytes:
    return hashlib.shake_128(b"e8kem-kat" + master + index.to_bytes(4, "big")).digest(RECORD_SEED_BYTES)


def kat_replay(params: Params, seed: bytes) -> KatRecord:
    if len(seed) != RECORD_SEED_BYTES:
        raise EntropyError(f"KAT seed must be {RECORD_SEED_BYTES} bytes, got {len(seed)}")
    public, state = gen(seed[:SERVER_ENTROPY_BYTES], params)
    client = encaps(public, seed[SERVER_ENTROPY_BYTES:], params)
    server_key = decaps(state, client.ciphertext, params)
    if server_key != client.key:
        raise KatKeyMismatch(f"key mismatch for seed {seed.hex()[:16]}...")
    return KatRecord(
        seed=seed,
        pk=encode_msg1(public, params),
        sk=encode_secret(state, params),
        msg2=encode_msg2(client.ciphertext, params),
        key=client.key,
    )


def kat_generate(params: Params, count: int, master: Optional[bytes] = None) -> List[KatRecord]:
    master = master if master is not None else bytes(32)
    records = [kat_replay(params, record_seed(master, i)) for i in range(count)]
    logger.info("generated %d KAT records for %s", count, params.name)
    return records


def kat_mismatches(params: Params, records: List[KatRecord]) -> List[int]:
    """Indices of records that do not replay byte-identically."""
    bad = []
    for index, record in enumerate(records):
        try:
            replayed = kat_replay(params, record.seed)
        except KatKeyMismatch:
            bad.append(index)
            continue
        if replayed != record:
            bad.append(index)
    return bad
