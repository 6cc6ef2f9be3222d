"""
Stateless KEM router: keygen, encaps and decaps over hex payloads.
Nothing is stored server side; the caller keeps the secret key.
"""

import secrets
from typing import Optional

from fastapi import APIRouter, HTTPException

from app.core.errors import E8KemError
from app.core.params import get_preset
from app.schemas.kem import (
    DecapsRequest, DecapsResponse, EncapsRequest, EncapsResponse,
    KeygenRequest, KeygenResponse,
)
from app.services import codec
from app.services.kem import CLIENT_ENTROPY_BYTES, SERVER_ENTROPY_BYTES, decaps, encaps, gen
from app.utils.response import success_response

router = APIRouter(prefix="/api/kem", tags=["KEM"])


def _hex(value: str, field: str) -> bytes:
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"{field} is not valid hex")


def _entropy(value: Optional[str], size: int) -> bytes:
    if value is None:
        return secrets.token_bytes(size)
    raw = _hex(value, "entropy_hex")
    if len(raw) != size:
        raise HTTPException(status_code=400, detail=f"entropy_hex must be {size} bytes")
    return raw


@router.post("/keygen")
async def keygen(body: KeygenRequest):
    try:
        params = get_preset(body.preset)
        public, state = gen(_entropy(body.entropy_hex, SERVER_ENTROPY_BYTES), params)
        data = KeygenResponse(
            public_hex=codec.encode_msg1(public, params).hex(),
            secret_hex=codec.encode_secret(state, params).hex(),
        )
    except E8KemError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return success_response(data=data, message="Key pair generated")


@router.post("/encaps")
async def encapsulate(body: EncapsRequest):
    try:
        params = get_preset(body.preset)
        public = codec.decode_msg1(_hex(body.public_hex, "public_hex"), params)
        client = encaps(public, _entropy(body.entropy_hex, CLIENT_ENTROPY_BYTES), params)
        data = EncapsResponse(
            ciphertext_hex=codec.encode_msg2(client.ciphertext, params).hex(),
            key_hex=client.key.hex(),
        )
    except E8KemError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return success_response(data=data, message="Key encapsulated")


@router.post("/decaps")
async def decapsulate(body: DecapsRequest):
    try:
        params = get_preset(body.preset)
        state = codec.decode_secret(_hex(body.secret_hex, "secret_hex"), params)
        ciphertext = codec.decode_msg2(_hex(body.ciphertext_hex, "ciphertext_hex"), params)
        data = DecapsResponse(key_hex=decaps(state, ciphertext, params).hex())
    except E8KemError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return success_response(data=data, message="Key recovered")
