"""
Loopback demo of the exchange over TCP.

Frames are a 4-byte big-endian length followed by the payload; the server
sends msg1, the client answers with msg2, and both sides derive the key.
One connection is served at a time.
"""

import asyncio
import logging
import struct
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from app.core.config import settings
from app.core.errors import E8KemError, ExchangeError
from app.core.params import Params
from app.services.codec import decode_msg1, decode_msg2, encode_msg1, encode_msg2
from app.services.kem import decaps, encaps, gen

logger = logging.getLogger(__name__)

_HEADER = struct.Struct(">I")

EntropySource = Callable[[int], bytes]


@dataclass
class Transcript:
    frames: List[bytes] = field(default_factory=list)
    key: Optional[bytes] = None


def frame(payload: bytes) -> bytes:
    return _HEADER.pack(len(payload)) + payload


async def read_frame(reader: asyncio.StreamReader) -> bytes:
    try:
        header = await asyncio.wait_for(reader.readexactly(_HEADER.size), settings.EXCHANGE_TIMEOUT)
        (size,) = _HEADER.unpack(header)
        if size > settings.MAX_FRAME_BYTES:
            raise ExchangeError(f"frame of {size} bytes exceeds limit {settings.MAX_FRAME_BYTES}")
        return await asyncio.wait_for(reader.readexactly(size), settings.EXCHANGE_TIMEOUT)
    except asyncio.IncompleteReadError:
        raise ExchangeError("connection closed mid-frame") from None
    except asyncio.TimeoutError:
        raise ExchangeError("timed out waiting for peer") from None


async def write_frame(writer: asyncio.StreamWriter, payload: bytes) -> None:
    writer.write(frame(payload))
    await writer.drain()


async def _serve_one(reader, writer, params: Params, entropy: EntropySource) -> Transcript:
    transcript = Transcript()
    public, state = gen(entropy(64), params)
    msg1 = encode_msg1(public, params)
    transcript.frames.append(msg1)
    await write_frame(writer, msg1)
    msg2 = await read_frame(reader)
    transcript.frames.append(msg2)
    transcript.key = decaps(state, decode_msg2(msg2, params), params)
    return transcript


async def serve_exchange(params: Params, host: str, port: int, entropy: EntropySource,
                         once: bool = True, on_ready: Optional[Callable[[int], None]] = None,
                         on_key: Optional[Callable[[Transcript], None]] = None) -> List[Transcript]:
    """Accept connections one at a time; with once=True stop after the first."""
    lock = asyncio.Lock()
    done = asyncio.Event()
    transcripts: List[Transcript] = []

    async def handle(reader, writer):
        async with lock:
            try:
                transcript = await _serve_one(reader, writer, params, entropy)
                transcripts.append(transcript)
                if on_key:
                    on_key(transcript)
            except E8KemError as exc:
                logger.warning("exchange failed: %s", exc)
            finally:
                writer.close()
                if once:
                    done.set()

    server = await asyncio.start_server(handle, host, port)
    bound = server.sockets[0].getsockname()
    logger.info("listening on %s:%d", bound[0], bound[1])
    if on_ready is not None:
        on_ready(bound[1])
    async with server:
        if once:
            await done.wait()
        else:
            await server.serve_forever()
    return transcripts


async def run_client(params: Params, host: str, port: int, entropy: EntropySource) -> Transcript:
    try:
        reader, writer = await asyncio.wait_for(asyncio.open_connection(host, port), settings.EXCHANGE_TIMEOUT)
    except (OSError, asyncio.TimeoutError) as exc:
        raise ExchangeError(f"cannot connect to {host}:{port}: {exc}") from None
    transcript = Transcript()
    try:
        msg1 = await read_frame(reader)
        transcript.frames.append(msg1)
        client = encaps(decode_msg1(msg1, params), entropy(32), params)
        msg2 = encode_msg2(client.ciphertext, params)
        transcript.frames.append(msg2)
        await write_frame(writer, msg2)
        transcript.key = client.key
    finally:
        writer.close()
    return transcript
