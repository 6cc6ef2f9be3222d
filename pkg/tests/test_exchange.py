import asyncio
import secrets

import pytest

from app.core.config import settings
from app.core.errors import ExchangeError
from app.services.codec import encode_msg1, encode_msg2
from app.services.exchange import frame, read_frame, run_client, serve_exchange, write_frame
from app.services.kem import encaps, gen

HOST = "127.0.0.1"


async def _start_server(params, entropy=secrets.token_bytes, **kwargs):
    ready = asyncio.get_running_loop().create_future()
    task = asyncio.create_task(
        serve_exchange(params, HOST, 0, entropy, on_ready=ready.set_result, **kwargs)
    )
    return task, await ready


def test_loopback_keys_agree(params):
    async def scenario():
        server, port = await _start_server(params)
        client = await run_client(params, HOST, port, secrets.token_bytes)
        return client, await server

    client, transcripts = asyncio.run(scenario())
    assert len(transcripts) == 1
    assert transcripts[0].key == client.key
    assert [len(f) for f in client.frames] == [params.msg1_bytes, params.msg2_bytes]
    assert transcripts[0].frames == client.frames


def test_frames_are_the_encoded_messages(params):
    server_entropy = bytes(range(64))
    client_entropy = bytes(range(7, 39))

    async def scenario():
        server, port = await _start_server(params, entropy=lambda size: server_entropy[:size])
        client = await run_client(params, HOST, port, lambda size: client_entropy[:size])
        return client, await server

    client, transcripts = asyncio.run(scenario())
    public, state = gen(server_entropy, params)
    expected = encaps(public, client_entropy, params)
    assert client.frames[0] == encode_msg1(public, params)
    assert client.frames[1] == encode_msg2(expected.ciphertext, params)
    assert transcripts[0].frames == client.frames
    assert client.key == transcripts[0].key == expected.key


def test_on_key_callback(params):
    seen = []

    async def scenario():
        server, port = await _start_server(params, on_key=seen.append)
        await run_client(params, HOST, port, secrets.token_bytes)
        return await server

    transcripts = asyncio.run(scenario())
    assert seen == transcripts


def test_malformed_reply_is_dropped(params):
    async def scenario():
        server, port = await _start_server(params)
        reader, writer = await asyncio.open_connection(HOST, port)
        await read_frame(reader)
        await write_frame(writer, b"junk")
        writer.close()
        return await server

    assert asyncio.run(scenario()) == []


def test_frame_limits(monkeypatch):
    monkeypatch.setattr(settings, "MAX_FRAME_BYTES", 16)

    async def feed(data):
        reader = asyncio.StreamReader()
        reader.feed_data(data)
        reader.feed_eof()
        return await read_frame(reader)

    assert asyncio.run(feed(frame(b"hello"))) == b"hello"
    with pytest.raises(ExchangeError, match="exceeds"):
        asyncio.run(feed(frame(bytes(17))))
    with pytest.raises(ExchangeError, match="mid-frame"):
        asyncio.run(feed(frame(b"hello")[:6]))


def test_connect_failure(params):
    with pytest.raises(ExchangeError, match="cannot connect"):
        asyncio.run(run_client(params, HOST, 1, secrets.token_bytes))
