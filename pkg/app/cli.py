"""
e8kem command line: key files, KAT vectors, the TCP demo and the two
numerical reports.

Exit codes: 0 success, 2 usage, 3 I/O or malformed input, 4 mismatch.
"""

import argparse
import asyncio
import hashlib
import logging
import secrets
import sys
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from app.core.config import settings
from app.core.errors import E8KemError, ParamsError
from app.core.logs import configure_logging
from app.core.params import PRESET_DEPTHS, PRESET_ROWS, Params, get_preset, make_params, preset_names
from app.services import analysis, codec, estimator, kat
from app.services.exchange import run_client, serve_exchange
from app.services.kem import decaps, encaps, gen

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_MISMATCH = 4


class UsageError(Exception):
    pass


# ---- Entropy ----
def entropy_source(args) -> Callable[[int], bytes]:
    seed_hex = settings.E8KEM_SEED
    if not args.insecure_deterministic:
        if seed_hex:
            raise UsageError("E8KEM_SEED is set but --insecure-deterministic was not given")
        return secrets.token_bytes
    if not seed_hex:
        raise UsageError("--insecure-deterministic needs E8KEM_SEED (hex)")
    try:
        seed = bytes.fromhex(seed_hex)
    except ValueError:
        raise UsageError("E8KEM_SEED is not valid hex") from None
    logger.warning("deterministic entropy in use; never do this outside demos")
    counter = [0]

    def draw(size: int) -> bytes:
        counter[0] += 1
        return hashlib.shake_128(seed + counter[0].to_bytes(4, "big")).digest(size)

    return draw


def parse_endpoint(text: str) -> Tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise UsageError(f"expected host:port, got {text!r}")
    return host or settings.EXCHANGE_HOST, int(port)


# ---- File helpers ----
def _read_payload(path: str) -> bytes:
    return codec.strip_magic(Path(path).read_bytes())


def _write_payload(path: str, payload: bytes) -> None:
    Path(path).write_bytes(codec.with_magic(payload))


def _write_key(path: Optional[str], key: bytes) -> None:
    print(key.hex())
    if path:
        Path(path).write_text(key.hex() + "\n")


# ---- Commands ----
def cmd_keygen(args, params: Params) -> int:
    public, state = gen(entropy_source(args)(64), params)
    _write_payload(args.out + ".pk", codec.encode_msg1(public, params))
    _write_payload(args.out + ".sk", codec.encode_secret(state, params))
    print(f"wrote {args.out}.pk and {args.out}.sk")
    return EXIT_OK


def cmd_encaps(args, params: Params) -> int:
    public = codec.decode_msg1(_read_payload(args.input), params)
    client = encaps(public, entropy_source(args)(32), params)
    _write_payload(args.out + ".ct", codec.encode_msg2(client.ciphertext, params))
    _write_key(args.out + ".key", client.key)
    return EXIT_OK


def cmd_decaps(args, params: Params) -> int:
    state = codec.decode_secret(_read_payload(args.input), params)
    ciphertext = codec.decode_msg2(_read_payload(args.ct), params)
    _write_key(args.out, decaps(state, ciphertext, params))
    return EXIT_OK


def cmd_kat_gen(args, params: Params) -> int:
    master = bytes.fromhex(settings.E8KEM_SEED) if args.insecure_deterministic and settings.E8KEM_SEED else None
    records = kat.kat_generate(params, args.count, master)
    Path(args.out).write_text(codec.kat_write(records))
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_kat_verify(args, params: Params) -> int:
    records = codec.kat_read(Path(args.input).read_text())
    bad = kat.kat_mismatches(params, records)
    if bad:
        print(f"e8kem: error: {len(bad)} of {len(records)} records differ (first: {bad[0]})", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"{len(records)} records verified")
    return EXIT_OK


def cmd_exchange_server(args, params: Params) -> int:
    host, port = parse_endpoint(args.listen)
    entropy = entropy_source(args)
    transcripts = asyncio.run(serve_exchange(
        params, host, port, entropy, once=not args.forever,
        on_key=lambda t: print(t.key.hex(), flush=True),
    ))
    return EXIT_OK if transcripts else EXIT_IO


def cmd_exchange_client(args, params: Params) -> int:
    host, port = parse_endpoint(args.connect)
    transcript = asyncio.run(run_client(params, host, port, entropy_source(args)))
    print(transcript.key.hex())
    return EXIT_OK


def format_pe_table(rows: List[dict]) -> str:
    lines = ["q        k   " + "".join(f"p={p:<8}" for p in PRESET_DEPTHS)]
    for q, k in PRESET_ROWS:
        cells = [r for r in rows if r["q"] == q and r["k"] == k]
        if not cells:
            continue
        body = "".join(f"2^{round(r['log2pe']):<8}" for r in cells)
        lines.append(f"2^{q.bit_length() - 1:<6} {k:<3} {body}")
    lines.append("")
    lines.extend(f"q={r['q']} k={r['k']} p={r['p']} log2pe={r['log2pe']:.2f}" for r in rows)
    return "\n".join(lines)


def cmd_analyze_pe(args, params: Optional[Params]) -> int:
    if args.preset:
        rows = []
        for p in PRESET_DEPTHS:
            cell = make_params(params.q, params.k, p)
            rows.append({"q": cell.q, "k": cell.k, "p": p,
                         "log2pe": analysis.pe_bound(cell, args.mode, union=args.union)})
    else:
        rows = analysis.pe_table(args.mode, union=args.union)
    print(format_pe_table(rows))
    return EXIT_OK


def cmd_estimate_security(args, params: Params) -> int:
    report = estimator.security_report(params)
    print("Scheme & Attack & m & b & Classical & Quantum & Plausible")
    for name, primal, dual in report:
        print(f"{name} & {primal.row()}")
        print(f"{name} & {dual.row()}")
    ours = report[0][2]
    kyber = report[-1][2]
    print(f"quantum dual gain over {report[-1][0]}: {100 * estimator.quantum_gain(ours, kyber):.1f}%")
    return EXIT_OK


def cmd_params(args, params: Optional[Params]) -> int:
    names = [params.name] if args.preset else preset_names()
    for name in names:
        info = get_preset(name).summary()
        print(" ".join(f"{key}={value}" for key, value in info.items()))
    return EXIT_OK


# ---- Parser ----
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="e8kem", description="E8-reconciliation Module-LWE KEM")
    parser.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, preset_default: Optional[str] = settings.DEFAULT_PRESET):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--preset", default=preset_default, help="parameter preset name")
        p.add_argument("--insecure-deterministic", action="store_true",
                       help="take entropy from E8KEM_SEED (demos and tests only)")
        p.set_defaults(handler=handler)
        return p

    p = add("keygen", cmd_keygen, "write PREFIX.pk and PREFIX.sk")
    p.add_argument("--out", required=True, help="output prefix")

    p = add("encaps", cmd_encaps, "encapsulate against a public key")
    p.add_argument("--in", dest="input", required=True, help="public key file")
    p.add_argument("--out", required=True, help="output prefix for .ct and .key")

    p = add("decaps", cmd_decaps, "recover the key from a ciphertext")
    p.add_argument("--in", dest="input", required=True, help="secret key file")
    p.add_argument("--ct", required=True, help="ciphertext file")
    p.add_argument("--out", default=None, help="optional key output file")

    p = add("kat-gen", cmd_kat_gen, "generate known-answer records")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--out", required=True)

    p = add("kat-verify", cmd_kat_verify, "replay known-answer records")
    p.add_argument("--in", dest="input", required=True)

    p = add("exchange-server", cmd_exchange_server, "serve the exchange over TCP")
    p.add_argument("--listen", default=f"{settings.EXCHANGE_HOST}:{settings.EXCHANGE_PORT}")
    p.add_argument("--forever", action="store_true", help="keep serving after the first exchange")

    p = add("exchange-client", cmd_exchange_client, "run the client side over TCP")
    p.add_argument("--connect", default=f"{settings.EXCHANGE_HOST}:{settings.EXCHANGE_PORT}")

    p = add("analyze-pe", cmd_analyze_pe, "failure-probability bound table", preset_default=None)
    p.add_argument("--mode", choices=["float", "exact"], default=settings.ANALYSIS_MODE)
    p.add_argument("--union", choices=["types", "classes"], default="types",
                   help="types: two-term union bound; classes: sum over Galois/shift orbits")

    add("estimate-security", cmd_estimate_security, "primal/dual core-SVP report")
    add("params", cmd_params, "show presets", preset_default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or settings.LOG_LEVEL)
    try:
        params = get_preset(args.preset) if args.preset else None
        return args.handler(args, params)
    except (UsageError, ParamsError) as exc:
        print(f"e8kem: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, E8KemError, ValueError) as exc:
        print(f"e8kem: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
