"""Command line entry point: ``sdkx keygen|exchange|stats|attack|toy-demo``.

Exit codes: 0 success, 2 validation failure, 3 protocol error, 4 key mismatch.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import socket
import sys
from decimal import Decimal
from pathlib import Path

from . import cryptanalysis, paramgen, statharness, wire
from .algebra import GRMatrix
from .platforms import MatrixParams, ToyParams, geometric_exponent, matrix_closed_form, toy_closed_form
from .semidirect import ProtocolSession, Role, derive_shared, sd_pow

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROTOCOL = 3
EXIT_MISMATCH = 4

TIMEOUT_ENV = "SDKX_TIMEOUT"
DEFAULT_TIMEOUT = 30.0

log = logging.getLogger("sdkx")


class ValidationError(Exception):
    pass


def _rng(seed) -> random.Random:
    return random.SystemRandom() if seed is None else random.Random(seed)


def _int_arg(text: str) -> int:
    """Integers, also in exact scientific notation such as ``1e44``."""
    value = Decimal(text)
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"{text} is not an integer")
    return int(value)


def _read_params(path) -> tuple[MatrixParams, int, bytes]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read parameter file: {exc}") from exc
    try:
        params, t = paramgen.load_params(data)
    except ValueError as exc:
        raise ValidationError(f"invalid parameter file: {exc}") from exc
    return params, t, data


def cmd_keygen(args) -> int:
    params = paramgen.generate_params(_rng(args.seed), factor_count=args.factors)
    data = paramgen.dump_params(params, args.t)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes, t={args.t})")
    print(f"fingerprint {wire.fingerprint(data).hex()}")
    return EXIT_OK


def _connect(args, timeout: float) -> socket.socket:
    if args.connect:
        host, port = wire.parse_address(args.connect)
        sock = socket.create_connection((host, port), timeout=timeout)
    else:
        host, port = wire.parse_address(args.listen)
        with socket.create_server((host, port)) as server:
            server.settimeout(timeout)
            bound = server.getsockname()
            print(f"listening on {bound[0]}:{bound[1]}", flush=True)
            sock, _ = server.accept()
    sock.settimeout(timeout)
    return sock


def _exchange(sock: socket.socket, role: Role, session: ProtocolSession, param_fp: bytes) -> int:
    send, recv = wire.send_message, wire.recv_message
    Msg, T = wire.WireMessage, wire.MsgType

    if role is Role.INITIATOR:
        send(sock, Msg(T.PARAMS, param_fp))
        peer_fp = recv(sock, T.PARAMS).payload
    else:
        peer_fp = recv(sock, T.PARAMS).payload
        send(sock, Msg(T.PARAMS, param_fp))
    if peer_fp != param_fp:
        print("parameter fingerprint mismatch", file=sys.stderr)
        return EXIT_VALIDATION

    outbound = Msg(T.TRANSMIT, session.outbound.to_bytes())
    if role is Role.INITIATOR:
        send(sock, outbound)
        received = recv(sock, T.TRANSMIT).payload
    else:
        received = recv(sock, T.TRANSMIT).payload
        send(sock, outbound)
    try:
        other = GRMatrix.from_bytes(received)
    except ValueError as exc:
        raise wire.ProtocolError(f"bad TRANSMIT payload: {exc}") from exc
    key_bytes = session.receive(other).to_bytes()

    confirm = Msg(T.CONFIRM, wire.confirm_digest(key_bytes))
    if role is Role.INITIATOR:
        send(sock, confirm)
        peer_confirm = recv(sock, T.CONFIRM).payload
    else:
        peer_confirm = recv(sock, T.CONFIRM).payload
        send(sock, confirm)
    print(f"key fingerprint {wire.key_fingerprint(key_bytes)}", flush=True)
    if peer_confirm != confirm.payload:
        print("key confirmation mismatch", file=sys.stderr)
        return EXIT_MISMATCH
    print("keys match")
    return EXIT_OK


def cmd_exchange(args) -> int:
    params, t, data = _read_params(args.params)
    role = Role(args.role)
    exp = paramgen.sample_exponent(t, _rng(args.seed))
    session = ProtocolSession(role, params.M, params, exp)
    timeout = args.timeout if args.timeout is not None else float(os.environ.get(TIMEOUT_ENV, DEFAULT_TIMEOUT))
    try:
        with _connect(args, timeout) as sock:
            return _exchange(sock, role, session, wire.fingerprint(data))
    except (wire.ProtocolError, OSError) as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL


def cmd_stats(args) -> int:
    kw = {}
    if args.full_scale:
        kw.update(statharness.FULL_SCALE)
    if args.trials is not None:
        kw["trial_count"] = args.trials
    if args.exp_low is not None:
        kw["exponent_low"] = args.exp_low
    if args.exp_high is not None:
        kw["exponent_high"] = args.exp_high
    try:
        config = statharness.ExperimentConfig(
            mode=statharness.Mode(args.mode), seed=args.seed, fixed_params=args.fixed_params,
            workers=args.workers, **kw,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    paths = statharness.write_experiment(args.out, config)
    for path in paths.values():
        print(path)
    return EXIT_OK


def _attack_matrix(spec: str, params: MatrixParams | None) -> GRMatrix:
    if spec == "identity":
        return GRMatrix.identity()
    if spec == "zero":
        return GRMatrix.zero()
    if spec in ("M", "H", "HM"):
        if params is None:
            raise ValidationError(f"--matrix {spec} needs --params")
        return {"M": params.M, "H": params.H, "HM": params.H @ params.M}[spec]
    try:
        return GRMatrix.from_bytes(Path(spec).read_bytes())
    except (OSError, ValueError) as exc:
        raise ValidationError(f"cannot load matrix {spec}: {exc}") from exc


def cmd_attack(args) -> int:
    params = _read_params(args.params)[0] if args.params else None
    if args.kind == "brute":
        if params is None:
            raise ValidationError("brute needs --params")
        if args.plant is not None:
            target = matrix_closed_form(params, args.plant)
        elif args.target:
            target = _attack_matrix(args.target, params)
        else:
            raise ValidationError("brute needs --plant or --target")
        result = cryptanalysis.brute_force_exponent(params.H, params.M, target, args.bound, params.H_inv)
    elif args.kind == "loop":
        result = cryptanalysis.detect_loop(_attack_matrix(args.matrix, params), args.bound)
    else:
        if args.p is None or args.g is None or args.target is None:
            raise ValidationError("dlog needs --p, --g and --target")
        result = cryptanalysis.toy_discrete_log(args.g, int(args.target), args.p, args.bound)
    report = cryptanalysis.results_csv([result])
    if args.out:
        Path(args.out).write_text(report)
    sys.stdout.write(report)
    return EXIT_OK


def cmd_toy_demo(args) -> int:
    rng = _rng(args.seed)
    if args.p is not None:
        toy = ToyParams(args.p, args.g if args.g is not None else 2, args.k)
    else:
        toy = ToyParams.random(rng, bits=args.bits, k=args.k)
    m = args.m if args.m is not None else paramgen.sample_exponent(args.t, rng)
    n = args.n if args.n is not None else paramgen.sample_exponent(args.t, rng)
    a = sd_pow(toy.g, toy, m)
    b = sd_pow(toy.g, toy, n)
    k_alice = derive_shared(b, m, a, toy)
    k_bob = derive_shared(a, n, b, toy)
    closed = toy_closed_form(toy.g, toy.k, toy.p, m + n)
    print(f"p={toy.p} g={toy.g} k={toy.k} automorphism={toy.is_automorphism}")
    print(f"initiator sends a = {a}  (closed form {toy_closed_form(toy.g, toy.k, toy.p, m)})")
    print(f"responder sends b = {b}  (closed form {toy_closed_form(toy.g, toy.k, toy.p, n)})")
    print(f"initiator key phi^m(b)*a = {k_alice}")
    print(f"responder key phi^n(a)*b = {k_bob}")
    if m + n <= 64:
        print(f"g^((k^(m+n)-1)/(k-1)) = {pow(toy.g, geometric_exponent(toy.k, m + n), toy.p)}")
    else:
        print(f"g^((k^(m+n)-1)/(k-1)) = {closed}")
    return EXIT_OK if k_alice == k_bob == closed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdkx", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate public parameters (M, H, H_inv)")
    p.add_argument("--t", type=int, default=64, help="security parameter: exponent bit length")
    p.add_argument("--seed", type=int)
    p.add_argument("--factors", type=int, default=20, help="triangular factors in H")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("exchange", help="run one side of a key exchange over TCP")
    p.add_argument("role", choices=[r.value for r in Role])
    p.add_argument("--params", required=True)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--listen", metavar="ADDR")
    where.add_argument("--connect", metavar="ADDR")
    p.add_argument("--seed", type=int, help="deterministic private exponent (testing only)")
    p.add_argument("--timeout", type=float, help=f"socket timeout in seconds (default ${TIMEOUT_ENV} or {DEFAULT_TIMEOUT:g})")
    p.set_defaults(func=cmd_exchange)

    p = sub.add_parser("stats", help="indistinguishability experiments, CSV output")
    p.add_argument("--mode", choices=[m.value for m in statharness.Mode], default=statharness.Mode.POWER_VS_RANDOM.value)
    p.add_argument("--trials", type=int)
    p.add_argument("--exp-low", type=_int_arg)
    p.add_argument("--exp-high", type=_int_arg)
    p.add_argument("--full-scale", action="store_true", help="500 trials, exponents in [1e44, 1e55]")
    p.add_argument("--fixed-params", action="store_true", help="one (M, H) for all trials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("attack", help="desk-scale attacks, CSV report")
    p.add_argument("kind", choices=["brute", "loop", "dlog"])
    p.add_argument("--params")
    p.add_argument("--bound", type=_int_arg, default=1000)
    p.add_argument("--plant", type=int, help="brute: exponent used to build the target")
    p.add_argument("--target", help="brute: matrix file; dlog: target residue")
    p.add_argument("--matrix", default="M", help="loop: identity, zero, M, H, HM or a 540-byte file")
    p.add_argument("--p", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("toy-demo", help="Z_p^* instantiation end to end")
    p.add_argument("--p", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int, default=64)
    p.add_argument("--bits", type=int, default=31)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_toy_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "toy-demo" and args.p is not None and args.k is None:
        parser.error("--p needs --k")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
