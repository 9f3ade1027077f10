"""Command line front end: enumerate, build, decompose, socle, verify.

Exit codes: 0 success, 1 verification failure, 2 usage, 3 malformed input,
4 internal error, 5 input violating the quiver relations.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .decompose import DecompositionError, decompose
from .quiver import (NilpotencyError, RelationError, RepresentationError, build, direct_sum, from_json,
                     scramble, socle_filtration, to_json, zero_rep)
from .strings import (BandDescriptor, InvalidDescriptor, SocleSeries, enumerate_bands,
                      enumerate_strings, parse_descriptor)
from .suites import SUITES, run_suite
from .weights import ExponentVector, WindowError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL, EXIT_RELATION = 0, 1, 2, 3, 4, 5
OUT_DIR_ENV = "CUSPIDAL_OUT_DIR"


class UsageError(Exception):
    pass


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, lines: list[str], default_name: str | None = None) -> None:
    text = "".join(line + "\n" for line in lines)
    target = args.out
    if target is None and default_name and os.environ.get(OUT_DIR_ENV):
        target = os.path.join(os.environ[OUT_DIR_ENV], default_name)
    if target is not None and target != "-":
        write_atomic(Path(target), text)
    sys.stdout.write(text)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _positive(name: str, lo: int = 1):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"{name} must be >= {lo}")
        return v
    return conv


def _mu(text: str) -> ExponentVector:
    try:
        return ExponentVector.parse(text)
    except WindowError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None
    if v == 0:
        raise argparse.ArgumentTypeError("eigenvalue must be nonzero")
    return v


# ------------------------------------------------------------------ commands


def cmd_enumerate(args) -> int:
    if args.bands:
        if args.max_perimeter is None:
            raise UsageError("--bands needs --max-perimeter")
        lines = [BandDescriptor(p, args.lam, args.r).to_text() for p in enumerate_bands(args.n, args.max_perimeter)]
    else:
        if args.max_len is None:
            raise UsageError("--strings needs --max-len")
        lines = [s.to_text() for s in enumerate_strings(args.n, args.max_len)]
    _emit(args, lines)
    return EXIT_OK


def _descriptors(text: str) -> list:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(parse_descriptor(line))
    return out


def cmd_build(args) -> int:
    descs = _descriptors(_read_input(args.input))
    n = args.n
    for d in descs:
        dn = d.n if not isinstance(d, BandDescriptor) else d.polygon.n
        if n is None:
            n = dn
        elif dn != n:
            raise InvalidDescriptor(f"descriptor rank {dn} differs from {n}")
    if n is None:
        raise UsageError("empty input: pass --n to build the zero representation")
    reps = [build(d) for d in descs]
    M = direct_sum(reps, n) if reps else zero_rep(n)
    if args.seed is not None:
        M = scramble(M, args.seed)
    _emit(args, [to_json(M)])
    return EXIT_OK


def cmd_decompose(args) -> int:
    M = from_json(_read_input(args.input))
    result = decompose(M, args.seed)
    _emit(args, result.lines())
    return EXIT_OK


def socle_lines(series: SocleSeries) -> list[str]:
    out = []
    for i, layer in enumerate(series.layers, start=1):
        body = " + ".join(f"L_{a}" for a in layer)
        out.append(f"soc_{i}/soc_{i - 1}: {body}")
    return out


def cmd_socle(args) -> int:
    M = from_json(_read_input(args.input))
    _emit(args, socle_lines(socle_filtration(M)))
    return EXIT_OK


def cmd_verify(args) -> int:
    records = run_suite(args.suite, mu=args.mu, n=args.n, radius=args.radius or 4,
                        cutoff=args.cutoff, log_degree=args.log_degree)
    _emit(args, [r.line() for r in records], f"verify-{args.suite}.txt")
    return EXIT_OK if all(r.ok for r in records) else EXIT_FAIL


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cuspidal", description="Strings, bands and cuspidal weight windows.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help=f"report path ('-' for stdout only); default from ${OUT_DIR_ENV}")
        sp.add_argument("--seed", type=_positive("--seed", 0), default=None)

    e = sub.add_parser("enumerate", help="list canonical string or band descriptors")
    e.add_argument("--n", type=_positive("--n"), required=True)
    kind = e.add_mutually_exclusive_group()
    kind.add_argument("--strings", action="store_true", default=True)
    kind.add_argument("--bands", action="store_true")
    e.add_argument("--max-len", type=_positive("--max-len"))
    e.add_argument("--max-perimeter", type=_positive("--max-perimeter", 2))
    e.add_argument("--lam", type=_fraction, default=Fraction(1), help="band eigenvalue")
    e.add_argument("--r", type=_positive("--r"), default=1, help="Jordan block size")
    common(e)
    e.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("build", help="representation JSON for the direct sum of descriptor lines")
    b.add_argument("input", nargs="?", default="-")
    b.add_argument("--n", type=_positive("--n"))
    common(b)
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("decompose", help="split a representation into strings and bands")
    d.add_argument("input", nargs="?", default="-")
    common(d)
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("socle", help="socle layers of a representation")
    s.add_argument("input", nargs="?", default="-")
    common(s)
    s.set_defaults(func=cmd_socle)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=_positive("--n"))
    v.add_argument("--mu", type=_mu)
    v.add_argument("--radius", type=_positive("--radius"))
    v.add_argument("--cutoff", type=_positive("--cutoff", 0), default=10)
    v.add_argument("--log-degree", type=_positive("--log-degree"), default=1)
    common(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and args.command == "decompose":
        args.seed = 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WindowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RelationError, NilpotencyError) as exc:
        print(f"relation violation: {exc}", file=sys.stderr)
        return EXIT_RELATION
    except (InvalidDescriptor, RepresentationError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DecompositionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
