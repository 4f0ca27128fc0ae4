"""Command-line front end.

Exit status: 0 on success (or "isomorphic"/"admissible"), 1 on a negative
verdict, 2 on bad input or a rejected precondition.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .admissible import is_admissible
from .classify import adapted_basis, decide_isomorphic, decompose, realize_cells, realize_finite
from .cyclerep import random_basis_change
from .extension import ExtensionError, build_isomorphism
from .filtration import kaplansky_invariants
from .formats import (
    ParseError,
    parse_cyclerep,
    parse_field,
    parse_morphism,
    parse_support,
    write_adapted_basis,
    write_cyclerep,
    write_decomposition,
    write_invariants,
    write_morphism,
)
from .generate import parse_cells
from .ordinal import format_ordinal
from .selfcheck import run_selfcheck


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load_rep(path: str):
    try:
        return parse_cyclerep(_read(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _triple(bad) -> str:
    (k, d), l, (k2, a) = bad
    return f"(({k}, {format_ordinal(d)}), {l}, ({k2}, {format_ordinal(a)}))"


def cmd_invariants(args) -> int:
    sys.stdout.write(write_invariants(kaplansky_invariants(_load_rep(args.file))))
    return 0


def cmd_iso(args) -> int:
    u, v = _load_rep(args.first), _load_rep(args.second)
    verdict = decide_isomorphic(u, v)
    if not verdict.isomorphic:
        print(f"not isomorphic: {verdict.reason}")
        return 1
    print("isomorphic")
    if args.output:
        _write(args.output, write_morphism(verdict.certificate))
        print(f"certificate: {args.output}")
    return 0


def verify_certificate(text: str, u, v) -> bool:
    """Re-read a certificate and check it by matrix products and ranks only."""
    return parse_morphism(text, u, v).is_isomorphism()


def cmd_build_iso(args) -> int:
    u, v = _load_rep(args.first), _load_rep(args.second)
    phi = build_isomorphism(u, v)
    if phi is None:
        print("not isomorphic: invariant tables differ")
        return 1
    text = write_morphism(phi)
    if not verify_certificate(text, u, v):
        raise CliError("certificate failed re-verification")
    _write(args.output, text)
    print(f"certificate written to {args.output} (verified)")
    return 0


def cmd_decompose(args) -> int:
    cells, _ = decompose(_load_rep(args.file))
    sys.stdout.write(write_decomposition(cells))
    return 0


def cmd_adapted_basis(args) -> int:
    u = _load_rep(args.file)
    sys.stdout.write(write_adapted_basis(adapted_basis(u), u.field))
    return 0


def cmd_realize(args) -> int:
    try:
        fam = parse_support(_read(args.support))
    except ParseError as exc:
        raise CliError(f"{args.support}: {exc}") from None
    ok, bad = is_admissible(fam.support)
    if not ok:
        raise CliError(f"support is not admissible, counterexample {_triple(bad)}")
    u = realize_finite(fam.table(), parse_field(args.field))
    _write(args.output, write_cyclerep(u))
    print(f"realization written to {args.output} (dims {' '.join(map(str, u.dims))})")
    return 0


def cmd_check_admissible(args) -> int:
    try:
        fam = parse_support(_read(args.support))
    except ParseError as exc:
        raise CliError(f"{args.support}: {exc}") from None
    ok, bad = is_admissible(fam.support)
    if ok:
        print("admissible")
        return 0
    print(f"not admissible: counterexample {_triple(bad)}")
    return 1


def cmd_gen(args) -> int:
    cells = parse_cells(args.cells, args.n)
    u = realize_cells(cells, parse_field(args.field))
    v, _ = random_basis_change(u, random.Random(args.seed).randrange(2**64))
    text = write_cyclerep(v)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_selfcheck(args) -> int:
    results = run_selfcheck(args.seed, args.iters)
    failed = 0
    for name, res in results.items():
        print(f"{name}: {res.passed} passed, {res.failed} failed")
        for err in res.errors[:3]:
            print(f"  {err}")
        failed += res.failed
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kaplansky", description="invariants and isomorphisms of n-cycles")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="print the invariant table of a cycle")
    p.add_argument("file")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("iso", help="decide whether two cycles are isomorphic")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", help="write the certificate here when isomorphic")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("build-iso", help="write a verified isomorphism certificate")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build_iso)

    p = sub.add_parser("decompose", help="list the canonical cells of a nilpotent cycle")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("adapted-basis", help="print an adapted basis")
    p.add_argument("file")
    p.set_defaults(func=cmd_adapted_basis)

    p = sub.add_parser("realize", help="realize a finite support file as a cycle")
    p.add_argument("support")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--field", default="Q", help="Q or Fp:<p>")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check-admissible", help="test a support file for admissibility")
    p.add_argument("support")
    p.set_defaults(func=cmd_check_admissible)

    p = sub.add_parser("gen", help="random basis change of a cell realization")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cells", required=True, help="base:size[xcount],...")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", default="Q", help="Q or Fp:<p>")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("selfcheck", help="run the randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=20)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _validate(parser, args) -> None:
    if getattr(args, "seed", 0) < 0 or getattr(args, "seed", 0) >= 2**64:
        parser.error("--seed must fit in an unsigned 64-bit integer")
    if getattr(args, "n", 1) < 1:
        parser.error("--n must be at least 1")
    if getattr(args, "iters", 1) < 0:
        parser.error("--iters must be non-negative")
    if getattr(args, "field", None) is not None:
        try:
            parse_field(args.field)
        except ValueError as exc:
            parser.error(str(exc))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ValueError, ExtensionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
