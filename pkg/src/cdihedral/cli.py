"""Command-line front end.

Exit codes: 0 success, 1 ``equiv`` found the circuits inequivalent or
``verify-relations`` found an unsound rule, 2 bad input, 3 enumeration cap
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .circuit import CircuitSyntaxError, InvalidCircuit, Mode, dumps, parse
from .enumeration import DEFAULT_CAP, KINDS, CapExceeded, count
from .normal_form import ModeViolation, equivalent, normalize
from .phasepoly import canonicalize
from .rewrite import normalize_by_rewriting, rule_table, verify_rule
from .semantics import apply, bits_to_index, evaluate, index_to_bits


class UsageError(ValueError):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    return parse(text)


def _cmd_normalize(args) -> int:
    c = _load(args.file)
    if args.trace and args.via != "rewriting":
        raise UsageError("--trace requires --via rewriting")
    if args.via == "rewriting":
        trace = [] if args.trace else None
        out = normalize_by_rewriting(c, args.mode, trace)
        for rid, pos, direction in trace or []:
            print(f"({rid}, {pos}, {direction})", file=sys.stderr)
    else:
        out = normalize(c, args.mode)
    sys.stdout.write(dumps(out))
    return 0


def _cmd_equiv(args) -> int:
    c1, c2 = _load(args.file1), _load(args.file2)
    if c1.n != c2.n:
        raise UsageError(f"wire counts differ: {c1.n} vs {c2.n}")
    same = equivalent(c1, c2, args.mode)
    print("equivalent" if same else "inequivalent")
    return 0 if same else 1


def _cmd_simulate(args) -> int:
    c = _load(args.file)
    op = evaluate(c, args.mode)
    if args.input is None:
        print(op.dumps())
        return 0
    if len(args.input) != c.n:
        raise UsageError(f"input must have {c.n} bits, got {len(args.input)}")
    phase, y = apply(op, bits_to_index(args.input))
    if args.json:
        print(json.dumps({"input": args.input, "phase": phase, "output": index_to_bits(y, c.n)}))
    else:
        print(phase, index_to_bits(y, c.n))
    return 0


def _cmd_phasepoly(args) -> int:
    op = evaluate(_load(args.file), args.mode)
    print(json.dumps({"diagonal": canonicalize(op.phase).to_json(), "affine": op.affine.to_json()}))
    return 0


def _cmd_count(args) -> int:
    report = count(args.qubits, args.mode, args.what, args.enumerate, args.cap)
    print(report.dumps())
    return 0 if report.match is not False else 1


def _cmd_verify(args) -> int:
    failed = 0
    for rule in rule_table(args.mode):
        sizes = (rule.arity, rule.arity + 1)
        ok = all(verify_rule(rule, n) for n in sizes)
        failed += not ok
        print(f"{rule.id:<24} n={sizes[0]},{sizes[1]}  {'pass' if ok else 'FAIL'}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdq", description="CNOT-dihedral circuit toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    modes = [m.value for m in Mode]

    def cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--mode", choices=modes, default="dihedral")
        sp.set_defaults(fn=fn)
        return sp

    sp = cmd("normalize", _cmd_normalize, "print the normal form of a circuit")
    sp.add_argument("file")
    sp.add_argument("--via", choices=["semantic", "rewriting"], default="semantic")
    sp.add_argument("--trace", action="store_true", help="print applied rules to stderr (rewriting only)")

    sp = cmd("equiv", _cmd_equiv, "decide equality of two circuits")
    sp.add_argument("file1")
    sp.add_argument("file2")

    sp = cmd("simulate", _cmd_simulate, "print the exact operator or the image of one basis state")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--input", metavar="BITS", help="basis state, qubit 0 first")

    sp = cmd("phasepoly", _cmd_phasepoly, "canonical phase coefficients and affine map")
    sp.add_argument("file")

    sp = cmd("count", _cmd_count, "group orders by formula and optionally by enumeration")
    sp.add_argument("--qubits", type=int, required=True)
    sp.add_argument("--what", choices=KINDS, default="group")
    sp.add_argument("--enumerate", action="store_true")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest enumeration allowed")

    cmd("verify-relations", _cmd_verify, "check every rewrite rule against the exact semantics")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (CircuitSyntaxError, InvalidCircuit, ModeViolation, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
