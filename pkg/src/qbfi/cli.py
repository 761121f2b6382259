"""Command-line front end.  Exit codes: 0 success, 1 failed verification, 2 usage."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checker import check_refutation
from .circuit import read_circuit, to_dot, write_circuit
from .errors import QbfiError
from .formats import CALCULI, parse_qdimacs, parse_trace, write_qdimacs, write_trace
from .generators import gen_clique_noclique, gen_fb
from .interpolation import GENERAL, MONOTONE, extract_circuit, restrict_proof, verify_interpolant
from .oracle import DEFAULT_P_CAP, eval_qbf, find_qres_refutation, verify_b_strategy
from .strategy import extract_b_strategy


class UsageError(Exception):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _formula(args):
    return parse_qdimacs(_read(args.formula))


def _trace(args, f):
    return parse_trace(_read(args.proof), f)


def _bits(value, f):
    text = _read(value) if Path(value).is_file() else value
    bits = "".join(text.split())
    ps = f.p_vars
    if len(bits) != len(ps) or set(bits) - {"0", "1"}:
        raise UsageError(f"--assign needs {len(ps)} bits for p variables {ps}")
    return {v: int(b) for v, b in zip(ps, bits)}


def _emit_circuit(c, args):
    _write(args.out, write_circuit(c))
    if args.dot:
        _write(args.dot, to_dot(c))
    return 0


def cmd_check(args):
    f = _formula(args)
    rep = check_refutation(_trace(args, f), f, args.calculus)
    print(rep.summary())
    return 0 if rep.valid else 1


def cmd_interpolate(args):
    f = _formula(args)
    c = extract_circuit(_trace(args, f), f, MONOTONE if args.monotone else GENERAL)
    return _emit_circuit(c, args)


def cmd_extract_strategy(args):
    f = _formula(args)
    c = extract_b_strategy(_trace(args, f), f, MONOTONE if args.monotone else GENERAL)
    return _emit_circuit(c, args)


def cmd_restrict(args):
    f = _formula(args)
    t = _trace(args, f)
    c = read_circuit(_read(args.circuit))
    rp = restrict_proof(t, f, c, _bits(args.assign, f))
    rep = rp.check()
    print(f"{rp.side} steps={len(rp.trace)} {rep.summary()}")
    if args.emit:
        _write(args.emit, write_trace(rp.trace))
    if args.emit_formula:
        _write(args.emit_formula, write_qdimacs(rp.formula))
    return 0 if rep.valid else 1


def _report(rep):
    print(rep.summary())
    return 0 if rep.ok else 1


def cmd_verify_interpolant(args):
    f = _formula(args)
    c = read_circuit(_read(args.circuit))
    return _report(verify_interpolant(c, f, args.cap, args.jobs))


def cmd_verify_strategy(args):
    f = _formula(args)
    c = read_circuit(_read(args.circuit))
    return _report(verify_b_strategy(c, f, args.cap, args.jobs))


def cmd_gen_clique(args):
    f = gen_clique_noclique(args.n)
    if args.fb:
        f = gen_fb(f)
    _write(args.out, write_qdimacs(f))
    return 0


def cmd_gen_fb(args):
    _write(args.out, write_qdimacs(gen_fb(_formula(args))))
    return 0


def cmd_solve(args):
    f = _formula(args)
    try:
        t = find_qres_refutation(f, args.budget)
    except QbfiError as e:
        if e.code != "EXHAUSTED":
            raise
        print(f"EXHAUSTED {e.message}")
        return 1
    print(f"REFUTED steps={len(t)}")
    if args.emit:
        _write(args.emit, write_trace(t))
    return 0


def cmd_eval(args):
    print("TRUE" if eval_qbf(_formula(args)) else "FALSE")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="qbfi", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, formula=True, proof=False):
        p = sub.add_parser(name, help=help_, description=help_)
        if formula:
            p.add_argument("formula", help="QDIMACS file, or - for stdin")
        if proof:
            p.add_argument("proof", help="QRTF proof trace")
        p.set_defaults(fn=fn)
        return p

    p = add("check", cmd_check, "check a refutation step by step", proof=True)
    p.add_argument("--calculus", choices=CALCULI, help="override the trace header")

    for name, fn, what in (("interpolate", cmd_interpolate, "extract an interpolation circuit"),
                           ("extract-strategy", cmd_extract_strategy,
                            "extract the strategy circuit for b")):
        p = add(name, fn, what, proof=True)
        p.add_argument("--monotone", action="store_true", help="use MONO3 instead of SEL gates")
        p.add_argument("--out", help="netlist output (default stdout)")
        p.add_argument("--dot", help="also write a Graphviz rendering")

    p = add("restrict", cmd_restrict, "build and check the one-sided refutation for one assignment",
            proof=True)
    p.add_argument("circuit", help="netlist extracted from the same proof")
    p.add_argument("--assign", required=True, help="bits over the p variables, or a file of bits")
    p.add_argument("--emit", help="write the restricted trace here")
    p.add_argument("--emit-formula", help="write the one-sided formula it refutes here")

    for name, fn, what in (("verify-interpolant", cmd_verify_interpolant,
                            "test a circuit against the oracle on every p assignment"),
                           ("verify-strategy", cmd_verify_strategy,
                            "test a b strategy against the oracle on every p assignment")):
        p = add(name, fn, what)
        p.add_argument("circuit")
        p.add_argument("--cap", type=int, default=DEFAULT_P_CAP, help="largest |p| to enumerate")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = add("gen-clique", cmd_gen_clique,
            "emit the clique-no-clique formula; p_uv = 1 marks uv as an edge of the graph "
            "the A side searches for a clique in", formula=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fb", action="store_true", help="apply the b transform")
    p.add_argument("--out")

    p = add("gen-fb", cmd_gen_fb, "apply the b transform to a partitioned formula")
    p.add_argument("--out")

    p = add("solve", cmd_solve, "search for a Q-Res refutation by saturation")
    p.add_argument("--budget", type=int, default=100_000, help="resolution attempts")
    p.add_argument("--emit", help="write the refutation here")

    add("eval", cmd_eval, "decide the formula with the brute-force oracle")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"qbfi: {e}", file=sys.stderr)
        return 2
    except QbfiError as e:
        print(f"qbfi: {e.code} {e.message}".rstrip(), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
