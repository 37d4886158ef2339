"""Command-line interface: ``factoromata <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import automata, linrep, oracles, queries, verify
from .algebra import dumps_poly, minimal_polynomial, poly_divides
from .automata import AutomatonError, state_counts
from .dsl import DslError, DslSyntaxError, compile_formula
from .seeds import (
    all_theta_triples,
    alpha3_parity_dfa,
    alpha5_parity_dfa,
    factauto,
    gamma_parity_dfa,
    theta_dfa,
)


def _natural(text: str) -> int:
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"not a decimal natural number: {text!r}")
    return int(text)


def _label(t) -> str:
    return "".join(map(str, t))


def cmd_seed(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "gamma.aut": gamma_parity_dfa(),
        "a3.aut": alpha3_parity_dfa(),
        "a5.aut": alpha5_parity_dfa(),
        "factauto.aut": factauto(),
    }
    for t in all_theta_triples():
        files[f"theta_{_label(t)}.aut"] = theta_dfa(*t)
    for name, d in files.items():
        automata.save(d, out / name)
        print(f"{name}\tstates={state_counts(d)[args.convention]}\t({args.convention})")
    for t in all_theta_triples():
        name = f"theta_{_label(t)}.linrep"
        (out / name).write_text(linrep.dumps(linrep.theta_linrep(*t)), encoding="ascii")
        print(f"{name}\tdim={linrep.theta_linrep(*t).dim}")
    (out / "sbar.linrep").write_text(linrep.dumps(linrep.sbar_linrep()), encoding="ascii")
    print(f"sbar.linrep\tdim={linrep.sbar_linrep().dim}")
    return 0


def cmd_eval(args) -> int:
    a = automata.load(args.automaton)
    if len(args.values) != a.width:
        raise AutomatonError(f"automaton has {a.width} track(s), got {len(args.values)} value(s)")
    print("accept" if a.accepts(*args.values) else "reject")
    return 0


def cmd_count(args) -> int:
    rep = linrep.theta_linrep(*map(int, args.triple)) if args.triple else linrep.sbar_linrep()
    print(linrep.eval_linrep(rep, args.n))
    return 0


def cmd_gaps(args) -> int:
    d = queries.gaps_dfa() if args.set == "Sbar" else queries.sgaps_dfa()
    if args.out:
        automata.save(d, args.out)
    print(" ".join(map(str, queries.gap_length_set(d, args.limit))))
    return 0


def cmd_query(args) -> int:
    text = Path(args.file).read_text() if args.file else args.text
    if text is None:
        raise DslError("give query text or --file")
    d = compile_formula(text, queries.default_registry())
    if args.out:
        automata.save(d, args.out)
    counts = state_counts(d)
    print(f"tracks: {' '.join(d.tracks)}")
    print(f"states: sink={counts['sink']} trim={counts['trim']}")
    if d.width <= 2:
        accepted = automata.enumerate_accepted(d, args.limit)
        print(f"accepted (<= {args.limit}): " + " ".join(
            str(x) if d.width == 1 else f"({x[0]},{x[1]})" for x in accepted))
    return 0


def cmd_minpoly(args) -> int:
    rep = linrep.sbar_linrep()
    if not args.raw:
        rep = linrep.reduce(rep)
    p = minimal_polynomial(rep.m0)
    print(f"dim: {rep.dim}")
    print(f"minpoly: {p}")
    print(f"coefficients: {dumps_poly(p)}")
    for d in range(rep.dim + 1):
        if poly_divides(p, verify.spectral_target(d)):
            print(f"divides x^{d}(x-1)(x-2)(x^24-4096)")
            break
    else:
        print("does not divide x^d(x-1)(x-2)(x^24-4096) for any d <= dim")
    return 0


def cmd_verify(args) -> int:
    checks = verify.run(args.level, log=print, timing=lambda s: print(s, file=sys.stderr))
    failed = sum(c.status == "fail" for c in checks)
    passed = sum(c.status == "pass" for c in checks)
    print(f"summary: {passed} passed, {failed} failed, {len(checks) - passed - failed} info")
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("check\tstatus\texpected\tobserved\tsource\n")
            for c in checks:
                fh.write(f"{c.check_id}\t{c.status}\t{c.expected}\t{c.observed}\t{c.source}\n")
    return verify.exit_code(checks)


def cmd_scan_density(args) -> int:
    scan = oracles.scan_members(args.limit)
    prof = oracles.density_profile(args.limit, 1 << 10, scan)
    print(f"sup |Sbar(n) - n/8| / sqrt(n) on [1024, {args.limit}] = {prof.sup:.6f} at n = {prof.argmax}")
    print(f"8*Sbar(n) - n ranges over [{prof.min_signed}, {prof.max_signed}]")
    if args.out:
        points = [1 << k for k in range(10, args.limit.bit_length()) if 1 << k <= args.limit]
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("n\tSbar(n)\t8Sbar(n)-n\tdeviation\n")
            for n, diff, dev in prof.table(scan, points + [prof.argmax]):
                fh.write(f"{n}\t{scan.count(n)}\t{diff}\t{dev:.6f}\n")
    return 0


def cmd_theta(args) -> int:
    t = oracles.theta_direct(args.n)
    res = oracles.factorial_residue(args.n) if args.n <= 10**6 else None
    print(f"theta({args.n}) = ({t.gamma}, {t.alpha3}, {t.alpha5})")
    if res:
        print(f"{args.n}! = 2^{res.nu2} * Z with Z = {res.odd_mod8} (mod 8)")
    print("n! is " + ("not " if oracles.in_sbar(args.n) else "") + "a sum of three squares")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="factoromata", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seed", help="write the seed automata and linear representations")
    s.add_argument("--out", default="out")
    s.add_argument("--convention", choices=("sink", "trim"), default="trim")
    s.set_defaults(func=cmd_seed)

    s = sub.add_parser("eval", help="run an automaton/1 file on decimal inputs")
    s.add_argument("automaton")
    s.add_argument("values", nargs="+", type=_natural)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("count", help="S-bar(n) via the linear representation")
    s.add_argument("n", type=_natural)
    s.add_argument("--triple", choices=[_label(t) for t in all_theta_triples()])
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("gaps", help="gap lengths in S or S-bar")
    s.add_argument("set", choices=("S", "Sbar"))
    s.add_argument("--limit", type=_natural, default=64)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gaps)

    s = sub.add_parser("query", help="compile a query to an automaton")
    s.add_argument("text", nargs="?")
    s.add_argument("--file")
    s.add_argument("--limit", type=_natural, default=64)
    s.add_argument("--out")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("minpoly", help="minimal polynomial of M0")
    s.add_argument("--raw", action="store_true", help="skip the reduction step")
    s.set_defaults(func=cmd_minpoly)

    s = sub.add_parser("verify", help="run the verification suite")
    s.add_argument("--level", choices=tuple(verify.LEVELS), default="quick")
    s.add_argument("--tsv")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan-density", help="profile |Sbar(n) - n/8| / sqrt(n)")
    s.add_argument("--limit", type=_natural, default=oracles.DEFAULT_SCAN_LIMIT)
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan_density)

    s = sub.add_parser("theta", help="theta triple and factorial residue of n")
    s.add_argument("n", type=_natural)
    s.set_defaults(func=cmd_theta)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DslSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.text:
            print("  " + exc.text, file=sys.stderr)
            print("  " + " " * exc.pos + "^", file=sys.stderr)
        return 2
    except (AutomatonError, DslError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
