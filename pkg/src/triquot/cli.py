"""Command line: invariants, distinguish, verify, census.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 unresolved,
4 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .certio import CertificateFormatError, dumps, loads
from .errors import InvalidSignature, PreconditionError, ResourceLimitError
from .l2set import l2_set
from .oracle import OracleConfig
from .signature import Triple, abelianization, classify, invariant_profile
from .witness import DistinguishConfig, distinguish, verify

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNRESOLVED, EXIT_RESOURCE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--prime-bound", type=_positive, default=None,
                   help="upper bound for constrained prime searches")
    p.add_argument("--oracle-bound", type=_positive, default=10**4,
                   help="largest group order handed to the brute-force oracle")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--out", default=None, help="output path (file or census directory)")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="triquot", description="Finite quotients of triangle groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("invariants", parents=[common], help="invariant profile of a triple")
    p.add_argument("entries", nargs=3)
    p = sub.add_parser("distinguish", parents=[common], help="certificate for two triples")
    p.add_argument("entries", nargs=6)
    p.add_argument("--strongest", action="store_true",
                   help="rank all applicable stages instead of taking the first")
    p = sub.add_parser("verify", parents=[common], help="check a certificate file")
    p.add_argument("path")
    p = sub.add_parser("census", parents=[common], help="enumerate and resolve candidate pairs")
    p.add_argument("--max-product", type=_positive, default=12_000_000)
    p.add_argument("--no-even-filter", action="store_true",
                   help="keep triples with two or more even entries")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)
    return parser


def _triple(values):
    try:
        return Triple(*(int(v) for v in values))
    except ValueError as exc:
        raise InvalidSignature(str(exc)) from None


def _dcfg(args, strongest=False):
    return DistinguishConfig(oracle=OracleConfig(max_group_order=args.oracle_bound),
                             prime_bound=args.prime_bound, strongest=strongest)


def _emit(args, text):
    if args.out and args.command != "census":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_invariants(args):
    tr = _triple(args.entries)
    prof = invariant_profile(tr)
    d, e = abelianization(tr)
    cls = classify(tr)
    members = list(l2_set(tr).members)
    if args.format == "structured":
        doc = {"triple": list(tr.as_tuple()), "class": str(cls), "gcd3": prof.gcd3,
               "lcm3": prof.lcm3, "product": prof.product, "pairwise_sum": prof.pairwise_sum,
               "ab_d": d, "ab_e": e, "euler_sum": f"{prof.euler_sum.numerator}/"
               f"{prof.euler_sum.denominator}", "even_count": prof.even_count, "l2_set": members}
        _emit(args, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        ab = "trivial (perfect)" if d == e == 1 else f"C{d} x C{e}"
        lines = [f"triple        {tr}", f"class         {cls}", f"abelianization {ab}",
                 f"gcd           {prof.gcd3}", f"lcm           {prof.lcm3}",
                 f"product       {prof.product}", f"pairwise sum  {prof.pairwise_sum}",
                 f"euler sum     {prof.euler_sum}", f"even entries  {prof.even_count}",
                 f"L2-set        {l2_set(tr)}"]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def describe(cert, t1, t2) -> str:
    """One human-readable paragraph for a certificate."""
    tri = (t1, t2)
    k = cert.kind
    if k == "identical":
        return f"identical: {t1} and {t2} are the same triple"
    if k == "invariant-mismatch":
        return f"invariant mismatch: {cert.field} is {cert.value1} for {t1} and {cert.value2} for {t2}"
    if k == "dihedral":
        return (f"dihedral: D{cert.m} is a quotient of {tri[cert.side]} "
                f"but not of {tri[1 - cert.side]}")
    if k == "psl-quotient":
        a, b = tri[cert.quotient_side], tri[1 - cert.quotient_side]
        why = (f"order gap at entry {cert.gap_entry}" if cert.nonquotient == "order-gap"
               else "exhaustive search")
        return f"PSL(2,{cert.p}) is a quotient of {a} but not of {b} ({why})"
    if k == "suppression":
        a, b = tri[1 - cert.quotient_side], tri[cert.quotient_side]
        scope = " [extended scope: composite q]" if cert.extended_scope else ""
        return (f"suppression: q = {cert.q}, reduced triple {cert.reduced}; {cert.group} is a "
                f"quotient of {b} but not of {a} (no nontrivial element of order dividing "
                f"{cert.q}){scope}")
    if k == "smooth-generation":
        a, b = tri[cert.smooth_side], tri[1 - cert.smooth_side]
        text = (f"smooth generation: {cert.group} is {a}-generated but not {b}-generated "
                f"(no element of order {cert.blocked_order}")
        if cert.blocked_entry is not None:
            text += f", entry {cert.blocked_entry} unreachable"
        text += f"); primes {', '.join(map(str, cert.primes))}"
        if cert.split is not None:
            sp = cert.split
            text += (f"; split q1 = {sp.q1}, q2 = {sp.q2}, ({','.join(map(str, sp.first))}) x "
                     f"({','.join(map(str, sp.second))})")
        return text + f"; relies on {cert.depends_on}"
    if k == "unresolved":
        return "unresolved: " + "; ".join(f"{n}: {note}" for n, note in cert.attempts)
    return repr(cert)


def cmd_distinguish(args):
    vals = args.entries
    t1, t2 = _triple(vals[:3]), _triple(vals[3:])
    cert = distinguish(t1, t2, _dcfg(args, args.strongest))
    if args.format == "structured":
        _emit(args, dumps(cert, t1, t2))
    else:
        _emit(args, describe(cert, t1, t2) + "\n")
    return EXIT_UNRESOLVED if cert.kind == "unresolved" else EXIT_OK


def cmd_verify(args):
    try:
        with open(args.path) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"triquot: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        cert, t1, t2 = loads(text)
    except (CertificateFormatError, InvalidSignature) as exc:
        print(f"triquot: {exc}", file=sys.stderr)
        return EXIT_INPUT
    verdict = verify(cert, t1, t2, _dcfg(args))
    if args.format == "structured":
        sys.stdout.write(json.dumps({"ok": verdict.ok, "reasons": verdict.reasons},
                                    sort_keys=True, indent=2) + "\n")
    elif verdict:
        print(f"ok: {describe(cert, t1, t2)}")
    else:
        print("verification failed:")
        for r in verdict.reasons:
            print(f"  - {r}")
    return EXIT_OK if verdict else EXIT_VERIFY


def cmd_census(args):
    from .census import CensusConfig, resolve_all
    if args.max_product < 8:
        # no hyperbolic triple has product below 8 (the smallest is 2*3*7 = 42)
        lines = [f"max_product = {args.max_product}", "candidate_pairs = 0", "unresolved = 0"]
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_OK
    cfg = CensusConfig(max_product=args.max_product, even_filter=not args.no_even_filter,
                       threads=args.threads, backend=args.backend, out_dir=args.out,
                       distinguish=_dcfg(args))
    start = time.perf_counter()
    report = resolve_all(cfg)
    elapsed = time.perf_counter() - start
    if args.format == "structured":
        doc = {}
        for line in report.summary_lines():
            key, value = line.split(" = ", 1)
            doc[key] = int(value) if value.isdigit() else value
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(report.summary_text())
    print(f"census finished in {elapsed:.1f} s", file=sys.stderr)
    return EXIT_UNRESOLVED if report.unresolved else EXIT_OK


COMMANDS = {"invariants": cmd_invariants, "distinguish": cmd_distinguish,
            "verify": cmd_verify, "census": cmd_census}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidSignature, PreconditionError) as exc:
        print(f"triquot: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        shard = getattr(exc, "shard", None)
        where = f" (shard {shard})" if shard is not None else ""
        print(f"triquot: resource limit{where}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
