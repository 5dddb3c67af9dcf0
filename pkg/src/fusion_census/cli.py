"""Command-line front end.

Exit codes: 0 success, 2 usage or domain error, 3 verification mismatch,
4 resource cap exceeded.  Output is deterministic; wall times are only
printed with ``--timing``.
"""

import argparse
import json
import sys

import numpy as np
import sympy

from . import lemmas, oracle
from .classify import CensusReport, census_pq2, census_R3A
from .errors import DomainError, FusionCensusError, ResourceError, UnsupportedError
from .finab import FinAbGroup, GroupHom
from .formsolve import decompose

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_CAP = 0, 2, 3, 4

REPORT_PQ2 = [(3, 2), (3, 5), (3, 7), (3, 11), (5, 19), (5, 11), (7, 13), (2, 3), (2, 5), (5, 2)]
REPORT_R3A = ["trivial", "2^1:2", "5^1:1", "2^2:2", "2^1:4", "2^1:2+2^2:2", "2^1:2+7^1:4"]
R3A_ORACLE_MAX = 64     # brute-force gamma orbits are only promised up to this order


def _emit_report(report, args):
    if args.format == "tsv":
        sys.stdout.write(report.to_tsv())
    else:
        print(report.to_json(timing=args.timing))
    if args.oracle and not report.oracle_checked:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_census_pq2(args):
    report = census_pq2(args.p, args.q, args.mode, oracle_check=args.oracle, cap=args.cap)
    return _emit_report(report, args)


def cmd_census_r3a(args):
    report = census_R3A(args.group, oracle_check=args.oracle, cap=args.cap)
    return _emit_report(report, args)


def cmd_verify_lemma(args):
    name = args.name
    if name == "uniqueskew":
        check = lemmas.verify_uniqueskew(args.q, args.n)
    elif name == "uniquegamma":
        check = lemmas.verify_uniquegamma(args.q, args.n, args.a)
    elif name == "commutes":
        check = lemmas.verify_commutes(args.qn)
    elif name == "qgp":
        check = lemmas.verify_qgp(args.group, samples=args.samples, seed=args.seed)
    else:
        check = lemmas.verify_claim2(args.p, args.q, cap=args.cap)
    print(check.to_json())
    return EXIT_OK if check.passed else EXIT_MISMATCH


def cmd_decompose_form(args):
    A = FinAbGroup.parse(args.group)
    gamma = GroupHom(A, A, np.array(json.loads(args.gamma), dtype=np.int64))
    print(json.dumps(json.loads(decompose(A, gamma).to_json()), indent=2))
    return EXIT_OK


def cmd_enumerate_orth(args):
    A = FinAbGroup.parse(args.group)
    elems = oracle.enumerate_orthogonal_group(A, cap=args.cap)
    if args.count_only:
        print(json.dumps({"group": A.descriptor(), "order": len(elems)}))
    else:
        print(json.dumps({"group": A.descriptor(), "order": len(elems),
                          "elements": [M.matrix().tolist() for M in elems]}))
    return EXIT_OK


def cmd_report(args):
    ok = True
    rows = []
    for p, q in REPORT_PQ2:
        rep = census_pq2(p, q, "general", oracle_check=args.oracle, cap=args.cap)
        ok &= rep.oracle_checked or not args.oracle
        rows.append(rep.to_tsv().splitlines()[1])
    for desc in REPORT_R3A:
        check = args.oracle and FinAbGroup.parse(desc).order <= R3A_ORACLE_MAX
        rep = census_R3A(desc, oracle_check=check, cap=args.cap)
        ok &= rep.oracle_checked or not check
        row = rep.to_tsv().splitlines()[1]
        if args.oracle and not check:
            row = row.rsplit("\t", 1)[0] + "\tskipped"
        rows.append(row)
    sys.stdout.write("\t".join(CensusReport.TSV_COLUMNS) + "\n")
    sys.stdout.write("\n".join(rows) + "\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def _prime(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not sympy.isprime(value):
        raise argparse.ArgumentTypeError(f"{value} is not prime")
    return value


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fusion-census",
        description="Counts and exhaustive checks for Z/p-graded extensions of pointed categories.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, oracle_flag=True, fmt=True):
        if oracle_flag:
            sp.add_argument("--oracle", action="store_true", help="re-derive counts by brute force")
        sp.add_argument("--cap", type=_positive, default=None, help="override the oracle scan cap")
        if fmt:
            sp.add_argument("--format", choices=("json", "tsv"), default="json")
            sp.add_argument("--timing", action="store_true", help="include wall time in JSON")

    sp = sub.add_parser("census-pq2", help="fusion categories of dimension p q^2")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--q", type=_prime, required=True)
    sp.add_argument("--mode", choices=("grading", "general"), default="general")
    common(sp)
    sp.set_defaults(func=cmd_census_pq2)

    sp = sub.add_parser("census-r3a", help="categorifications of R_{3,A}")
    sp.add_argument("--group", required=True, help='descriptor such as "2^1:2+7^1:4"')
    common(sp)
    sp.set_defaults(func=cmd_census_r3a)

    sp = sub.add_parser("verify-lemma", help="run one exhaustive structural check")
    sp.add_argument("--name", required=True,
                    choices=("uniqueskew", "uniquegamma", "qgp", "commutes", "claim2"))
    sp.add_argument("--p", type=_prime, default=3)
    sp.add_argument("--q", type=_prime, default=2)
    sp.add_argument("--n", type=_positive, default=1)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--qn", type=_positive, default=4)
    sp.add_argument("--group", default="2^1:2")
    sp.add_argument("--samples", type=_positive, default=None)
    sp.add_argument("--seed", type=int, default=0)
    common(sp, oracle_flag=False, fmt=False)
    sp.set_defaults(func=cmd_verify_lemma)

    sp = sub.add_parser("decompose-form", help="orthogonal block decomposition of gamma")
    sp.add_argument("--group", required=True)
    sp.add_argument("--gamma", required=True, help="matrix as JSON, e.g. [[1,0],[1,1]]")
    sp.set_defaults(func=cmd_decompose_form)

    sp = sub.add_parser("enumerate-orth", help="list O(A + A*) by brute force")
    sp.add_argument("--group", required=True)
    sp.add_argument("--count-only", action="store_true")
    common(sp, oracle_flag=False, fmt=False)
    sp.set_defaults(func=cmd_enumerate_orth)

    sp = sub.add_parser("report", help="TSV table of all headline counts")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource cap exceeded: {exc} (raise it with --cap or FUSION_CENSUS_CAP)",
              file=sys.stderr)
        return EXIT_CAP
    except (DomainError, UnsupportedError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FusionCensusError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
