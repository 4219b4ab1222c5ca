"""``ksn`` command line: gen, fit, eval, check-z, report.

Exit codes: 0 success, 1 I/O or file format, 2 unrepresentable sample,
3 ambiguous float grouping, 4 bad arguments.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import dataset
from .condition_z import build_incidence, check_z
from .errors import DomainError, FormatError, GroupingAmbiguity, Unrepresentable
from .network import KolmogorovNetwork, load, save
from .numeric import NumericMode, format_exact, format_number, parse_number
from .representer import residual_report, w_table
from .transfer import DEFAULT_SEED, DEFAULT_SEGMENTS, default_stack

EXIT_OK, EXIT_IO, EXIT_UNREPRESENTABLE, EXIT_AMBIGUOUS, EXIT_USAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction_arg(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _add_stack_flags(p):
    p.add_argument("--rational", action="store_true", help="exact rational arithmetic")
    p.add_argument("--lambda", dest="lam", type=_fraction_arg, default=None)
    p.add_argument("--epsilon", type=_fraction_arg, default=None)
    p.add_argument("--phi", choices=("hashed", "power"), default="hashed")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    p.add_argument("--segments", type=int, default=DEFAULT_SEGMENTS)
    p.add_argument("--tolerance", type=float, default=None,
                   help="relative float grouping tolerance (default 1e-12)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ksn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a lattice or scatter dataset")
    g.add_argument("kind", choices=dataset.KINDS)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--grid", type=int, default=5)
    g.add_argument("--m", type=int, default=2, help="checker frequency")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--scatter", type=int, default=None, metavar="N",
                   help="N pseudo-random points instead of the lattice")
    g.add_argument("--out", "-o", default="-")

    f = sub.add_parser("fit", help="fit lookup tables to a dataset")
    f.add_argument("data")
    f.add_argument("out")
    _add_stack_flags(f)
    f.add_argument("--timestamp", default=None,
                   help="provenance timestamp (default: $SOURCE_DATE_EPOCH or empty)")

    e = sub.add_parser("eval", help="evaluate a saved network")
    e.add_argument("net")
    e.add_argument("--point", action="append", default=[],
                   help="comma-separated coordinates; repeatable")
    e.add_argument("--csv", default=None, help="CSV file of points")
    e.add_argument("--precision", type=int, default=17)

    c = sub.add_parser("check-z", help="certify Condition Z on a dataset")
    c.add_argument("data")
    _add_stack_flags(c)

    r = sub.add_parser("report", help="residuals of a network on a dataset")
    r.add_argument("net")
    r.add_argument("data")
    r.add_argument("--precision", type=int, default=17)
    return parser


def _mode(args):
    return NumericMode.RATIONAL if args.rational else NumericMode.FLOAT


def _stack_for(args, d):
    mode = _mode(args)
    try:
        return default_stack(d, mode, lam=args.lam, epsilon=args.epsilon, phi=args.phi,
                             seed=args.seed, segments=args.segments)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _num(v, mode, precision=17):
    if mode is NumericMode.RATIONAL:
        return format_exact(v)
    return format_number(v, mode, precision)


def _witness_text(mu):
    return "(" + ", ".join(format_exact(m) for m in mu) + ")"


def cmd_gen(args, out):
    if args.d < 2 or args.grid < 2:
        raise UsageError("need d > 1 and grid >= 2")
    text = dataset.generate(args.kind, args.d, args.grid, args.m, args.seed, args.scatter)
    if args.out == "-":
        out.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_fit(args, out):
    mode = _mode(args)
    sample = dataset.read_csv(args.data, mode)
    stack = _stack_for(args, sample.d)
    stamp = args.timestamp
    if stamp is None:
        stamp = os.environ.get("SOURCE_DATE_EPOCH", "")
    try:
        net = KolmogorovNetwork.fit(stack, sample, args.tolerance, timestamp=stamp)
    except Unrepresentable as exc:
        out.write(f"unrepresentable: closed path on points {exc.indices}\n")
        out.write(f"witness {_witness_text(exc.mu)}\n")
        return EXIT_UNREPRESENTABLE
    save(net, args.out)
    res = net.provenance.residual
    out.write(f"fitted n = {len(sample)}\n")
    out.write(f"max_abs_residual = {_num(res, mode)}\n")
    out.write(f"table_sizes = {' '.join(str(len(t)) for t in net.tables)}\n")
    return EXIT_OK


def cmd_eval(args, out):
    net = load(args.net)
    mode = net.mode
    points = []
    for spec in args.point:
        try:
            points.append(tuple(parse_number(c, mode) for c in spec.split(",")))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad point {spec!r}") from None
    if args.csv:
        with open(args.csv, encoding="utf-8", newline="") as fh:
            points.extend(dataset.parse_points(fh.read(), net.stack.d, mode))
    for x in points:
        try:
            y = net.eval(x)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
        out.write(_num(y, mode, args.precision) + "\n")
    return EXIT_OK


def cmd_check_z(args, out):
    mode = _mode(args)
    sample = dataset.read_csv(args.data, mode)
    stack = _stack_for(args, sample.d)
    system = build_incidence(w_table(stack, sample.points), mode, args.tolerance)
    rep = check_z(system)
    n = rep.n
    out.write(f"n = {n}\n")
    out.write(f"rank = {rep.rank}\n")
    out.write(f"s_k = {' '.join(map(str, rep.s_counts))}\n")
    out.write(f"nullspace_dim = {rep.nullspace_dim}\n")
    rank_text = f"rank = n = {n}" if rep.rank == n else f"rank = {rep.rank} < n = {n}"
    out.write(f"Z: {'satisfied' if rep.z_satisfied else 'violated'}, {rank_text}\n")
    out.write(f"solvable_for_all_F = {str(rep.solvable_for_all_F).lower()}\n")
    out.write(f"witness = {_witness_text(rep.witness) if rep.witness else 'none'}\n")
    return EXIT_OK


def cmd_report(args, out):
    net = load(args.net)
    mode = net.mode
    sample = dataset.read_csv(args.data, mode)
    rep = residual_report(net.stack, net.tables, sample)
    out.write(f"max_abs_residual = {_num(rep.max_abs_residual, mode, args.precision)}\n")
    out.write(f"table_sizes = {' '.join(map(str, rep.table_sizes))}\n")
    out.write(f"distinct_keys = {rep.distinct_keys}\n")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "fit": cmd_fit,
    "eval": cmd_eval,
    "check-z": cmd_check_z,
    "report": cmd_report,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"ksn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroupingAmbiguity as exc:
        print(f"ksn: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (OSError, FormatError) as exc:
        print(f"ksn: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"ksn: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
