"""Command-line front end.

Exit codes for ``eval``: 0 success, 1 parse error, 2 oracle disagreement,
3 oracle cap exceeded.  Every input is still processed; the code reported is
the one of the first failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterator, Sequence

from .bench import SHAPES, BenchRow, bench
from .errors import CapExceeded, ChowdegError, VariantPreconditionViolated
from .forest import forest_to_dot, integral_value, redundancy_forest
from .identities import IdentityInstance, check_identity
from .keel import Monomial, parse_monomial, render_monomial
from .loaded_tree import monomial_to_tree, tree_to_dot, tree_to_json
from .reduction import DEFAULT_ORACLE_CAP, oracle_value

EXIT_PARSE = 1
EXIT_DISAGREE = 2
EXIT_CAP = 3


@dataclass
class EvalReport:
    input: str
    n: int
    degree: int
    value: int
    proper: bool
    classification: str
    timings: dict[str, float] = field(default_factory=dict)
    oracle: int | None = None

    def to_text(self) -> str:
        s = f"{self.input}\tvalue={self.value}\tclass={self.classification}\tproper={str(self.proper).lower()}"
        if self.oracle is not None:
            s += f"\toracle={self.oracle}"
        return s


def _canonical(m: Monomial) -> str:
    try:
        return render_monomial(m)
    except ChowdegError:
        return m.compact()


def evaluate(m: Monomial) -> EvalReport:
    iv = integral_value(m)
    timings = {k: round(v * 1e6, 1) for k, v in iv.timings.items()}
    return EvalReport(_canonical(m), m.n, m.degree, iv.value, iv.proper, iv.classification, timings)


def _lines(inputs: Sequence[str]) -> Iterator[tuple[str, str]]:
    """``(origin, line)`` for every non-blank, non-comment monomial line."""
    sources = inputs or ["-"]
    for src in sources:
        if src == "-":
            origin, text = "<stdin>", sys.stdin.read()
        elif os.path.isfile(src):
            origin, text = src, Path(src).read_text(encoding="utf-8")
        else:
            origin, text = "<arg>", src
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield f"{origin}:{lineno}", line


def cmd_eval(args: argparse.Namespace) -> int:
    code = 0
    cap = args.oracle_cap
    if args.dot:
        Path(args.dot).mkdir(parents=True, exist_ok=True)
    for idx, (where, line) in enumerate(_lines(args.inputs)):
        try:
            m = parse_monomial(line)
        except ChowdegError as exc:
            print(f"{where}: parse error: {exc}", file=sys.stderr)
            code = code or EXIT_PARSE
            continue
        report = evaluate(m)
        if args.oracle:
            try:
                report.oracle = oracle_value(m, cap=cap, filter_balanced=args.filter_balanced)
            except CapExceeded as exc:
                print(f"{where}: {exc}", file=sys.stderr)
                code = code or EXIT_CAP
            else:
                if report.oracle != report.value:
                    print(f"{where}: oracle disagreement: forest {report.value}, oracle {report.oracle}", file=sys.stderr)
                    code = code or EXIT_DISAGREE
        if args.dot and report.classification in ("clever", "general"):
            tree = monomial_to_tree(m, check=False)
            Path(args.dot, f"{idx:04d}_tree.dot").write_text(tree_to_dot(tree), encoding="utf-8")
            Path(args.dot, f"{idx:04d}_forest.dot").write_text(forest_to_dot(redundancy_forest(tree)), encoding="utf-8")
        print(json.dumps(asdict(report)) if args.json else report.to_text())
    return code


def _m_grid(r: int, m_max: int) -> Iterator[tuple[int, ...]]:
    return product(range(1, m_max + 1), repeat=r)


def cmd_identities(args: argparse.Namespace) -> int:
    variants = [1, 2, 3] if args.variant == "all" else [int(args.variant)]
    if args.m:
        grid = [tuple(int(x) for x in args.m.split(","))]
    else:
        rs = [args.r] if args.r else range(1, args.r_max + 1)
        grid = [m for r in rs for m in _m_grid(r, args.m_max)]
    rows = []
    failed = False
    for variant in variants:
        for m in grid:
            row = {"variant": variant, "r": len(m), "m": ",".join(map(str, m)), "lhs": "", "rhs": "", "status": ""}
            try:
                res = check_identity(variant, IdentityInstance(m))
            except VariantPreconditionViolated as exc:
                row["status"] = "skipped"
                row["note"] = str(exc)
            else:
                row.update(lhs=res.lhs, rhs=res.rhs, status="pass" if res.holds else "fail")
                failed |= not res.holds
            rows.append(row)
    if args.format == "json":
        json.dump(rows, sys.stdout, indent=1)
        print()
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=["variant", "r", "m", "lhs", "rhs", "status", "note"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return 1 if failed else 0


def cmd_bench(args: argparse.Namespace) -> int:
    ns = [int(x) for x in args.n.split(",")]
    rows = bench(args.shape, ns, repeat=args.repeat, seed=args.seed, weight=args.weight)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(BenchRow.FIELDS)
    for row in rows:
        w.writerow([f"{x:.6f}" if isinstance(x, float) else ("" if x is None else x) for x in row.as_row()])
    return 0


def cmd_export_tree(args: argparse.Namespace) -> int:
    try:
        m = parse_monomial(args.monomial)
        tree = monomial_to_tree(m)
    except ChowdegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.format == "json":
        out = json.dumps(tree_to_json(tree), indent=1) + "\n"
    elif args.forest:
        out = forest_to_dot(redundancy_forest(tree))
    else:
        out = tree_to_dot(tree)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0


def _default_cap() -> int:
    return int(os.environ.get("CHOWDEG_ORACLE_CAP", DEFAULT_ORACLE_CAP))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowdeg", description="Integral values of Keel boundary monomials.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate monomials (one per line; '#' starts a comment)")
    e.add_argument("inputs", nargs="*", help="files, '-' for stdin, or monomial text")
    e.add_argument("--oracle", action="store_true", help="cross-check with linear reduction")
    e.add_argument("--oracle-cap", type=int, default=None, help="largest n for the oracle (default $CHOWDEG_ORACLE_CAP or 9)")
    e.add_argument("--filter-balanced", action="store_true", help="drop unbalanced terms during reduction")
    e.add_argument("--json", action="store_true", help="one JSON object per line")
    e.add_argument("--dot", metavar="DIR", help="write tree and forest DOT files here")
    e.set_defaults(func=cmd_eval)

    i = sub.add_parser("identities", help="sweep the multinomial identities")
    i.add_argument("--variant", choices=["1", "2", "3", "all"], default="all")
    i.add_argument("--r", type=int, default=None, help="only this number of parts")
    i.add_argument("--r-max", type=int, default=4)
    i.add_argument("--m-max", type=int, default=3)
    i.add_argument("--m", default=None, help="a single instance, e.g. 2,2,1")
    i.add_argument("--format", choices=["csv", "json"], default="csv")
    i.set_defaults(func=cmd_identities)

    b = sub.add_parser("bench", help="stage timings as CSV")
    b.add_argument("--shape", choices=SHAPES, default="clever-caterpillar")
    b.add_argument("--n", default="100,200,400", help="comma-separated sizes (rays for sun-like)")
    b.add_argument("--repeat", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--weight", type=int, default=2, help="edge weight for sun-like rays")
    b.set_defaults(func=cmd_bench)

    x = sub.add_parser("export-tree", help="loaded tree of a tree monomial as DOT or JSON")
    x.add_argument("monomial")
    x.add_argument("--format", choices=["dot", "json"], default="dot")
    x.add_argument("--forest", action="store_true", help="export the redundancy forest instead")
    x.add_argument("-o", "--output", default=None)
    x.set_defaults(func=cmd_export_tree)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "oracle_cap", None) is None and args.command == "eval":
        args.oracle_cap = _default_cap()
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
