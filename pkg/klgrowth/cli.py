#!/usr/bin/env python3
"""
Batch command line for the klgrowth engine.

Every subcommand builds what it needs (root system, group table, KL table),
streams machine-parseable records to stdout as CSV or JSON and prints
progress/diagnostics to stderr. Truncated statistics always carry their
window L and the stabilized flag; for those commands the table is built to
L+2 so the flag can be decided.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from dotenv import load_dotenv

from klgrowth.a1oracle import verify_against_engine
from klgrowth.errors import DomainError, ResourceCapError, TruncationError
from klgrowth.extcalc import (
    c_n_max,
    cx_sequences,
    ext_L_L,
    ext_row,
    mu_row_sums,
    sum_over_nu,
    wplus_elements,
    zigzag_bound,
)
from klgrowth.klcore import KLTable, cached_bound, kl_polynomial, load_cache, mu, save_cache
from klgrowth.rootsys import (
    TYPE_LABELS,
    RootSystem,
    build_root_system,
    compute_phi0,
    dot_action,
    is_exceptional,
    smallest_valid_l,
)
from klgrowth.symweights import DEFAULT_MAX_CELLS, max_multiplicity, s_phi_estimate, triple_witness, weight_multiplicity
from klgrowth.weylaff import DEFAULT_MAX_ELEMENTS, GroupTable, generate, is_wplus, parse_word, word_of

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_TRUNCATION = 3
EXIT_RESOURCE = 4

CACHE_DIR_ENV = "KLGROWTH_CACHE_DIR"
DEFAULT_MAX_LENGTH = 10
DEFAULT_DEGREE = 4

# Truncated statistics: built to L+2 so stabilization can be judged.
WINDOWED_COMMANDS = {"sum-nu", "cn", "growth", "zigzag", "musums"}


@dataclass
class RunConfig:
    """Settings shared by every subcommand."""

    command: str
    type_label: str = "A"
    rank: int = 1
    affine: bool = True
    max_length: int = DEFAULT_MAX_LENGTH
    degree: int = DEFAULT_DEGREE
    l: int | None = None
    output_format: str = "csv"
    cache: Path | None = None
    threads: int = 1
    max_elements: int = DEFAULT_MAX_ELEMENTS
    max_cells: int = DEFAULT_MAX_CELLS
    quiet: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.max_length < 0:
            raise DomainError(f"--max-length must be nonnegative, got {self.max_length}")
        if self.degree < 0:
            raise DomainError(f"degree bound must be nonnegative, got {self.degree}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"--format must be csv or json, got {self.output_format}")
        if self.threads < 1:
            raise DomainError(f"--threads must be at least 1, got {self.threads}")

    @property
    def build_length(self) -> int:
        return self.max_length + 2 if self.command in WINDOWED_COMMANDS else self.max_length

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        max_length = args.max_length
        if max_length is None:
            words = [getattr(args, name, None) for name in ("y", "x", "a", "b")]
            words = [w for w in words if w]
            if args.command in ("klpoly", "mu") and words:
                # a word of k letters names an element of length <= k
                max_length = max(len(w.split()) for w in words)
            else:
                max_length = DEFAULT_MAX_LENGTH
        return cls(
            command=args.command,
            type_label=args.type_label,
            rank=args.rank,
            affine=args.affine,
            max_length=max_length,
            degree=getattr(args, "degree", DEFAULT_DEGREE),
            l=args.l,
            output_format=args.format,
            cache=_resolve_cache(args.cache),
            threads=args.threads,
            max_elements=args.max_elements,
            max_cells=args.max_cells,
            quiet=args.quiet,
            verbose=args.verbose,
        )


def _resolve_cache(value: str | None) -> Path | None:
    if not value:
        return None
    path = Path(value)
    if not path.is_absolute():
        load_dotenv()
        base = os.getenv(CACHE_DIR_ENV)
        if base:
            path = Path(base) / path
    return path


# -- output -------------------------------------------------------------------


def _say(cfg: RunConfig, message: str) -> None:
    if not cfg.quiet:
        print(message, file=sys.stderr)


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return " ".join(str(v) for v in value)
    return value


def _json_value(value: Any) -> Any:
    return list(value) if isinstance(value, tuple) else value


def _emit(cfg: RunConfig, header: Sequence[str], rows: Sequence[Sequence[Any]], summary: dict | None = None) -> None:
    if cfg.output_format == "json":
        payload: dict[str, Any] = {"records": [{k: _json_value(v) for k, v in zip(header, row)} for row in rows]}
        if summary:
            payload.update(summary)
        json.dump(payload, sys.stdout, indent=2, ensure_ascii=False)
        sys.stdout.write("\n")
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_cell(v) for v in row] for row in rows)


def _emit_json(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


# -- building blocks ----------------------------------------------------------


def _root_system(cfg: RunConfig) -> RootSystem:
    return build_root_system(cfg.type_label, cfg.rank)


def _group(cfg: RunConfig, length: int | None = None, rs: RootSystem | None = None) -> GroupTable:
    rs = rs or _root_system(cfg)
    length = cfg.build_length if length is None else length
    table = generate(rs, length, cfg.affine, cfg.max_elements, verbose=cfg.verbose)
    _say(cfg, f"🧮 {table.label}: {len(table)} elements")
    return table


def _kl_table(cfg: RunConfig, table: GroupTable | None = None) -> KLTable:
    table = table or _group(cfg)
    bound = cached_bound(table, cfg.cache) if cfg.cache and cfg.cache.exists() else None
    if bound is not None and bound >= table.max_length:
        kl = load_cache(table, cfg.cache, verbose=cfg.verbose)
        _say(cfg, f"💾 Loaded KL table from {cfg.cache} (L={bound})")
        return kl
    if cfg.cache and cfg.cache.exists() and bound is None:
        # another group or format: leave the file alone
        _say(cfg, f"⚠️ {cfg.cache} is not a cache for {table.label}, recomputing")
        return KLTable(table, verbose=cfg.verbose).build_all(cfg.threads)
    if bound is not None:
        _say(cfg, f"⚠️ {cfg.cache} only reaches L={bound}, recomputing to L={table.max_length}")
    kl = KLTable(table, verbose=cfg.verbose).build_all(cfg.threads)
    if cfg.cache:
        cfg.cache.parent.mkdir(parents=True, exist_ok=True)
        count = save_cache(kl, cfg.cache)
        _say(cfg, f"💾 Wrote {count} polynomials to {cfg.cache}")
    return kl


def _stat_row(n: Any, stat) -> list[Any]:
    return [n, stat.value, stat.truncation_L, stat.stabilized]


STAT_HEADER = ["n", "value", "L", "stabilized"]


# -- subcommands --------------------------------------------------------------


def cmd_roots(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = _root_system(cfg)
    rows = [[beta, rs.height(beta), "short" if rs.is_short(beta) else "long"] for beta in rs.positive_roots]
    _say(cfg, f"📊 {rs.label}: {len(rows)} positive roots, h={rs.coxeter_number}, alpha0={rs.alpha0}")
    _emit(
        cfg,
        ["root", "height", "kind"],
        rows,
        {"type": rs.label, "coxeter_number": rs.coxeter_number, "rho": list(rs.rho.coords), "alpha0": list(rs.alpha0)},
    )
    return EXIT_OK


def cmd_elements(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = _root_system(cfg)
    table = _group(cfg, rs=rs)
    l = cfg.l or smallest_valid_l(rs)
    if is_exceptional(rs, l):
        _say(cfg, f"⚠️  l={l} is exceptional for {rs.label}")
    lam_minus = rs.rho.scaled(-2)
    rows = [
        [x, word_of(table, x), table.lengths[x], is_wplus(table, x), dot_action(rs, table.elements[x], lam_minus, l).coords]
        for x in range(len(table))
    ]
    _emit(cfg, ["index", "word", "length", "wplus", "weight"], rows, {"group": table.label, "l": l})
    return EXIT_OK


def cmd_klpoly(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    y = parse_word(kl.table, args.y)
    x = parse_word(kl.table, args.x)
    coeffs = kl_polynomial(kl, y, x).coefficients()
    if cfg.output_format == "json":
        _emit_json({"y": word_of(kl.table, y), "x": word_of(kl.table, x), "coeffs": coeffs})
    else:
        print(",".join(str(c) for c in coeffs))
    return EXIT_OK


def cmd_kltable(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    t = kl.table
    rows = [[word_of(t, y), word_of(t, x), ",".join(str(c) for c in p.coefficients())] for y, x, p in kl.pairs()]
    _say(cfg, f"✅ {len(rows)} nonzero polynomials")
    _emit(cfg, ["y_word", "x_word", "coeffs"], rows)
    return EXIT_OK


def cmd_mu(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    a = parse_word(kl.table, args.a)
    b = parse_word(kl.table, args.b)
    _emit(cfg, ["a_word", "b_word", "mu"], [[word_of(kl.table, a), word_of(kl.table, b), mu(kl, a, b)]])
    return EXIT_OK


def cmd_ext(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    x = parse_word(kl.table, args.x)
    y = parse_word(kl.table, args.y)
    rows = [[word_of(kl.table, x), word_of(kl.table, y), args.n, ext_L_L(kl, x, y, args.n)]]
    _emit(cfg, ["x_word", "y_word", "n", "dim"], rows)
    return EXIT_OK


def cmd_ext_table(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    t = kl.table
    rows = []
    for x in wplus_elements(kl):
        for (y, n), dim in ext_row(kl, x).items():
            if n <= cfg.degree:
                rows.append([word_of(t, x), word_of(t, y), n, dim])
    _say(cfg, f"✅ {len(rows)} nonzero Ext dimensions up to degree {cfg.degree}")
    _emit(cfg, ["x_word", "y_word", "n", "dim"], rows)
    return EXIT_OK


def cmd_sum_nu(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    x = parse_word(kl.table, args.x)
    stat = sum_over_nu(kl, x, args.n, cfg.max_length)
    _emit(cfg, STAT_HEADER, [_stat_row(args.n, stat)])
    return EXIT_OK


def cmd_cn(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    rows = [_stat_row(n, c_n_max(kl, n, cfg.max_length)) for n in range(cfg.degree + 1)]
    _emit(cfg, STAT_HEADER, rows)
    return EXIT_OK


def cmd_growth(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    window = tuple(args.window) if args.window else None
    sequences = dict(zip(("cx", "Cx"), cx_sequences(kl, cfg.degree, cfg.max_length, window)))
    rows = []
    summary = {}
    for name, seq in sequences.items():
        for n, (value, stable) in enumerate(zip(seq.terms, seq.stabilized)):
            rows.append([name, n, value, seq.truncation_L, stable])
        summary[f"{name}_gamma"] = seq.estimated_gamma
        summary[f"{name}_window"] = list(seq.window)
        gamma = "undefined" if seq.estimated_gamma is None else f"{seq.estimated_gamma:.3f}"
        _say(cfg, f"📊 {name}: gamma estimate {gamma} on n in [{seq.window[0]}, {seq.window[1]}]")
    _emit(cfg, ["sequence"] + STAT_HEADER, rows, summary)
    return EXIT_OK


def cmd_zigzag(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    x = parse_word(kl.table, args.x)
    stat = zigzag_bound(kl, x, args.n, cfg.max_length)
    partner = sum_over_nu(kl, x, args.n, cfg.max_length)
    if stat.stabilized and partner.stabilized and partner.value > stat.value:
        _say(cfg, f"⚠️  sum over nu ({partner.value}) exceeds the zigzag bound ({stat.value})")
    else:
        _say(cfg, f"📊 sum over nu = {partner.value} (stabilized: {partner.stabilized})")
    _emit(cfg, STAT_HEADER, [_stat_row(args.n, stat)])
    return EXIT_OK


def cmd_musums(cfg: RunConfig, args: argparse.Namespace) -> int:
    kl = _kl_table(cfg)
    sums = mu_row_sums(kl, cfg.max_length)
    rows = [[word_of(kl.table, x), s.value, s.truncation_L, s.stabilized] for x, s in sums.rows.items()]
    for label, stat in (("R", sums.r_estimate), ("R'", sums.rprime_estimate)):
        if stat is not None:
            rows.append([label, stat.value, stat.truncation_L, stat.stabilized])
    if not sums.rows:
        _say(cfg, f"⚠️  no W+ element has length <= {cfg.max_length}")
    _emit(cfg, ["x_word", "value", "L", "stabilized"], rows)
    return EXIT_OK


def cmd_weights(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = _root_system(cfg)
    if args.sigma:
        sigma = tuple(int(c) for c in args.sigma.split())
        count = weight_multiplicity(rs, args.m, sigma, cfg.max_cells)
    else:
        sigma, count = max_multiplicity(rs, args.m, cfg.max_cells)
    _emit(cfg, ["m", "sigma", "count"], [[args.m, sigma, count]])
    return EXIT_OK


def cmd_triple_bound(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = _root_system(cfg)
    witness = triple_witness(rs, args.n, family=args.family, max_cells=cfg.max_cells)
    status = "✅" if witness.distinct_ok and witness.count >= witness.bound else "⚠️ "
    _say(cfg, f"{status} {rs.label}: {len(witness.triples)} triples, count {witness.count} >= bound {witness.bound}?")
    if cfg.output_format == "json":
        _emit_json(witness.to_dict())
    else:
        report = witness.to_dict()
        _emit(cfg, list(report), [list(report.values())])
    return EXIT_OK


def cmd_sphi(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = _root_system(cfg)
    window = tuple(args.window) if args.window else None
    seq = s_phi_estimate(rs, cfg.degree, window, cfg.max_cells)
    gamma = "undefined" if seq.estimated_gamma is None else f"{seq.estimated_gamma:.3f}"
    _say(cfg, f"📊 {rs.label}: gamma estimate {gamma} on n in [{seq.window[0]}, {seq.window[1]}]")
    rows = [[n, value] for n, value in enumerate(seq.terms)]
    _emit(cfg, ["n", "value"], rows, {"gamma": seq.estimated_gamma, "window": list(seq.window)})
    return EXIT_OK


def cmd_verify_a1(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = build_root_system("A", 1)
    table = generate(rs, args.xmax, True, cfg.max_elements, verbose=cfg.verbose)
    kl = KLTable(table).build_all(cfg.threads)
    report = verify_against_engine(kl, args.xmax, args.nmax)
    if cfg.output_format == "json":
        _emit_json({"checked": report.checked, "disagreements": [list(d) for d in report.disagreements]})
    else:
        print(f"checked: {report.checked}")
        print(f"disagreements: {len(report.disagreements)}")
        for X, Y, n, expected, found in report.disagreements:
            print(f"  X={X} Y={Y} n={n}: expected {expected}, engine {found}")
    _say(cfg, "✅ A1 oracle agrees with the engine" if report.ok else "❌ A1 oracle disagrees with the engine")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_exceptional(cfg: RunConfig, args: argparse.Namespace) -> int:
    rs = _root_system(cfg)
    values = [cfg.l] if cfg.l else range(2, args.lmax or 2 * rs.coxeter_number + 2)
    rows = []
    for l in values:
        if l < 2:
            raise DomainError(f"l must be at least 2, got {l}")
        rows.append([l, is_exceptional(rs, l), len(compute_phi0(rs, l))])
    _emit(cfg, ["l", "exceptional", "phi0_size"], rows, {"type": rs.label, "coxeter_number": rs.coxeter_number})
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "roots": cmd_roots,
    "elements": cmd_elements,
    "klpoly": cmd_klpoly,
    "kltable": cmd_kltable,
    "mu": cmd_mu,
    "ext": cmd_ext,
    "ext-table": cmd_ext_table,
    "sum-nu": cmd_sum_nu,
    "cn": cmd_cn,
    "growth": cmd_growth,
    "zigzag": cmd_zigzag,
    "musums": cmd_musums,
    "weights": cmd_weights,
    "lemma34": cmd_triple_bound,
    "triple-bound": cmd_triple_bound,
    "sphi": cmd_sphi,
    "verify-a1": cmd_verify_a1,
    "exceptional": cmd_exceptional,
}


# -- argument parsing ---------------------------------------------------------


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("group")
    group.add_argument("--type", dest="type_label", type=str.upper, choices=TYPE_LABELS, default="A",
                       help="Root system type (default: A)")
    group.add_argument("--rank", type=int, default=1, help="Rank (default: 1)")
    mode = group.add_mutually_exclusive_group()
    mode.add_argument("--affine", dest="affine", action="store_true", default=True,
                      help="Use the affine Weyl group (default)")
    mode.add_argument("--finite", dest="affine", action="store_false", help="Use the finite Weyl group")
    group.add_argument("--max-length", "-L", type=int, default=None,
                       help=f"Length bound / truncation window L (default: {DEFAULT_MAX_LENGTH})")
    group.add_argument("--l", type=int, default=None, help="Value of l (default: smallest non-exceptional l > h)")

    run = common.add_argument_group("run")
    run.add_argument("--format", choices=("csv", "json"), default="csv", help="Output format (default: csv)")
    run.add_argument("--cache", help=f"KL cache file; relative paths resolve against ${CACHE_DIR_ENV}")
    run.add_argument("--threads", type=int, default=1, help="Worker threads for the KL build (default: 1)")
    run.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS, help="Cap on group table size")
    run.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS, help="Cap on partition table volume")
    run.add_argument("--quiet", "-q", action="store_true", help="Suppress diagnostics on stderr")
    run.add_argument("--verbose", "-v", action="store_true", help="Print per-length progress on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klgrowth",
        description="Kazhdan-Lusztig tables, Ext dimensions and growth statistics for affine Weyl groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  %(prog)s roots --type G --rank 2
  %(prog)s klpoly --type A --rank 1 --y "s1" --x "s1 s0 s1"
  %(prog)s kltable --type A --rank 2 -L 10 --cache a2.klc --threads 4
  %(prog)s growth --type A --rank 1 -L 41 --nmax 20 --window 8 20
  %(prog)s lemma34 --type D --rank 4 --n 2 --format json   # alias: triple-bound
  %(prog)s verify-a1 --xmax 15 --nmax 30

Exit codes:
  0 success, 1 verification failed, 2 bad arguments, 3 truncation window, 4 resource cap

Environment Variables:
  {CACHE_DIR_ENV}    Directory for relative --cache paths (also read from .env)
        """,
    )
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, help_text: str, aliases: Sequence[str] = ()) -> argparse.ArgumentParser:
        return sub.add_parser(name, aliases=list(aliases), parents=[common], help=help_text, description=help_text)

    def degree(p: argparse.ArgumentParser, default: int = DEFAULT_DEGREE) -> None:
        p.add_argument("--nmax", dest="degree", type=int, default=default, help=f"Degree bound N (default: {default})")

    def window(p: argparse.ArgumentParser) -> None:
        p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"), help="Fit window for the growth estimate")

    add("roots", "List positive roots")
    add("elements", "List group elements up to the length bound")
    p = add("klpoly", "One Kazhdan-Lusztig polynomial P_{y,x}")
    p.add_argument("--y", required=True, help='Lower element as a word, e.g. "s1"')
    p.add_argument("--x", required=True, help='Upper element as a word, e.g. "s1 s0 s1"')
    add("kltable", "All nonzero KL polynomials up to the length bound")
    p = add("mu", "mu coefficient of two elements")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p = add("ext", "dim Ext^n(L(x), L(y)) for W+ elements x, y")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--n", type=int, required=True)
    degree(add("ext-table", "All nonzero Ext dimensions between W+ elements"))
    p = add("sum-nu", "Truncated sum over nu of dim Ext^n(L(x), L(nu))")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)
    degree(add("cn", "Maxima C^(n) of KL coefficients over W+ pairs"))
    p = add("growth", "cx and Cx sequences with growth estimates")
    degree(p)
    window(p)
    p = add("zigzag", "Down-then-up mu-chain bound")
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)
    add("musums", "Row sums of mu over W+, with R and R'")
    p = add("weights", "Weight multiplicity in S^m(u*) (maximum when --sigma is omitted)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sigma", help='Weight in simple-root coordinates, e.g. "4 4"')
    p = add("lemma34", "Check the triple-family lower bound on a weight multiplicity", aliases=["triple-bound"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", choices=("independent", "full"), default="independent")
    p = add("sphi", "Max weight multiplicities of S^n(u*) and their growth estimate")
    degree(p, default=40)
    window(p)
    p = add("verify-a1", "Compare the A1 closed form with the general engine")
    p.add_argument("--xmax", type=int, default=15)
    p.add_argument("--nmax", type=int, default=30)
    p = add("exceptional", "Exceptional-l classification and |Phi_0,l|")
    p.add_argument("--lmax", type=int, default=None, help="Scan l = 2 .. lmax-1 (default: 2h+2)")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        cfg = RunConfig.from_args(args)
        return HANDLERS[cfg.command](cfg, args)
    except DomainError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except ResourceCapError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
