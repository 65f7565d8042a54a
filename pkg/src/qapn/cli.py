"""Command-line drivers over the search and analysis modules.

Every command writes its results to stdout and keeps logging on stderr,
so reports are byte-identical given the same seeds and inputs.  Exit
codes distinguish the failure families: 2 for malformed inputs, 3 for an
unknown class index, 4 for an exhausted search budget, 1 otherwise.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import published
from .boolfun import (
    algebraic_degree,
    component_walsh_spectrum,
    differential_spectrum,
    format_lut_text,
    format_spectrum,
    is_apn,
    linearity,
    read_lut_file,
)
from .catalog import Catalog, CatalogError
from .classes import canonical_classes, exclusion_reason, fix_sizes
from .equiv import fingerprint
from .field import parse_field_decl, parse_polynomial, univariate_to_lut
from .gf2 import cycle_count, invariant_factors, poly_str
from .lesearch import deterministic_search, le_search
from .search import SearchTimeout, search
from .switching import solve_switchings

log = logging.getLogger("qapn")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MALFORMED = 2
EXIT_UNKNOWN_CLASS = 3
EXIT_BUDGET = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_duration(text: str) -> float:
    units = {"s": 1.0, "m": 60.0, "h": 3600.0}
    scale = units.get(text[-1:], None)
    digits = text[:-1] if scale else text
    if scale is None:
        scale = 1.0
    try:
        value = float(digits)
    except ValueError:
        raise CliError(EXIT_MALFORMED, f"bad duration {text!r}") from None
    if value < 0:
        raise CliError(EXIT_MALFORMED, f"negative duration {text!r}")
    return value * scale


def _input_table(args) -> list[int]:
    """A table from a .lut file, or from --poly evaluated over --field."""
    if getattr(args, "poly", None) is not None:
        decl = getattr(args, "field", None)
        if decl is None:
            raise CliError(EXIT_MALFORMED, "--poly needs --field n[,modulus[,minpoly]]")
        try:
            spec, g = parse_field_decl(decl)
            terms = parse_polynomial(args.poly, spec, g)
            return univariate_to_lut(spec, terms)
        except ValueError as exc:
            raise CliError(EXIT_MALFORMED, str(exc)) from exc
    if not getattr(args, "table", None):
        raise CliError(EXIT_MALFORMED, "expected a .lut file or --poly/--field")
    try:
        return list(read_lut_file(args.table).lut)
    except (OSError, ValueError) as exc:
        raise CliError(EXIT_MALFORMED, f"{args.table}: {exc}") from exc


def _class_by_index(n: int, index: int):
    classes = canonical_classes(n)
    for c in classes:
        if c.index == index:
            return c
    raise CliError(EXIT_UNKNOWN_CLASS,
                   f"unknown class index {index} for n={n} (1..{len(classes)})")


# --- commands --------------------------------------------------------------


def cmd_search(args) -> int:
    budget = _parse_duration(args.budget) if args.budget else None
    for i in range(args.count):
        seed = None if args.seed is None else args.seed + i
        table = search(args.n, seed=seed, total_budget=budget)
        header = f"search n={args.n} seed={seed} table {i + 1}/{args.count}"
        sys.stdout.write(format_lut_text(table, comment=header))
        if args.catalog:
            Catalog(args.catalog).insert(table, origin="search", seed=seed)
    return EXIT_OK


def cmd_le_search(args) -> int:
    cls = _class_by_index(args.n, args.cls)
    reason = exclusion_reason(cls)
    if reason is not None:
        raise CliError(EXIT_MALFORMED, f"class {cls.index} is not admissible ({reason})")
    budget = _parse_duration(args.budget) if args.budget else None
    base = (f"le-search n={args.n} class={cls.index} kind={cls.kind} "
            f"p={cls.p}")
    if args.deterministic:
        tables = deterministic_search(cls, time_limit=budget)
        for i, table in enumerate(tables):
            header = f"{base} mode=deterministic table {i + 1}/{len(tables)}"
            sys.stdout.write(format_lut_text(table, comment=header))
        if not tables:
            print(f"# {base} mode=deterministic: no solutions")
    else:
        table = le_search(cls, seed=args.seed, total_budget=budget,
                          randomize_basis=args.randomize_basis)
        header = f"{base} mode=randomized seed={args.seed}"
        sys.stdout.write(format_lut_text(table, comment=header))
    if args.catalog:
        store = Catalog(args.catalog)
        found = tables if args.deterministic else [table]
        for t in found:
            store.insert(t, origin="le-search", class_index=cls.index,
                         seed=args.seed)
    return EXIT_OK


def cmd_classes(args) -> int:
    classes = canonical_classes(args.n)
    kinds = ("both-prime-order", "B-identity", "A-identity")
    admissible = 0
    shown = 0
    for c in classes:
        fa, fb = fix_sizes(c)
        reason = exclusion_reason(c)
        if reason is None:
            admissible += 1
        if args.admissible_only and reason is not None:
            continue
        if args.max_fix_a is not None and fa >= args.max_fix_a:
            continue
        shown += 1
        inv = ",".join(poly_str(p) for p in invariant_factors(c.A))
        verdict = "admissible" if reason is None else f"excluded ({reason})"
        print(f"{c.index:>4}  {c.kind:<16} p={c.p:<5} |FixA|={fa:<5} "
              f"|FixB|={fb:<5} cycles={cycle_count(c.A):<5} inv(A)=[{inv}]  {verdict}")
    counts = {k: sum(1 for c in classes if c.kind == k) for k in kinds}
    print(f"{len(classes)} classes ({counts[kinds[0]]}/{counts[kinds[1]]}/"
          f"{counts[kinds[2]]}), {admissible} admissible")
    if args.admissible_only or args.max_fix_a is not None:
        print(f"{shown} shown after filters")
    return EXIT_OK


def cmd_analyze(args) -> int:
    table = _input_table(args)
    deg = algebraic_degree(table)
    apn = is_apn(table)
    lin = linearity(table)
    print(f"degree {deg}, {'APN' if apn else 'not APN'}, linearity {lin}")
    bij = len(set(table)) == len(table)
    size = len(table)
    uniformity = max(v for v in differential_spectrum(table)) if size > 1 else 0
    print(f"n={size.bit_length() - 1} bijective={'yes' if bij else 'no'} "
          f"differential-uniformity={uniformity}")
    print("walsh " + format_spectrum(component_walsh_spectrum(table)))
    return EXIT_OK


def cmd_fingerprint(args) -> int:
    table = _input_table(args)
    try:
        print(str(fingerprint(table)))
    except ValueError as exc:
        raise CliError(EXIT_MALFORMED, str(exc)) from exc
    return EXIT_OK


def cmd_switch(args) -> int:
    table = _input_table(args)
    if not is_apn(table):
        raise CliError(EXIT_MALFORMED, "switching starts from an APN function")
    size = len(table)
    directions = [args.v] if args.v is not None else list(range(1, size))
    if args.v is not None and not 0 < args.v < size:
        raise CliError(EXIT_MALFORMED, f"direction {args.v} out of range")
    base_fp = fingerprint(table) if algebraic_degree(table) <= 2 else None
    seen = {base_fp} if base_fp is not None else set()
    store = Catalog(args.catalog) if args.catalog else None
    total_new = 0
    for v in directions:
        res = solve_switchings(table, v, cap=args.cap)
        if res.skipped:
            print(f"v={v:#04x} dim={res.dimension} skipped (dimension above cap)")
            continue
        non_quadratic = 0
        fresh = 0
        for g in res.functions:
            if algebraic_degree(g) > 2:
                non_quadratic += 1
                continue
            fp = fingerprint(g)
            if fp not in seen:
                seen.add(fp)
                fresh += 1
                if store is not None:
                    store.insert(g, origin="switch")
        total_new += fresh
        flag = f" non-quadratic={non_quadratic}" if non_quadratic else ""
        print(f"v={v:#04x} dim={res.dimension} functions={len(res.functions)} "
              f"new-classes={fresh}{flag}")
    print(f"total new fingerprint classes: {total_new}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    try:
        if args.action == "insert":
            store = Catalog(args.dir)
            paths = ([args.dest] if args.dest else []) + list(args.files)
            if not paths:
                raise CliError(EXIT_MALFORMED, "insert needs at least one .lut file")
            for path in paths:
                try:
                    table = read_lut_file(path).lut
                except (OSError, ValueError) as exc:
                    raise CliError(EXIT_MALFORMED, f"{path}: {exc}") from exc
                bucket, created = store.insert(table, origin="insert")
                word = "added to" if created else "already in"
                print(f"{path}: {word} bucket {bucket.key}")
            return EXIT_OK
        store = Catalog(args.dir, create=False)
        if args.action == "list":
            for key in sorted(store.buckets):
                b = store.buckets[key]
                flag = " UNDECIDED" if b.undecided else ""
                origins = ",".join(sorted({m.origin for m in b.members}))
                print(f"{key} members={len(b.members)} origins=[{origins}]{flag}")
            print(f"{len(store)} buckets")
        elif args.action == "verify":
            count = store.verify()
            print(f"verified {count} tables in {len(store)} buckets")
        elif args.action == "export":
            if not args.dest:
                raise CliError(EXIT_MALFORMED, "export needs a destination directory")
            copies = store.export(args.dest)
            print(f"exported {len(copies)} tables to {args.dest}")
        return EXIT_OK
    except CatalogError as exc:
        raise CliError(EXIT_MALFORMED, str(exc)) from exc


def cmd_verify_published(args) -> int:
    claims = published.run_checks(names=args.only or None)
    print(published.format_report(claims))
    failed = [c for c in claims if not c.passed]
    print(f"{len(claims) - len(failed)}/{len(claims)} claims pass")
    return EXIT_OK if not failed else EXIT_ERROR


# --- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qapn",
        description="search and analysis toolkit for quadratic APN functions")
    parser.add_argument("--verbose", action="store_true",
                        help="progress logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="randomized search for a quadratic APN table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", default=None, help="total budget, e.g. 120 or 2m")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--catalog", default=None, help="store results in this catalog")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("le-search",
                       help="search inside one linear self-equivalence class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, required=True,
                   help="class index from the classes command")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", default=None, help="total budget, e.g. 60s or 5m")
    p.add_argument("--deterministic", action="store_true",
                   help="full tree pass returning every solution found")
    p.add_argument("--randomize-basis", action="store_true",
                   help="randomize the seed transport bases between restarts")
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=cmd_le_search)

    p = sub.add_parser("classes", help="canonical self-equivalence classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--admissible-only", action="store_true")
    p.add_argument("--max-fix-a", type=int, default=None,
                   help="hide classes whose A fixes at least this many points")
    p.set_defaults(func=cmd_classes)

    for name, func, helptext in (
            ("analyze", cmd_analyze, "degree, APN verdict, linearity, spectra"),
            ("fingerprint", cmd_fingerprint,
             "ortho-derivative fingerprint of a quadratic APN table")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("table", nargs="?", default=None, help=".lut file")
        p.add_argument("--poly", default=None,
                       help="univariate polynomial, e.g. 'x^3 + g*x^10'")
        p.add_argument("--field", default=None,
                       help="n[,modulus-hex[,coeff-minpoly-hex]]")
        p.set_defaults(func=func)

    p = sub.add_parser("switch", help="switching neighborhoods of an APN table")
    p.add_argument("table", nargs="?", default=None)
    p.add_argument("--poly", default=None)
    p.add_argument("--field", default=None)
    p.add_argument("--v", type=int, default=None,
                   help="single direction; all nonzero directions otherwise")
    p.add_argument("--cap", type=int, default=24,
                   help="skip directions whose solution dimension exceeds this")
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=cmd_switch)

    p = sub.add_parser("catalog", help="inspect or update a fingerprint catalog")
    p.add_argument("dir")
    p.add_argument("action", choices=["list", "verify", "export", "insert"])
    p.add_argument("dest", nargs="?", default=None, help="destination for export")
    p.add_argument("files", nargs="*", default=[], help="lut files for insert")
    p.set_defaults(func=cmd_catalog)

    for alias in ("verify-published", "verify-paper"):
        p = sub.add_parser(alias, help="re-derive the recorded reference claims")
        p.add_argument("--only", action="append", default=None,
                       help="check one named function (repeatable)")
        p.set_defaults(func=cmd_verify_published)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SearchTimeout as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except KeyboardInterrupt:
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
