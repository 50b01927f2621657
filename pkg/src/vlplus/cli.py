"""Command-line front end.

Subcommands: analyze, modules, char, fusion, decompose, certify.  The
Gram matrix comes from a JSON file {"gram": [[...], ...]} with integer
entries; rationals in all outputs are exact "p/q" strings in lowest
terms.  Exit codes: 0 success, 2 validation or input error, 3 an
incomplete certificate (or a failed certificate re-check).

Defaults (stable): truncation order 12, tsv output, one worker.  The
environment variables VLPLUS_ORDER, VLPLUS_FORMAT and VLPLUS_JOBS
override them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .branching import branch_orthogonal, branch_sublattice, verify_branch
from .certify import (
    ALL_RULES,
    VERDICT_RATIONAL,
    certify,
    load_certificate,
    verify_certificate,
)
from .fusion import SignOracle, fusion_dim
from .lattice import (
    Convention,
    LatticeError,
    NotOrthogonalBase,
    discriminant_group,
    mod_two_data,
    norm2_vectors,
    orthogonal_sublattice,
    validate_even_lattice,
)
from .qseries import character, series_denominator
from .sectors import (
    classify_modules,
    contragredient,
    format_label,
    lowest_weight,
    parse_label,
    top_level_dimension,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCOMPLETE = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _load_gram(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"gram file not found: {path}")
    except json.JSONDecodeError as e:
        raise CliError(f"malformed JSON in {path}: {e}")
    if not isinstance(data, dict) or "gram" not in data:
        raise CliError(f'{path}: expected an object with a "gram" key')
    try:
        return validate_even_lattice(data["gram"])
    except LatticeError as e:
        raise CliError(f"invalid lattice: {e}")


def _load_oracle(path: str | None) -> SignOracle:
    if path is None:
        return SignOracle()
    try:
        with open(path) as fh:
            table = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read oracle table {path}: {e}")
    pi_table = {k: v for k, v in table.get("pi", {}).items()}
    c_table = {k: v for k, v in table.get("c", {}).items()}

    def pi(lam, two_mu):
        return pi_table.get(_coords_key(lam) + "|" + _coords_key(two_mu))

    def c(chi, lam):
        return c_table.get(f"{chi.index}|" + _coords_key(lam))

    return SignOracle(pi=pi if pi_table else None, c=c if c_table else None)


def _coords_key(coords) -> str:
    return ",".join(str(Fraction(x)) for x in coords)


def _emit_rows(rows, header, fmt, out):
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write("\t".join(header) + "\n")
        for r in rows:
            out.write("\t".join(str(x) for x in r) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_analyze(args, out):
    L = _load_gram(args.gram)
    dg = discriminant_group(L)
    m2 = mod_two_data(L)
    basis, gram1, index = orthogonal_sublattice(L)
    report = {
        "rank": L.rank,
        "det": L.det,
        "discriminant_group": " x ".join(f"Z/{f}" for f in dg.invariant_factors) or "trivial",
        "norm2_count": len(norm2_vectors(L)),
        "r2": m2.r2,
        "orthogonal_sublattice_norms": [gram1[i][i] for i in range(L.rank)],
        "orthogonal_sublattice_index": index,
        "module_count": len(classify_modules(L)),
        "series_denominator": series_denominator(L),
    }
    if args.format == "json":
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for k, v in report.items():
            out.write(f"{k}\t{v}\n")
    return EXIT_OK


def cmd_modules(args, out):
    L = _load_gram(args.gram)
    rows = []
    for m in classify_modules(L):
        rows.append(
            (
                format_label(m),
                str(lowest_weight(L, m)),
                top_level_dimension(L, m),
                format_label(contragredient(L, m)),
            )
        )
    _emit_rows(rows, ("label", "lowest_weight", "top_dim", "contragredient"), args.format, out)
    return EXIT_OK


def _parse_order(text) -> Fraction:
    try:
        order = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"order must be a rational number, got {text!r}")
    if order < 1:
        raise CliError("order must be at least 1")
    return order


def cmd_char(args, out):
    L = _load_gram(args.gram)
    try:
        m = parse_label(L, args.module)
    except ValueError as e:
        raise CliError(str(e))
    ch = character(L, m, _parse_order(args.order))
    for e, c in ch.terms().items():
        out.write(f"{e}\t{c}\n")
    return EXIT_OK


def cmd_fusion(args, out):
    L = _load_gram(args.gram)
    oracle = _load_oracle(args.oracle)
    if args.batch:
        try:
            with open(args.batch) as fh:
                triples = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise CliError(f"cannot read batch file: {e}")
        if not isinstance(triples, list):
            raise CliError("batch file must hold a JSON list of label triples")
    elif args.triple:
        triples = [args.triple]
    else:
        raise CliError("fusion needs --triple M1 M2 M3 or --batch FILE")
    rows = []
    for t in triples:
        if len(t) != 3:
            raise CliError(f"not a triple: {t!r}")
        try:
            m1, m2, m3 = (parse_label(L, s) for s in t)
            ans = fusion_dim(L, m1, m2, m3, oracle)
        except ValueError as e:
            raise CliError(str(e))
        value = ans.value if ans.value != "unknown" else f"unknown ({ans.reason})"
        rows.append((t[0], t[1], t[2], value))
    _emit_rows(rows, ("m1", "m2", "m3", "fusion"), args.format, out)
    return EXIT_OK


def cmd_decompose(args, out):
    L = _load_gram(args.gram)
    try:
        m = parse_label(L, args.module)
    except ValueError as e:
        raise CliError(str(e))
    order = _parse_order(args.order)
    if args.sublattice == "orthogonal-base":
        try:
            bl = branch_orthogonal(L, m)
        except NotOrthogonalBase as e:
            raise CliError(str(e))
    else:
        if args.sublattice == "auto":
            basis, _, _ = orthogonal_sublattice(L)
        else:
            try:
                basis = tuple(tuple(v) for v in json.loads(args.sublattice))
            except json.JSONDecodeError:
                raise CliError("--sublattice takes auto, orthogonal-base, or a JSON basis")
        try:
            bl = branch_sublattice(L, basis, m)
        except LatticeError as e:
            raise CliError(str(e))
    counts: dict[str, int] = {}
    for p in bl.parts:
        counts[_part_str(p)] = counts.get(_part_str(p), 0) + 1
    ok = verify_branch(bl, order)
    rows = [(name, mult) for name, mult in sorted(counts.items())]
    _emit_rows(rows, ("part", "multiplicity"), args.format, out)
    for note in bl.notes:
        out.write(f"# note: {note}\n")
    out.write(f"verified\t{str(ok).lower()}\torder\t{order}\n")
    return EXIT_OK if ok else EXIT_INVALID


def _part_str(p) -> str:
    from .branching import SubmodulePart, TensorPart

    if isinstance(p, SubmodulePart):
        return format_label(p.label)
    if isinstance(p, TensorPart):
        return " (x) ".join(format_label(l) for l in p.labels)
    sign = "+" if p.sign == 1 else "-"
    return f"twisted-block[{sign}]x{p.multiplicity}"


def cmd_certify(args, out):
    L = _load_gram(args.gram)
    convention = Convention(cocycle_mode=args.cocycle, root_branch=args.root_branch)
    if args.verify:
        try:
            with open(args.verify) as fh:
                cert = load_certificate(fh.read())
        except (OSError, ValueError) as e:
            raise CliError(f"cannot load certificate: {e}")
        problems = verify_certificate(L, cert, convention)
        if problems:
            for p in problems:
                out.write(f"problem\t{p}\n")
            return EXIT_INCOMPLETE
        out.write("certificate verified\n")
        return EXIT_OK
    disabled = frozenset(args.disable_rule or [])
    cert = certify(L, convention=convention, disabled=disabled, jobs=args.jobs)
    text = cert.dumps()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        out.write(f"verdict\t{cert.verdict}\tpairs\t{len(cert.pairs)}\tunknown\t{len(cert.unknown)}\n")
    else:
        out.write(text)
    return EXIT_OK if cert.verdict == VERDICT_RATIONAL else EXIT_INCOMPLETE


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    default_order = os.environ.get("VLPLUS_ORDER", "12")
    default_format = os.environ.get("VLPLUS_FORMAT", "tsv")
    default_jobs = int(os.environ.get("VLPLUS_JOBS", "1"))

    p = argparse.ArgumentParser(prog="vlplus", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=False, fmt=True):
        sp.add_argument("--gram", required=True, help="JSON file with the Gram matrix")
        if fmt:
            sp.add_argument("--format", choices=("tsv", "json"), default=default_format)
        if order:
            sp.add_argument("--order", default=default_order,
                            help="truncation order (rational, default 12)")

    sp = sub.add_parser("analyze", help="lattice report")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("modules", help="irreducible-module table")
    common(sp)
    sp.set_defaults(func=cmd_modules)

    sp = sub.add_parser("char", help="graded dimension of one module")
    common(sp, order=True, fmt=False)
    sp.add_argument("--module", required=True, help='label, e.g. V+ or C[1/2]+')
    sp.set_defaults(func=cmd_char)

    sp = sub.add_parser("fusion", help="fusion-dimension queries")
    common(sp)
    sp.add_argument("--triple", nargs=3, metavar=("M1", "M2", "M3"))
    sp.add_argument("--batch", help="JSON file with a list of label triples")
    sp.add_argument("--oracle", help="JSON sign-oracle table")
    sp.set_defaults(func=cmd_fusion)

    sp = sub.add_parser("decompose", help="branch one module over a subalgebra")
    common(sp, order=True)
    sp.add_argument("--module", required=True)
    sp.add_argument(
        "--sublattice",
        default="auto",
        help="auto (orthogonal sublattice), orthogonal-base (rank-one factors), or a JSON basis",
    )
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("certify", help="vanishing certificate for all ordered pairs")
    common(sp, fmt=False)
    sp.add_argument("--out", help="write the certificate JSON here")
    sp.add_argument("--verify", help="re-check an existing certificate file")
    sp.add_argument("--jobs", type=int, default=default_jobs)
    sp.add_argument("--disable-rule", action="append", choices=ALL_RULES,
                    help="drop a rule from the chain (falsifiability hook)")
    sp.add_argument("--cocycle", choices=("upper", "lower"), default="upper")
    sp.add_argument("--root-branch", type=int, choices=(1, -1), default=1)
    sp.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
