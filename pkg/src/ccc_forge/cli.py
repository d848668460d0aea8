"""Command-line front end.

Exit codes: 0 when every checked claim matches, 1 on usage or parameter
errors, 2 when a mismatch or a degenerate point is detected.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .ccc import (
    build_subcode,
    ccc_report,
    measure_ccc,
    proposition1_check,
    verify_corollary1,
    verify_lfvc_inapplicable,
    verify_theorem2,
)
from .characters import (
    eta_prime,
    verify_gauss_closed_form,
    verify_gauss_prime,
    verify_lemma2,
    verify_lemma3,
    verify_lemma5,
)
from .codes import (
    defining_set,
    distribution_from_counts,
    format_matrix,
    generator_matrix,
    symbol_counts,
    verify_lemma4,
    verify_n_of_a,
    verify_theorem1,
)
from .field import ExtField, ParameterError, format_modulus, format_polynomial, max_q, parse_modulus
from .report import DEGENERATE, INAPPLICABLE, MATCH, VerificationReport, dumps

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2

DEFAULT_GRID = ("p=3,5,7;m=2,3,4", "p=3;m=6")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- grids ---------------------------------------------------------------------


@dataclass
class GridSpec:
    primes: list[int]
    exponents: list[int]
    alphas: str = "all"
    gammas: str = "all"

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        fields: dict[str, str] = {}
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            key, sep, value = part.partition("=")
            key = key.strip().lower()
            if not sep or key not in ("p", "m", "alpha", "gamma"):
                raise UsageError(f"bad grid term {part!r}; expected p=..., m=..., alpha=..., gamma=...")
            fields[key] = value.strip()
        if "p" not in fields or "m" not in fields:
            raise UsageError(f"grid {text!r} must set both p and m")
        return cls(
            primes=_int_list(fields["p"], "p"),
            exponents=_int_list(fields["m"], "m"),
            alphas=fields.get("alpha", "all"),
            gammas=fields.get("gamma", "all"),
        )

    def expand(self) -> list[tuple[int, int, list[int], list[int]]]:
        """(p, m, alphas, gammas) tuples; alpha never includes 0."""
        out = []
        for p in self.primes:
            for m in self.exponents:
                if p**m > max_q():
                    raise UsageError(f"q = {p}^{m} exceeds the desk-scale cap {max_q()}")
                alphas = _select(self.alphas, p, allow_zero=False)
                gammas = _select(self.gammas, p, allow_zero=True)
                out.append((p, m, alphas, gammas))
        return out


def _int_list(text: str, name: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of integers") from None
    if not values:
        raise UsageError(f"{name} list is empty")
    return values


def _select(selector: str, p: int, allow_zero: bool) -> list[int]:
    sel = selector.strip().lower()
    start = 0 if allow_zero else 1
    if sel == "all":
        return list(range(start, p))
    if sel == "square":
        return [a for a in range(1, p) if eta_prime(a, p) == 1]
    if sel == "nonsquare":
        return [a for a in range(1, p) if eta_prime(a, p) == -1]
    values = sorted({v % p for v in _int_list(sel, "selector")})
    if not allow_zero and 0 in values:
        raise UsageError("alpha = 0 is excluded from theorem verification")
    return values


# -- the verification sweep ----------------------------------------------------

LEMMA_FAMILY = ("lemma1.", "lemma2.", "lemma3.", "lemma4.", "lemma5.", "lemma.", "theorem1.")


def run_grid(grids: Sequence[GridSpec], threads: int = 1) -> VerificationReport:
    report = VerificationReport(grid={"specs": [g.__dict__ for g in grids]})
    primes_done: set[int] = set()
    seen: set[tuple[int, int]] = set()
    for grid in grids:
        for p, m, alphas, gammas in grid.expand():
            if (p, m) in seen:
                continue
            seen.add((p, m))
            if p not in primes_done:
                primes_done.add(p)
                report.add(verify_gauss_prime(p))
                report.add(verify_corollary1(p))
            report.extend(_field_entries(ExtField(p, m), alphas, gammas, threads))
    return report


def _field_entries(field: ExtField, alphas: list[int], gammas: list[int], threads: int):
    p, m = field.p, field.m
    yield verify_gauss_closed_form(p, m, field)
    yield verify_lemma2(field)
    yield verify_lemma3(field)
    yield verify_lemma4(field)
    for alpha in [0] + alphas:
        yield verify_lemma5(field, alpha)
    if m < 2:
        return
    for alpha in alphas:
        D = defining_set(field, alpha)
        counts = symbol_counts(field, D, threads)
        yield verify_n_of_a(field, alpha, counts=counts)
        dist = distribution_from_counts(field, D.n_alpha, counts, threads)
        yield verify_theorem1(field, alpha, measured=dist)
        if m % 2:
            continue
        for gamma in gammas:
            measured = measure_ccc(build_subcode(field, alpha, gamma), counts)
            yield verify_theorem2(field, alpha, gamma, measured)
            if gamma:
                yield proposition1_check(field.params, alpha, gamma, measured.omega)
            yield verify_lfvc_inapplicable(field.params, alpha, gamma, measured)


def report_exit_code(report: VerificationReport) -> int:
    for e in report.entries:
        if e.claim.startswith(LEMMA_FAMILY) and e.verdict not in (MATCH, DEGENERATE, INAPPLICABLE):
            return EXIT_MISMATCH
        if e.claim.startswith("theorem2.") and e.verdict not in (MATCH, INAPPLICABLE):
            return EXIT_MISMATCH
    return EXIT_OK


# -- commands -------------------------------------------------------------------


def _field(args) -> ExtField:
    modulus = parse_modulus(args.modulus) if getattr(args, "modulus", None) else None
    return ExtField(args.p, args.m, modulus)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_field(args) -> int:
    field = _field(args)
    prm = field.params
    lines = [
        f"p = {field.p}",
        f"m = {field.m}",
        f"q = {field.q}",
        f"modulus = {format_modulus(field.modulus)}  ({format_polynomial(field.modulus)})",
        f"s = {prm.s}",
    ]
    if prm.epsilon is not None:
        lines.append(f"epsilon = {prm.epsilon:+d}")
    else:
        lines.append(f"tau = {prm.tau:+d}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_code(args) -> int:
    field = _field(args)
    D = defining_set(field, args.alpha)
    counts = symbol_counts(field, D, args.threads)
    dist = distribution_from_counts(field, D.n_alpha, counts, args.threads)
    code = EXIT_OK
    entry = None
    if args.alpha % field.p and field.m >= 2:
        entry = verify_theorem1(field, args.alpha, measured=dist)
        code = EXIT_OK if entry.verdict == MATCH else EXIT_MISMATCH
    if args.format == "csv":
        text = dist.to_csv()
    elif args.format == "matrix":
        text = format_matrix(generator_matrix(field, D))
    else:
        record = dist.to_json()
        record["params"] = {"p": field.p, "m": field.m, "alpha": args.alpha % field.p}
        record["modulus"] = format_modulus(field.modulus)
        if entry is None:
            record["verdict"] = INAPPLICABLE
            record["note"] = "no closed-form weight table for this alpha"
        else:
            record["verdict"] = entry.verdict
            record["theorem1"] = entry.to_dict()
        text = dumps(record)
    _emit(text, args.out)
    return code


def cmd_ccc(args) -> int:
    field = _field(args)
    if args.alpha % field.p == 0:
        raise ParameterError("alpha must be nonzero")
    result = ccc_report(field, args.alpha, args.gamma, args.threads)
    record = result["record"]
    code = EXIT_OK
    for e in result["entries"]:
        if e.claim.startswith("theorem2.") and (e.verdict not in (MATCH, INAPPLICABLE) or "degenerate" in e.detail):
            code = EXIT_MISMATCH
    if args.format == "csv":
        rows = ["key,value"]
        for key in ("n", "M", "d", "constant"):
            rows.append(f"{key},{record[key]}")
        for beta, w in enumerate(record["omega"] or []):
            rows.append(f"omega_{beta},{w}")
        for key in ("theorem2_printed", "theorem2_derived", "prop1_residual"):
            if key in record["verdicts"]:
                rows.append(f"{key},{record['verdicts'][key]}")
        text = "\n".join(rows) + "\n"
    else:
        text = dumps(record)
    _emit(text, args.out)
    return code


def cmd_verify(args) -> int:
    specs = args.grid if args.grid else list(DEFAULT_GRID)
    grids = [GridSpec.parse(s) for s in specs if s.strip()]
    if not grids:
        raise UsageError("empty grid")
    report = run_grid(grids, args.threads)
    _emit(report.to_json(), args.out)
    return report_exit_code(report)


def cmd_export(args) -> int:
    field = _field(args)
    D = defining_set(field, args.alpha)
    if args.kind == "generator-matrix":
        text = format_matrix(generator_matrix(field, D))
    else:
        text = "".join(f"{i}\n" for i in D.indices)
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ccc-forge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, alpha=False, gamma=False, fmt=None):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--modulus", help="comma-separated coefficients c0,...,cm")
        if alpha:
            sp.add_argument("--alpha", type=int, required=True)
        if gamma:
            sp.add_argument("--gamma", type=int, required=True)
        if fmt:
            sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.add_argument("--out")
        sp.add_argument("--threads", type=int, default=1)

    common(sub.add_parser("field", help="show the field model and sign constants"))
    common(sub.add_parser("code", help="weight distribution of C_D(alpha)"), alpha=True, fmt=("json", "csv", "matrix"))
    common(sub.add_parser("ccc", help="constant-composition subcode parameters"), alpha=True, gamma=True, fmt=("json", "csv"))
    sp = sub.add_parser("export", help="deterministic text artifacts")
    common(sp, alpha=True)
    sp.add_argument("--kind", choices=("generator-matrix", "defining-set"), required=True)
    sp = sub.add_parser("verify", help="run every claim check over a parameter grid")
    sp.add_argument("--grid", action="append", help="e.g. 'p=3,5;m=2,4;alpha=square;gamma=all' (repeatable)")
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int, default=1)
    return parser


COMMANDS = {"field": cmd_field, "code": cmd_code, "ccc": cmd_ccc, "verify": cmd_verify, "export": cmd_export}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("ccc-forge: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (ParameterError, UsageError) as exc:
        print(f"ccc-forge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
