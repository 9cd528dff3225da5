"""Command-line interface: ``check``, ``solve``, ``table`` and ``derivations``.

Exit codes: 0 success or verdict match, 1 valid input with a negative
verdict, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import __version__
from .algebra import (
    center,
    derivation_defect,
    derivation_space,
    jacobi_defect,
    lower_central_series,
    require_lie,
)
from .catalog import compare_report, expected, family, reproduce_table
from .errors import NoConvergenceWarning, NotALieAlgebra, NotNilpotent, ParseError, UnknownFamily
from .formats import dumps_json, fmt_human, load_algebra
from .soliton import detect_soliton
from .solver import SolveOptions, solve_family

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return v


def _seed(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=1e-10, help="decision tolerance (default 1e-10)")
    common.add_argument("--format", choices=("table", "json"), default="table", help="output format")
    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--multistarts", type=_positive_int, default=64)
    search.add_argument("--seed", type=_seed, default=0)

    p = _Parser(prog="nilsoliton", description="Algebraic Ricci soliton checks for metric Lie algebras.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="certify or refute the soliton condition for an algebra file")
    c.add_argument("path")

    s = sub.add_parser("solve", parents=[common, search], help="search a built-in family for soliton points")
    s.add_argument("case_id", help="family id, 2.1 ... 2.10")
    s.add_argument("--gauge", help="parameter pinned to 1 (default: the family's scale parameter)")
    s.add_argument("--compare", action="store_true", help="compare with the expected classification")

    sub.add_parser("table", parents=[common, search], help="reproduce the classification of all ten families")

    d = sub.add_parser("derivations", parents=[common], help="derivation algebra of an algebra file")
    d.add_argument("path")
    d.add_argument("--check-diag", action="store_true", help="check d_i + d_j = d_k for the soliton derivation")
    return p


# -- serialization ---------------------------------------------------------

def certificate_dict(af, alg, cert, tol) -> dict:
    try:
        nil_class = lower_central_series(alg).nilpotency_class
    except NotNilpotent:
        nil_class = None
    return {
        "tool_version": __version__,
        "name": af.name,
        "algebra": {"dim": af.dim, "brackets": af.to_dict()["brackets"]},
        "tol": tol,
        "is_soliton": cert.is_soliton,
        "soliton_type": cert.soliton_type.value,
        "c": cert.c,
        "derivation": cert.derivation,
        "eq6_residual_norm": cert.eq6_residual_norm,
        "derivation_defect": cert.derivation_defect,
        "ricci_eigenvalues": list(cert.ricci_eigenvalues),
        "jacobi_defect": jacobi_defect(alg),
        "nilpotency_class": nil_class,
        "center_dim": center(alg)[0],
        "scalar_curvature": float(np.trace(cert.ricci)),
    }


def solution_dict(sol) -> dict:
    return {
        "parameters": sol.parameters,
        "c": sol.c,
        "derivation": sol.derivation,
        "residual": sol.residual,
        "interior": sol.interior,
        "starts": list(sol.starts),
    }


def solve_dict(report, verdict_match, row=None) -> dict:
    exp = expected(report.family_id)
    o = report.options
    out = {
        "tool_version": __version__,
        "family": report.family_id,
        "name": family(report.family_id).name,
        "domain": family(report.family_id).domain_text(),
        "gauge": report.gauge,
        "free_parameters": list(report.free_parameters),
        "options": {
            "multistarts": o.multistarts,
            "seed": o.seed,
            "max_iterations": o.max_iterations,
            "residual_tol": o.residual_tol,
            "domain_margin": o.domain_margin,
        },
        "n_converged": report.n_converged,
        "no_convergence": report.no_convergence,
        "found_interior_solution": report.has_interior_solution,
        "expected_soliton": exp.admits_soliton,
        "verdict_match": verdict_match,
        "solutions": [solution_dict(s) for s in report.solutions],
        "best": solution_dict(report.best) if report.best else None,
    }
    if row is not None:
        out["comparison"] = row_dict(row)
    return out


def row_dict(row) -> dict:
    return {
        "case": row.id,
        "name": row.name,
        "domain": row.domain,
        "expected_soliton": row.expected_soliton,
        "found_soliton": row.found_soliton,
        "condition": row.condition,
        "parameters": row.parameters,
        "c": row.c,
        "derivation_diag": list(row.derivation_diag) if row.derivation_diag else None,
        "lauret_class": row.lauret_class,
        "residual": row.residual,
        "n_interior": row.n_interior,
        "no_convergence": row.no_convergence,
        "passed": row.passed,
        "note": row.note,
    }


# -- human-readable rendering ---------------------------------------------

def _vec(xs):
    return "(" + ", ".join(fmt_human(x) for x in xs) + ")"


def _matrix(m, indent="    "):
    return "\n".join(indent + "  ".join(f"{fmt_human(x):>10}" for x in row) for row in np.asarray(m))


def _render_table(rows):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def render_certificate(d) -> str:
    lines = [
        f"algebra: {d['name'] or '(unnamed)'}, dim {d['algebra']['dim']}, {len(d['algebra']['brackets'])} bracket entries",
        f"jacobi defect:     {fmt_human(d['jacobi_defect'])}",
        f"nilpotency class:  {d['nilpotency_class'] if d['nilpotency_class'] is not None else 'not nilpotent'}",
        f"center dimension:  {d['center_dim']}",
        f"scalar curvature:  {fmt_human(d['scalar_curvature'])}",
        f"ricci eigenvalues: {_vec(d['ricci_eigenvalues'])}",
        "soliton:           " + (f"yes ({d['soliton_type']})" if d["is_soliton"] else "no"),
        f"c:                 {fmt_human(d['c'])}",
        f"derivation defect: {fmt_human(d['derivation_defect'])}",
        f"residual norm:     {fmt_human(d['eq6_residual_norm'])}",
    ]
    dm = np.asarray(d["derivation"])
    if np.allclose(dm, np.diag(np.diag(dm)), atol=d["tol"]):
        lines.append(f"D = Ric - c Id:    diag{_vec(np.diag(dm))}")
    else:
        lines.append("D = Ric - c Id:")
        lines.append(_matrix(dm))
    return "\n".join(lines) + "\n"


def render_solve(d) -> str:
    lines = [
        f"family {d['family']}: {d['name']}",
        f"domain: {d['domain']}",
        f"gauge: {d['gauge']} = 1; free: {', '.join(d['free_parameters']) or '(none)'}; "
        f"{d['options']['multistarts']} starts, seed {d['options']['seed']}",
        f"converged starts: {d['n_converged']}/{d['options']['multistarts']}"
        + ("  [NoConvergence]" if d["no_convergence"] else ""),
        "",
    ]
    rows = [["#", "status", "residual", "c", "parameters", "D diagonal"]]
    for n, s in enumerate(d["solutions"]):
        params = ", ".join(f"{k}={fmt_human(v)}" for k, v in s["parameters"].items())
        rows.append([
            str(n + 1),
            "interior" if s["interior"] else "boundary",
            fmt_human(s["residual"]),
            fmt_human(s["c"]),
            params,
            _vec(np.diag(np.asarray(s["derivation"]))),
        ])
    if len(rows) > 1:
        lines.append(_render_table(rows))
    else:
        lines.append("no converged points")
    lines.append("")
    found = d["found_interior_solution"]
    lines.append(
        "interior soliton found" if found else "no interior solution found (numerical evidence)"
    )
    if "comparison" in d:
        c = d["comparison"]
        lines.append(f"expected: {'soliton if ' + c['condition'] if c['expected_soliton'] else 'no soliton'}")
        lines.append(f"comparison: {'match' if c['passed'] else 'MISMATCH'} ({c['note']})")
    else:
        lines.append(f"verdict {'matches' if d['verdict_match'] else 'DOES NOT match'} the expected classification")
    return "\n".join(lines) + "\n"


def render_table(d) -> str:
    rows = [["case", "soliton?", "condition", "c", "D diagonal", "Lauret", "residual", "result"]]
    for r in d["rows"]:
        rows.append([
            r["case"],
            "+" if r["found_soliton"] else "-",
            r["condition"] if r["expected_soliton"] else "-",
            fmt_human(r["c"]),
            _vec(r["derivation_diag"]) if r["derivation_diag"] else "-",
            r["lauret_class"] or "-",
            fmt_human(r["residual"]),
            ("pass" if r["passed"] else "FAIL") + (" [NoConvergence]" if r["no_convergence"] else ""),
        ])
    n_sol = sum(r["found_soliton"] for r in d["rows"])
    tail = f"\n{d['n_passed']}/{len(d['rows'])} rows pass; {n_sol} families admit a soliton"
    return _render_table(rows) + tail + "\n"


# -- commands --------------------------------------------------------------

def _emit(args, data, render):
    sys.stdout.write(dumps_json(data) if args.format == "json" else render(data))


def _load(path):
    af = load_algebra(path)
    return af, af.structure_constants()


def cmd_check(args) -> int:
    af, alg = _load(args.path)
    require_lie(alg, args.tol)
    cert = detect_soliton(alg, args.tol)
    _emit(args, certificate_dict(af, alg, cert, args.tol), render_certificate)
    return EXIT_OK if cert.is_soliton else EXIT_NEGATIVE


def _options(args, **extra):
    return SolveOptions(multistarts=args.multistarts, seed=args.seed, residual_tol=args.tol, **extra)


def cmd_solve(args) -> int:
    entry = family(args.case_id)
    gauge = args.gauge or entry.default_gauge
    if gauge not in entry.free_parameters():
        raise ValueError(f"--gauge must be one of {', '.join(entry.free_parameters())}")
    report = solve_family(entry, _options(args, gauge=gauge))
    exp = expected(entry.id)
    verdict_match = report.has_interior_solution == exp.admits_soliton
    row = None
    if args.compare and gauge == entry.default_gauge:
        row = compare_report(report, tol=1e-8)
    data = solve_dict(report, verdict_match, row)
    _emit(args, data, render_solve)
    ok = row.passed if row is not None else verdict_match
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_table(args) -> int:
    report = reproduce_table(_options(args))
    data = {
        "tool_version": __version__,
        "options": {"multistarts": args.multistarts, "seed": args.seed, "residual_tol": args.tol},
        "n_passed": report.n_passed,
        "passed": report.passed,
        "rows": [row_dict(r) for r in report.rows],
    }
    _emit(args, data, render_table)
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def diagonal_constraints(alg, diag, tol):
    """``d_i + d_j = d_k`` for every nonzero bracket entry (1-based indices)."""
    out = []
    for e in alg.entries():
        lhs = diag[e.i - 1] + diag[e.j - 1]
        rhs = diag[e.k - 1]
        out.append({
            "i": e.i, "j": e.j, "k": e.k,
            "lhs": lhs, "rhs": rhs,
            "satisfied": bool(abs(lhs - rhs) <= tol),
        })
    return out


def cmd_derivations(args) -> int:
    af, alg = _load(args.path)
    require_lie(alg, args.tol)
    dim, basis = derivation_space(alg)
    data = {
        "tool_version": __version__,
        "name": af.name,
        "dim": af.dim,
        "der_dim": dim,
        "basis": [b for b in basis],
    }
    ok = True
    if args.check_diag:
        cert = detect_soliton(alg, args.tol)
        d = cert.derivation
        if basis:
            flat = np.array([b.ravel() for b in basis])
            proj = flat.T @ (flat @ d.ravel())
            proj_res = float(np.linalg.norm(d.ravel() - proj))
        else:
            proj_res = float(np.linalg.norm(d))
        diag = np.diag(d)
        cons = diagonal_constraints(alg, diag, args.tol)
        off = float(np.abs(d - np.diag(diag)).max())
        ok = cert.is_soliton and all(c["satisfied"] for c in cons)
        data["soliton"] = {
            "is_soliton": cert.is_soliton,
            "c": cert.c,
            "derivation_diag": diag,
            "off_diagonal_max": off,
            "projection_residual": proj_res,
            "derivation_defect": derivation_defect(alg, d),
            "diagonal_constraints": cons,
        }
    _emit(args, data, render_derivations)
    return EXIT_OK if ok else EXIT_NEGATIVE


def render_derivations(d) -> str:
    lines = [f"dim Der(g) = {d['der_dim']}  (algebra dim {d['dim']})", "basis (Frobenius-orthonormal):"]
    for n, b in enumerate(d["basis"]):
        lines.append(f"  B{n + 1}:")
        lines.append(_matrix(b, indent="    "))
    if "soliton" in d:
        s = d["soliton"]
        lines.append("")
        lines.append(f"soliton derivation D = Ric - c Id with c = {fmt_human(s['c'])}"
                     f" ({'soliton' if s['is_soliton'] else 'not a soliton'})")
        lines.append(f"  diag(D) = {_vec(s['derivation_diag'])}, max off-diagonal {fmt_human(s['off_diagonal_max'])}")
        lines.append(f"  distance from Der(g): {fmt_human(s['projection_residual'])}")
        lines.append("  diagonal constraints d_i + d_j = d_k:")
        for c in s["diagonal_constraints"]:
            mark = "ok" if c["satisfied"] else "VIOLATED"
            lines.append(
                f"    [E{c['i']},E{c['j']}] -> E{c['k']}: "
                f"{fmt_human(s['derivation_diag'][c['i'] - 1])} + {fmt_human(s['derivation_diag'][c['j'] - 1])}"
                f" = {fmt_human(c['lhs'])} vs {fmt_human(c['rhs'])}  {mark}"
            )
    return "\n".join(lines) + "\n"


COMMANDS = {
    "check": cmd_check,
    "solve": cmd_solve,
    "table": cmd_table,
    "derivations": cmd_derivations,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    warnings.simplefilter("ignore", NoConvergenceWarning)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"nilsoliton: parse error: {exc}", file=sys.stderr)
    except NotALieAlgebra as exc:
        print(f"nilsoliton: not a Lie algebra: jacobi_defect = {exc.defect:.6g} (tolerance {exc.tol:.1e})",
              file=sys.stderr)
    except UnknownFamily as exc:
        print(f"nilsoliton: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"nilsoliton: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
