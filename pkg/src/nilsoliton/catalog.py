"""The ten classes of five-dimensional metric nilpotent Lie algebras.

Each :class:`FamilyEntry` carries the bracket template, the parameter domain
and the expected classification outcome. Direct products of lower-dimensional
algebras are not part of the list, so Lauret's class mu_8' has no entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .algebra import StructureConstants, from_brackets
from .errors import UnknownFamily
from .solver import SolveOptions, SolveReport, solve_family

DIM = 5


@dataclass(frozen=True)
class Constraint:
    """``lhs op rhs`` with ``op`` one of ``>``, ``>=``, ``!=``, ``=``; ``rhs`` a name or number."""

    lhs: str
    op: str
    rhs: str | float = 0.0

    def _rhs_value(self, theta):
        return theta[self.rhs] if isinstance(self.rhs, str) else float(self.rhs)

    def holds(self, theta: Mapping[str, float], margin: float = 0.0) -> bool:
        """Strict inequalities need slack ``margin``; weak ones tolerate ``margin``."""
        gap = theta[self.lhs] - self._rhs_value(theta)
        if self.op == ">":
            return gap > margin
        if self.op == ">=":
            return gap >= -margin
        if self.op == "!=":
            return abs(gap) > margin
        if self.op == "=":
            return abs(gap) <= margin
        raise ValueError(f"unknown operator {self.op!r}")

    def __str__(self):
        op = {"!=": "≠", ">=": "≥"}.get(self.op, self.op)
        rhs = self.rhs if isinstance(self.rhs, str) else f"{self.rhs:g}"
        return f"{self.lhs}{op}{rhs}"


@dataclass(frozen=True)
class ExpectedResult:
    id: str
    admits_soliton: bool
    condition: str
    lauret_class: str | None = None
    solution: Callable[[float], dict] | None = None
    c_formula: Callable[[Mapping[str, float]], float] | None = None
    derivation_diag: Callable[[Mapping[str, float]], tuple] | None = None
    # parameters the classification only fixes up to sign
    sign_free: tuple[str, ...] = ()


@dataclass(frozen=True)
class FamilyEntry:
    id: str
    name: str
    param_names: tuple[str, ...]
    brackets: tuple[tuple[int, int, int, str], ...]
    domain: tuple[Constraint, ...]
    default_gauge: str
    nilpotency_class: int
    center_dim: int | None = None
    dim: int = DIM
    _templates: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        tpl = {}
        for p in self.param_names:
            tpl[p] = from_brackets(
                self.dim, [(i, j, k, 1.0) for i, j, k, q in self.brackets if q == p]
            ).alpha
        object.__setattr__(self, "_templates", tpl)

    @property
    def fixed(self) -> dict:
        """Parameters pinned by an equality: name -> number or other parameter name."""
        return {c.lhs: c.rhs for c in self.domain if c.op == "="}

    def free_parameters(self, gauge: str | None = None) -> tuple[str, ...]:
        pinned = set(self.fixed) | ({gauge} if gauge else set())
        return tuple(p for p in self.param_names if p not in pinned)

    def complete(self, theta: Mapping[str, float]) -> dict:
        """Fill in the parameters fixed by equalities."""
        full = {}
        for p in self.param_names:
            if p in self.fixed:
                continue
            if p not in theta:
                raise KeyError(f"family {self.id}: missing parameter {p!r}")
            full[p] = float(theta[p])
        for p, rhs in self.fixed.items():
            full[p] = full[rhs] if isinstance(rhs, str) else float(rhs)
        return {p: full[p] for p in self.param_names}

    def build(self, theta: Mapping[str, float]) -> StructureConstants:
        full = self.complete(theta)
        return from_brackets(
            self.dim, [(i, j, k, full[p]) for i, j, k, p in self.brackets]
        )

    def template(self, param: str) -> np.ndarray:
        """Structure constants contributed per unit of ``param``, ties included."""
        out = self._templates[param].copy()
        for p, rhs in self.fixed.items():
            if rhs == param:
                out += self._templates[p]
        return out

    def linear_model(self, gauge: str, gauge_value: float = 1.0):
        """``alpha = base + sum_k theta_k * templates[k]`` over the free parameters."""
        free = self.free_parameters(gauge)
        base = gauge_value * self.template(gauge)
        tpl = np.array([self.template(p) for p in free]).reshape(len(free), self.dim, self.dim, self.dim)
        return base, tpl, free

    def in_domain(self, theta: Mapping[str, float], margin: float = 0.0) -> bool:
        full = dict(theta)
        return all(c.holds(full, margin) for c in self.domain)

    def requires_positive(self, param: str) -> bool:
        for c in self.domain:
            if c.lhs != param or c.op not in (">", ">="):
                continue
            if isinstance(c.rhs, str):
                if self.requires_positive(c.rhs):
                    return True
            elif c.rhs >= 0:
                return True
        return False

    def domain_text(self) -> str:
        return ", ".join(str(c) for c in self.domain)

    def random_point(self, rng: np.random.Generator, low: float = 0.2, high: float = 2.0) -> dict:
        """An in-domain parameter point with generic magnitudes in ``[low, high]``.

        Weakly constrained parameters (``>= 0``) are drawn from the same range,
        so they are generic rather than zero.
        """
        for _ in range(10_000):
            theta = {}
            for p in self.param_names:
                if p in self.fixed:
                    continue
                mag = rng.uniform(low, high)
                sign = 1.0 if self.requires_positive(p) else rng.choice((-1.0, 1.0))
                theta[p] = sign * mag
            full = self.complete(theta)
            if self.in_domain(full, margin=1e-3):
                return full
        raise RuntimeError(f"could not sample the domain of family {self.id}")


_S32 = math.sqrt(1.5)
_L57 = ((1, 2, 3, "m"), (1, 2, 4, "s"), (1, 2, 5, "u"), (1, 3, 4, "v"), (1, 3, 5, "w"), (1, 4, 5, "x"))
_L59 = ((1, 2, 3, "m"), (1, 2, 4, "s"), (1, 2, 5, "u"), (1, 3, 4, "v"), (2, 3, 5, "w"))


def C(lhs, op, rhs=0.0):
    return Constraint(lhs, op, rhs)


FAMILIES: dict[str, FamilyEntry] = {
    f.id: f
    for f in (
        FamilyEntry(
            "2.1", "two-step, one-dimensional center", ("s", "m"),
            ((1, 2, 5, "s"), (3, 4, 5, "m")),
            (C("s", ">=", "m"), C("m", ">")),
            "m", 2, center_dim=1,
        ),
        FamilyEntry(
            "2.2", "two-step, two-dimensional center", ("m", "s"),
            ((1, 2, 4, "m"), (1, 3, 5, "s")),
            (C("m", ">=", "s"), C("s", ">")),
            "m", 2, center_dim=2,
        ),
        FamilyEntry(
            "2.3", "two-step, three-dimensional center", ("m",),
            ((1, 2, 3, "m"),),
            (C("m", ">"),),
            "m", 2, center_dim=3,
        ),
        FamilyEntry(
            "2.4", "l5,7 case A (four-step)", ("m", "s", "u", "v", "w", "x"), _L57,
            (C("m", ">"), C("v", ">"), C("x", ">"), C("s", "="), C("w", ">=")),
            "m", 4,
        ),
        FamilyEntry(
            "2.5", "l5,7 case B (four-step)", ("m", "s", "u", "v", "w", "x"), _L57,
            (C("m", ">"), C("v", ">"), C("x", ">"), C("w", ">="), C("s", ">")),
            "m", 4,
        ),
        FamilyEntry(
            "2.6", "l5,6 case A (four-step)", ("m", "s", "u", "v", "w", "x", "y"),
            _L57 + ((2, 3, 5, "y"),),
            (C("m", "!="), C("v", "!="), C("x", "!="), C("y", "!="), C("s", "="), C("w", ">=")),
            "x", 4,
        ),
        FamilyEntry(
            "2.7", "l5,6 case B (four-step)", ("m", "s", "u", "v", "w", "x", "y"),
            _L57 + ((2, 3, 5, "y"),),
            (C("m", "!="), C("v", "!="), C("x", "!="), C("y", "!="), C("s", ">")),
            "x", 4,
        ),
        FamilyEntry(
            "2.8", "l5,5 (three-step)", ("m", "s", "u", "v", "w"),
            ((1, 2, 4, "m"), (1, 2, 5, "s"), (1, 3, 5, "u"), (1, 4, 5, "v"), (2, 3, 5, "w")),
            (C("s", ">="), C("u", ">="), C("m", ">"), C("v", ">"), C("w", ">")),
            "m", 3, center_dim=1,
        ),
        FamilyEntry(
            "2.9", "l5,9 case A (three-step)", ("m", "s", "u", "v", "w"), _L59,
            (C("m", ">"), C("w", ">", "v"), C("v", ">"), C("s", ">="), C("u", ">=")),
            "m", 3,
        ),
        FamilyEntry(
            "2.10", "l5,9 case B (three-step)", ("m", "s", "u", "v", "w"), _L59,
            (C("m", ">"), C("v", ">"), C("w", "=", "v"), C("s", ">="), C("u", "=")),
            "m", 3,
        ),
    )
}


def _diag(*coeffs, by):
    return lambda th: tuple(k * th[by] ** 2 for k in coeffs)


def _const_c(k, by):
    return lambda th: k * th[by] ** 2


EXPECTED: dict[str, ExpectedResult] = {
    r.id: r
    for r in (
        ExpectedResult(
            "2.1", True, "s=m", "μ4'",
            lambda m: {"s": m, "m": m},
            _const_c(-2.0, "m"), _diag(1.5, 1.5, 1.5, 1.5, 3.0, by="m"),
        ),
        ExpectedResult(
            "2.2", True, "s=m", "μ6'",
            lambda m: {"m": m, "s": m},
            _const_c(-2.0, "m"), _diag(1.0, 1.5, 1.5, 2.5, 2.5, by="m"),
        ),
        ExpectedResult(
            "2.3", True, "always", "μ7'",
            lambda m: {"m": m},
            _const_c(-1.5, "m"), _diag(1.0, 1.0, 2.0, 1.5, 1.5, by="m"),
        ),
        ExpectedResult(
            "2.4", True, "x=m, u=w=s=0, v=(2/√3)m", "μ1'",
            lambda m: {"m": m, "s": 0.0, "u": 0.0, "v": 2 / math.sqrt(3) * m, "w": 0.0, "x": m},
            _const_c(-2.0, "m"), _diag(1 / 3, 1.5, 11 / 6, 13 / 6, 2.5, by="m"),
        ),
        ExpectedResult("2.5", False, "none"),
        ExpectedResult(
            "2.6", True, "u=w=s=0, m=v=±√(3/2)x, y=±x", "μ2'",
            lambda x: {"m": _S32 * x, "s": 0.0, "u": 0.0, "v": _S32 * x, "w": 0.0, "x": x, "y": x},
            _const_c(-2.75, "x"), _diag(0.75, 1.5, 2.25, 3.0, 3.75, by="x"),
            sign_free=("m", "v", "y"),
        ),
        ExpectedResult("2.7", False, "none"),
        ExpectedResult(
            "2.8", True, "s=u=0, v=m, w=(√2/2)m", "μ3'",
            lambda m: {"m": m, "s": 0.0, "u": 0.0, "v": m, "w": math.sqrt(2) / 2 * m},
            _const_c(-1.75, "m"), _diag(0.75, 1.0, 1.5, 1.75, 2.5, by="m"),
        ),
        ExpectedResult("2.9", False, "none"),
        ExpectedResult(
            "2.10", True, "s=0, v=(√3/2)m", "μ5'",
            lambda m: {"m": m, "s": 0.0, "u": 0.0, "v": math.sqrt(3) / 2 * m, "w": math.sqrt(3) / 2 * m},
            _const_c(-1.5, "m"), _diag(5 / 8, 5 / 8, 5 / 4, 15 / 8, 15 / 8, by="m"),
        ),
    )
}

FAMILY_IDS = tuple(FAMILIES)


def _normalize_id(family_id) -> str:
    key = str(family_id).strip()
    if key.startswith("case"):
        key = key[4:].strip()
    if key not in FAMILIES:
        raise UnknownFamily(f"unknown family {family_id!r}; expected one of {', '.join(FAMILY_IDS)}")
    return key


def family(family_id) -> FamilyEntry:
    return FAMILIES[_normalize_id(family_id)]


def expected(family_id) -> ExpectedResult:
    return EXPECTED[_normalize_id(family_id)]


TABLE_TOL = 1e-8


@dataclass(frozen=True)
class TableRow:
    id: str
    name: str
    domain: str
    expected_soliton: bool
    found_soliton: bool
    condition: str
    lauret_class: str | None
    parameters: dict | None
    c: float | None
    derivation_diag: tuple | None
    residual: float
    n_interior: int
    no_convergence: bool
    passed: bool
    note: str


@dataclass(frozen=True)
class TableReport:
    rows: tuple[TableRow, ...]
    options: SolveOptions

    @property
    def n_passed(self) -> int:
        return sum(r.passed for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.n_passed == len(self.rows)


def _matches(sol, exp: ExpectedResult, gauge_value: float, tol: float):
    """Compare one solution with the expected row; returns a failure note or ''."""
    target = exp.solution(gauge_value)
    for p, want in target.items():
        got = sol.parameters[p]
        if p in exp.sign_free:
            got, want = abs(got), abs(want)
        if abs(got - want) > tol:
            return f"{p}={got:.10g}, expected {want:.10g}"
    c_want = exp.c_formula(target)
    if abs(sol.c - c_want) > tol:
        return f"c={sol.c:.10g}, expected {c_want:.10g}"
    d_want = np.diag(exp.derivation_diag(target))
    err = float(np.abs(sol.derivation - d_want).max())
    if err > tol:
        return f"D deviates from the expected diagonal by {err:.2e}"
    return ""


def compare_report(report: SolveReport, tol: float = TABLE_TOL) -> TableRow:
    """Judge one family's solve against its expected classification outcome."""
    entry = family(report.family_id)
    exp = expected(report.family_id)
    interior = report.interior_solutions()
    canon = report.canonical()
    if canon is not None:
        residual = canon.residual
    elif report.best_interior is not None:
        residual = report.best_interior.residual
    else:
        residual = float("nan")
    found = canon is not None
    note = ""
    if exp.admits_soliton:
        if report.gauge != entry.default_gauge:
            raise ValueError("table comparison is defined at the default gauge")
        if not found:
            passed, note = False, "no interior solution found"
        else:
            notes = [_matches(s, exp, 1.0, tol) for s in interior]
            bad = [n for n in notes if n]
            passed = not bad
            note = bad[0] if bad else f"{len(interior)} interior cluster(s), all match"
    else:
        passed = not found
        note = (
            "no interior solution found (numerical evidence)"
            if passed
            else f"unexpected interior solution {canon.parameters}"
        )
    diag = tuple(float(x) for x in np.diag(canon.derivation)) if canon else None
    return TableRow(
        id=entry.id,
        name=entry.name,
        domain=entry.domain_text(),
        expected_soliton=exp.admits_soliton,
        found_soliton=found,
        condition=exp.condition,
        lauret_class=exp.lauret_class,
        parameters=dict(canon.parameters) if canon else None,
        c=canon.c if canon else None,
        derivation_diag=diag,
        residual=residual,
        n_interior=len(interior),
        no_convergence=report.no_convergence,
        passed=passed,
        note=note,
    )


def reproduce_table(opts: SolveOptions | None = None, ids=FAMILY_IDS) -> TableReport:
    """Solve every family and compare with the expected classification.

    The gauge in ``opts`` is ignored; each family uses its default gauge.
    """
    opts = opts or SolveOptions()
    base = SolveOptions(
        multistarts=opts.multistarts,
        seed=opts.seed,
        max_iterations=opts.max_iterations,
        residual_tol=opts.residual_tol,
        domain_margin=opts.domain_margin,
        cluster_radius=opts.cluster_radius,
    )
    rows = tuple(compare_report(solve_family(family(i), base)) for i in ids)
    return TableReport(rows=rows, options=base)
