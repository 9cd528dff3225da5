"""Multistart Levenberg-Marquardt search for soliton points of a parametrized family.

The unknowns are the free family parameters plus the soliton constant ``c``;
one scale parameter (the gauge) is pinned to 1, which loses nothing because
``(alpha, c, D) -> (lam alpha, lam^2 c, lam^2 D)`` maps solitons to solitons.
Absence of interior solutions is numerical evidence, not a proof.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import NoConvergenceWarning
from .soliton import best_c, eq6_residual, eq7_derivation

START_RANGE = 3.0


@dataclass(frozen=True)
class SolveOptions:
    multistarts: int = 64
    seed: int = 0
    max_iterations: int = 200
    residual_tol: float = 1e-10
    domain_margin: float = 1e-4
    gauge: str | None = None
    cluster_radius: float = 1e-6

    def __post_init__(self):
        if self.multistarts < 1:
            raise ValueError("multistarts must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.residual_tol <= 0 or self.domain_margin <= 0 or self.cluster_radius <= 0:
            raise ValueError("tolerances must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class FamilySolution:
    parameters: dict
    c: float
    derivation: np.ndarray
    residual: float
    interior: bool
    starts: tuple[int, ...] = ()

    @property
    def n_positive(self) -> int:
        return sum(1 for v in self.parameters.values() if v > 0)


@dataclass(frozen=True)
class SolveReport:
    family_id: str
    gauge: str
    free_parameters: tuple[str, ...]
    options: SolveOptions
    solutions: tuple[FamilySolution, ...]
    n_converged: int
    no_convergence: bool
    best: FamilySolution | None = field(default=None)
    # lowest-residual endpoint inside the domain, converged or not
    best_interior: FamilySolution | None = field(default=None)

    def interior_solutions(self, tol: float | None = None) -> list[FamilySolution]:
        tol = self.options.residual_tol if tol is None else tol
        return [s for s in self.solutions if s.interior and s.residual <= tol]

    def canonical(self, tol: float | None = None) -> FamilySolution | None:
        """Interior solution with the most positive parameters (then smallest residual)."""
        cands = self.interior_solutions(tol)
        if not cands:
            return None
        return min(cands, key=lambda s: (-s.n_positive, s.residual, s.starts[0] if s.starts else 0))

    @property
    def has_interior_solution(self) -> bool:
        return bool(self.interior_solutions())


def _lm(fun_jac, fun, x0, max_iterations):
    """Levenberg-Marquardt with Nielsen's damping update. Returns ``(x, |r|, iterations)``."""
    x = np.array(x0, dtype=float)
    r, jac = fun_jac(x)
    cost = 0.5 * (r @ r)
    a = jac.T @ jac
    g = jac.T @ r
    lam = 1e-3 * max(float(np.max(np.diag(a))), 1e-12)
    nu = 2.0
    eye = np.eye(x.size)
    it = 0
    for it in range(1, max_iterations + 1):
        if np.sqrt(2 * cost) <= 1e-15 or np.max(np.abs(g)) <= 1e-30:
            break
        try:
            step = np.linalg.solve(a + lam * eye, -g)
        except np.linalg.LinAlgError:
            lam *= nu
            nu *= 2
            continue
        if np.linalg.norm(step) <= 1e-15 * (np.linalg.norm(x) + 1e-15):
            break
        x_new = x + step
        r_new = fun(x_new)
        cost_new = 0.5 * (r_new @ r_new)
        predicted = 0.5 * (step @ (lam * step - g))
        rho = (cost - cost_new) / predicted if predicted > 0 else -1.0
        if rho > 0:
            x = x_new
            r, jac = fun_jac(x)
            cost = 0.5 * (r @ r)
            a = jac.T @ jac
            g = jac.T @ r
            lam *= max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0) ** 3)
            nu = 2.0
        else:
            lam *= nu
            nu *= 2.0
            if lam > 1e20:
                break
        if np.max(np.abs(x)) > 1e6:
            break
    return x, float(np.sqrt(2 * cost)), it


def _start_point(entry, free, gauge, rng):
    theta = np.empty(len(free))
    for idx, p in enumerate(free):
        v = rng.uniform(-START_RANGE, START_RANGE)
        theta[idx] = abs(v) if entry.requires_positive(p) else v
    return theta


def _full_parameters(entry, free, gauge, theta):
    vals = dict(zip(free, (float(t) for t in theta)))
    vals[gauge] = 1.0
    return entry.complete(vals)


def run_start(entry, opts: SolveOptions, k: int):
    """One multistart run; start ``k`` draws from its own generator keyed by ``(seed, k)``."""
    gauge = opts.gauge or entry.default_gauge
    base, tpl, free = entry.linear_model(gauge)
    rng = np.random.default_rng([opts.seed, k])
    theta0 = _start_point(entry, free, gauge, rng)
    alg0 = entry.build(_full_parameters(entry, free, gauge, theta0))
    c0, _ = best_c(alg0)
    x0 = np.append(theta0, c0)
    nfree = len(free)

    def fun(x):
        alpha = base + np.tensordot(x[:nfree], tpl, axes=1) if nfree else base
        return kernels.eq6_tensor(alpha, float(x[-1])).ravel()

    def fun_jac(x):
        steps = 1e-6 * np.maximum(1.0, np.abs(x))
        return kernels.eq6_fd_jacobian(base, tpl, x[:nfree], float(x[-1]), steps)

    x, res, iters = _lm(fun_jac, fun, x0, opts.max_iterations)
    return x, res, iters


def _make_solution(entry, opts, free, gauge, x, starts):
    params = _full_parameters(entry, free, gauge, x[:-1])
    alg = entry.build(params)
    c = float(x[-1])
    _, res = eq6_residual(alg, c)
    return FamilySolution(
        parameters=params,
        c=c,
        derivation=eq7_derivation(alg, c),
        residual=res,
        interior=entry.in_domain(params, opts.domain_margin),
        starts=tuple(starts),
    )


def solve_family(entry, opts: SolveOptions | None = None) -> SolveReport:
    """Search ``entry`` for soliton parameter points from ``opts.multistarts`` random starts.

    Starts land in ``[-3, 3]`` per free parameter (``[0, 3]`` for parameters the
    domain forces positive), with ``c`` initialised by :func:`best_c`. Points
    whose residual is within ``100 * residual_tol`` are clustered at
    ``cluster_radius``; clusters keep their best member and are ordered by the
    first start that reached them, so the report does not depend on the
    order in which starts are executed.
    """
    opts = opts or SolveOptions()
    gauge = opts.gauge or entry.default_gauge
    if gauge not in entry.param_names or gauge in entry.fixed:
        raise ValueError(f"gauge {gauge!r} is not a free parameter of family {entry.id}")
    free = entry.free_parameters(gauge)
    runs = [run_start(entry, opts, k) for k in range(opts.multistarts)]

    accept = 1e2 * opts.residual_tol
    clusters = []  # [best_x, best_res, starts]
    for k, (x, res, _) in enumerate(runs):
        if not res <= accept:
            continue
        for cl in clusters:
            if np.linalg.norm(x - cl[0]) <= opts.cluster_radius:
                cl[2].append(k)
                if res < cl[1]:
                    cl[0], cl[1] = x, res
                break
        else:
            clusters.append([x, res, [k]])

    solutions = tuple(_make_solution(entry, opts, free, gauge, x, st) for x, _, st in clusters)
    k_best = min(range(len(runs)), key=lambda k: (runs[k][1], k))
    best = _make_solution(entry, opts, free, gauge, runs[k_best][0], [k_best])
    interior_runs = [
        k for k, (x, _, _) in enumerate(runs)
        if entry.in_domain(_full_parameters(entry, free, gauge, x[:-1]), opts.domain_margin)
    ]
    best_interior = None
    if interior_runs:
        k_int = min(interior_runs, key=lambda k: (runs[k][1], k))
        best_interior = _make_solution(entry, opts, free, gauge, runs[k_int][0], [k_int])
    no_conv = not clusters
    if no_conv:
        warnings.warn(
            f"family {entry.id}: no start reached residual {accept:.1e}; best {best.residual:.3e}",
            NoConvergenceWarning,
            stacklevel=2,
        )
    return SolveReport(
        family_id=entry.id,
        gauge=gauge,
        free_parameters=free,
        options=opts,
        solutions=solutions,
        n_converged=sum(len(cl[2]) for cl in clusters),
        no_convergence=no_conv,
        best=best,
        best_interior=best_interior,
    )
