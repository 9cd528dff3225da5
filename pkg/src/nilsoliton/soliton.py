"""Algebraic Ricci soliton test: ``Ric = c Id + D`` with ``D`` a derivation.

:func:`eq6_residual` and :func:`eq7_derivation` evaluate the structure-constant
formulas term by term (einsum over the full triple sums). The solver uses the
faster contractions in :mod:`nilsoliton.kernels`, which are checked against
these.

The residual tensor satisfies ``E[t, p, q] = -Delta[p, q, t]`` exactly, where
``Delta`` is the derivation defect of ``Ric - c Id`` (see
:func:`~nilsoliton.algebra.derivation_defect_tensor`). Its norm counts every
pair ``(p, q)`` twice, so ``|E| = sqrt(2) * derivation_defect``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algebra import (
    TOL,
    StructureConstants,
    derivation_defect,
    derivation_defect_tensor,
    require_lie,
)
from .curvature import ricci_tensor
from .errors import OracleDisagreement

SQRT2 = np.sqrt(2.0)


class SolitonType(str, enum.Enum):
    SHRINKING = "shrinking"
    STEADY = "steady"
    EXPANDING = "expanding"


@dataclass(frozen=True)
class SolitonCertificate:
    is_soliton: bool
    c: float
    derivation: np.ndarray
    eq6_residual_norm: float
    derivation_defect: float
    ricci_eigenvalues: tuple[float, ...]
    soliton_type: SolitonType
    ricci: np.ndarray


def _combo(a):
    # a[x,y,z] + a[z,x,y] - a[y,z,x]: the recurring three-term Koszul bracket
    return a + np.einsum("zxy->xyz", a) - np.einsum("yzx->xyz", a)


def eq6_residual(alg: StructureConstants, c: float) -> tuple[np.ndarray, float]:
    """The soliton residual tensor ``E[t, p, q]`` and its Euclidean norm.

    Every group of the triple sum over ``(i, j, r)`` is kept, including the
    ``alpha_rjj`` groups that vanish on unimodular algebras.
    """
    a = alg.alpha
    k = _combo(a)  # k[x,y,z] = a_xyz + a_zxy - a_yzx
    tr = np.einsum("rjj->r", a)
    s = (
        2 * np.einsum("r,iqt,pri->tpq", tr, a, k)
        - 2 * np.einsum("r,ipt,qri->tpq", tr, a, k)
        + 2 * np.einsum("rji,ipt,qjr->tpq", k, a, a)
        - 2 * np.einsum("rji,iqt,pjr->tpq", k, a, a)
        + np.einsum("jri,ipt,qjr->tpq", k, a, k)
        - np.einsum("jri,iqt,pjr->tpq", k, a, k)
        - 2 * np.einsum("pqi,r,irt->tpq", a, tr, k)
        + 2 * np.einsum("pqi,ijr,rjt->tpq", a, a, k)
        + np.einsum("pqi,ijr,jrt->tpq", a, k, k)
    )
    e = c * np.einsum("qpt->tpq", a) + 0.25 * s
    return e, float(np.linalg.norm(e))


def eq7_derivation(alg: StructureConstants, c: float) -> np.ndarray:
    """Closed-form derivation; column ``i`` holds ``D(E_i)``.

    Equals ``Ric - c Id`` for every Lie algebra.
    """
    a = alg.alpha
    k = _combo(a)
    tr = np.einsum("rjj->r", a)
    s = (
        2 * np.einsum("r,irl->li", tr, k)
        - 2 * np.einsum("ijr,rjl->li", a, k)
        - np.einsum("ijr,jrl->li", k, k)
    )
    return -c * np.eye(alg.dim) + 0.25 * s


def best_c(alg: StructureConstants, tol: float = TOL) -> tuple[float, float]:
    """Least-squares soliton constant and the derivation defect of ``Ric - c Id`` there.

    The defect tensor is affine in ``c``: ``Delta(Ric) + c * alpha``. With
    zero brackets every ``c`` is optimal and 0 is returned.
    """
    require_lie(alg, tol)
    ric = ricci_tensor(alg, tol).operator
    base = derivation_defect_tensor(alg, ric)
    a = alg.alpha
    denom = float(np.vdot(a, a))
    c = 0.0 if denom == 0.0 else -float(np.vdot(base, a)) / denom
    return c, derivation_defect(alg, ric - c * np.eye(alg.dim))


def soliton_type(c: float, tol: float = TOL) -> SolitonType:
    if abs(c) <= tol:
        return SolitonType.STEADY
    return SolitonType.EXPANDING if c < 0 else SolitonType.SHRINKING


def detect_soliton(alg: StructureConstants, tol: float = TOL) -> SolitonCertificate:
    """Decide whether the metric is an algebraic Ricci soliton.

    Both the derivation defect of ``Ric - c* Id`` and the residual tensor at
    ``c*`` are evaluated; they are the same quantity computed two ways, so a
    differing verdict raises :class:`OracleDisagreement`.
    """
    require_lie(alg, tol)
    ric = ricci_tensor(alg, tol).operator
    c, defect = best_c(alg, tol)
    d = ric - c * np.eye(alg.dim)
    _, e6 = eq6_residual(alg, c)
    by_defect = defect <= tol
    by_eq6 = e6 / SQRT2 <= tol
    if by_defect != by_eq6:
        raise OracleDisagreement(
            f"derivation defect {defect:.3e} and residual {e6:.3e} disagree at tol {tol:.1e}"
        )
    eig = np.linalg.eigvalsh(0.5 * (ric + ric.T))
    return SolitonCertificate(
        is_soliton=bool(by_defect),
        c=c,
        derivation=d,
        eq6_residual_norm=e6,
        derivation_defect=defect,
        ricci_eigenvalues=tuple(float(x) for x in np.sort(eig)),
        soliton_type=soliton_type(c, tol),
        ricci=ric,
    )
