"""Levi-Civita connection and Ricci curvature of left-invariant metrics.

Two independent routes: the general Koszul path (connection, curvature
tensor, contraction) and the quadratic formula valid for unimodular algebras.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TOL, StructureConstants, require_lie, unimodularity
from .errors import NotUnimodular


@dataclass(frozen=True)
class ConnectionCoefficients:
    """``gamma[i, j, k] = <nabla_{E_i} E_j, E_k>``."""

    gamma: np.ndarray


@dataclass(frozen=True)
class RicciData:
    ric: np.ndarray
    operator: np.ndarray
    scalar: float


def connection_coefficients(alg: StructureConstants) -> ConnectionCoefficients:
    a = alg.alpha
    # Koszul: 2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>
    gamma = 0.5 * (a - np.einsum("jki->ijk", a) + np.einsum("kij->ijk", a))
    return ConnectionCoefficients(gamma)


def curvature_tensor(alg: StructureConstants) -> np.ndarray:
    """``R[i,j,k,l] = <R(E_i,E_j)E_k, E_l>`` with ``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``."""
    g = connection_coefficients(alg).gamma
    a = alg.alpha
    return (
        np.einsum("jkm,iml->ijkl", g, g)
        - np.einsum("ikm,jml->ijkl", g, g)
        - np.einsum("ijm,mkl->ijkl", a, g)
    )


def _ricci_data(ric):
    return RicciData(ric=ric, operator=ric.copy(), scalar=float(np.trace(ric)))


def ricci_tensor(alg: StructureConstants, tol: float = TOL) -> RicciData:
    """Ricci curvature by contracting the full curvature tensor.

    ``ric(X, Y) = sum_i <R(E_i, X) Y, E_i>``. Works for any Lie algebra,
    unimodular or not.
    """
    require_lie(alg, tol)
    r = curvature_tensor(alg)
    return _ricci_data(np.einsum("ipqi->pq", r))


def ricci_nilpotent_oracle(alg: StructureConstants, tol: float = TOL) -> RicciData:
    """Ricci curvature from the quadratic formula for unimodular algebras.

    ``ric_pq = -1/2 sum alpha_pij alpha_qij + 1/4 sum alpha_ijp alpha_ijq - 1/2 B_pq``

    with ``B`` the Killing form, which vanishes on nilpotent algebras.
    """
    t = unimodularity(alg)
    if np.abs(t).max() > tol * max(1.0, float(np.abs(alg.alpha).max())):
        raise NotUnimodular(f"trace(ad E_r) = {t.tolist()} is not zero")
    a = alg.alpha
    killing = np.einsum("pjk,qkj->pq", a, a)
    ric = (
        -0.5 * np.einsum("pij,qij->pq", a, a)
        + 0.25 * np.einsum("ijp,ijq->pq", a, a)
        - 0.5 * killing
    )
    return _ricci_data(ric)


def ricci_operator(alg: StructureConstants, tol: float = TOL) -> np.ndarray:
    return ricci_tensor(alg, tol).operator


def scalar_curvature(alg: StructureConstants, tol: float = TOL) -> float:
    return ricci_tensor(alg, tol).scalar
