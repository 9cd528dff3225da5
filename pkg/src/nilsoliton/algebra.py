"""Metric Lie algebras given by structure constants in an orthonormal basis.

The bracket is ``[E_i, E_j] = sum_k alpha[i, j, k] E_k``; the left-invariant
metric is the one making ``E_1, ..., E_n`` orthonormal. Indices are 0-based
in arrays and 1-based in :class:`BracketEntry` and everything user-facing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateEntry,
    IndexOutOfRange,
    NonPositiveDim,
    NotALieAlgebra,
    NotNilpotent,
    ZeroScale,
)

TOL = 1e-9
RANK_RTOL = 1e-9


class BracketEntry(NamedTuple):
    """``[E_i, E_j]`` has component ``value`` along ``E_k`` (1-based, i < j)."""

    i: int
    j: int
    k: int
    value: float


class StructureConstants:
    """Immutable rank-3 array of structure constants, antisymmetric in the first pair."""

    __slots__ = ("_alpha",)

    def __init__(self, alpha):
        a = np.array(alpha, dtype=float)
        if a.ndim != 3 or not (a.shape[0] == a.shape[1] == a.shape[2]):
            raise DimensionMismatch(f"expected an n x n x n array, got shape {a.shape}")
        if a.shape[0] < 1:
            raise NonPositiveDim("dimension must be at least 1")
        if not np.array_equal(a, -a.transpose(1, 0, 2)):
            raise ValueError("structure constants must satisfy alpha[i,j,k] == -alpha[j,i,k]")
        a.setflags(write=False)
        self._alpha = a

    @classmethod
    def from_array(cls, alpha, atol=1e-12):
        """Antisymmetrize a nearly antisymmetric array (e.g. after a basis change)."""
        a = np.asarray(alpha, dtype=float)
        if a.ndim != 3:
            raise DimensionMismatch(f"expected a rank-3 array, got shape {a.shape}")
        sym = 0.5 * (a + a.transpose(1, 0, 2))
        if np.abs(sym).max(initial=0.0) > atol * max(1.0, np.abs(a).max(initial=0.0)):
            raise ValueError("array is not antisymmetric in its first two indices")
        return cls(0.5 * (a - a.transpose(1, 0, 2)))

    @property
    def alpha(self) -> np.ndarray:
        return self._alpha

    @property
    def dim(self) -> int:
        return self._alpha.shape[0]

    def entries(self, atol=0.0) -> list[BracketEntry]:
        """Nonzero upper-triangular structure constants as 1-based entries."""
        n = self.dim
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = float(self._alpha[i, j, k])
                    if abs(v) > atol:
                        out.append(BracketEntry(i + 1, j + 1, k + 1, v))
        return out

    def __eq__(self, other):
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return np.array_equal(self._alpha, other._alpha)

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(f"[E{e.i},E{e.j}]_{e.k}={e.value:g}" for e in self.entries())
        return f"StructureConstants(dim={self.dim}, {terms or 'abelian'})"


@dataclass(frozen=True)
class SubspaceChain:
    """Dimensions of the lower central series, ending at 0."""

    dims: tuple[int, ...]
    nilpotency_class: int


def from_brackets(dim: int, entries: Iterable) -> StructureConstants:
    """Build structure constants from upper-triangular bracket entries.

    Each entry is a :class:`BracketEntry` or an ``(i, j, k, value)`` tuple with
    1-based indices and ``i < j``; the antisymmetric partner is filled in.
    """
    if int(dim) != dim or dim < 1:
        raise NonPositiveDim(f"dimension must be a positive integer, got {dim!r}")
    dim = int(dim)
    a = np.zeros((dim, dim, dim))
    seen = set()
    for e in entries:
        i, j, k, value = e
        for name, idx in (("i", i), ("j", j), ("k", k)):
            if int(idx) != idx or not 1 <= idx <= dim:
                raise IndexOutOfRange(f"index {name}={idx} outside 1..{dim}")
        if not i < j:
            raise IndexOutOfRange(f"bracket entry needs i < j, got i={i}, j={j}")
        key = (int(i), int(j), int(k))
        if key in seen:
            raise DuplicateEntry(f"duplicate bracket entry {key}")
        seen.add(key)
        a[i - 1, j - 1, k - 1] = value
        a[j - 1, i - 1, k - 1] = -value
    return StructureConstants(a)


def abelian(dim: int) -> StructureConstants:
    return from_brackets(dim, [])


def _check_vector(alg, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (alg.dim,):
        raise DimensionMismatch(f"expected a vector of length {alg.dim}, got shape {x.shape}")
    return x


def _check_matrix(alg, m):
    m = np.asarray(m, dtype=float)
    if m.shape != (alg.dim, alg.dim):
        raise DimensionMismatch(f"expected a {alg.dim}x{alg.dim} matrix, got shape {m.shape}")
    return m


def bracket(alg: StructureConstants, x, y) -> np.ndarray:
    x = _check_vector(alg, x)
    y = _check_vector(alg, y)
    return np.einsum("i,j,ijk->k", x, y, alg.alpha)


def ad(alg: StructureConstants, x) -> np.ndarray:
    """Matrix of ``ad x``; column j is ``[x, E_j]``."""
    x = _check_vector(alg, x)
    return np.einsum("i,ijk->kj", x, alg.alpha)


def jacobi_tensor(alg: StructureConstants) -> np.ndarray:
    """``J[i,j,k] = [E_i,[E_j,E_k]] + [E_j,[E_k,E_i]] + [E_k,[E_i,E_j]]``."""
    a = alg.alpha
    return (
        np.einsum("jkm,iml->ijkl", a, a)
        + np.einsum("kim,jml->ijkl", a, a)
        + np.einsum("ijm,kml->ijkl", a, a)
    )


def jacobi_defect(alg: StructureConstants) -> float:
    return float(np.linalg.norm(jacobi_tensor(alg), axis=-1).max())


def require_lie(alg: StructureConstants, tol: float = TOL) -> None:
    """Raise :class:`NotALieAlgebra` if the Jacobi defect exceeds ``tol``.

    ``tol`` is taken relative to ``max|alpha|**2`` once that exceeds 1, since
    the defect is quadratic in the structure constants.
    """
    scale = max(1.0, float(np.abs(alg.alpha).max())) ** 2
    d = jacobi_defect(alg)
    if d > tol * scale:
        raise NotALieAlgebra(d, tol * scale)


def _svd_rank(m, ref, rtol):
    if m.size == 0 or ref == 0.0:
        return 0, None
    _, s, vt = np.linalg.svd(m)
    r = int(np.sum(s > rtol * ref))
    return r, vt


def lower_central_series(alg: StructureConstants, rtol: float = RANK_RTOL) -> SubspaceChain:
    """Dimensions of ``g, [g,g], [g,[g,g]], ...`` down to 0.

    Abelian algebras get nilpotency class 1. Raises :class:`NotNilpotent` when
    the series stabilizes at a nonzero subspace.
    """
    n = alg.dim
    a = alg.alpha
    # every stage is a subspace of [g,g], so the full ad-map sets the rank scale
    ref = np.linalg.norm(a.reshape(n * n, n), 2) if n else 0.0
    basis = np.eye(n)
    dims = [n]
    while basis.shape[0] > 0:
        images = np.einsum("ijk,bj->bik", a, basis).reshape(-1, n)
        r, vt = _svd_rank(images, ref, rtol)
        if r == basis.shape[0]:
            raise NotNilpotent(f"lower central series stabilizes at dimension {r}: {dims}")
        basis = vt[:r] if r else np.zeros((0, n))
        dims.append(r)
    return SubspaceChain(tuple(dims), sum(1 for d in dims if d > 0))


def center(alg: StructureConstants, rtol: float = RANK_RTOL) -> tuple[int, list[np.ndarray]]:
    """Dimension and an orthonormal basis of the center."""
    n = alg.dim
    # row (j,k), column i: alpha[i,j,k] = ([E_i, E_j])_k
    m = alg.alpha.transpose(1, 2, 0).reshape(n * n, n)
    smax = np.linalg.norm(m, 2)
    if smax == 0.0:
        return n, list(np.eye(n))
    _, s, vt = np.linalg.svd(m)
    r = int(np.sum(s > rtol * smax))
    basis = [v.copy() for v in vt[r:]]
    return len(basis), basis


def unimodularity(alg: StructureConstants) -> np.ndarray:
    """``t_r = trace(ad E_r)``; zero iff the algebra is unimodular."""
    return np.einsum("rjj->r", alg.alpha)


def derivation_defect_tensor(alg: StructureConstants, d) -> np.ndarray:
    """``Delta[p,q] = D[E_p,E_q] - [D E_p, E_q] - [E_p, D E_q]`` as an array ``(p, q, t)``.

    ``d[l, i]`` is the ``E_l`` component of ``D(E_i)``.
    """
    d = _check_matrix(alg, d)
    a = alg.alpha
    return (
        np.einsum("pqi,ti->pqt", a, d)
        - np.einsum("ip,iqt->pqt", d, a)
        - np.einsum("iq,pit->pqt", d, a)
    )


def derivation_defect(alg: StructureConstants, d) -> float:
    """Norm of the derivation defect over pairs ``p < q``; zero iff ``d`` is a derivation."""
    # Delta is antisymmetric in (p, q), so the half-norm is the full norm / sqrt 2
    return float(np.linalg.norm(derivation_defect_tensor(alg, d)) / np.sqrt(2.0))


def derivation_matrix(alg: StructureConstants) -> np.ndarray:
    """The linear map ``D -> Delta`` restricted to ``p < q``, acting on row-major ``D``."""
    n = alg.dim
    iu, ju = np.triu_indices(n, k=1)
    cols = []
    for idx in range(n * n):
        unit = np.zeros(n * n)
        unit[idx] = 1.0
        cols.append(derivation_defect_tensor(alg, unit.reshape(n, n))[iu, ju].ravel())
    if not cols[0].size:
        return np.zeros((0, n * n))
    return np.array(cols).T


def derivation_space(alg: StructureConstants, rtol: float = RANK_RTOL) -> tuple[int, list[np.ndarray]]:
    """Dimension and a Frobenius-orthonormal basis of ``Der(g)``."""
    n = alg.dim
    m = derivation_matrix(alg)
    smax = np.linalg.norm(m, 2) if m.size else 0.0
    if smax == 0.0:
        return n * n, [e.reshape(n, n) for e in np.eye(n * n)]
    _, s, vt = np.linalg.svd(m)
    r = int(np.sum(s > rtol * smax))
    basis = [v.reshape(n, n).copy() for v in vt[r:]]
    return len(basis), basis


def scale(alg: StructureConstants, lam: float) -> StructureConstants:
    if lam == 0:
        raise ZeroScale("scale factor must be nonzero")
    return StructureConstants(lam * alg.alpha)


def change_basis(alg: StructureConstants, q) -> StructureConstants:
    """Transport the bracket by an orthogonal ``q``: ``[x, y]' = q [q^T x, q^T y]``.

    ``q`` is an isometric isomorphism from the original algebra onto the result.
    """
    q = _check_matrix(alg, q)
    if not np.allclose(q @ q.T, np.eye(alg.dim), atol=1e-10):
        raise ValueError("change_basis requires an orthogonal matrix")
    return StructureConstants.from_array(np.einsum("ai,bj,kl,ijl->abk", q, q, q, alg.alpha))
