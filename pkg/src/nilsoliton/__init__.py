"""Nilsoliton detection for metric nilpotent Lie algebras.

A left-invariant metric on a Lie group is given by structure constants in an
orthonormal basis; it is an algebraic Ricci soliton when ``Ric = c Id + D``
for a real ``c`` and a derivation ``D``.
"""

__version__ = "0.1.0"

from .algebra import (
    BracketEntry,
    StructureConstants,
    SubspaceChain,
    abelian,
    bracket,
    center,
    change_basis,
    derivation_defect,
    derivation_space,
    from_brackets,
    jacobi_defect,
    lower_central_series,
    scale,
    unimodularity,
)
from .catalog import FAMILIES, expected, family, reproduce_table
from .curvature import (
    connection_coefficients,
    ricci_nilpotent_oracle,
    ricci_operator,
    ricci_tensor,
    scalar_curvature,
)
from .errors import NilsolitonError
from .soliton import (
    SolitonCertificate,
    SolitonType,
    best_c,
    detect_soliton,
    eq6_residual,
    eq7_derivation,
)
from .solver import SolveOptions, SolveReport, solve_family
