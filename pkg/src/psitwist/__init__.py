"""Twisting almost Hermitian structures by tangent bundle automorphisms.

Submodules:

- ``multilinear``: metrics, adjoints, 2-form machinery, self/skew classification
- ``lie``: left-invariant geometry from structure constants, the ``S^3 x S^3`` example
- ``scalarfield``: expression trees with symbolic derivatives and a small parser
- ``fields``, ``sphere``: exact calculus on round spheres and flat space, ``J`` on ``S^6``
- ``chart``: an independent autodiff curvature oracle
- ``twist``: the twist itself, connection and curvature laws, integrability criteria
- ``analysis``: case studies, eigenvalue scans, nonintegrability certificates
"""

from .lie import InvariantStructure, LieFrame, koszul_connection, s3xs3_structure
from .multilinear import Adjointness, Metric, classify_adjointness
from .scalarfield import ParseError, ScalarField, parse
from .sphere import DegenerateError, codazzi_map, codazzi_tensor, standard_J6
from .twist import (
    HermitianStructure,
    PreconditionError,
    TwistedStructure,
    flat_kahler,
    lie_structure,
    s6_structure,
    twist,
)

__version__ = "0.1.0"

__all__ = [
    "Adjointness",
    "DegenerateError",
    "HermitianStructure",
    "InvariantStructure",
    "LieFrame",
    "Metric",
    "ParseError",
    "PreconditionError",
    "ScalarField",
    "TwistedStructure",
    "classify_adjointness",
    "codazzi_map",
    "codazzi_tensor",
    "flat_kahler",
    "koszul_connection",
    "lie_structure",
    "parse",
    "s3xs3_structure",
    "s6_structure",
    "standard_J6",
    "twist",
]
