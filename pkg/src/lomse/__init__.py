"""Lawson-Osserman cones of (n, p, k)-type: classification, the oscillating
Dirichlet solution family and Jacobi-field stability on the quotient plane."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateAngle,
    DomainError,
    InadmissibleTriple,
    InternalInconsistency,
    LomseError,
    NotAGraph,
    NotOscillating,
    NumericalError,
    WrongType,
)
from .params import (  # noqa: E402
    ConeType,
    LomseParams,
    LomseTriple,
    classify,
    derive_params,
    enumerate_admissible,
)

__all__ = [
    "ConeType",
    "DegenerateAngle",
    "DomainError",
    "InadmissibleTriple",
    "InternalInconsistency",
    "LomseError",
    "LomseParams",
    "LomseTriple",
    "NotAGraph",
    "NotOscillating",
    "NumericalError",
    "WrongType",
    "classify",
    "derive_params",
    "enumerate_admissible",
]
