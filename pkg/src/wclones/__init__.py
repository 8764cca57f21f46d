"""Weighted clones over finite domains: operations, weightings, VCSP tools and
certified witness weightings."""

from .errors import (
    CertificateError,
    InputError,
    ProperError,
    ResourceError,
    TheoremContradiction,
    ValidityError,
    WcloneError,
)
from .ops import Operation, classify, projection
from .rationals import INF
from .weightings import Weighting

__all__ = [
    "CertificateError",
    "INF",
    "InputError",
    "Operation",
    "ProperError",
    "ResourceError",
    "TheoremContradiction",
    "ValidityError",
    "WcloneError",
    "Weighting",
    "classify",
    "projection",
]
