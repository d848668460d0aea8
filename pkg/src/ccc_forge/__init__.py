"""Trace codes C_D(alpha), their constant-composition subcodes, and exact checks
of the character-sum identities behind their parameters."""

__version__ = "0.1.0"

from .field import ExtField, FieldElement, Parameters, ParameterError, find_irreducible  # noqa: E402
from .cyclotomic import CyclotomicInt  # noqa: E402

__all__ = [
    "CyclotomicInt",
    "ExtField",
    "FieldElement",
    "ParameterError",
    "Parameters",
    "find_irreducible",
]
