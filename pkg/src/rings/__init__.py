"""
Chain-ring factors and finite products of them.

Every finite commutative principal ideal ring is a finite product of chain
rings; this package builds such products with tabulated arithmetic.
"""

from .base import ChainFactor, DisplayValue, FactorDescriptor, FactorKind, table_dtype
from .galois_field import GaloisFieldFactor, default_reduction_poly, is_irreducible
from .integer_chain import IntegerChainFactor
from .ring import (
    DisplayGroup,
    FiniteRing,
    RingElement,
    add,
    build_ring,
    idempotents,
    make_factor,
    mul,
    units,
)
from .truncated_poly import TruncatedPolyFactor

__all__ = [
    "ChainFactor",
    "DisplayGroup",
    "DisplayValue",
    "FactorDescriptor",
    "FactorKind",
    "FiniteRing",
    "GaloisFieldFactor",
    "IntegerChainFactor",
    "RingElement",
    "TruncatedPolyFactor",
    "add",
    "build_ring",
    "default_reduction_poly",
    "idempotents",
    "is_irreducible",
    "make_factor",
    "mul",
    "table_dtype",
    "units",
]
