"""
Base classes and interfaces for chain-ring factors.

Every finite commutative principal ideal ring is a product of finite chain
rings. This module defines the descriptor that names a factor and the abstract
base class that every concrete factor implements, so that ``FiniteRing`` can
assemble products without knowing which kind of factor it holds.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from sympy import isprime

from exceptions import RingConstructionError


class FactorKind(Enum):
    """Supported chain-ring factor kinds."""
    INTEGER_CHAIN = "integer-chain"      # Z/p^k
    GALOIS_FIELD = "galois-field"        # GF(p^e)
    TRUNCATED_POLY = "truncated-poly"    # GF(p^e)[x]/(x^k), k >= 2


@dataclass(frozen=True)
class FactorDescriptor:
    """
    Canonical description of one chain-ring factor.

    Attributes:
        kind: factor kind
        p: characteristic prime
        k: exponent (Z/p^k) or nilpotency class (truncated poly); 1 for fields
        e: extension degree of the residue field
        reduction_poly: monic irreducible polynomial of degree e over GF(p),
            coefficients listed from the constant term upwards; None when e == 1
    """
    kind: FactorKind
    p: int
    k: int = 1
    e: int = 1
    reduction_poly: Optional[Tuple[int, ...]] = None

    @property
    def residue_order(self) -> int:
        """Order of the residue field GF(p^e)."""
        return self.p ** self.e

    @property
    def order(self) -> int:
        """Number of elements of the factor."""
        if self.kind is FactorKind.INTEGER_CHAIN:
            return self.p ** self.k
        if self.kind is FactorKind.GALOIS_FIELD:
            return self.p ** self.e
        return self.p ** (self.e * self.k)

    @property
    def label(self) -> str:
        """Ring-spec notation for this factor."""
        if self.kind is FactorKind.INTEGER_CHAIN:
            return f"Z/{self.order}"
        if self.kind is FactorKind.GALOIS_FIELD:
            return f"GF({self.residue_order})"
        return f"GF({self.residue_order})[x]/x^{self.k}"

    def validate(self) -> None:
        """Check the descriptor invariants, raising RingConstructionError."""
        if not isprime(self.p):
            raise RingConstructionError(f"{self.p} is not prime")
        if self.k < 1 or self.e < 1:
            raise RingConstructionError(f"exponents must be >= 1 (k={self.k}, e={self.e})")
        if self.kind is FactorKind.INTEGER_CHAIN and self.e != 1:
            raise RingConstructionError("integer-chain factors have e == 1")
        if self.kind is FactorKind.GALOIS_FIELD and self.k != 1:
            raise RingConstructionError("galois-field factors have k == 1")
        if self.kind is FactorKind.TRUNCATED_POLY and self.k < 2:
            raise RingConstructionError("truncated-poly factors need k >= 2; use a galois-field factor")
        if self.e > 1:
            if self.reduction_poly is None or len(self.reduction_poly) != self.e + 1:
                raise RingConstructionError(f"a monic reduction polynomial of degree {self.e} is required")
            if self.reduction_poly[-1] != 1:
                raise RingConstructionError("reduction polynomial must be monic")
            if any(not 0 <= c < self.p for c in self.reduction_poly):
                raise RingConstructionError(f"reduction polynomial coefficients must lie in [0, {self.p})")
        elif self.reduction_poly is not None:
            raise RingConstructionError("prime-field factors take no reduction polynomial")

    def normalized(self) -> "FactorDescriptor":
        """GF(p) is stored as Z/p so that isomorphic factors have equal descriptors."""
        if self.kind is FactorKind.GALOIS_FIELD and self.e == 1:
            return FactorDescriptor(FactorKind.INTEGER_CHAIN, self.p, 1, 1, None)
        return self

    def sort_key(self) -> Tuple[int, int, int, int]:
        return (self.order, self.p, self.e, self.k)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "kind": self.kind.value,
            "p": self.p,
            "k": self.k,
            "e": self.e,
            "reduction_poly": list(self.reduction_poly) if self.reduction_poly else None,
            "label": self.label,
        }


DisplayValue = Union[int, str]


def table_dtype(order: int) -> np.dtype:
    """Smallest unsigned dtype that holds every element index of a ring."""
    return np.min_scalar_type(max(order - 1, 1))


class ChainFactor(ABC):
    """
    Abstract base class for a finite chain ring.

    Elements are the integers ``0 .. order-1``; index 0 is the zero element.
    Subclasses provide the addition and multiplication tables, the maximal
    ideal, and the automorphism group of the factor.
    """

    def __init__(self, descriptor: FactorDescriptor):
        descriptor.validate()
        self.descriptor = descriptor

    @property
    def order(self) -> int:
        return self.descriptor.order

    @property
    @abstractmethod
    def one(self) -> int:
        """Index of the multiplicative identity."""

    @property
    @abstractmethod
    def add_table(self) -> np.ndarray:
        """order x order table of sums."""

    @property
    @abstractmethod
    def mul_table(self) -> np.ndarray:
        """order x order table of products."""

    @property
    @abstractmethod
    def nilpotency_index(self) -> int:
        """Least t > 0 with m^t = m^{t+1} for the maximal ideal m."""

    @abstractmethod
    def maximal_ideal_mask(self) -> np.ndarray:
        """Boolean membership mask of the maximal ideal."""

    @abstractmethod
    def automorphism_tables(self) -> List[np.ndarray]:
        """All ring automorphisms of the factor as permutation tables, identity first."""

    @abstractmethod
    def frobenius_table(self) -> np.ndarray:
        """The Frobenius-type automorphism used by the ``frobenius(i)`` weight descriptor."""

    @abstractmethod
    def display(self, value: int) -> DisplayValue:
        """Human-readable form of an element."""

    @cached_property
    def _display_lookup(self) -> Dict[str, int]:
        return {str(self.display(v)).replace(" ", ""): v for v in range(self.order)}

    def parse_display(self, value: DisplayValue) -> int:
        """Inverse of ``display``; integers are accepted as raw indices."""
        if isinstance(value, (int, np.integer)):
            if not 0 <= int(value) < self.order:
                raise RingConstructionError(f"{value} is not an element of {self.descriptor.label}")
            return int(value)
        key = str(value).replace(" ", "")
        if key not in self._display_lookup:
            raise RingConstructionError(f"{value!r} is not an element of {self.descriptor.label}")
        return self._display_lookup[key]

    def unit_mask(self) -> np.ndarray:
        """A local ring's units are exactly the elements outside the maximal ideal."""
        return ~self.maximal_ideal_mask()

    def identity_table(self) -> np.ndarray:
        return np.arange(self.order, dtype=table_dtype(self.order))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor.label})"
