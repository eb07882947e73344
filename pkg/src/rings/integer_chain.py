"""
Integer chain rings Z/p^k.
"""

import logging
from functools import cached_property
from typing import List

import numpy as np

from .base import ChainFactor, DisplayValue, FactorDescriptor, FactorKind, table_dtype

logger = logging.getLogger(__name__)


class IntegerChainFactor(ChainFactor):
    """
    The ring Z/p^k, elements stored as their least non-negative residues.

    Its only ring automorphism is the identity (it is generated by 1).
    """

    def __init__(self, p: int, k: int = 1):
        super().__init__(FactorDescriptor(FactorKind.INTEGER_CHAIN, p, k))
        self.p = p
        self.k = k

    @classmethod
    def from_descriptor(cls, descriptor: FactorDescriptor) -> "IntegerChainFactor":
        return cls(descriptor.p, descriptor.k)

    @property
    def one(self) -> int:
        return 1 % self.order

    @cached_property
    def add_table(self) -> np.ndarray:
        values = np.arange(self.order, dtype=np.int64)
        return (np.add.outer(values, values) % self.order).astype(table_dtype(self.order))

    @cached_property
    def mul_table(self) -> np.ndarray:
        values = np.arange(self.order, dtype=np.int64)
        return (np.multiply.outer(values, values) % self.order).astype(table_dtype(self.order))

    @property
    def nilpotency_index(self) -> int:
        return self.k

    def maximal_ideal_mask(self) -> np.ndarray:
        return np.arange(self.order) % self.p == 0

    def automorphism_tables(self) -> List[np.ndarray]:
        return [self.identity_table()]

    def frobenius_table(self) -> np.ndarray:
        # a -> a^p is not additive on Z/p^k for k > 1; the weight is the identity
        return self.identity_table()

    def display(self, value: int) -> DisplayValue:
        return int(value)
