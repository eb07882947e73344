"""
Truncated polynomial chain rings GF(p^e)[x]/(x^k).

An element c_0 + c_1 x + ... + c_{k-1} x^{k-1} is indexed by its coefficient
field indices read as base-q digits (q = p^e, constant term least significant).
"""

import logging
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from .base import ChainFactor, DisplayValue, FactorDescriptor, FactorKind, table_dtype
from .galois_field import GaloisFieldFactor, digits, format_poly
from .integer_chain import IntegerChainFactor

logger = logging.getLogger(__name__)


class TruncatedPolyFactor(ChainFactor):
    """
    The chain ring GF(p^e)[x]/(x^k) with maximal ideal (x) of nilpotency k.

    Automorphisms are the maps sum c_i x^i -> sum sigma(c_i) y^i where sigma is
    a power of the coefficient Frobenius and y has valuation exactly one; each
    candidate is accepted only after the full homomorphism check.
    """

    VARIABLE = "x"

    def __init__(self, p: int, e: int, k: int, reduction_poly: Optional[Sequence[int]] = None):
        if e == 1:
            field: ChainFactor = IntegerChainFactor(p, 1)
        else:
            field = GaloisFieldFactor(p, e, reduction_poly)
        poly = field.descriptor.reduction_poly
        super().__init__(FactorDescriptor(FactorKind.TRUNCATED_POLY, p, k, e, poly))
        self.p = p
        self.e = e
        self.k = k
        self.field = field
        self.q = field.order
        self._coefficients = digits(np.arange(self.order), self.q, self.k)

    @classmethod
    def from_descriptor(cls, descriptor: FactorDescriptor) -> "TruncatedPolyFactor":
        return cls(descriptor.p, descriptor.e, descriptor.k, descriptor.reduction_poly)

    def _encode(self, coefficient_columns: List[np.ndarray]) -> np.ndarray:
        total = np.zeros(np.shape(coefficient_columns[0]), dtype=np.int64)
        for position, column in enumerate(coefficient_columns):
            total += np.asarray(column, dtype=np.int64) * self.q ** position
        return total

    @property
    def one(self) -> int:
        return self.field.one

    @cached_property
    def add_table(self) -> np.ndarray:
        field_add = self.field.add_table
        columns = []
        for position in range(self.k):
            c = self._coefficients[:, position]
            columns.append(field_add[c[:, None], c[None, :]])
        return self._encode(columns).astype(table_dtype(self.order))

    @cached_property
    def mul_table(self) -> np.ndarray:
        field_add = self.field.add_table
        field_mul = self.field.mul_table
        columns = []
        for degree in range(self.k):
            acc = np.zeros((self.order, self.order), dtype=np.int64)
            for i in range(degree + 1):
                left = self._coefficients[:, i]
                right = self._coefficients[:, degree - i]
                acc = field_add[acc, field_mul[left[:, None], right[None, :]]]
            columns.append(acc)
        return self._encode(columns).astype(table_dtype(self.order))

    @property
    def nilpotency_index(self) -> int:
        return self.k

    def maximal_ideal_mask(self) -> np.ndarray:
        return self._coefficients[:, 0] == 0

    def _substitution_table(self, sigma: np.ndarray, image_of_x: int) -> np.ndarray:
        """Table of sum c_i x^i -> sum sigma(c_i) y^i for y = image_of_x."""
        add, mul = self.add_table, self.mul_table
        result = np.zeros(self.order, dtype=np.int64)
        power = self.one
        for position in range(self.k):
            # a constant c embeds as the element with index c
            constants = sigma[self._coefficients[:, position]].astype(np.int64)
            result = add[result, mul[constants, power]]
            power = int(mul[power, image_of_x])
        return result

    def _is_homomorphism(self, table: np.ndarray) -> bool:
        if len(np.unique(table)) != self.order or table[self.one] != self.one:
            return False
        add, mul = self.add_table, self.mul_table
        return bool(
            np.array_equal(table[add], add[table[:, None], table[None, :]])
            and np.array_equal(table[mul], mul[table[:, None], table[None, :]])
        )

    def automorphism_tables(self) -> List[np.ndarray]:
        identity = self.identity_table()
        field_maps = self.field.automorphism_tables()
        valuation_one = np.flatnonzero((self._coefficients[:, 0] == 0) & (self._coefficients[:, 1] != 0))
        tables = [identity]
        for sigma in field_maps:
            for image in valuation_one:
                table = self._substitution_table(sigma, int(image)).astype(identity.dtype)
                if np.array_equal(table, identity):
                    continue
                if self._is_homomorphism(table):
                    tables.append(table)
                else:
                    logger.debug("rejected candidate automorphism x -> %s", self.display(int(image)))
        return tables

    def frobenius_table(self) -> np.ndarray:
        """Coefficient Frobenius with x fixed."""
        x_index = self.q  # coefficient vector (0, 1, 0, ...)
        return self._substitution_table(self.field.frobenius_table(), x_index).astype(table_dtype(self.order))

    def display(self, value: int) -> DisplayValue:
        coefficients = [self.field.display(int(c)) for c in self._coefficients[value]]
        return format_poly(coefficients, self.VARIABLE)
