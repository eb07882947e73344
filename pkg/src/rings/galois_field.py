"""
Finite fields GF(p^e) realized as GF(p)[a]/(f(a)).

Elements are indexed by their coefficient vectors read as base-p digits
(constant term least significant), so for GF(4) with f = a^2+a+1 the
elements are 0, 1, a (index 2) and a+1 (index 3).

Multiplication is tabulated through discrete logarithms with respect to a
primitive element; irreducibility of the reduction polynomial is checked by
exhaustive trial division over all monic polynomials of degree <= e/2.
"""

import itertools
import logging
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, symbols

from exceptions import RingConstructionError
from .base import ChainFactor, DisplayValue, FactorDescriptor, FactorKind, table_dtype

logger = logging.getLogger(__name__)

_X = symbols("x")


def _as_poly(coeffs: Sequence[int], p: int) -> Poly:
    """sympy polynomial over GF(p) from constant-first coefficients."""
    return Poly(list(reversed(list(coeffs))), _X, modulus=p)


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """
    Exhaustive irreducibility test over GF(p).

    Args:
        coeffs: constant-first coefficients of a monic polynomial
        p: prime modulus

    Returns:
        True if no monic polynomial of degree 1..deg/2 divides it
    """
    f = _as_poly(coeffs, p)
    degree = f.degree()
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if f.rem(_as_poly(list(tail) + [1], p)).is_zero:
                return False
    return True


def digits(values: np.ndarray, base: int, width: int) -> np.ndarray:
    """Base-``base`` digits of each value, least significant first; shape (len, width)."""
    values = np.asarray(values, dtype=np.int64)
    powers = base ** np.arange(width, dtype=np.int64)
    return (values[:, None] // powers[None, :]) % base


def default_reduction_poly(p: int, e: int) -> Tuple[int, ...]:
    """First monic irreducible polynomial of degree e, ordered by coefficient code."""
    if e == 1:
        raise RingConstructionError("prime fields take no reduction polynomial")
    for code in range(p ** e):
        coeffs = tuple(int(c) for c in digits(np.array([code]), p, e)[0]) + (1,)
        if is_irreducible(coeffs, p):
            return coeffs
    raise RingConstructionError(f"no irreducible polynomial of degree {e} over GF({p})")


def format_poly(coefficients: Sequence[DisplayValue], variable: str) -> str:
    """Render constant-first coefficients as 'c_n var^n + ... + c_0', skipping zeros."""
    terms = []
    for power in range(len(coefficients) - 1, -1, -1):
        coefficient = coefficients[power]
        text = str(coefficient)
        if text == "0":
            continue
        if power == 0:
            terms.append(text)
            continue
        monomial = variable if power == 1 else f"{variable}^{power}"
        if text == "1":
            terms.append(monomial)
        elif "+" in text:
            terms.append(f"({text}){monomial}")
        else:
            terms.append(f"{text}{monomial}")
    return "+".join(terms) if terms else "0"


class GaloisFieldFactor(ChainFactor):
    """
    The field GF(p^e).

    Args:
        p: characteristic
        e: extension degree
        reduction_poly: constant-first monic irreducible polynomial; the first
            irreducible one in coefficient order is used when omitted
    """

    VARIABLE = "a"

    def __init__(self, p: int, e: int, reduction_poly: Optional[Sequence[int]] = None):
        if e > 1 and reduction_poly is None:
            reduction_poly = default_reduction_poly(p, e)
        poly = tuple(int(c) for c in reduction_poly) if reduction_poly is not None else None
        super().__init__(FactorDescriptor(FactorKind.GALOIS_FIELD, p, 1, e, poly))
        if poly is not None and not is_irreducible(poly, p):
            raise RingConstructionError(f"reduction polynomial {format_poly(poly, 'x')} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.reduction_poly = poly
        self._exp, self._log = self._discrete_log_tables()
        logger.debug("built GF(%d) with reduction poly %s", self.order, poly)

    @classmethod
    def from_descriptor(cls, descriptor: FactorDescriptor) -> "GaloisFieldFactor":
        return cls(descriptor.p, descriptor.e, descriptor.reduction_poly)

    def _mulmod(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        product = np.convolve(left, right) % self.p
        if self.reduction_poly is None:
            return product[:1]
        modulus = np.array(self.reduction_poly, dtype=np.int64)
        for degree in range(len(product) - 1, self.e - 1, -1):
            lead = product[degree]
            if lead:
                product[degree - self.e:degree + 1] = (product[degree - self.e:degree + 1] - lead * modulus) % self.p
        return product[:self.e]

    def _encode(self, coefficient_vector: np.ndarray) -> int:
        return int(np.dot(coefficient_vector, self.p ** np.arange(self.e, dtype=np.int64)))

    def _discrete_log_tables(self) -> Tuple[np.ndarray, np.ndarray]:
        q = self.order
        vectors = digits(np.arange(q), self.p, self.e)
        one = vectors[1]
        for candidate in range(1, q):
            exp = [1]
            power = one
            while True:
                power = self._mulmod(power, vectors[candidate])
                index = self._encode(power)
                if index == 1:
                    break
                exp.append(index)
            if len(exp) == q - 1:
                exp_table = np.array(exp, dtype=np.int64)
                log_table = np.full(q, -1, dtype=np.int64)
                log_table[exp_table] = np.arange(q - 1)
                return exp_table, log_table
        raise RingConstructionError(f"no primitive element found in GF({q})")

    @property
    def one(self) -> int:
        return 1

    @cached_property
    def add_table(self) -> np.ndarray:
        vectors = digits(np.arange(self.order), self.p, self.e)
        total = np.zeros((self.order, self.order), dtype=np.int64)
        for position in range(self.e):
            column = vectors[:, position]
            total += (np.add.outer(column, column) % self.p) * self.p ** position
        return total.astype(table_dtype(self.order))

    @cached_property
    def mul_table(self) -> np.ndarray:
        logs = self._log
        table = self._exp[(logs[:, None] + logs[None, :]) % (self.order - 1)]
        table[logs < 0, :] = 0
        table[:, logs < 0] = 0
        return table.astype(table_dtype(self.order))

    @property
    def nilpotency_index(self) -> int:
        return 1

    def maximal_ideal_mask(self) -> np.ndarray:
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return mask

    def frobenius_table(self) -> np.ndarray:
        """a -> a^p."""
        table = np.zeros(self.order, dtype=np.int64)
        nonzero = np.arange(1, self.order)
        table[nonzero] = self._exp[(self._log[nonzero] * self.p) % (self.order - 1)]
        return table.astype(table_dtype(self.order))

    def automorphism_tables(self) -> List[np.ndarray]:
        frobenius = self.frobenius_table()
        tables = []
        current = self.identity_table()
        for _ in range(self.e):
            tables.append(current)
            current = frobenius[current]
        return tables

    def display(self, value: int) -> DisplayValue:
        if self.e == 1:
            return int(value)
        vector = digits(np.array([value]), self.p, self.e)[0]
        return format_poly([int(c) for c in vector], self.VARIABLE)
