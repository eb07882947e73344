"""
Finite commutative unitary rings as products of chain-ring factors.

Elements are canonical indices in ``[0, order)``: the mixed-radix encoding of
the per-factor indices with the first factor most significant. Index 0 is the
zero element. Addition and multiplication are tabulated once at construction
and the ring is immutable afterwards.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import ClaimsConfig, RingConfig
from exceptions import RingConstructionError, RingMismatchError
from .base import ChainFactor, DisplayValue, FactorDescriptor, FactorKind, table_dtype
from .galois_field import GaloisFieldFactor
from .integer_chain import IntegerChainFactor
from .truncated_poly import TruncatedPolyFactor

logger = logging.getLogger(__name__)

# Full checks below this order, sampled triples above it
EXHAUSTIVE_CHECK_ORDER = 256


@dataclass(frozen=True)
class DisplayGroup:
    """
    A run of consecutive factors that came from one token of the ring spec.

    A ``Z/n`` token splits into its prime-power factors; its elements are shown
    as residues modulo ``modulus``. Other tokens map to a single factor and
    ``modulus`` is None.
    """
    label: str
    start: int
    stop: int
    modulus: Optional[int] = None


def make_factor(descriptor: FactorDescriptor) -> ChainFactor:
    """Instantiate the chain factor named by a descriptor."""
    descriptor = descriptor.normalized()
    if descriptor.kind is FactorKind.INTEGER_CHAIN:
        return IntegerChainFactor.from_descriptor(descriptor)
    if descriptor.kind is FactorKind.GALOIS_FIELD:
        return GaloisFieldFactor.from_descriptor(descriptor)
    return TruncatedPolyFactor.from_descriptor(descriptor)


class FiniteRing:
    """
    Product of chain rings with tabulated arithmetic.

    Attributes:
        factors: chain factors in order
        order: number of elements
        components: (order, n_factors) array of per-factor indices
        add_table / mul_table: order x order index tables
        neg_table: additive inverses
        one: index of the identity
        idempotent_mask / unit_mask: boolean masks over element indices
    """

    def __init__(self, factors: Sequence[ChainFactor], groups: Optional[Sequence[DisplayGroup]] = None):
        if not factors:
            raise RingConstructionError("a ring needs at least one factor")
        self.factors: Tuple[ChainFactor, ...] = tuple(factors)
        self.radices = np.array([f.order for f in self.factors], dtype=np.int64)
        self.order = int(np.prod(self.radices))
        self.strides = np.array(
            [int(np.prod(self.radices[i + 1:])) for i in range(len(self.factors))], dtype=np.int64
        )
        self.groups: Tuple[DisplayGroup, ...] = tuple(groups) if groups else tuple(
            DisplayGroup(f.descriptor.label, i, i + 1) for i, f in enumerate(self.factors)
        )
        self._check_groups()

        indices = np.arange(self.order, dtype=np.int64)
        self.components = (indices[:, None] // self.strides[None, :]) % self.radices[None, :]
        self.add_table = self._product_table(lambda f: f.add_table)
        self.mul_table = self._product_table(lambda f: f.mul_table)
        self.one = self.encode([f.one for f in self.factors])
        self.neg_table = np.argmax(self.add_table == 0, axis=1).astype(self.add_table.dtype)

        self.idempotent_mask = self.mul_table[indices, indices] == indices
        unit_mask = np.ones(self.order, dtype=bool)
        for i, factor in enumerate(self.factors):
            unit_mask &= factor.unit_mask()[self.components[:, i]]
        self.unit_mask = unit_mask
        self._display_lookups: Dict[int, Tuple[Dict[int, int], Dict[int, int]]] = {}
        logger.debug("built ring %s of order %d", self.label, self.order)

    def _check_groups(self) -> None:
        position = 0
        for group in self.groups:
            if group.start != position or group.stop <= group.start:
                raise RingConstructionError(f"display groups do not tile the factors: {self.groups}")
            position = group.stop
        if position != len(self.factors):
            raise RingConstructionError(f"display groups do not tile the factors: {self.groups}")

    def _product_table(self, table_of) -> np.ndarray:
        table = np.zeros((self.order, self.order), dtype=table_dtype(self.order))
        for i, factor in enumerate(self.factors):
            c = self.components[:, i]
            table += factor_table_lookup(table_of(factor), c) * self.strides[i].astype(table.dtype)
        return table

    # ------------------------------------------------------------------
    # Encoding

    @property
    def descriptors(self) -> Tuple[FactorDescriptor, ...]:
        return tuple(f.descriptor for f in self.factors)

    @property
    def label(self) -> str:
        """Canonical ring spec, e.g. ``Z/12`` or ``GF(4) x GF(4)``."""
        return " x ".join(g.label for g in self.groups)

    @property
    def zero(self) -> int:
        return 0

    def encode(self, components: Sequence[int]) -> int:
        if len(components) != len(self.factors):
            raise RingConstructionError(f"expected {len(self.factors)} components, got {len(components)}")
        for value, radix in zip(components, self.radices):
            if not 0 <= int(value) < radix:
                raise RingConstructionError(f"component {value} out of range for radix {radix}")
        return int(np.dot(np.asarray(components, dtype=np.int64), self.strides))

    def decode(self, index: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in self.components[self._check_index(index)])

    def _check_index(self, index: int) -> int:
        index = int(index)
        if not 0 <= index < self.order:
            raise RingConstructionError(f"{index} is not an element index of {self.label}")
        return index

    def element(self, index: int) -> "RingElement":
        return RingElement(self, self._check_index(index))

    # ------------------------------------------------------------------
    # Display

    def _group_lookup(self, group_index: int) -> Tuple[Dict[int, int], Dict[int, int]]:
        """Residue -> group-local mixed-radix index, and its inverse."""
        if group_index not in self._display_lookups:
            group = self.groups[group_index]
            lookup: Dict[int, int] = {}
            if group.modulus is not None:
                moduli = self.radices[group.start:group.stop]
                local_strides = np.array(
                    [int(np.prod(moduli[i + 1:])) for i in range(len(moduli))], dtype=np.int64
                )
                residues = np.arange(group.modulus, dtype=np.int64)
                local = ((residues[:, None] % moduli[None, :]) * local_strides[None, :]).sum(axis=1)
                lookup = {int(r): int(l) for r, l in zip(residues, local)}
            self._display_lookups[group_index] = (lookup, {v: k for k, v in lookup.items()})
        return self._display_lookups[group_index]

    def _display_group(self, group_index: int, components: Sequence[int]) -> DisplayValue:
        group = self.groups[group_index]
        if group.modulus is None:
            return self.factors[group.start].display(int(components[group.start]))
        moduli = self.radices[group.start:group.stop]
        local = 0
        for value, modulus in zip(components[group.start:group.stop], moduli):
            local = local * int(modulus) + int(value)
        return self._group_lookup(group_index)[1][local]

    def display(self, index: int) -> Union[DisplayValue, List[DisplayValue]]:
        """User-facing form: Z/n residues, polynomials in a and x, lists for products."""
        components = self.decode(index)
        values = [self._display_group(g, components) for g in range(len(self.groups))]
        return values[0] if len(values) == 1 else values

    def element_from_display(self, value: Union[DisplayValue, Sequence[DisplayValue]]) -> int:
        """Inverse of ``display``."""
        if len(self.groups) == 1:
            values = [value]
        elif isinstance(value, (list, tuple)) and len(value) == len(self.groups):
            values = list(value)
        else:
            raise RingConstructionError(f"{value!r} does not have {len(self.groups)} coordinates")
        components: List[int] = []
        for group_index, (group, item) in enumerate(zip(self.groups, values)):
            if group.modulus is None:
                components.append(self.factors[group.start].parse_display(item))
                continue
            try:
                residue = int(item) % group.modulus
            except (TypeError, ValueError):
                raise RingConstructionError(f"{item!r} is not a residue modulo {group.modulus}") from None
            local = self._group_lookup(group_index)[0][residue]
            moduli = [int(m) for m in self.radices[group.start:group.stop]]
            digits_ = []
            for modulus in reversed(moduli):
                digits_.append(local % modulus)
                local //= modulus
            components.extend(reversed(digits_))
        return self.encode(components)

    # ------------------------------------------------------------------
    # Arithmetic on indices

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def power(self, a: int, exponent: int) -> int:
        result = self.one
        for _ in range(exponent):
            result = int(self.mul_table[result, a])
        return result

    def product(self, values: Iterable[int]) -> int:
        result = self.one
        for value in values:
            result = int(self.mul_table[result, value])
        return result

    @property
    def idempotent_indices(self) -> np.ndarray:
        return np.flatnonzero(self.idempotent_mask)

    @property
    def unit_indices(self) -> np.ndarray:
        return np.flatnonzero(self.unit_mask)

    @property
    def is_local(self) -> bool:
        return len(self.factors) == 1

    # ------------------------------------------------------------------
    # Verification

    def verify(self, seed: int, samples: int) -> None:
        """
        Check the ring axioms.

        Commutativity, identity and absorption are checked on every pair up to
        EXHAUSTIVE_CHECK_ORDER and on sampled pairs above it; associativity and
        distributivity always run on ``samples`` random triples.

        Raises:
            RingConstructionError: if any check fails
        """
        add, mul = self.add_table, self.mul_table
        rng = np.random.default_rng(seed)
        if self.order <= EXHAUSTIVE_CHECK_ORDER:
            a = np.repeat(np.arange(self.order), self.order)
            b = np.tile(np.arange(self.order), self.order)
        else:
            a = rng.integers(0, self.order, samples)
            b = rng.integers(0, self.order, samples)
        c = rng.integers(0, self.order, len(a))

        failures = []
        if not np.array_equal(add[a, b], add[b, a]):
            failures.append("addition is not commutative")
        if not np.array_equal(mul[a, b], mul[b, a]):
            failures.append("multiplication is not commutative")
        if not np.array_equal(mul[a, self.one], a):
            failures.append("1 is not a multiplicative identity")
        if np.any(mul[a, 0] != 0):
            failures.append("0 is not absorbing")
        if not np.array_equal(add[add[a, b], c], add[a, add[b, c]]):
            failures.append("addition is not associative")
        if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
            failures.append("multiplication is not associative")
        if not np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]]):
            failures.append("multiplication does not distribute over addition")
        invertible = (mul == self.one).any(axis=1)
        if not np.array_equal(invertible, self.unit_mask):
            failures.append("componentwise unit mask disagrees with the inverse scan")
        if failures:
            raise RingConstructionError(f"{self.label}: " + "; ".join(failures))

    def same_ring(self, other: "FiniteRing") -> None:
        if other is not self:
            raise RingMismatchError(f"operands belong to different rings ({self.label} vs {other.label})")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "ring": self.label,
            "order": self.order,
            "factors": [d.to_dict() for d in self.descriptors],
        }

    def __repr__(self) -> str:
        return f"FiniteRing({self.label!r})"


def factor_table_lookup(table: np.ndarray, components: np.ndarray) -> np.ndarray:
    """Lift a factor table to the product ring through the component columns."""
    return table[components[:, None], components[None, :]]


@dataclass(frozen=True)
class RingElement:
    """An element of a FiniteRing, by canonical index."""
    ring: FiniteRing
    index: int

    @property
    def components(self) -> Tuple[int, ...]:
        return self.ring.decode(self.index)

    @property
    def display(self) -> Union[DisplayValue, List[DisplayValue]]:
        return self.ring.display(self.index)

    def __add__(self, other: "RingElement") -> "RingElement":
        self.ring.same_ring(other.ring)
        return RingElement(self.ring, self.ring.add(self.index, other.index))

    def __mul__(self, other: "RingElement") -> "RingElement":
        self.ring.same_ring(other.ring)
        return RingElement(self.ring, self.ring.mul(self.index, other.index))

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, self.ring.neg(self.index))

    def __int__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return f"RingElement({self.display!r})"


def build_ring(
    descriptors: Sequence[FactorDescriptor],
    max_order: Optional[int] = None,
    groups: Optional[Sequence[DisplayGroup]] = None,
    seed: Optional[int] = None,
    samples: Optional[int] = None,
) -> FiniteRing:
    """
    Construct and verify a product of chain rings.

    Args:
        descriptors: chain-factor descriptors in order
        max_order: order cap (configured default when None)
        groups: display grouping of the factors (one group per factor when None)
        seed: seed for the sampled axiom checks
        samples: number of sampled triples

    Returns:
        The verified FiniteRing

    Raises:
        RingConstructionError: on an invalid descriptor or an exceeded order cap
    """
    ring_config = RingConfig.from_env()
    claims_config = ClaimsConfig.from_env()
    cap = ring_config.max_order if max_order is None else max_order
    order = 1
    for descriptor in descriptors:
        descriptor.normalized().validate()
        order *= descriptor.order
    if order > cap:
        raise RingConstructionError(f"ring order {order} exceeds the cap {cap}")
    ring = FiniteRing([make_factor(d) for d in descriptors], groups)
    ring.verify(
        seed=claims_config.sample_seed if seed is None else seed,
        samples=claims_config.sample_size if samples is None else samples,
    )
    return ring


def idempotents(ring: FiniteRing) -> List[RingElement]:
    """All e with e*e = e, by full scan."""
    return [RingElement(ring, int(i)) for i in ring.idempotent_indices]


def units(ring: FiniteRing) -> List[RingElement]:
    """All invertible elements (every component a unit of its factor)."""
    return [RingElement(ring, int(i)) for i in ring.unit_indices]


def add(ring: FiniteRing, a: int, b: int) -> RingElement:
    return RingElement(ring, ring.add(a, b))


def mul(ring: FiniteRing, a: int, b: int) -> RingElement:
    return RingElement(ring, ring.mul(a, b))
