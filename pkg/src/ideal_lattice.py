"""
Ideals of finite rings as membership bitmaps.

Prime ideals of a product of chain rings are enumerated structurally (one per
factor) and cross-checked with the direct primality scan. Ideal sums, products
and powers are additive closures computed on the tabulated arithmetic.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from exceptions import IdealError
from rings import FiniteRing

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Ideal:
    """
    An ideal of ``ring`` given by its membership mask.

    The closure checks (0 in I, I + I in I, R * I in I) run on construction;
    equality and hashing go through the packed mask.
    """
    ring: FiniteRing
    members: np.ndarray

    def __post_init__(self):
        members = np.asarray(self.members, dtype=bool)
        if members.shape != (self.ring.order,):
            raise IdealError(f"membership mask has shape {members.shape}, expected ({self.ring.order},)")
        members.flags.writeable = False
        object.__setattr__(self, "members", members)
        self._check_closure()

    def _check_closure(self) -> None:
        idx = self.indices
        if not self.members[0]:
            raise IdealError("an ideal must contain 0")
        if not self.members[self.ring.add_table[np.ix_(idx, idx)]].all():
            raise IdealError("set is not closed under addition")
        if not self.members[self.ring.mul_table[:, idx]].all():
            raise IdealError("set is not closed under multiplication by ring elements")

    @cached_property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.members).tobytes()

    @property
    def size(self) -> int:
        return int(self.members.sum())

    @property
    def is_whole_ring(self) -> bool:
        return bool(self.members.all())

    @property
    def is_zero(self) -> bool:
        return self.size == 1

    def __contains__(self, index: int) -> bool:
        return bool(self.members[int(index)])

    def issubset(self, other: "Ideal") -> bool:
        self.ring.same_ring(other.ring)
        return bool(np.all(other.members[self.members]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring is other.ring and self.key == other.key

    def __hash__(self) -> int:
        return hash((id(self.ring), self.key))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "size": self.size,
            "generators": [self.ring.display(g) for g in ideal_generators(self)],
        }

    def __repr__(self) -> str:
        return f"Ideal({self.ring.label}, size={self.size})"


@dataclass(frozen=True)
class PrimeInfo:
    """
    A prime ideal with its index Ind(P).

    Attributes:
        id: stable label (the factor position)
        ideal: the prime ideal
        index: least t > 0 with P^t = P^{t+1}
        power_at_index: P^{Ind(P)}
    """
    id: int
    ideal: Ideal
    index: int
    power_at_index: Ideal

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "id": self.id,
            "generators": [self.ideal.ring.display(g) for g in ideal_generators(self.ideal)],
            "index": self.index,
            "size": self.ideal.size,
        }


# ----------------------------------------------------------------------
# Construction


def additive_closure(ring: FiniteRing, seeds: Iterable[int]) -> np.ndarray:
    """Membership mask of the additive subgroup generated by ``seeds``."""
    mask = np.zeros(ring.order, dtype=bool)
    mask[0] = True
    for s in np.unique(np.asarray(list(seeds), dtype=np.int64)):
        # adjoin <s>: grow the subgroup until it is closed under + s
        while True:
            shifted = ring.add_table[np.flatnonzero(mask), s]
            if mask[shifted].all():
                break
            mask[shifted] = True
    return mask


def whole_ring(ring: FiniteRing) -> Ideal:
    return Ideal(ring, np.ones(ring.order, dtype=bool))


def zero_ideal(ring: FiniteRing) -> Ideal:
    members = np.zeros(ring.order, dtype=bool)
    members[0] = True
    return Ideal(ring, members)


def principal_ideal(ring: FiniteRing, c: int) -> Ideal:
    """(c) = {r*c : r in R}."""
    members = np.zeros(ring.order, dtype=bool)
    members[ring.mul_table[int(c), :]] = True
    return Ideal(ring, members)


def generated_ideal(ring: FiniteRing, elements: Iterable[int]) -> Ideal:
    """Smallest ideal containing ``elements``."""
    elements = np.asarray(list(elements), dtype=np.int64)
    if elements.size == 0:
        return zero_ideal(ring)
    multiples = np.unique(ring.mul_table[:, elements])
    return Ideal(ring, additive_closure(ring, multiples))


def ideal_sum(first: Ideal, second: Ideal) -> Ideal:
    first.ring.same_ring(second.ring)
    return Ideal(first.ring, additive_closure(first.ring, np.flatnonzero(first.members | second.members)))


def ideal_product(first: Ideal, second: Ideal) -> Ideal:
    """Additive closure of all products a*b with a in I, b in J."""
    first.ring.same_ring(second.ring)
    products = np.unique(first.ring.mul_table[np.ix_(first.indices, second.indices)])
    return Ideal(first.ring, additive_closure(first.ring, products))


@lru_cache(maxsize=4096)
def ideal_power(ideal: Ideal, exponent: int) -> Ideal:
    """I^k by left fold; I^0 = R. Intermediate powers are memoized."""
    if exponent < 0:
        raise IdealError(f"negative ideal power {exponent}")
    if exponent == 0:
        return whole_ring(ideal.ring)
    if exponent == 1:
        return ideal
    return ideal_product(ideal_power(ideal, exponent - 1), ideal)


def is_prime_ideal(ideal: Ideal) -> bool:
    """Proper, and a, b outside P implies ab outside P (full scan)."""
    if ideal.is_whole_ring:
        return False
    outside = np.flatnonzero(~ideal.members)
    return not ideal.members[ideal.ring.mul_table[np.ix_(outside, outside)]].any()


def ideal_index(prime: Ideal) -> int:
    """
    Least t >= 1 with P^t = P^{t+1}.

    Raises:
        IdealError: if the ideal is not prime
    """
    if not is_prime_ideal(prime):
        raise IdealError(f"{prime!r} is not a prime ideal")
    t = 1
    while ideal_power(prime, t) != ideal_power(prime, t + 1):
        t += 1
    return t


def prime_ideals(ring: FiniteRing) -> List[PrimeInfo]:
    """
    One prime per factor: the factor's maximal ideal times every other factor.

    Each candidate is cross-checked by the primality scan and its index by the
    factor's nilpotency class.
    """
    primes = []
    for position, factor in enumerate(ring.factors):
        members = factor.maximal_ideal_mask()[ring.components[:, position]]
        ideal = Ideal(ring, members)
        if not is_prime_ideal(ideal):
            raise IdealError(f"maximal ideal of factor {position} of {ring.label} failed the primality scan")
        index = ideal_index(ideal)
        if index != factor.nilpotency_index:
            raise IdealError(
                f"Ind(P_{position}) = {index} disagrees with the nilpotency class {factor.nilpotency_index}"
            )
        primes.append(PrimeInfo(position, ideal, index, ideal_power(ideal, index)))
    logger.debug("%s: primes with indices %s", ring.label, [p.index for p in primes])
    return primes


# ----------------------------------------------------------------------
# Queries


@lru_cache(maxsize=16)
def principal_ideal_sizes(ring: FiniteRing) -> np.ndarray:
    """|(c)| for every element c."""
    rows = np.sort(ring.mul_table.astype(np.int64), axis=1)
    return 1 + (np.diff(rows, axis=1) != 0).sum(axis=1)


def ideal_generators(ideal: Ideal) -> List[int]:
    """
    A small generating set: the least single generator when the ideal is
    principal, otherwise a greedy set of least elements.
    """
    ring = ideal.ring
    candidates = ideal.indices
    sizes = principal_ideal_sizes(ring)[candidates]
    single = candidates[sizes == ideal.size]
    if single.size:
        return [int(single[0])]
    generators: List[int] = []
    current = zero_ideal(ring)
    for a in candidates:
        if a not in current:
            generators.append(int(a))
            current = generated_ideal(ring, generators)
    return generators


def coset_labels(ideal: Ideal) -> np.ndarray:
    """Least element of each coset a + I; equal labels mean congruent mod I."""
    return ideal.ring.add_table[:, ideal.indices].min(axis=1)


def congruent(ring: FiniteRing, a: int, b: int, ideal: Ideal) -> bool:
    """a = b mod I."""
    return ring.sub(a, b) in ideal


def crt_basis(ring: FiniteRing, ideals: Sequence[Ideal]) -> List[int]:
    """
    Elements e_i with e_i = 1 mod I_i and e_i in I_j for j != i.

    For each pair i != j a splitting 1 = a + b with a in I_i, b in I_j is found
    by scan; e_i is the product of the b's.

    Raises:
        IdealError: if two of the ideals are not coprime
    """
    basis = []
    for i, first in enumerate(ideals):
        e = ring.one
        for j, second in enumerate(ideals):
            if i == j:
                continue
            a = first.indices
            complements = ring.neg_table[a].astype(np.int64)
            complements = ring.add_table[ring.one, complements]
            hits = np.flatnonzero(second.members[complements])
            if hits.size == 0:
                raise IdealError(f"ideals {i} and {j} are not coprime")
            e = ring.mul(e, int(complements[hits[0]]))
        basis.append(e)
    return basis


def crt_solve(ring: FiniteRing, congruences: Sequence[Tuple[int, Ideal]]) -> int:
    """
    Solve a = c_i mod I_i for pairwise coprime ideals I_i.

    Args:
        ring: the ambient ring
        congruences: (c_i, I_i) pairs

    Returns:
        The least-index solution built from the CRT basis
    """
    if not congruences:
        return ring.zero
    ideals = [ideal for _, ideal in congruences]
    for ideal in ideals:
        ring.same_ring(ideal.ring)
    basis = crt_basis(ring, ideals)
    solution = ring.zero
    for (c, _), e in zip(congruences, basis):
        solution = ring.add(solution, ring.mul(int(c), e))
    for c, ideal in congruences:
        if not congruent(ring, solution, int(c), ideal):
            raise IdealError("CRT basis failed to solve the system")
    # canonical representative: least index in the solution coset of the intersection
    intersection = np.logical_and.reduce([ideal.members for ideal in ideals])
    shifted = ring.add_table[solution, np.flatnonzero(intersection)]
    return int(shifted.min())
