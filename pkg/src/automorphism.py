"""
Ring automorphisms, weight groups and their action on Spec R.

Automorphisms are element-permutation tables. ``full_aut`` assembles Aut(R)
from the per-factor automorphism groups and the permutations of isomorphic
factors; ``parse_psi`` turns a weight descriptor such as ``swap(0,1)`` or
``frobenius(0)+cyclic(3)`` into the generated subgroup.
"""

import hashlib
import itertools
import json
import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import ClaimsConfig
from exceptions import AutomorphismError
from ideal_lattice import Ideal, PrimeInfo
from rings import FactorDescriptor, FiniteRing, build_ring
from rings.galois_field import GaloisFieldFactor
from rings.ring import EXHAUSTIVE_CHECK_ORDER
from rings.truncated_poly import TruncatedPolyFactor

logger = logging.getLogger(__name__)

# Largest Aut(R) that full_aut will assemble
MAX_ASSEMBLED_GROUP = 40320

# Orders for which brute_force_automorphisms is allowed
BRUTE_FORCE_MAX_ORDER = 32


def automorphism_failure(ring: FiniteRing, table: np.ndarray, seed: int, samples: int) -> Optional[str]:
    """
    Why ``table`` is not a ring automorphism, or None if it is.

    Additivity and multiplicativity are checked on every pair up to
    EXHAUSTIVE_CHECK_ORDER and on ``samples`` random pairs above it.
    """
    table = np.asarray(table)
    if table.shape != (ring.order,):
        return f"table has shape {table.shape}, expected ({ring.order},)"
    if not np.array_equal(np.sort(table.astype(np.int64)), np.arange(ring.order)):
        return "not a bijection"
    if table[ring.one] != ring.one:
        return "does not fix 1"
    if ring.order <= EXHAUSTIVE_CHECK_ORDER:
        a = np.repeat(np.arange(ring.order), ring.order)
        b = np.tile(np.arange(ring.order), ring.order)
    else:
        rng = np.random.default_rng(seed)
        a = rng.integers(0, ring.order, samples)
        b = rng.integers(0, ring.order, samples)
    bad = np.flatnonzero(table[ring.add_table[a, b]] != ring.add_table[table[a], table[b]])
    if bad.size:
        return f"not additive at ({ring.display(a[bad[0]])}, {ring.display(b[bad[0]])})"
    bad = np.flatnonzero(table[ring.mul_table[a, b]] != ring.mul_table[table[a], table[b]])
    if bad.size:
        return f"not multiplicative at ({ring.display(a[bad[0]])}, {ring.display(b[bad[0]])})"
    return None


@dataclass(frozen=True, eq=False)
class RingAutomorphism:
    """
    A ring automorphism as a permutation table over element indices.

    Attributes:
        ring: the ring acted on
        table: table[a] is the image of a
        descriptor: provenance, e.g. ``perm(1,0)`` or ``f0: a->a+1``
    """
    ring: FiniteRing
    table: np.ndarray
    descriptor: str = "id"

    def __post_init__(self):
        table = np.asarray(self.table).astype(self.ring.add_table.dtype)
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @cached_property
    def key(self) -> bytes:
        return self.table.tobytes()

    def __call__(self, a: int) -> int:
        return int(self.table[a])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingAutomorphism):
            return NotImplemented
        return self.ring is other.ring and self.key == other.key

    def __hash__(self) -> int:
        return hash((id(self.ring), self.key))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.ring.order)))

    def compose(self, other: "RingAutomorphism") -> "RingAutomorphism":
        """self after other."""
        self.ring.same_ring(other.ring)
        return RingAutomorphism(self.ring, self.table[other.table], f"{self.descriptor}*{other.descriptor}")

    def inverse(self) -> "RingAutomorphism":
        return RingAutomorphism(self.ring, np.argsort(self.table), f"({self.descriptor})^-1")

    def verify(self, seed: Optional[int] = None, samples: Optional[int] = None) -> None:
        """
        Raises:
            AutomorphismError: if the table is not a ring automorphism
        """
        config = ClaimsConfig.from_env()
        failure = automorphism_failure(
            self.ring,
            self.table,
            config.sample_seed if seed is None else seed,
            config.sample_size if samples is None else samples,
        )
        if failure:
            raise AutomorphismError(f"{self.descriptor} is not an automorphism of {self.ring.label}: {failure}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {"descriptor": self.descriptor, "table": [int(v) for v in self.table]}

    def __repr__(self) -> str:
        return f"RingAutomorphism({self.descriptor!r})"


def identity_automorphism(ring: FiniteRing) -> RingAutomorphism:
    return RingAutomorphism(ring, np.arange(ring.order), "id")


@dataclass(frozen=True, eq=False)
class WeightGroup:
    """
    A subgroup of Aut(R), identity first.

    Closure under composition and inverses is checked on construction.
    """
    ring: FiniteRing
    elements: Tuple[RingAutomorphism, ...]
    descriptor: str = "id"

    def __post_init__(self):
        if not self.elements or not self.elements[0].is_identity:
            raise AutomorphismError("a weight group lists the identity first")
        if len({e.key for e in self.elements}) != len(self.elements):
            raise AutomorphismError("weight group elements must be distinct")
        composition = self.composition
        if (composition < 0).any():
            i, j = np.argwhere(composition < 0)[0]
            raise AutomorphismError(
                f"{self.descriptor}: {self.elements[i].descriptor} * {self.elements[j].descriptor} leaves the set"
            )
        if not (composition == 0).any(axis=1).all():
            raise AutomorphismError(f"{self.descriptor}: not closed under inverses")

    @cached_property
    def tables(self) -> np.ndarray:
        """Stacked permutation tables, shape (|G|, |R|)."""
        return np.stack([e.table for e in self.elements])

    @cached_property
    def composition(self) -> np.ndarray:
        """composition[i, j] = index of elements[i] after elements[j], or -1 outside the set."""
        n = len(self.elements)
        composed = self.tables[:, self.tables].reshape(n * n, self.ring.order)
        rows = np.concatenate([self.tables, composed])
        _, inverse = np.unique(rows, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        position = np.full(inverse.max() + 1, -1, dtype=np.int64)
        position[inverse[:n]] = np.arange(n)
        return position[inverse[n:]].reshape(n, n)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.size == 1

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[RingAutomorphism]:
        return iter(self.elements)

    @cached_property
    def fingerprint(self) -> str:
        """Content hash of the element set, independent of how it was described."""
        digest = hashlib.sha256()
        for key in sorted(e.key for e in self.elements):
            digest.update(key)
        return digest.hexdigest()[:16]

    def orbit_of(self, a: int) -> np.ndarray:
        """Distinct images of a under the group, sorted."""
        return np.unique(self.tables[:, a])

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "descriptor": self.descriptor,
            "size": self.size,
            "elements": [e.descriptor for e in self.elements],
        }


@dataclass(frozen=True)
class Orbit:
    """
    An orbit of Ψ on Spec R.

    Attributes:
        prime_ids: member prime labels, sorted; position i (1-based) is P_i
        stabilizer_size: |St(P)|, equal for all members
        group_size: |Ψ|
    """
    prime_ids: Tuple[int, ...]
    stabilizer_size: int
    group_size: int

    def __post_init__(self):
        if self.size * self.stabilizer_size != self.group_size:
            raise AutomorphismError(
                f"orbit {self.prime_ids}: |orbit| * |St| = {self.size * self.stabilizer_size} != |Psi| = {self.group_size}"
            )

    @property
    def size(self) -> int:
        return len(self.prime_ids)

    @property
    def h(self) -> int:
        return self.size

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "prime_ids": list(self.prime_ids),
            "stabilizer_size": self.stabilizer_size,
            "size": self.size,
        }


# ----------------------------------------------------------------------
# Assembly


def _lift_tables(ring: FiniteRing, permutation: Sequence[int], factor_tables: Sequence[np.ndarray]) -> np.ndarray:
    """Table of (c_0, ..., c_n) -> c' with c'[permutation[i]] = factor_tables[i][c_i]."""
    images = np.zeros_like(ring.components)
    for i, (target, table) in enumerate(zip(permutation, factor_tables)):
        images[:, target] = np.asarray(table, dtype=np.int64)[ring.components[:, i]]
    return images @ ring.strides


def _describe_factor_map(factor, table: np.ndarray) -> str:
    if np.array_equal(table, np.arange(factor.order)):
        return "id"
    parts = []
    if isinstance(factor, GaloisFieldFactor):
        parts.append(f"a->{factor.display(int(table[factor.p]))}")
    elif isinstance(factor, TruncatedPolyFactor):
        if factor.e > 1:
            parts.append(f"a->{factor.display(int(table[factor.p]))}")
        parts.append(f"x->{factor.display(int(table[factor.q]))}")
    else:
        parts.append("map")
    return ",".join(parts)


def _describe(permutation: Sequence[int], factor_tables: Sequence[np.ndarray], factors) -> str:
    parts = []
    if list(permutation) != list(range(len(permutation))):
        parts.append("perm(" + ",".join(str(p) for p in permutation) + ")")
    for position, (factor, table) in enumerate(zip(factors, factor_tables)):
        description = _describe_factor_map(factor, table)
        if description != "id":
            parts.append(f"f{position}:{description}")
    return ";".join(parts) if parts else "id"


def factor_automorphisms(descriptor: FactorDescriptor) -> List[RingAutomorphism]:
    """All automorphisms of a single chain factor, identity first, each verified."""
    ring = build_ring([descriptor])
    factor = ring.factors[0]
    result = []
    for table in factor.automorphism_tables():
        automorphism = RingAutomorphism(ring, table, _describe_factor_map(factor, table))
        automorphism.verify()
        result.append(automorphism)
    return result


def _factor_permutations(ring: FiniteRing) -> List[Tuple[int, ...]]:
    """Permutations of factor positions that only exchange equal descriptors."""
    classes: Dict[FactorDescriptor, List[int]] = {}
    for position, descriptor in enumerate(ring.descriptors):
        classes.setdefault(descriptor.normalized(), []).append(position)
    blocks = list(classes.values())
    permutations = []
    for choice in itertools.product(*(itertools.permutations(block) for block in blocks)):
        permutation = [0] * len(ring.factors)
        for block, image in zip(blocks, choice):
            for source, target in zip(block, image):
                permutation[source] = target
        permutations.append(tuple(permutation))
    return sorted(permutations)


def full_aut(ring: FiniteRing, verify_complete: bool = False) -> WeightGroup:
    """
    Aut(R): per-factor automorphism tuples composed with the permutations of
    structurally identical factors. Every assembled map is verified.

    Args:
        ring: the ring
        verify_complete: compare against ``brute_force_automorphisms``
            (order <= BRUTE_FORCE_MAX_ORDER only)

    Raises:
        AutomorphismError: if Aut(R) exceeds MAX_ASSEMBLED_GROUP or fails
            the completeness comparison
    """
    per_factor = [factor.automorphism_tables() for factor in ring.factors]
    permutations = _factor_permutations(ring)
    expected = len(permutations) * math.prod(len(t) for t in per_factor)
    if expected > MAX_ASSEMBLED_GROUP:
        raise AutomorphismError(f"Aut({ring.label}) has {expected} elements, above {MAX_ASSEMBLED_GROUP}")

    elements = []
    for permutation in permutations:
        for factor_tables in itertools.product(*per_factor):
            table = _lift_tables(ring, permutation, factor_tables)
            automorphism = RingAutomorphism(ring, table, _describe(permutation, factor_tables, ring.factors))
            automorphism.verify()
            elements.append(automorphism)
    group = WeightGroup(ring, tuple(elements), "full")
    logger.debug("Aut(%s) has order %d", ring.label, group.size)

    if verify_complete:
        brute = brute_force_automorphisms(ring)
        if {a.key for a in brute} != {a.key for a in group}:
            raise AutomorphismError(
                f"assembled Aut({ring.label}) has {group.size} elements, brute force found {len(brute)}"
            )
    return group


def generate_weight_group(
    ring: FiniteRing, generators: Sequence[RingAutomorphism], descriptor: str = "id"
) -> WeightGroup:
    """
    The subgroup generated by ``generators`` (identity included).

    Raises:
        AutomorphismError: if a generator fails the homomorphism check
    """
    for generator in generators:
        ring.same_ring(generator.ring)
        generator.verify()
    identity = identity_automorphism(ring)
    elements = [identity]
    seen = {identity.key}
    for element in elements:
        for generator in generators:
            product = generator.compose(element)
            if product.key not in seen:
                seen.add(product.key)
                elements.append(RingAutomorphism(ring, product.table, _short(generator, element)))
    return WeightGroup(ring, tuple(elements), descriptor)


def _short(generator: RingAutomorphism, element: RingAutomorphism) -> str:
    if element.is_identity:
        return generator.descriptor
    return f"{generator.descriptor}*{element.descriptor}"


def cyclic_subgroups(group: WeightGroup) -> List[WeightGroup]:
    """The distinct subgroups <g> for g in the group, in order of first generator."""
    subgroups = []
    seen = set()
    for position, element in enumerate(group.elements):
        subgroup = generate_weight_group(group.ring, [element], f"cyclic({position})")
        fingerprint = subgroup.fingerprint
        if fingerprint not in seen:
            seen.add(fingerprint)
            subgroups.append(subgroup)
    return subgroups


def act_on_ideal(automorphism: RingAutomorphism, ideal: Ideal) -> Ideal:
    """psi(I) = {psi(a) : a in I}."""
    automorphism.ring.same_ring(ideal.ring)
    members = np.zeros(ideal.ring.order, dtype=bool)
    members[automorphism.table[ideal.indices]] = True
    return Ideal(ideal.ring, members)


def prime_action(group: WeightGroup, primes: Sequence[PrimeInfo]) -> np.ndarray:
    """action[g, i] = position of psi_g(P_i) in ``primes``."""
    positions = {prime.ideal.key: i for i, prime in enumerate(primes)}
    action = np.zeros((group.size, len(primes)), dtype=np.int64)
    for g, automorphism in enumerate(group.elements):
        for i, prime in enumerate(primes):
            image = act_on_ideal(automorphism, prime.ideal)
            if image.key not in positions:
                raise AutomorphismError(f"{automorphism.descriptor} maps P{prime.id} outside Spec R")
            action[g, i] = positions[image.key]
    return action


def orbits(group: WeightGroup, primes: Sequence[PrimeInfo]) -> List[Orbit]:
    """Partition of the prime ids under the group, ordered by least member."""
    action = prime_action(group, primes)
    assigned = set()
    result = []
    for start in range(len(primes)):
        if start in assigned:
            continue
        orbit = [start]
        for member in orbit:
            for image in action[:, member]:
                if int(image) not in orbit:
                    orbit.append(int(image))
        assigned.update(orbit)
        stabilizers = {int((action[:, member] == member).sum()) for member in orbit}
        if len(stabilizers) != 1:
            raise AutomorphismError(f"stabilizer sizes differ along orbit {sorted(orbit)}: {stabilizers}")
        result.append(
            Orbit(tuple(sorted(primes[i].id for i in orbit)), stabilizers.pop(), group.size)
        )
    return result


# ----------------------------------------------------------------------
# Brute-force completeness


def subring_closure(ring: FiniteRing, seeds: Sequence[int]) -> np.ndarray:
    """Mask of the subring generated by 1 and ``seeds``."""
    mask = np.zeros(ring.order, dtype=bool)
    mask[[0, ring.one, *seeds]] = True
    while True:
        idx = np.flatnonzero(mask)
        grown = mask.copy()
        grown[ring.add_table[np.ix_(idx, idx)]] = True
        grown[ring.mul_table[np.ix_(idx, idx)]] = True
        if np.array_equal(grown, mask):
            return mask
        mask = grown


def ring_generators(ring: FiniteRing) -> List[int]:
    """Greedy generating set: repeatedly adjoin the least element not yet generated."""
    generators: List[int] = []
    mask = subring_closure(ring, generators)
    while not mask.all():
        generators.append(int(np.flatnonzero(~mask)[0]))
        mask = subring_closure(ring, generators)
    return generators


def invariant_profile(ring: FiniteRing) -> np.ndarray:
    """Per-element invariants preserved by every automorphism."""
    order = np.ones(ring.order, dtype=np.int64)
    current = np.arange(ring.order)
    while (current != 0).any():
        moving = current != 0
        order[moving] += 1
        current = np.where(moving, ring.add_table[current, np.arange(ring.order)], 0)
    annihilator = (ring.mul_table == 0).sum(axis=1)
    principal = np.array([len(np.unique(row)) for row in ring.mul_table])
    return np.stack(
        [order, ring.idempotent_mask.astype(np.int64), ring.unit_mask.astype(np.int64), annihilator, principal],
        axis=1,
    )


def _extend(ring: FiniteRing, assignment: Dict[int, int]) -> Optional[np.ndarray]:
    """Extend a partial map to the generated subring by + and *, or None on conflict."""
    image = np.full(ring.order, -1, dtype=np.int64)
    image[0] = 0
    image[ring.one] = ring.one
    for source, target in assignment.items():
        if image[source] not in (-1, target):
            return None
        image[source] = target
    while True:
        known = np.flatnonzero(image >= 0)
        targets = image[known]
        changed = False
        for table in (ring.add_table, ring.mul_table):
            sources = table[np.ix_(known, known)].reshape(-1)
            values = table[np.ix_(targets, targets)].reshape(-1)
            current = image[sources]
            if ((current >= 0) & (current != values)).any():
                return None
            fresh = current < 0
            if fresh.any():
                # conflicting fresh assignments to the same source
                order = np.argsort(sources[fresh], kind="stable")
                s, v = sources[fresh][order], values[fresh][order]
                first = np.r_[True, s[1:] != s[:-1]]
                group_start = np.cumsum(first) - 1
                if (v != v[first][group_start]).any():
                    return None
                image[s[first]] = v[first]
                changed = True
        if not changed:
            return image


def brute_force_automorphisms(ring: FiniteRing) -> List[RingAutomorphism]:
    """
    Every automorphism found by mapping a generating set to all profile-compatible
    images and extending; for rings of order <= BRUTE_FORCE_MAX_ORDER.
    """
    if ring.order > BRUTE_FORCE_MAX_ORDER:
        raise AutomorphismError(f"brute-force automorphism search is limited to order {BRUTE_FORCE_MAX_ORDER}")
    generators = ring_generators(ring)
    profile = invariant_profile(ring)
    candidates = [
        np.flatnonzero((profile == profile[g]).all(axis=1)) for g in generators
    ]
    config = ClaimsConfig.from_env()
    found: Dict[bytes, RingAutomorphism] = {}
    for images in itertools.product(*candidates):
        table = _extend(ring, dict(zip(generators, (int(i) for i in images))))
        if table is None or (table < 0).any():
            continue
        if automorphism_failure(ring, table, config.sample_seed, config.sample_size) is None:
            automorphism = RingAutomorphism(ring, table, "brute-force")
            found.setdefault(automorphism.key, automorphism)
    return [found[k] for k in sorted(found)]


# ----------------------------------------------------------------------
# Weight descriptors

_TERM = re.compile(r"^(?:(id|full)|swap\((\d+),(\d+)\)|frobenius\((\d+)\)|cyclic\((\d+)\)|gens:(.+))$")


def swap_automorphism(ring: FiniteRing, i: int, j: int) -> RingAutomorphism:
    """The exchange of two structurally identical factors."""
    n = len(ring.factors)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise AutomorphismError(f"swap({i},{j}) needs two distinct factor positions below {n}")
    if ring.descriptors[i].normalized() != ring.descriptors[j].normalized():
        raise AutomorphismError(
            f"swap({i},{j}): factors {ring.descriptors[i].label} and {ring.descriptors[j].label} are not isomorphic"
        )
    permutation = list(range(n))
    permutation[i], permutation[j] = j, i
    tables = [f.identity_table() for f in ring.factors]
    return RingAutomorphism(ring, _lift_tables(ring, permutation, tables), f"swap({i},{j})")


def frobenius_automorphism(ring: FiniteRing, i: int) -> RingAutomorphism:
    """The factor Frobenius on factor i, identity elsewhere."""
    if not 0 <= i < len(ring.factors):
        raise AutomorphismError(f"frobenius({i}): no factor at position {i}")
    tables = [f.identity_table() for f in ring.factors]
    tables[i] = ring.factors[i].frobenius_table()
    return RingAutomorphism(ring, _lift_tables(ring, range(len(ring.factors)), tables), f"frobenius({i})")


def load_generator_tables(ring: FiniteRing, path: Path) -> List[RingAutomorphism]:
    """
    Read permutation tables from JSON: a list of tables or ``{"generators": [...]}``.
    """
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise AutomorphismError(f"cannot read generator file {path}: {exc}") from None
    tables = payload.get("generators") if isinstance(payload, dict) else payload
    if not isinstance(tables, list):
        raise AutomorphismError(f"{path}: expected a list of permutation tables")
    generators = []
    for position, table in enumerate(tables):
        if not isinstance(table, list) or len(table) != ring.order or not all(isinstance(v, int) for v in table):
            raise AutomorphismError(f"{path}: generator {position} is not a table of {ring.order} integers")
        if min(table) < 0 or max(table) >= ring.order:
            raise AutomorphismError(f"{path}: generator {position} has entries outside [0, {ring.order})")
        generators.append(RingAutomorphism(ring, np.array(table), f"gens[{position}]"))
    return generators


def parse_psi(ring: FiniteRing, text: str) -> WeightGroup:
    """
    Weight group from a descriptor.

    Grammar: ``term ("+" term)*`` with ``term := id | full | swap(i,j) |
    frobenius(i) | cyclic(k) | gens:<file>``. Factor positions are 0-based
    positions in the normalized factor list; ``cyclic(k)`` is generated by the
    k-th element of ``full_aut``. A combination generates the subgroup of all
    its terms.

    Raises:
        AutomorphismError: on a malformed descriptor or a bad generator
    """
    canonical = "".join(text.split())
    if not canonical:
        raise AutomorphismError("empty weight descriptor")
    terms = canonical.split("+") if not canonical.startswith("gens:") else [canonical]
    generators: List[RingAutomorphism] = []
    full: Optional[WeightGroup] = None
    for term in terms:
        match = _TERM.match(term)
        if match is None:
            raise AutomorphismError(f"unknown weight term {term!r}")
        keyword, swap_i, swap_j, frob, cyclic, gens_path = match.groups()
        if keyword == "id":
            continue
        if keyword == "full" or cyclic is not None:
            full = full or full_aut(ring)
            if keyword == "full":
                generators.extend(full.elements[1:])
                continue
            k = int(cyclic)
            if k >= full.size:
                raise AutomorphismError(f"cyclic({k}): Aut({ring.label}) has only {full.size} elements")
            generators.append(full.elements[k])
        elif swap_i is not None:
            generators.append(swap_automorphism(ring, int(swap_i), int(swap_j)))
        elif frob is not None:
            generators.append(frobenius_automorphism(ring, int(frob)))
        else:
            generators.extend(load_generator_tables(ring, Path(gens_path)))
    if canonical == "full":
        return full
    group = generate_weight_group(ring, generators, canonical)
    logger.debug("psi %s on %s has order %d", canonical, ring.label, group.size)
    return group
