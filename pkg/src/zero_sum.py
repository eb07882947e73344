"""
Zero-sum combinatorics over finite rings.

* T(m;h): the recurrence, an exhaustive oracle, and the strictly positive variant.
* Weighted subsequence products: the achievable set of a multiset under a
  weight group, folded term by term.
* Exact search for the longest free multiset over units (weighted Davenport)
  or over the whole ring (weighted Erdős–Burgess).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from automorphism import RingAutomorphism, WeightGroup
from config import SearchConfig
from exceptions import SearchLimitError
from rings import FiniteRing

logger = logging.getLogger(__name__)

# Search progress is logged every this many expanded states
PROGRESS_EVERY = 50_000


# ----------------------------------------------------------------------
# T(m;h)


@dataclass(frozen=True)
class TProfile:
    """
    Multiplicities t_1..t_h with sum_{i<=d} i*t_i < d*m for every d = 1..h.
    """
    m: int
    h: int
    multiplicities: Tuple[int, ...]

    @property
    def value(self) -> int:
        return sum(self.multiplicities)

    def is_feasible(self) -> bool:
        weighted = 0
        for d, t in enumerate(self.multiplicities, start=1):
            if t < 0:
                return False
            weighted += d * t
            if weighted >= d * self.m:
                return False
        return len(self.multiplicities) == self.h

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {"m": self.m, "h": self.h, "profile": list(self.multiplicities), "value": self.value}


def _check_arguments(m: int, h: int) -> None:
    if m < 1 or h < 1:
        raise ValueError(f"T(m;h) needs m >= 1 and h >= 1, got m={m}, h={h}")


def t_function(m: int, h: int) -> TProfile:
    """
    The maximizing profile by the recurrence t_1 = m-1,
    t_d = floor(((d*m - 1) - sum_{i<d} i*t_i) / d).
    """
    _check_arguments(m, h)
    multiplicities = [m - 1]
    weighted = m - 1
    for d in range(2, h + 1):
        t = ((d * m - 1) - weighted) // d
        multiplicities.append(t)
        weighted += d * t
    profile = TProfile(m, h, tuple(multiplicities))
    if not profile.is_feasible():
        raise AssertionError(f"recurrence produced an infeasible profile {profile}")
    return profile


def _bruteforce(m: int, h: int, minimum: int) -> Optional[int]:
    @lru_cache(maxsize=None)
    def best(d: int, weighted: int) -> Optional[int]:
        if d > h:
            return 0
        result = None
        # d * t_d <= d*m - 1 - weighted bounds t_d by m
        t = minimum
        while weighted + d * t < d * m:
            rest = best(d + 1, weighted + d * t)
            if rest is not None and (result is None or t + rest > result):
                result = t + rest
            t += 1
        return result

    return best(1, 0)


def t_function_bruteforce(m: int, h: int) -> int:
    """Max of sum t_i over all nonnegative feasible profiles, by exhaustive enumeration."""
    _check_arguments(m, h)
    return _bruteforce(m, h, 0)


def t_function_positive(m: int, h: int) -> Optional[int]:
    """Max of sum t_i over strictly positive feasible profiles; None when none exists."""
    _check_arguments(m, h)
    return _bruteforce(m, h, 1)


# ----------------------------------------------------------------------
# Sequences and achievable products


@dataclass(frozen=True)
class SequenceMultiset:
    """An unordered sequence of ring elements: sorted (element, multiplicity) pairs."""
    ring: FiniteRing
    counts: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_elements(cls, ring: FiniteRing, elements: Iterable[int]) -> "SequenceMultiset":
        values, multiplicities = np.unique(np.asarray(list(elements), dtype=np.int64), return_counts=True)
        for value in values:
            ring.element(int(value))
        return cls(ring, tuple((int(v), int(c)) for v, c in zip(values, multiplicities)))

    @property
    def elements(self) -> List[int]:
        """Terms in non-decreasing index order, repeated by multiplicity."""
        return [value for value, count in self.counts for _ in range(count)]

    def __len__(self) -> int:
        return sum(count for _, count in self.counts)

    def concat(self, other: "SequenceMultiset") -> "SequenceMultiset":
        self.ring.same_ring(other.ring)
        return SequenceMultiset.from_elements(self.ring, self.elements + other.elements)

    def map(self, automorphism: RingAutomorphism) -> "SequenceMultiset":
        return SequenceMultiset.from_elements(self.ring, automorphism.table[self.elements])

    def display(self) -> List[Any]:
        return [self.ring.display(v) for v in self.elements]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {"length": len(self), "elements": self.display()}


@dataclass(frozen=True, eq=False)
class AchievableSet:
    """All weighted products of nonempty subsequences, as a membership mask."""
    ring: FiniteRing
    members: np.ndarray

    @cached_property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def __contains__(self, index: int) -> bool:
        return bool(self.members[int(index)])

    def __len__(self) -> int:
        return int(self.members.sum())

    def issubset(self, other: "AchievableSet") -> bool:
        return bool(np.all(other.members[self.members]))

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {"size": len(self), "elements": [self.ring.display(v) for v in self.indices]}


def extend_achievable(ring: FiniteRing, members: np.ndarray, weighted_images: np.ndarray) -> np.ndarray:
    """old | W | old * W for the weight images W of one new term."""
    result = members.copy()
    result[weighted_images] = True
    old = np.flatnonzero(members)
    if old.size:
        result[ring.mul_table[np.ix_(old, weighted_images)]] = True
    return result


def achievable_products(sequence: SequenceMultiset, group: WeightGroup) -> AchievableSet:
    """Fold the terms of ``sequence`` into the set of achievable weighted products."""
    ring = sequence.ring
    ring.same_ring(group.ring)
    members = np.zeros(ring.order, dtype=bool)
    for value in sequence.elements:
        members = extend_achievable(ring, members, group.orbit_of(value))
    return AchievableSet(ring, members)


def is_idempotent_product_free(sequence: SequenceMultiset, group: WeightGroup) -> bool:
    """True iff no nonempty weighted subsequence product is idempotent."""
    achievable = achievable_products(sequence, group)
    return not bool((achievable.members & sequence.ring.idempotent_mask).any())


# ----------------------------------------------------------------------
# Free-sequence search


class SearchTarget(Enum):
    """What a free sequence must avoid, and which alphabet it is drawn from."""
    IDEMPOTENTS = "idempotents"   # alphabet R
    ONE = "one"                   # alphabet U(R)


@dataclass
class SearchResult:
    """
    Outcome of a free-sequence search.

    Attributes:
        value: longest free length + 1 (the constant), a lower bound if incomplete
        witness: a longest free multiset found (lexicographically least when complete)
        complete: False when a node or depth cap stopped the search
        nodes: expanded states
    """
    value: int
    witness: SequenceMultiset
    complete: bool = True
    nodes: int = 0
    target: SearchTarget = SearchTarget.IDEMPOTENTS
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            "value": self.value,
            "witness": self.witness.display(),
            "complete": self.complete,
            "nodes": self.nodes,
        }


class _SearchAborted(Exception):
    pass


class FreeSequenceSearch:
    """
    Depth-first search for the longest free multiset.

    The state is the achievable set of the multiset chosen so far; since the
    achievable set does not depend on term order, the longest free extension
    of a state depends on the state alone and is memoized on its packed
    bitmap. Every free extension strictly enlarges the state (a term that
    leaves it unchanged would put all its powers, hence an idempotent, in it),
    so the state graph is acyclic and depth is bounded by the ring order.
    """

    def __init__(
        self,
        ring: FiniteRing,
        group: WeightGroup,
        target: SearchTarget,
        config: Optional[SearchConfig] = None,
    ):
        ring.same_ring(group.ring)
        self.ring = ring
        self.group = group
        self.target = target
        self.config = config or SearchConfig.from_env()
        if target is SearchTarget.ONE:
            self.alphabet = ring.unit_indices
            self.forbidden = np.zeros(ring.order, dtype=bool)
            self.forbidden[ring.one] = True
        else:
            self.alphabet = np.arange(ring.order)
            self.forbidden = ring.idempotent_mask.copy()
        self.depth_cap = self.config.depth_cap if self.config.depth_cap is not None else ring.order ** 2
        # weighted images of every alphabet element, shape (|G|, |alphabet|)
        self.images = group.tables[:, self.alphabet].astype(np.int64)
        self.memo: Dict[bytes, int] = {}
        self.nodes = 0
        self.complete = True

    def successors(self, members: np.ndarray) -> List[Tuple[int, bytes, np.ndarray]]:
        """(element, key, state) for every alphabet element keeping the state free."""
        n = len(self.alphabet)
        states = np.tile(members, (n, 1))
        rows = np.arange(n)
        states[rows[None, :].repeat(self.images.shape[0], axis=0), self.images] = True
        old = np.flatnonzero(members)
        if old.size:
            products = self.ring.mul_table[old[:, None, None], self.images[None, :, :]]
            states[np.broadcast_to(rows, products.shape), products] = True
        free = ~(states & self.forbidden).any(axis=1)
        result = []
        seen = set()
        for position in np.flatnonzero(free):
            key = np.packbits(states[position]).tobytes()
            if key in seen:
                continue
            seen.add(key)
            result.append((int(self.alphabet[position]), key, states[position]))
        return result

    def _expand(self, members: np.ndarray):
        self.nodes += 1
        if self.nodes > self.config.node_cap:
            raise _SearchAborted()
        if self.nodes % PROGRESS_EVERY == 0:
            logger.info("%s: %d states expanded, %d memoized", self.ring.label, self.nodes, len(self.memo))
        return self.successors(members)

    def longest_from(self, members: np.ndarray) -> int:
        """Length of the longest free extension of ``members`` (a lower bound if aborted)."""
        root_key = np.packbits(members).tobytes()
        if root_key in self.memo:
            return self.memo[root_key]
        # frame: [key, successors, next position, best]
        stack = [[root_key, None, 0, 0, members]]
        try:
            while stack:
                frame = stack[-1]
                if frame[1] is None:
                    frame[1] = self._expand(frame[4])
                if frame[2] < len(frame[1]):
                    _, child_key, child_state = frame[1][frame[2]]
                    frame[2] += 1
                    if child_key in self.memo:
                        frame[3] = max(frame[3], 1 + self.memo[child_key])
                    elif len(stack) >= self.depth_cap:
                        self.complete = False
                        frame[3] = max(frame[3], 1)
                    else:
                        stack.append([child_key, None, 0, 0, child_state])
                    continue
                self.memo[frame[0]] = frame[3]
                stack.pop()
                if stack:
                    stack[-1][3] = max(stack[-1][3], 1 + frame[3])
        except _SearchAborted:
            self.complete = False
            logger.warning(
                "%s: search stopped after %d states; result is a lower bound", self.ring.label, self.config.node_cap
            )
            while stack:
                frame = stack.pop()
                self.memo[frame[0]] = max(self.memo.get(frame[0], 0), frame[3])
                if stack:
                    stack[-1][3] = max(stack[-1][3], 1 + frame[3])
        return self.memo[root_key]

    def witness(self, members: np.ndarray) -> List[int]:
        """
        Rebuild a longest free extension by taking, at each step, the least
        element whose successor keeps the optimal length. With a complete memo
        this yields the lexicographically least optimal multiset.
        """
        chosen = []
        remaining = self.memo[np.packbits(members).tobytes()]
        while remaining > 0:
            for element, key, state in self.successors(members):
                if self.memo.get(key, -1) + 1 == remaining:
                    chosen.append(element)
                    members = state
                    remaining -= 1
                    break
            else:
                # only possible at the depth cap, where children were counted without a memo entry
                successors = self.successors(members)
                if successors:
                    chosen.append(successors[0][0])
                break
        return chosen

    def run(self) -> SearchResult:
        empty = np.zeros(self.ring.order, dtype=bool)
        length = self.longest_from(empty)
        witness = SequenceMultiset.from_elements(self.ring, self.witness(empty))
        result = SearchResult(
            value=len(witness) + 1 if not self.complete else length + 1,
            witness=witness,
            complete=self.complete,
            nodes=self.nodes,
            target=self.target,
        )
        logger.info(
            "%s (%s, |Psi|=%d): longest free length %d after %d states%s",
            self.ring.label,
            self.target.value,
            self.group.size,
            length,
            self.nodes,
            "" if self.complete else " (incomplete)",
        )
        return result


def longest_free_sequence(
    ring: FiniteRing,
    group: WeightGroup,
    target: SearchTarget,
    config: Optional[SearchConfig] = None,
) -> SearchResult:
    """
    A longest free multiset: over U(R) avoiding 1 (``SearchTarget.ONE``) or over
    R avoiding idempotents (``SearchTarget.IDEMPOTENTS``).

    Raises:
        SearchLimitError: for the idempotent target when |R| exceeds the search cap
    """
    config = config or SearchConfig.from_env()
    if target is SearchTarget.IDEMPOTENTS and ring.order > config.max_order:
        raise SearchLimitError(
            f"{ring.label} has order {ring.order}; the search over R is capped at {config.max_order}",
            order=ring.order,
            cap=config.max_order,
        )
    return FreeSequenceSearch(ring, group, target, config).run()


def weighted_davenport(ring: FiniteRing, group: WeightGroup, config: Optional[SearchConfig] = None) -> SearchResult:
    """D_Psi(U(R)): longest product-one-free unit multiset + 1."""
    return longest_free_sequence(ring, group, SearchTarget.ONE, config)


def weighted_burgess(ring: FiniteRing, group: WeightGroup, config: Optional[SearchConfig] = None) -> SearchResult:
    """I_Psi(R): longest idempotent-product-free multiset + 1."""
    return longest_free_sequence(ring, group, SearchTarget.IDEMPOTENTS, config)
