"""
End-to-end checks over whole ring families. These run the exhaustive search
many times and are excluded from the default run; use ``pytest -m slow``.
"""
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from sympy import factorint

from automorphism import cyclic_subgroups, full_aut, generate_weight_group, parse_psi
from config import AppConfig
from ring_spec import enumerate_rings, parse_ring
from sweep import SweepFamily, run_sweep, summarize
from witness_builder import LemmaContext, build_witness, verify_claims, verify_theorem
from zero_sum import (
    SequenceMultiset,
    achievable_products,
    extend_achievable,
    is_idempotent_product_free,
    weighted_burgess,
    weighted_davenport,
)

pytestmark = pytest.mark.slow

LOCAL_RINGS = ["Z/4", "Z/8", "Z/9", "Z/27", "GF(2)[x]/x^2", "GF(2)[x]/x^3", "GF(3)[x]/x^2"]
INDEX_ONE_RINGS = ["Z/6", "Z/10", "Z/15", "Z/30", "GF(4)", "GF(8)"]
SQUARES = ["Z/2 x Z/2", "Z/3 x Z/3", "Z/4 x Z/4", "GF(2)[x]/x^2 x GF(2)[x]/x^2"]


def certified(ring, group):
    """Theorem report after checking the witness is free and meets the bound."""
    config = AppConfig.from_env()
    context = LemmaContext(ring, group)
    report = build_witness(ring, group, config, context)
    theorem = verify_theorem(ring, group, config, report, context)
    assert is_idempotent_product_free(report.witness, group)
    assert len(report.witness) + 1 == theorem.rhs
    return theorem


def subgroup_lattice(group):
    """
    Every subgroup of ``group``, built as joins of its cyclic subgroups until
    no new element set appears. Each entry is generated from the fewest cyclic
    generators found by the breadth-first join.
    """
    ring = group.ring
    generators = [sub.elements[1] for sub in cyclic_subgroups(group) if not sub.is_trivial]
    trivial = generate_weight_group(ring, [])
    found = {trivial.fingerprint: (trivial, ())}
    frontier = [(trivial, ())]
    while frontier:
        fresh = []
        for subgroup, gens in frontier:
            keys = {element.key for element in subgroup.elements}
            for generator in generators:
                if generator.key in keys:
                    continue
                joined_gens = gens + (generator,)
                joined = generate_weight_group(ring, list(joined_gens), f"join({len(joined_gens)})")
                if joined.fingerprint not in found:
                    found[joined.fingerprint] = (joined, joined_gens)
                    fresh.append((joined, joined_gens))
        frontier = fresh
    return [subgroup for subgroup, _ in found.values()]


def nested_pairs(lattice):
    """(H, K) with H a proper subgroup of K."""
    keys = [frozenset(element.key for element in subgroup.elements) for subgroup in lattice]
    return [
        (lattice[i], lattice[j])
        for i in range(len(lattice))
        for j in range(len(lattice))
        if keys[i] < keys[j]
    ]


def unit_group_davenport(ring):
    """
    D(U(R)) from the invariant factors of U(R), for groups where
    D = 1 + sum (n_i - 1) is known: p-groups and groups of rank at most two.
    """
    unit_list = [int(u) for u in ring.unit_indices]
    size = len(unit_list)

    def power(u, n):
        return ring.power(u, n)

    exponents = {}
    for p in factorint(size):
        counts = [0]
        j = 1
        while True:
            killed = sum(1 for u in unit_list if power(u, p ** j) == ring.one)
            counts.append(round(math.log(killed, p)))
            if killed == p ** factorint(size)[p]:
                break
            j += 1
        # number of cyclic factors of exponent >= j is counts[j] - counts[j-1]
        at_least = [counts[j] - counts[j - 1] for j in range(1, len(counts))]
        factors = []
        for j, count in enumerate(at_least, start=1):
            deeper = at_least[j] if j < len(at_least) else 0
            factors.extend([j] * (count - deeper))
        exponents[p] = sorted(factors, reverse=True)

    rank = max((len(e) for e in exponents.values()), default=0)
    assert len(exponents) <= 1 or rank <= 2
    invariants = [
        math.prod(p ** e[i] for p, e in exponents.items() if i < len(e)) for i in range(rank)
    ]
    return 1 + sum(n - 1 for n in invariants)


class TestEqualityCases:
    """Rings where the lower bound is attained."""

    @pytest.mark.parametrize("spec", LOCAL_RINGS)
    def test_local_rings(self, ring_of, spec):
        ring = ring_of(spec)
        theorem = certified(ring, parse_psi(ring, "id"))
        assert theorem.equality is True
        assert theorem.lhs == theorem.theorem_d_bound

    @pytest.mark.parametrize("spec", INDEX_ONE_RINGS)
    def test_index_one_rings(self, ring_of, spec):
        ring = ring_of(spec)
        theorem = certified(ring, parse_psi(ring, "id"))
        assert theorem.lhs == theorem.davenport

    @pytest.mark.parametrize("spec", SQUARES)
    def test_square_with_swap(self, ring_of, spec):
        ring = ring_of(spec)
        theorem = certified(ring, parse_psi(ring, "swap(0,1)"))
        assert theorem.equality is True


class TestDefaultFamily:
    """Every supported ring of order <= 64 with trivial, full and cyclic weights."""

    def test_no_violations(self):
        rows = run_sweep(SweepFamily.default(64).expand(), workers=4, show_progress=False)
        summary = summarize(rows)
        assert summary["violations"] == 0
        assert summary["errors"] == 0
        assert summary["incomplete"] == 0

    def test_claims(self):
        rows = run_sweep(SweepFamily.default(64).expand(), workers=4, claims=True, show_progress=False)
        failures = [(r.ring, r.psi, r.claims_failed) for r in rows if r.claims_failed]
        assert failures == []


class TestEngineConsistency:
    """Cross-checks of the search engines."""

    @pytest.mark.parametrize(
        "spec",
        [s for s in enumerate_rings(32) if int(parse_ring(s).unit_mask.sum()) <= 16],
    )
    def test_davenport_against_group_structure(self, ring_of, spec):
        ring = ring_of(spec)
        assert weighted_davenport(ring, parse_psi(ring, "id")).value == unit_group_davenport(ring)

    @pytest.mark.parametrize("spec", enumerate_rings(32))
    def test_antitone_in_weights(self, ring_of, spec):
        """More weights can only lower D_Psi and I_Psi, along every inclusion of weight groups."""
        ring = ring_of(spec)
        full = full_aut(ring)
        lattice = subgroup_lattice(full)
        assert full.fingerprint in {subgroup.fingerprint for subgroup in lattice}
        values = {}
        for subgroup in lattice:
            davenport = weighted_davenport(ring, subgroup)
            burgess = weighted_burgess(ring, subgroup)
            assert davenport.complete and burgess.complete
            values[subgroup.fingerprint] = (davenport.value, burgess.value)
        for smaller, larger in nested_pairs(lattice):
            small_d, small_i = values[smaller.fingerprint]
            large_d, large_i = values[larger.fingerprint]
            assert large_d <= small_d, (spec, smaller.descriptor, larger.descriptor)
            assert large_i <= small_i, (spec, smaller.descriptor, larger.descriptor)

    def test_weight_lattices_are_not_thin(self):
        """The inclusion check above sees well over a hundred nested pairs across the family."""
        pairs = sum(len(nested_pairs(subgroup_lattice(full_aut(parse_ring(spec))))) for spec in enumerate_rings(32))
        assert pairs >= 100

    @settings(max_examples=1000, derandomize=True, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(
        st.sampled_from([("Z/12", "id"), ("GF(4) x GF(4)", "full"), ("Z/4 x Z/4", "swap(0,1)"), ("GF(9)", "full")]),
        st.data(),
    )
    def test_fold_order_independence(self, ring_of, case, data):
        spec, psi = case
        ring = ring_of(spec)
        group = parse_psi(ring, psi)
        values = data.draw(st.lists(st.integers(0, ring.order - 1), min_size=1, max_size=7))
        order = data.draw(st.permutations(values))
        members = np.zeros(ring.order, dtype=bool)
        for value in order:
            members = extend_achievable(ring, members, group.orbit_of(value))
        expected = achievable_products(SequenceMultiset.from_elements(ring, values), group)
        assert np.array_equal(members, expected.members)


def test_claims_on_equality_cases(ring_of):
    for spec in LOCAL_RINGS + INDEX_ONE_RINGS:
        ring = ring_of(spec)
        verdicts = verify_claims(ring, parse_psi(ring, "id"))
        assert all(v.passed for v in verdicts.values()), spec
