"""
Tests for ideals, prime indices and the Chinese remainder solver.
"""
import numpy as np
import pytest

from exceptions import IdealError
from ideal_lattice import (
    Ideal,
    coset_labels,
    congruent,
    crt_basis,
    crt_solve,
    generated_ideal,
    ideal_generators,
    ideal_index,
    ideal_power,
    ideal_product,
    ideal_sum,
    is_prime_ideal,
    prime_ideals,
    principal_ideal,
    whole_ring,
    zero_ideal,
)
from tests.conftest import residues, shown


def ideal_of(ring, value):
    (index,) = residues(ring, [value])
    return principal_ideal(ring, index)


class TestIdeal:
    """Closure checks and basic operations."""

    def test_closure_enforced(self, z4):
        """{0, 1} is not an ideal of Z/4."""
        members = np.zeros(4, dtype=bool)
        members[residues(z4, [0, 1])] = True
        with pytest.raises(IdealError):
            Ideal(z4, members)

    def test_zero_must_belong(self, z4):
        """An empty mask is not an ideal."""
        with pytest.raises(IdealError):
            Ideal(z4, np.zeros(4, dtype=bool))

    def test_shape_checked(self, z4):
        """Masks of the wrong length are rejected."""
        with pytest.raises(IdealError):
            Ideal(z4, np.ones(5, dtype=bool))

    def test_principal_ideals_of_z12(self, z12):
        """(10) = (2) has six elements, (4) has three."""
        assert ideal_of(z12, 10) == ideal_of(z12, 2)
        assert ideal_of(z12, 10).size == 6
        assert sorted(shown(z12, ideal_of(z12, 4).indices)) == [0, 4, 8]

    def test_sum_and_product(self, z12):
        """(4) + (6) = (2) and (2)(2) = (4)."""
        assert ideal_sum(ideal_of(z12, 4), ideal_of(z12, 6)) == ideal_of(z12, 2)
        assert ideal_product(ideal_of(z12, 2), ideal_of(z12, 2)) == ideal_of(z12, 4)

    def test_powers(self, z8):
        """(2)^0 = R, (2)^2 = (4), (2)^3 = 0."""
        two = ideal_of(z8, 2)
        assert ideal_power(two, 0) == whole_ring(z8)
        assert ideal_power(two, 2) == ideal_of(z8, 4)
        assert ideal_power(two, 3) == zero_ideal(z8)

    def test_negative_power_rejected(self, z8):
        with pytest.raises(IdealError):
            ideal_power(ideal_of(z8, 2), -1)

    def test_generated_ideal(self, z12):
        """The ideal generated by 4 and 6 is (2)."""
        assert generated_ideal(z12, residues(z12, [4, 6])) == ideal_of(z12, 2)
        assert generated_ideal(z12, []) == zero_ideal(z12)

    def test_generators_generate(self, ring_of):
        """A reported generating set generates the ideal back."""
        ring = ring_of("Z/4 x GF(2)[x]/x^2")
        for prime in prime_ideals(ring):
            generators = ideal_generators(prime.ideal)
            assert generated_ideal(ring, generators) == prime.ideal

    def test_subset_and_membership(self, z12):
        four, two = ideal_of(z12, 4), ideal_of(z12, 2)
        assert four.issubset(two)
        assert not two.issubset(four)
        assert residues(z12, [8])[0] in four


class TestPrimes:
    """Prime ideals and their indices."""

    def test_z12_primes(self, z12):
        """Z/12 has primes over 2 (index 2, six elements) and over 3 (index 1, four elements)."""
        primes = prime_ideals(z12)
        assert [p.index for p in primes] == [2, 1]
        assert [p.ideal.size for p in primes] == [6, 4]

    def test_z4_prime_payload(self, z4):
        """The single prime of Z/4 is (2) with index 2."""
        (prime,) = prime_ideals(z4)
        assert prime.to_dict() == {"id": 0, "generators": [2], "index": 2, "size": 2}

    def test_truncated_poly_prime(self, x_cubed):
        """(x) in GF(2)[x]/(x^3) has index 3."""
        (prime,) = prime_ideals(x_cubed)
        assert prime.index == 3
        assert prime.ideal.size == 4
        assert prime.power_at_index.is_zero

    def test_field_primes_have_index_one(self, gf4_squared):
        primes = prime_ideals(gf4_squared)
        assert [p.index for p in primes] == [1, 1]
        assert [p.ideal.size for p in primes] == [4, 4]

    def test_primality_scan(self, z8):
        """(2) is prime in Z/8, (4) is not."""
        assert is_prime_ideal(ideal_of(z8, 2))
        assert not is_prime_ideal(ideal_of(z8, 4))
        assert not is_prime_ideal(whole_ring(z8))

    def test_index_requires_prime(self, z8):
        with pytest.raises(IdealError):
            ideal_index(ideal_of(z8, 4))

    def test_index_matches_power_chain(self, ring_of):
        """P^Ind = P^(Ind+1) and P^(Ind-1) differs."""
        ring = ring_of("Z/8 x GF(3)[x]/x^2")
        for prime in prime_ideals(ring):
            t = prime.index
            assert ideal_power(prime.ideal, t) == ideal_power(prime.ideal, t + 1)
            if t > 1:
                assert ideal_power(prime.ideal, t - 1) != ideal_power(prime.ideal, t)


class TestCongruences:
    """Cosets and the Chinese remainder theorem."""

    def test_coset_labels(self, z4):
        """Modulo (2), Z/4 splits into evens and odds."""
        labels = coset_labels(ideal_of(z4, 2))
        zero, one, two, three = residues(z4, [0, 1, 2, 3])
        assert labels[zero] == labels[two]
        assert labels[one] == labels[three]
        assert labels[zero] != labels[one]

    def test_congruent(self, z4):
        one, three = residues(z4, [1, 3])
        assert congruent(z4, three, one, ideal_of(z4, 2))
        assert not congruent(z4, three, one, zero_ideal(z4))

    def test_crt_solve(self, z12):
        """x = 1 mod 4 and x = 2 mod 3 gives 5."""
        one, two = residues(z12, [1, 2])
        solution = crt_solve(z12, [(one, ideal_of(z12, 4)), (two, ideal_of(z12, 3))])
        assert z12.display(solution) == 5

    def test_crt_empty_system(self, z12):
        assert crt_solve(z12, []) == z12.zero

    def test_crt_basis_idempotents(self, z12):
        """Basis elements are 1 at their own ideal and 0 at the others."""
        ideals = [ideal_of(z12, 4), ideal_of(z12, 3)]
        basis = crt_basis(z12, ideals)
        assert sorted(shown(z12, basis)) == [4, 9]

    def test_non_coprime_rejected(self, z4):
        two = ideal_of(z4, 2)
        with pytest.raises(IdealError):
            crt_basis(z4, [two, two])
