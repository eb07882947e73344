"""
Tests for chain-ring factors and their products.
"""
import numpy as np
import pytest

from exceptions import RingConstructionError, RingMismatchError
from ring_spec import parse_ring
from rings import (
    FactorDescriptor,
    FactorKind,
    GaloisFieldFactor,
    IntegerChainFactor,
    TruncatedPolyFactor,
    add,
    build_ring,
    idempotents,
    is_irreducible,
    mul,
    units,
)
from tests.conftest import residues, shown


class TestFactorDescriptor:
    """Descriptor validation and normalization."""

    def test_non_prime_characteristic_rejected(self):
        """p must be prime."""
        with pytest.raises(RingConstructionError):
            FactorDescriptor(FactorKind.INTEGER_CHAIN, 4, 1).validate()

    def test_truncated_poly_needs_class_two(self):
        """k = 1 is a field, not a truncated polynomial ring."""
        with pytest.raises(RingConstructionError):
            FactorDescriptor(FactorKind.TRUNCATED_POLY, 2, 1).validate()

    def test_reduction_poly_must_be_monic(self):
        """Leading coefficient 1 is required."""
        with pytest.raises(RingConstructionError):
            FactorDescriptor(FactorKind.GALOIS_FIELD, 3, 1, 2, (1, 0, 2)).validate()

    def test_prime_field_normalizes_to_integers(self):
        """GF(p) and Z/p get equal descriptors."""
        gf3 = FactorDescriptor(FactorKind.GALOIS_FIELD, 3).normalized()
        assert gf3 == FactorDescriptor(FactorKind.INTEGER_CHAIN, 3, 1)
        assert gf3.label == "Z/3"

    def test_orders(self):
        """Orders of the three kinds."""
        assert FactorDescriptor(FactorKind.INTEGER_CHAIN, 2, 3).order == 8
        assert FactorDescriptor(FactorKind.GALOIS_FIELD, 2, 1, 3, (1, 1, 0, 1)).order == 8
        assert FactorDescriptor(FactorKind.TRUNCATED_POLY, 2, 3, 2, (1, 1, 1)).order == 64


class TestFactors:
    """Single chain factors."""

    def test_integer_chain_tables(self):
        """Z/9 arithmetic is arithmetic mod 9."""
        factor = IntegerChainFactor(3, 2)
        assert factor.order == 9
        assert int(factor.mul_table[4, 7]) == 28 % 9
        assert int(factor.add_table[5, 8]) == 13 % 9
        assert factor.nilpotency_index == 2

    def test_galois_field_generator_squares(self):
        """In GF(4) = GF(2)[a]/(a^2+a+1), a*a = a+1."""
        field = GaloisFieldFactor(2, 2)
        assert field.display(2) == "a"
        assert field.display(3) == "a+1"
        assert int(field.mul_table[2, 2]) == 3

    def test_reducible_poly_rejected(self):
        """x^2 + 1 = (x+1)^2 over GF(2)."""
        assert not is_irreducible((1, 0, 1), 2)
        with pytest.raises(RingConstructionError):
            GaloisFieldFactor(2, 2, (1, 0, 1))

    def test_galois_field_multiplicative_group_cyclic(self):
        """Every nonzero element of GF(9) is invertible."""
        field = GaloisFieldFactor(3, 2)
        nonzero = np.arange(1, 9)
        assert np.all((field.mul_table[np.ix_(nonzero, nonzero)] == field.one).any(axis=1))

    def test_frobenius_has_order_e(self):
        """Frobenius of GF(8) has order 3."""
        field = GaloisFieldFactor(2, 3)
        frob = field.frobenius_table()
        twice = frob[frob]
        assert not np.array_equal(frob, field.identity_table())
        assert not np.array_equal(twice, field.identity_table())
        assert np.array_equal(frob[twice], field.identity_table())

    def test_truncated_poly_nilpotent(self):
        """x^3 = 0 in GF(2)[x]/(x^3) while x^2 != 0."""
        factor = TruncatedPolyFactor(2, 1, 3)
        x = 2
        x_squared = int(factor.mul_table[x, x])
        assert factor.display(x) == "x"
        assert factor.display(x_squared) == "x^2"
        assert int(factor.mul_table[x_squared, x]) == 0
        assert factor.nilpotency_index == 3

    def test_truncated_poly_maximal_ideal(self):
        """The maximal ideal is the set of polynomials without constant term."""
        factor = TruncatedPolyFactor(3, 1, 2)
        mask = factor.maximal_ideal_mask()
        assert mask.sum() == 3
        assert not mask[factor.one]


class TestFiniteRing:
    """Products of factors."""

    def test_z6_idempotents_and_units(self, z6):
        """Z/6 has idempotents {0,1,3,4} and units {1,5}."""
        assert sorted(e.display for e in idempotents(z6)) == [0, 1, 3, 4]
        assert sorted(u.display for u in units(z6)) == [1, 5]

    def test_z12_residue_arithmetic(self, z12):
        """Residue display follows the CRT: 7 * 5 = 11 and 7 + 8 = 3 in Z/12."""
        seven, five, eight = residues(z12, [7, 5, 8])
        assert mul(z12, seven, five).display == 11
        assert add(z12, seven, eight).display == 3

    def test_display_covers_every_residue(self, z12):
        """Every residue mod 12 names exactly one element."""
        assert sorted(shown(z12, range(z12.order))) == list(range(12))

    def test_product_display_is_a_list(self, gf4_squared):
        """Multi-token rings display one coordinate per token."""
        element = gf4_squared.element_from_display(["a", "a+1"])
        assert gf4_squared.display(element) == ["a", "a+1"]

    def test_label_keeps_tokens(self, z12, gf4_squared):
        """Z/12 keeps its token although it has two factors."""
        assert z12.label == "Z/12"
        assert len(z12.factors) == 2
        assert gf4_squared.label == "GF(4) x GF(4)"

    def test_local_rings_have_one_factor(self, ring_of):
        """Z/8 and GF(2)[x]/x^3 are local; Z/12 splits into Z/4 x Z/3 and is not."""
        assert ring_of("Z/8").is_local
        assert ring_of("GF(2)[x]/x^3").is_local
        assert not ring_of("Z/12").is_local
        assert not ring_of("Z/2 x Z/2").is_local

    def test_unit_mask_matches_inverse_scan(self, ring_of):
        """Componentwise units are exactly the invertible elements."""
        ring = ring_of("Z/4 x GF(2)[x]/x^2")
        invertible = (ring.mul_table == ring.one).any(axis=1)
        assert np.array_equal(invertible, ring.unit_mask)

    def test_power_and_product(self, z8):
        """3^2 = 1 and 2*2*2 = 0 in Z/8."""
        two, three = residues(z8, [2, 3])
        assert z8.power(three, 2) == z8.one
        assert z8.product([two, two, two]) == z8.zero

    def test_verify_detects_broken_table(self):
        """A tampered multiplication table fails the axiom checks."""
        broken = parse_ring("Z/6")
        broken.mul_table = broken.mul_table.copy()
        broken.mul_table[2, 3] = 1
        with pytest.raises(RingConstructionError):
            broken.verify(seed=1, samples=100)

    def test_mixed_rings_rejected(self, z4, z6):
        """Elements of different rings do not combine."""
        with pytest.raises(RingMismatchError):
            z4.element(1) + z6.element(1)

    def test_order_cap(self):
        """build_ring refuses rings above the cap."""
        descriptor = FactorDescriptor(FactorKind.INTEGER_CHAIN, 2, 5)
        with pytest.raises(RingConstructionError):
            build_ring([descriptor, descriptor], max_order=512)

    def test_order_cap_from_environment(self, monkeypatch):
        """BURGESS_MAX_RING_ORDER sets the default cap."""
        monkeypatch.setenv("BURGESS_MAX_RING_ORDER", "16")
        with pytest.raises(RingConstructionError):
            parse_ring("Z/32")

    def test_bad_index_rejected(self, z4):
        """Indices outside [0, |R|) are not elements."""
        with pytest.raises(RingConstructionError):
            z4.element(4)

    def test_to_dict(self, z12):
        """Serialized ring lists its factors."""
        payload = z12.to_dict()
        assert payload["ring"] == "Z/12"
        assert payload["order"] == 12
        assert [f["label"] for f in payload["factors"]] == ["Z/4", "Z/3"]
