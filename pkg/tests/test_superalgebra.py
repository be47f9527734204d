import random

import pytest

from engine.catalog import unital_hull
from engine.superalgebra import (
    AlgebraError,
    Element,
    HomMap,
    Superalgebra,
    check_jordan_super,
    check_supercommutative,
    find_unit,
    grassmann_algebra,
    grassmann_envelope,
    grassmann_sign,
    mul,
    right_mul,
    validate_grading,
)


def _replace_entry(A, old, new):
    """Copy of A with one (i, j, k, c) table entry swapped for another."""
    table = [e for e in A.table if e[:3] != old[:3]]
    assert len(table) == len(A.table) - 1
    table.append(new)
    return Superalgebra(A.field, A.dim, A.parity, tuple(table), A.labels, name=f"{A.name}*")


def _label_product(A, x, y):
    return mul(A, A.basis(A.index(x)), A.basis(A.index(y)))


class TestConstruction:
    def test_rejects_duplicate_entries(self, gf3):
        with pytest.raises(AlgebraError, match="duplicate"):
            Superalgebra(gf3, 1, (0,), ((0, 0, 0, 1), (0, 0, 0, 2)))

    def test_rejects_zero_coefficients(self, gf3):
        with pytest.raises(AlgebraError, match="zero coefficient"):
            Superalgebra(gf3, 1, (0,), ((0, 0, 0, 3),))

    def test_rejects_out_of_range_index(self, gf3):
        with pytest.raises(AlgebraError):
            Superalgebra(gf3, 2, (0, 1), ((0, 2, 0, 1),))

    def test_default_labels(self, gf3):
        A = Superalgebra(gf3, 2, (0, 1), ())
        assert A.labels == ("b0", "b1")

    def test_table_is_sorted(self, gf3):
        A = Superalgebra(gf3, 2, (0, 0), ((1, 1, 1, 1), (0, 0, 0, 1)))
        assert A.table == ((0, 0, 0, 1), (1, 1, 1, 1))

    def test_fingerprint_ignores_names(self, gf3):
        table = ((0, 0, 0, 1),)
        assert Superalgebra(gf3, 1, (0,), table, name="x").fingerprint == \
            Superalgebra(gf3, 1, (0,), table, ("e",), name="y").fingerprint


class TestProducts:
    def test_k9_products(self, k9):
        assert _label_product(k9, "z", "w") == k9.basis(k9.index("e"))
        assert _label_product(k9, "e", "u") == k9.basis(k9.index("u")).scale(2)
        assert mul(k9, Element.zero(k9), k9.basis(k9.index("v"))).is_zero()

    def test_bilinearity(self, k3):
        e, z, w = (k3.basis(i) for i in range(3))
        assert (e + z) * w == e * w + z * w
        assert z.scale(2) * w == (z * w).scale(2)

    def test_element_parity(self, k3):
        assert k3.basis(0).parity() == 0
        assert k3.basis(1).parity() == 1
        assert (k3.basis(0) + k3.basis(1)).parity() is None
        assert Element.zero(k3).parity() == 0

    def test_str(self, b1_3):
        A = b1_3.algebra
        assert str(Element.from_labels(A, {"a": 1, "a^2": 2})) == "a + 2*a^2"


class TestStructuralChecks:
    def test_k9_grading(self, k9):
        assert validate_grading(k9) == []

    def test_grading_violation(self, k9):
        bad = _replace_entry(k9, (5, 6, 0, 1), (5, 6, 5, 1))
        assert validate_grading(bad) == [(5, 6, 5, 1)]

    def test_purely_even_algebra(self, gf3):
        assert validate_grading(Superalgebra(gf3, 1, (0,), ((0, 0, 0, 1),))) == []

    def test_supercommutative_catalog(self, k9, v_half_3, j_vector_3):
        for A in (k9, v_half_3, j_vector_3):
            assert check_supercommutative(A) == []

    def test_odd_products_must_anticommute(self, gf3):
        A = Superalgebra(gf3, 3, (0, 1, 1), ((1, 2, 0, 1), (2, 1, 0, 1)))
        assert (1, 2) in check_supercommutative(A)

    def test_odd_square_must_vanish(self, gf3):
        A = Superalgebra(gf3, 2, (0, 1), ((1, 1, 0, 1),))
        assert check_supercommutative(A) == [(1, 1)]

    def test_random_homogeneous_pairs_in_k9(self, k9):
        rng = random.Random(9)
        spec = k9.field
        for _ in range(200):
            p, q = rng.randint(0, 1), rng.randint(0, 1)
            x = Element(k9, tuple(rng.randrange(3) if k9.parity[i] == p else 0 for i in range(9)))
            y = Element(k9, tuple(rng.randrange(3) if k9.parity[i] == q else 0 for i in range(9)))
            sign = spec.normalize(-1 if p and q else 1)
            assert x * y == (y * x).scale(sign)


class TestGrassmann:
    def test_sign(self):
        assert grassmann_sign(0b01, 0b10) == 1
        assert grassmann_sign(0b10, 0b01) == -1
        assert grassmann_sign(0b11, 0b01) == 0
        assert grassmann_sign(0b101, 0b010) == -1

    def test_no_generators(self, gf3):
        G = grassmann_algebra(gf3, 0)
        assert G.dim == 1
        assert G.labels == ("1",)

    def test_two_generators(self, gf3):
        G = grassmann_algebra(gf3, 2)
        xi1, xi2, xi12 = (G.basis(G.index(label)) for label in ("ξ1", "ξ2", "ξ12"))
        assert xi1 * xi2 == xi12
        assert xi2 * xi1 == xi12.scale(-1)
        assert (xi1 * xi1).is_zero()

    def test_overlapping_monomials_vanish(self, gf3):
        G = grassmann_algebra(gf3, 3)
        assert (G.basis(0b011) * G.basis(0b110)).is_zero()

    @pytest.mark.parametrize("N", range(6))
    def test_grassmann_is_supercommutative(self, gf3, N):
        G = grassmann_algebra(gf3, N)
        assert validate_grading(G) == []
        assert check_supercommutative(G) == []

    def test_envelope_dimensions(self, k9, k3):
        assert grassmann_envelope(k9, 4).dim == 72
        assert grassmann_envelope(k9, 0).dim == 5
        assert grassmann_envelope(k3, 2).dim == 6

    def test_envelope_is_commutative(self, k3):
        G = grassmann_envelope(k3, 2)
        assert set(G.parity) == {0}
        assert check_supercommutative(G) == []


class TestJordanCheck:
    def test_k9_passes(self, k9):
        report = check_jordan_super(k9)
        assert report.passed
        assert report.instances_checked == 165 * 9

    def test_k3_instance_count(self, k3):
        report = check_jordan_super(k3)
        assert report.passed
        assert report.instances_checked == 30

    def test_idempotent_line(self, gf3):
        assert check_jordan_super(Superalgebra(gf3, 1, (0,), ((0, 0, 0, 1),))).passed

    def test_one_sided_mutation_fails(self, k9):
        bad = _replace_entry(k9, (1, 4, 0, 2), (1, 4, 0, 1))
        report = check_jordan_super(bad)
        assert not report.passed
        assert (1, 4) in report.supercommutativity_violations

    def test_symmetric_mutation_breaks_the_identity(self, k9):
        bad = _replace_entry(k9, (1, 4, 0, 2), (1, 4, 0, 1))
        bad = _replace_entry(bad, (4, 1, 0, 2), (4, 1, 0, 1))
        report = check_jordan_super(bad)
        assert report.supercommutativity_violations == []
        assert report.failures
        assert "residue" in report.failures[0].describe(bad)

    def test_grading_failure_skips_identity(self, k9):
        bad = _replace_entry(k9, (5, 6, 0, 1), (5, 6, 5, 1))
        report = check_jordan_super(bad)
        assert report.grading_violations
        assert report.instances_checked == 0

    def test_needs_four_generators(self, k3):
        with pytest.raises(AlgebraError):
            check_jordan_super(k3, generators=3)

    def test_more_generators_agree(self, k3):
        assert check_jordan_super(k3, generators=6).passed

    def test_non_jordan_even_algebra(self, gf3):
        # x·x = y, x·y = x, y·y = 0: commutative, (x²x)x = x² ≠ x²(xx) = 0
        table = ((0, 0, 1, 1), (0, 1, 0, 1), (1, 0, 0, 1))
        report = check_jordan_super(Superalgebra(gf3, 2, (0, 0), table))
        assert report.failures


class TestMultiplications:
    def test_unit_of_hull_acts_as_identity(self, k3):
        H = unital_hull(k3)
        assert right_mul(H, H.basis(3)) == HomMap.identity(H)

    def test_k9_idempotent_on_odd_part(self, k9):
        R = right_mul(k9, k9.basis(0))
        for j in k9.odd_indices:
            assert R.image(j) == k9.basis(j).scale(2)
        for j in k9.even_indices:
            assert R.image(j) == k9.basis(j)

    def test_odd_multiplier(self, k9):
        R = right_mul(k9, k9.basis(k9.index("z")))
        assert R.parity == 1
        assert R.image(k9.index("w")) == k9.basis(k9.index("e"))

    def test_mixed_element_rejected(self, k3):
        with pytest.raises(AlgebraError):
            right_mul(k3, k3.basis(0) + k3.basis(1))

    def test_find_unit(self, j_vector_3, v_half_3, k9, k3):
        assert find_unit(j_vector_3) == j_vector_3.basis(j_vector_3.index("1"))
        H = unital_hull(k3)
        assert find_unit(H) == H.basis(3)
        assert find_unit(v_half_3) is None
        assert find_unit(k9) is None
        assert find_unit(k3) is None

    def test_map_parity_enforced(self, k3):
        with pytest.raises(AlgebraError, match="breaks parity"):
            HomMap.from_flat(k3, 0, (0, 1, 0, 0, 0, 0, 0, 0, 0))

    def test_compose(self, k9):
        Re = right_mul(k9, k9.basis(0))
        z = k9.basis(k9.index("z"))
        assert Re.compose(Re).apply(z) == z.scale(4)
