from fractions import Fraction

import pytest

from engine.catalog import unital_hull
from engine.delta_solver import (
    CENTROID,
    DELTA,
    MapSpace,
    centroid,
    centroid_violations,
    check_block_structure,
    classify,
    delta_violations,
    scan_delta_finite,
    scan_delta_parametric,
    solve_delta,
    space_contains,
    spectrum_record,
    supercommutator,
)
from engine.scalars import FieldError
from engine.superalgebra import HomMap, find_unit, mul, right_mul


class TestSolveDelta:
    def test_k3_at_half(self, k3):
        assert solve_delta(k3, "half", 0).dim == 1
        assert solve_delta(k3, "half", 1).dim == 0

    def test_k3_zero_derivations(self, k3):
        # K3·K3 = K3, so φ(A²) = 0 forces φ = 0
        assert solve_delta(k3, 0, 0).dim == 0
        assert solve_delta(k3, 0, 1).dim == 0

    def test_k3_rational_generic_delta(self, k3_q):
        assert solve_delta(k3_q, 7, 0).dim == 0
        assert solve_delta(k3_q, 7, 1).dim == 0

    def test_k9_at_half_is_scalar(self, k9):
        space = solve_delta(k9, 2, 0)
        assert space.dim == 1
        assert space.basis[0] == HomMap.identity(k9)
        assert solve_delta(k9, 2, 1).dim == 0

    def test_v_half_dimensions(self, v_half_3, v_half_5):
        assert solve_delta(v_half_3, "half", 0).dim == 3
        assert solve_delta(v_half_3, "half", 1).dim == 4
        assert solve_delta(v_half_5, "half", 0).dim == 5
        assert solve_delta(v_half_5, "half", 1).dim == 5
        assert solve_delta(v_half_5, 2, 0).dim == 0
        assert solve_delta(v_half_5, 4, 0).dim == 0

    def test_delta_spellings_agree(self, v_half_5):
        assert solve_delta(v_half_5, "half", 1) == solve_delta(v_half_5, "3", 1)
        assert solve_delta(v_half_5, Fraction(1, 2), 1) == solve_delta(v_half_5, 3, 1)

    def test_fractions_rejected_over_prime_fields(self, k3):
        with pytest.raises(FieldError):
            solve_delta(k3, "1/2", 0)

    def test_solutions_satisfy_the_condition(self, k3, v_half_3, j_vector_3):
        for A in (k3, v_half_3, j_vector_3):
            for d in (0, 1, 2):
                for q in (0, 1):
                    space = solve_delta(A, d, q)
                    assert space.kind == DELTA
                    for phi in space.basis:
                        assert delta_violations(A, phi, d) == []

    def test_deterministic(self, v_half_3):
        assert solve_delta(v_half_3, 2, 1) == solve_delta(v_half_3, 2, 1)


class TestCentroid:
    def test_k9(self, k9):
        assert centroid(k9, 0).dim == 1
        assert centroid(k9, 1).dim == 0

    def test_unital_centroid_contains_identity(self, j_vector_3):
        space = centroid(j_vector_3, 0)
        assert space.kind == CENTROID
        assert space_contains(space, HomMap.identity(j_vector_3))

    def test_centroid_basis_satisfies_the_condition(self, v_half_3, k9):
        for A in (v_half_3, k9):
            for q in (0, 1):
                for chi in centroid(A, q).basis:
                    assert centroid_violations(A, chi) == []

    @pytest.mark.parametrize("fixture", ["k3", "k9", "v_half_3", "j_vector_3"])
    def test_centroid_inside_half_derivations(self, request, fixture):
        A = request.getfixturevalue(fixture)
        for q in (0, 1):
            half = solve_delta(A, "half", q)
            assert all(space_contains(half, chi) for chi in centroid(A, q).basis)


class TestClassify:
    def test_k9_half_is_trivial(self, k9):
        record = classify(k9, 2, 0)
        assert not record.nontrivial
        assert record.trivial_part.dim == record.space.dim == 1

    def test_v_half_is_nontrivial(self, v_half_3):
        record = classify(v_half_3, "half", 0)
        assert record.nontrivial
        assert record.space.dim == 3
        assert record.trivial_part.dim == 1
        assert record.verdict == "nontrivial"

    def test_ordinary_derivations_are_trivial(self, v_half_3):
        record = classify(v_half_3, 1, 1)
        assert not record.nontrivial
        assert record.trivial_part == record.space

    def test_unital_collapse(self, j_vector_3):
        unit = find_unit(j_vector_3)
        for q in (0, 1):
            for phi in solve_delta(j_vector_3, "half", q).basis:
                assert phi == right_mul(j_vector_3, phi.apply(unit))
        assert classify(j_vector_3, "half", 0).nontrivial


UNITAL = {
    "j_vector_3": lambda r: r.getfixturevalue("j_vector_3"),
    "j_vector_5": lambda r: r.getfixturevalue("j_vector_5"),
    "hull_k3": lambda r: unital_hull(r.getfixturevalue("k3")),
    "hull_k9": lambda r: unital_hull(r.getfixturevalue("k9")),
    "hull_k3_q": lambda r: unital_hull(r.getfixturevalue("k3_q")),
}


@pytest.mark.parametrize("name", sorted(UNITAL))
def test_half_maps_of_unital_algebras_are_multiplications(request, name):
    A = UNITAL[name](request)
    unit = find_unit(A)
    assert unit is not None
    for q in (0, 1):
        for phi in solve_delta(A, "half", q).basis:
            assert phi == right_mul(A, phi.apply(unit))


@pytest.mark.parametrize("fixture", ["k3", "k9", "v_half_3", "v_half_5", "j_vector_3"])
def test_zero_derivations_kill_products(request, fixture):
    A = request.getfixturevalue(fixture)
    for q in (0, 1):
        for phi in solve_delta(A, 0, q).basis:
            for i in range(A.dim):
                for j in range(A.dim):
                    assert phi.apply(mul(A, A.basis(i), A.basis(j))).is_zero()


class TestScans:
    def test_k9_has_no_nontrivial_delta(self, k9):
        assert scan_delta_finite(k9).nontrivial_deltas() == []

    def test_j_vector_only_at_half(self, j_vector_3):
        spectrum = scan_delta_finite(j_vector_3)
        assert [r.delta for r in spectrum.records] == [0, 1, 2]
        assert spectrum.nontrivial_deltas() == [2]

    def test_v_half_over_gf5_only_at_half(self, v_half_5):
        spectrum = scan_delta_finite(v_half_5)
        assert spectrum.nontrivial_deltas() == [3]
        records = {r.delta: r for r in spectrum.records}
        assert records[3].dims == (5, 5)
        assert records[3].nontrivial == (True, True)
        for d in (0, 2, 4):
            assert records[d].dims == (0, 0)
        for d in (0, 1):
            assert records[d].trivial_dims == records[d].dims

    def test_finite_scan_needs_prime_field(self, k3_q):
        with pytest.raises(FieldError):
            scan_delta_finite(k3_q)

    def test_parametric_needs_rationals(self, k3):
        with pytest.raises(FieldError):
            scan_delta_parametric(k3)

    def test_parametric_k3(self, k3_q):
        scan = scan_delta_parametric(k3_q)
        deltas = [r.delta for r in scan.records]
        assert {Fraction(0), Fraction(1), Fraction(1, 2)} <= set(deltas)
        assert deltas == sorted(deltas)
        for parity in scan.parities:
            assert parity.generic_dim == 0

    def test_parametric_hull_is_trivial(self, k3_q):
        scan = scan_delta_parametric(unital_hull(k3_q))
        assert scan.nontrivial_deltas() == []
        half = next(r for r in scan.records if r.delta == Fraction(1, 2))
        assert half.dims == half.trivial_dims


class TestBlocks:
    def test_sum_spaces_are_block_diagonal(self, k9_plus_v):
        for d in (1, 2):
            for q in (0, 1):
                assert check_block_structure(k9_plus_v, solve_delta(k9_plus_v, d, q)) == []

    def test_cross_block_entry_detected(self, k9_plus_v):
        flat = [0] * (15 * 15)
        flat[0 * 15 + 9] = 1
        phi = HomMap.from_flat(k9_plus_v, 0, flat)
        space = MapSpace(k9_plus_v, 0, DELTA, (phi,), 2)
        assert check_block_structure(k9_plus_v, space) == [(0, 0, 9)]

    def test_dimensions_add_up(self, k9_plus_v, k9, v_half_3):
        assert solve_delta(k9_plus_v, 2, 0).dim == solve_delta(k9, 2, 0).dim + solve_delta(v_half_3, 2, 0).dim

    def test_attribution_points_at_v(self, k9_plus_v):
        record = spectrum_record(k9_plus_v, "half")
        assert record.nontrivial == (True, True)
        assert record.nontrivial_blocks == ((1,), (1,))


@pytest.mark.parametrize("q1, q2", [(0, 0), (0, 1), (1, 1)])
def test_superderivations_close_under_supercommutator(k3, q1, q2):
    for d1 in solve_delta(k3, 1, q1).basis:
        for d2 in solve_delta(k3, 1, q2).basis:
            bracket = supercommutator(d1, d2)
            assert bracket.parity == q1 ^ q2
            assert delta_violations(k3, bracket, 1) == []
