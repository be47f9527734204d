import itertools
import random
from fractions import Fraction

import pytest

from engine.linalg import (
    Matrix,
    PolyMatrix,
    RowReducer,
    bareiss_pivots,
    kernel,
    kernel_of_rows,
    rank,
    rref,
    solve_affine,
)
from engine.poly import SparsePoly, affine, rational_roots
from engine.scalars import PRIME, RATIONAL, FieldError, FieldSpec

Q = FieldSpec(RATIONAL)
GF3 = FieldSpec(PRIME, 3)


def _random_matrix(rng, spec, rows, cols):
    if spec.is_prime:
        return Matrix.from_rows(spec, [[rng.randrange(spec.p) for _ in range(cols)] for _ in range(rows)])
    return Matrix.from_rows(spec, [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)])


class TestRref:
    def test_identity(self):
        assert rank(Matrix.identity(GF3, 3)) == 3

    def test_zero(self):
        assert rank(Matrix.zeros(GF3, 2, 4)) == 0

    def test_dependent_rows(self):
        assert rank(Matrix.from_rows(Q, [[1, 2], [2, 4]])) == 1

    def test_reduces_to_identity(self):
        reduced, r = rref(Matrix.from_rows(Q, [[2, 4], [1, 3]]))
        assert r == 2
        assert reduced == Matrix.identity(Q, 2)

    def test_zero_rows_at_bottom(self):
        reduced, r = rref(Matrix.from_rows(Q, [[0, 0, 0], [0, 2, 4], [1, 0, 1]]))
        assert r == 2
        assert reduced.to_rows() == [[1, 0, 1], [0, 1, 2], [0, 0, 0]]

    def test_rref_is_idempotent(self):
        rng = random.Random(3)
        for _ in range(30):
            reduced, r = rref(_random_matrix(rng, Q, 4, 5))
            again, r2 = rref(reduced)
            assert (again, r2) == (reduced, r)


class TestKernel:
    def test_identity_has_trivial_kernel(self):
        assert kernel(Matrix.identity(GF3, 3)).dim == 0

    def test_zero_matrix(self):
        basis = kernel(Matrix.zeros(GF3, 2, 3))
        assert basis.vectors == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_single_equation(self):
        M = Matrix.from_rows(GF3, [[1, 1, 0]])
        basis = kernel(M)
        assert basis.dim == 2
        for v in basis.vectors:
            assert M.apply(v) == [0]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_enumeration_over_gf3(self, seed):
        rng = random.Random(seed)
        cols = rng.randint(1, 6)
        M = _random_matrix(rng, GF3, rng.randint(1, 5), cols)
        solutions = {v for v in itertools.product(range(3), repeat=cols) if all(x == 0 for x in M.apply(v))}
        basis = kernel(M)
        assert len(solutions) == 3 ** basis.dim
        for v in basis.vectors:
            assert v in solutions

    def test_rank_nullity(self):
        rng = random.Random(17)
        for spec in (GF3, FieldSpec(PRIME, 7), Q):
            for _ in range(25):
                rows, cols = rng.randint(1, 6), rng.randint(1, 6)
                M = _random_matrix(rng, spec, rows, cols)
                assert rank(M) + kernel(M).dim == cols

    def test_canonical_regardless_of_row_order(self):
        rows = [{0: 1, 2: 1}, {1: 1, 2: 2}]
        assert kernel_of_rows(GF3, 3, rows) == kernel_of_rows(GF3, 3, list(reversed(rows)))


class TestRowReducer:
    def test_insert_reports_rank_growth(self):
        reducer = RowReducer(Q, 3)
        assert reducer.insert({0: 1, 1: 1})
        assert not reducer.insert({0: 2, 1: 2})
        assert reducer.extend([{1: 1}, {0: 1}, {2: Fraction(1, 2)}]) == 2
        assert reducer.rank == 3


class TestSolveAffine:
    def test_consistent(self):
        x = solve_affine(Q, [{0: 1, 1: 1}, {1: 2}], [3, 4], 2)
        assert x == [1, 2]

    def test_inconsistent(self):
        assert solve_affine(GF3, [{0: 1}, {0: 2}], [1, 1], 1) is None


def _poly(*coeffs):
    return SparsePoly.from_terms(Q, 1, {(e,): c for e, c in enumerate(coeffs)})


class TestBareiss:
    def test_single_entry(self):
        r, pivots = bareiss_pivots(PolyMatrix.from_rows(Q, [[_poly(0, 1)]]))
        assert r == 1
        assert pivots == [_poly(0, 1)]

    def test_determinant_roots(self):
        delta = _poly(0, 1)
        one = _poly(1)
        r, pivots = bareiss_pivots(PolyMatrix.from_rows(Q, [[one, delta], [delta, one]]))
        assert r == 2
        assert pivots[-1] == _poly(1, 0, -1)
        assert rational_roots(pivots[-1]) == ([Fraction(-1), Fraction(1)], False)

    def test_constant_full_rank(self):
        rows = [[_poly(1), _poly(2)], [_poly(3), _poly(5)]]
        r, pivots = bareiss_pivots(PolyMatrix.from_rows(Q, rows))
        assert r == 2
        assert all(p.degree() == 0 for p in pivots)

    def test_skips_zero_columns(self):
        zero = SparsePoly.zero(Q, 1)
        rows = [[zero, _poly(0, 1)], [zero, _poly(1)]]
        r, _ = bareiss_pivots(PolyMatrix.from_rows(Q, rows))
        assert r == 1

    def test_prime_field_rejected(self):
        with pytest.raises(FieldError):
            PolyMatrix.from_rows(GF3, [[SparsePoly.constant(GF3, 1, 1)]])

    @pytest.mark.parametrize("seed", range(20))
    def test_rank_drops_only_at_pivot_roots(self, seed):
        rng = random.Random(seed)
        n = 6
        rows = [[affine(Q, rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)]
        M = PolyMatrix.from_rows(Q, rows)
        generic, pivots = bareiss_pivots(M)
        roots = set()
        for p in pivots:
            roots.update(rational_roots(p)[0])
        probe = next(Fraction(k) for k in range(1000, 2000) if Fraction(k) not in roots)
        assert rank(M.evaluate_at(probe)) == generic
        for root in roots:
            assert rank(M.evaluate_at(root)) <= generic
