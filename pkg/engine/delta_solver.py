"""
Delta Solver - δ-derivations, δ-superderivations, centroids and δ-spectrum scans.

A homogeneous map φ of parity q is unknown through its parity-respecting matrix
entries (k, j), flattened row-major. For every ordered basis pair (i, j) and
coordinate k the defining condition

    φ(b_i b_j)_k - δ (φ(b_i) b_j + (-1)^{p(i) q} b_i φ(b_j))_k = 0

is a linear row whose coefficients are affine in δ; the same rows serve the exact
solve at one δ and the parametric scan over Q.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from engine.linalg import PolyMatrix, RowReducer, bareiss_pivots, kernel_of_rows
from engine.poly import SparsePoly, affine, rational_roots
from engine.scalars import FieldError, FieldSpec, RawValue
from engine.superalgebra import Element, HomMap, Superalgebra, product_coeffs

logger = logging.getLogger(__name__)

DELTA = "delta"
CENTROID = "centroid"
COUPLED = "coupled"

AffineRow = Dict[int, Tuple[RawValue, RawValue]]


@dataclass(frozen=True)
class MapSpace:
    """Echelonized basis of homogeneous maps solving one linear condition."""

    algebra: Superalgebra
    parity: int
    kind: str
    basis: Tuple[HomMap, ...]
    delta: Optional[RawValue] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def delta_text(self) -> str:
        return "-" if self.delta is None else self.algebra.field.format(self.delta)


# --- unknowns and equations ----------------------------------------------------


def unknown_positions(A: Superalgebra, q: int) -> List[Tuple[int, int]]:
    """Matrix positions (k, j) allowed for a map of parity q, row-major."""
    return [
        (k, j)
        for k in range(A.dim)
        for j in range(A.dim)
        if A.parity[k] == A.parity[j] ^ q
    ]


def _right_products(A: Superalgebra) -> List[List[Tuple[int, int, RawValue]]]:
    """For each j: (k', k, c) with b_k'·b_j having coefficient c at b_k."""
    out = [[] for _ in range(A.dim)]
    for (a, b), terms in A.products.items():
        for k, c in terms:
            out[b].append((a, k, c))
    return out


def _left_products(A: Superalgebra) -> List[List[Tuple[int, int, RawValue]]]:
    """For each i: (k', k, c) with b_i·b_k' having coefficient c at b_k."""
    out = [[] for _ in range(A.dim)]
    for (a, b), terms in A.products.items():
        for k, c in terms:
            out[a].append((b, k, c))
    return out


@lru_cache(maxsize=64)
def affine_rows(A: Superalgebra, q: int) -> Tuple[Tuple[Tuple[int, Tuple[RawValue, RawValue]], ...], ...]:
    """Distinct rows of the δ-system; entry var -> (c0, c1) stands for c0 + c1·δ."""
    spec = A.field
    index = {pos: t for t, pos in enumerate(unknown_positions(A, q))}
    right = _right_products(A)
    left = _left_products(A)
    rows = set()
    for i in range(A.dim):
        sign = spec.normalize(-1 if A.parity[i] and q else 1)
        for j in range(A.dim):
            by_k: Dict[int, Dict[int, List[RawValue]]] = {}

            def put(k, var, c0, c1):
                slot = by_k.setdefault(k, {}).setdefault(var, [spec.zero, spec.zero])
                slot[0] = spec.add(slot[0], c0)
                slot[1] = spec.add(slot[1], c1)

            for t, c in A.basis_product(i, j):
                for k in range(A.dim):
                    var = index.get((k, t))
                    if var is not None:
                        put(k, var, c, spec.zero)
            for kp, k, c in right[j]:
                var = index.get((kp, i))
                if var is not None:
                    put(k, var, spec.zero, spec.neg(c))
            for kp, k, c in left[i]:
                var = index.get((kp, j))
                if var is not None:
                    put(k, var, spec.zero, spec.neg(spec.mul(sign, c)))
            for entries in by_k.values():
                row = tuple(sorted((v, (c0, c1)) for v, (c0, c1) in entries.items() if c0 != 0 or c1 != 0))
                if row:
                    rows.add(row)
    logger.debug(f"δ-system for {A.name or A.fingerprint}, parity {q}: {len(index)} unknowns, {len(rows)} rows")
    return tuple(sorted(rows))


def rows_at(spec: FieldSpec, rows: Iterable, delta: RawValue) -> Iterable[Dict[int, RawValue]]:
    """Specialize affine rows at one δ."""
    for row in rows:
        out = {}
        for var, (c0, c1) in row:
            v = spec.add(c0, spec.mul(c1, delta))
            if v != 0:
                out[var] = v
        if out:
            yield out


@lru_cache(maxsize=64)
def centroid_rows(A: Superalgebra, q: int) -> Tuple[Tuple[Tuple[int, RawValue], ...], ...]:
    """χ(b_i b_j) - χ(b_i) b_j = 0 and χ(b_i) b_j - (-1)^{p(i) q} b_i χ(b_j) = 0."""
    spec = A.field
    index = {pos: t for t, pos in enumerate(unknown_positions(A, q))}
    right = _right_products(A)
    left = _left_products(A)
    rows = set()
    for i in range(A.dim):
        sign = spec.normalize(-1 if A.parity[i] and q else 1)
        for j in range(A.dim):
            first: Dict[int, Dict[int, RawValue]] = {}
            second: Dict[int, Dict[int, RawValue]] = {}

            def put(target, k, var, c):
                slot = target.setdefault(k, {})
                slot[var] = spec.add(slot.get(var, spec.zero), c)

            for t, c in A.basis_product(i, j):
                for k in range(A.dim):
                    var = index.get((k, t))
                    if var is not None:
                        put(first, k, var, c)
            for kp, k, c in right[j]:
                var = index.get((kp, i))
                if var is not None:
                    put(first, k, var, spec.neg(c))
                    put(second, k, var, c)
            for kp, k, c in left[i]:
                var = index.get((kp, j))
                if var is not None:
                    put(second, k, var, spec.neg(spec.mul(sign, c)))
            for block in (first, second):
                for entries in block.values():
                    row = tuple(sorted((v, c) for v, c in entries.items() if c != 0))
                    if row:
                        rows.add(row)
    return tuple(sorted(rows))


def space_from_vectors(A: Superalgebra, q: int, kind: str, vectors, delta=None) -> MapSpace:
    spec = A.field
    positions = unknown_positions(A, q)
    n = A.dim
    basis = []
    for vec in vectors:
        flat = [spec.zero] * (n * n)
        for (k, j), v in zip(positions, vec):
            flat[k * n + j] = v
        basis.append(HomMap.from_flat(A, q, flat))
    return MapSpace(A, q, kind, tuple(basis), delta)


def _normalize_delta(A: Superalgebra, delta) -> RawValue:
    if isinstance(delta, str):
        text = delta.strip().lower()
        return A.field.half if text == "half" else A.field.parse(text)
    return A.field.normalize(delta)


# --- solvers --------------------------------------------------------------------


def solve_delta(A: Superalgebra, delta, q: int) -> MapSpace:
    """All δ-(super)derivations of parity q."""
    spec = A.field
    d = _normalize_delta(A, delta)
    cols = len(unknown_positions(A, q))
    basis = kernel_of_rows(spec, cols, (dict(r) for r in rows_at(spec, affine_rows(A, q), d)))
    logger.debug(f"solve_delta {A.name or A.fingerprint} δ={spec.format(d)} q={q}: dim {basis.dim}")
    return space_from_vectors(A, q, DELTA, basis.vectors, d)


def centroid(A: Superalgebra, q: int) -> MapSpace:
    """Centroid (q = 0) or odd part of the supercentroid (q = 1)."""
    cols = len(unknown_positions(A, q))
    basis = kernel_of_rows(A.field, cols, (dict(r) for r in centroid_rows(A, q)))
    return space_from_vectors(A, q, CENTROID, basis.vectors)


def centroid_intersection(A: Superalgebra, delta, q: int) -> MapSpace:
    """δ-solutions lying in the (super)centroid."""
    spec = A.field
    d = _normalize_delta(A, delta)
    cols = len(unknown_positions(A, q))
    rows = list(rows_at(spec, affine_rows(A, q), d)) + [dict(r) for r in centroid_rows(A, q)]
    basis = kernel_of_rows(spec, cols, rows)
    return space_from_vectors(A, q, CENTROID, basis.vectors, d)


@dataclass(frozen=True)
class ClassificationRecord:
    space: MapSpace
    trivial_part: MapSpace
    nontrivial: bool
    verdict: str


def classify(A: Superalgebra, delta, q: int) -> ClassificationRecord:
    """
    Split the δ-space into its trivial part and decide nontriviality.

    δ = 0 solutions satisfy φ(A²) = 0 and δ = 1 solutions are ordinary
    (super)derivations; both count as trivial. Otherwise the trivial part is the
    intersection with the (super)centroid.
    """
    spec = A.field
    d = _normalize_delta(A, delta)
    space = solve_delta(A, d, q)
    if d == 0:
        return ClassificationRecord(space, space, False, "trivial: 0-derivations")
    if d == spec.one:
        return ClassificationRecord(space, space, False, "trivial: (super)derivations")
    trivial = centroid_intersection(A, d, q)
    nontrivial = space.dim > trivial.dim
    verdict = "nontrivial" if nontrivial else "trivial: contained in the (super)centroid"
    return ClassificationRecord(space, trivial, nontrivial, verdict)


# --- spectra ---------------------------------------------------------------------


@dataclass
class DeltaRecord:
    """
    Both parities at one δ.

    At δ = 0 and δ = 1 the whole space counts as trivial, so trivial_dims equals dims
    there; elsewhere trivial_dims is the dimension of the centroid intersection.
    """

    delta: RawValue
    dims: Tuple[int, int]
    trivial_dims: Tuple[int, int]
    nontrivial: Tuple[bool, bool]
    nontrivial_blocks: Tuple[Tuple[int, ...], Tuple[int, ...]] = ((), ())

    @property
    def any_nontrivial(self) -> bool:
        return any(self.nontrivial)


@dataclass
class DeltaSpectrum:
    algebra: Superalgebra
    records: List[DeltaRecord]

    def nontrivial_deltas(self) -> List[RawValue]:
        return [r.delta for r in self.records if r.any_nontrivial]


def spectrum_record(A: Superalgebra, delta) -> DeltaRecord:
    """One spectrum row: classification of both parities at δ, with block attribution."""
    d = _normalize_delta(A, delta)
    results = [classify(A, d, q) for q in (0, 1)]
    blocks = tuple(
        tuple(block_attribution(r.space, r.trivial_part)) if r.nontrivial and A.blocks else ()
        for r in results
    )
    return DeltaRecord(
        d,
        (results[0].space.dim, results[1].space.dim),
        (results[0].trivial_part.dim, results[1].trivial_part.dim),
        (results[0].nontrivial, results[1].nontrivial),
        blocks,
    )


def scan_delta_finite(A: Superalgebra) -> DeltaSpectrum:
    """classify() at every δ of GF(p), both parities, in residue order."""
    if not A.field.is_prime:
        raise FieldError("finite δ-scan needs a prime field; use the parametric scan over Q")
    records = []
    for d in A.field.elements():
        records.append(spectrum_record(A, d))
        logger.info(f"δ={d}: dims {records[-1].dims}, nontrivial {records[-1].nontrivial}")
    return DeltaSpectrum(A, records)


@dataclass
class ParityScan:
    parity: int
    unknowns: int
    generic_rank: int
    candidates: List[RawValue]
    has_nonrational: bool

    @property
    def generic_dim(self) -> int:
        return self.unknowns - self.generic_rank


@dataclass
class ParametricScan:
    algebra: Superalgebra
    parities: Tuple[ParityScan, ParityScan]
    records: List[DeltaRecord]

    def nontrivial_deltas(self) -> List[RawValue]:
        return [r.delta for r in self.records if r.any_nontrivial]


def parametric_system(A: Superalgebra, q: int) -> PolyMatrix:
    spec = A.field
    cols = len(unknown_positions(A, q))
    rows = []
    for row in affine_rows(A, q):
        dense = [SparsePoly.zero(spec, 1)] * cols
        for var, (c0, c1) in row:
            dense[var] = affine(spec, c0, c1)
        rows.append(dense)
    return PolyMatrix.from_rows(spec, rows) if rows else PolyMatrix(spec, 0, cols, ())


def scan_delta_parametric(A: Superalgebra, always: Sequence = (0, 1, "half")) -> ParametricScan:
    """
    δ as an indeterminate: generic ranks from fraction-free elimination, rational
    roots of the pivots as candidates, and exact re-solves at every candidate.
    """
    if A.field.is_prime:
        raise FieldError("the parametric scan runs over Q")
    spec = A.field
    parities = []
    values = {_normalize_delta(A, v) for v in always}
    for q in (0, 1):
        M = parametric_system(A, q)
        generic_rank, pivots = bareiss_pivots(M)
        candidates = set()
        nonrational = False
        for pivot in pivots:
            if pivot.degree() <= 0:
                continue
            roots, rest = rational_roots(pivot)
            candidates.update(roots)
            nonrational = nonrational or rest
        parities.append(ParityScan(q, M.cols, generic_rank, sorted(candidates), nonrational))
        values.update(candidates)
        logger.info(
            f"Parametric scan q={q}: generic dim {M.cols - generic_rank}, "
            f"candidates {[spec.format(c) for c in sorted(candidates)]}"
        )
    records = [spectrum_record(A, v) for v in sorted(values)]
    return ParametricScan(A, (parities[0], parities[1]), records)


# --- block structure ----------------------------------------------------------------


def _block_of(A: Superalgebra) -> List[Optional[int]]:
    owner: List[Optional[int]] = [None] * A.dim
    for b, (start, stop) in enumerate(A.blocks):
        for t in range(start, stop):
            owner[t] = b
    return owner


def check_block_structure(A: Superalgebra, space: MapSpace) -> List[Tuple[int, int, int]]:
    """(map index, k, j) for every entry of a basis map linking two different blocks."""
    if not A.blocks:
        return []
    owner = _block_of(A)
    violations = []
    for t, phi in enumerate(space.basis):
        for k in range(A.dim):
            for j in range(A.dim):
                if phi.matrix.entry(k, j) != 0 and owner[k] != owner[j]:
                    violations.append((t, k, j))
    if violations:
        logger.warning(f"{len(violations)} cross-block entries in {space.kind} space")
    return violations


def _projection_rank(A: Superalgebra, space: MapSpace, block: Tuple[int, int]) -> int:
    start, stop = block
    width = stop - start
    reducer = RowReducer(A.field, width * width)
    for phi in space.basis:
        row = {}
        for k in range(start, stop):
            for j in range(start, stop):
                v = phi.matrix.entry(k, j)
                if v != 0:
                    row[(k - start) * width + (j - start)] = v
        reducer.insert(row)
    return reducer.rank


def block_attribution(space: MapSpace, trivial: MapSpace) -> List[int]:
    """Blocks whose part of the space is larger than the part of its trivial subspace."""
    A = space.algebra
    return [
        b for b, block in enumerate(A.blocks)
        if _projection_rank(A, space, block) > _projection_rank(A, trivial, block)
    ]


# --- re-checks ------------------------------------------------------------------------


def _basis_coeffs(A: Superalgebra, i: int) -> List[RawValue]:
    return list(Element.basis(A, i).coeffs)


def delta_violations(A: Superalgebra, phi: HomMap, delta) -> List[Tuple[int, int]]:
    """Basis pairs on which φ breaks the δ-condition, by direct multiplication."""
    spec = A.field
    d = _normalize_delta(A, delta)
    out = []
    for i in range(A.dim):
        bi = _basis_coeffs(A, i)
        phi_i = list(phi.image(i).coeffs)
        sign = spec.normalize(-1 if A.parity[i] and phi.parity else 1)
        for j in range(A.dim):
            bj = _basis_coeffs(A, j)
            phi_j = list(phi.image(j).coeffs)
            lhs = phi.matrix.apply(product_coeffs(A, bi, bj))
            a = product_coeffs(A, phi_i, bj)
            b = product_coeffs(A, bi, phi_j)
            rhs = [spec.mul(d, spec.add(x, spec.mul(sign, y))) for x, y in zip(a, b)]
            if lhs != rhs:
                out.append((i, j))
    return out


def centroid_violations(A: Superalgebra, chi: HomMap) -> List[Tuple[int, int]]:
    spec = A.field
    out = []
    for i in range(A.dim):
        bi = _basis_coeffs(A, i)
        chi_i = list(chi.image(i).coeffs)
        sign = spec.normalize(-1 if A.parity[i] and chi.parity else 1)
        for j in range(A.dim):
            bj = _basis_coeffs(A, j)
            chi_j = list(chi.image(j).coeffs)
            first = chi.matrix.apply(product_coeffs(A, bi, bj))
            second = product_coeffs(A, chi_i, bj)
            third = [spec.mul(sign, v) for v in product_coeffs(A, bi, chi_j)]
            if not first == second == third:
                out.append((i, j))
    return out


def supercommutator(d1: HomMap, d2: HomMap) -> HomMap:
    """d1∘d2 - (-1)^{q1 q2} d2∘d1."""
    sign = -1 if d1.parity and d2.parity else 1
    return d1.compose(d2).combine(d2.compose(d1), -sign)


def space_contains(space: MapSpace, phi: HomMap) -> bool:
    """Membership test by rank."""
    A = space.algebra
    if phi.parity != space.parity:
        return phi.is_zero()
    reducer = RowReducer(A.field, A.dim * A.dim)
    for psi in space.basis:
        reducer.insert({t: v for t, v in enumerate(psi.flat) if v != 0})
    return not reducer.reduce({t: v for t, v in enumerate(phi.flat) if v != 0})
