"""
Linear Algebra - exact echelon forms, ranks and kernels over GF(p) or Q.

Rows are kept sparse (column -> raw value) while eliminating; the solver systems of
superalgebras are large but very sparse. Fraction-free Bareiss elimination over
univariate polynomials backs the parametric δ-scan.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from engine.poly import SparsePoly, pdiv_exact, pmul, psub
from engine.scalars import FieldError, FieldSpec, RawValue, Scalar

logger = logging.getLogger(__name__)

SparseRow = Dict[int, RawValue]


@dataclass(frozen=True)
class Matrix:
    """Dense matrix of raw values of one field, row-major."""

    field: FieldSpec
    rows: int
    cols: int
    entries: Tuple[RawValue, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged matrix rows")
        entries = tuple(spec.normalize(v) for r in rows for v in r)
        return cls(spec, len(rows), width, entries)

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(spec, rows, cols, (spec.zero,) * (rows * cols))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        return cls(spec, n, n, tuple(spec.one if i == j else spec.zero for i in range(n) for j in range(n)))

    def entry(self, i: int, j: int) -> RawValue:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[RawValue, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[RawValue]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, vector: Sequence) -> List[RawValue]:
        """M·v."""
        if len(vector) != self.cols:
            raise ValueError(f"vector length {len(vector)} does not match {self.cols} columns")
        spec = self.field
        v = [spec.normalize(x) for x in vector]
        out = []
        for i in range(self.rows):
            acc = spec.zero
            for j, a in enumerate(self.row(i)):
                if a != 0 and v[j] != 0:
                    acc = spec.add(acc, spec.mul(a, v[j]))
            out.append(acc)
        return out

    def scalar(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self.entry(i, j))


@dataclass(frozen=True)
class KernelBasis:
    """Canonical (reduced echelon) basis of a null space."""

    field: FieldSpec
    cols: int
    vectors: Tuple[Tuple[RawValue, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)


class RowReducer:
    """
    Incremental sparse Gauss-Jordan elimination.

    Pivot rows are kept fully reduced: every pivot row is zero in every other pivot
    column and has 1 in its own, so the stored rows always form the RREF of what
    has been inserted.
    """

    def __init__(self, spec: FieldSpec, cols: int):
        self.spec = spec
        self.cols = cols
        self.pivots: Dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: SparseRow) -> SparseRow:
        spec = self.spec
        row = {c: v for c, v in row.items() if v != 0}
        for col in [c for c in row if c in self.pivots]:
            factor = row.get(col)
            if not factor:
                continue
            for c, v in self.pivots[col].items():
                nv = spec.sub(row.get(c, spec.zero), spec.mul(factor, v))
                if nv == 0:
                    row.pop(c, None)
                else:
                    row[c] = nv
        return row

    def insert(self, row: SparseRow) -> bool:
        """Add a row; returns True when it raised the rank."""
        spec = self.spec
        row = self.reduce(row)
        if not row:
            return False
        pivot = min(row)
        scale = spec.inv(row[pivot])
        row = {c: spec.mul(v, scale) for c, v in row.items()}
        for other in self.pivots.values():
            factor = other.get(pivot)
            if not factor:
                continue
            for c, v in row.items():
                nv = spec.sub(other.get(c, spec.zero), spec.mul(factor, v))
                if nv == 0:
                    other.pop(c, None)
                else:
                    other[c] = nv
        self.pivots[pivot] = row
        return True

    def extend(self, rows: Iterable[SparseRow]) -> int:
        added = 0
        for row in rows:
            if self.insert(row):
                added += 1
        return added

    def echelon_rows(self) -> List[SparseRow]:
        return [self.pivots[c] for c in sorted(self.pivots)]

    def kernel_vectors(self) -> List[Tuple[RawValue, ...]]:
        """
        Null-space basis, one vector per free column.

        The vector for free column f has 1 at f, -R[p][f] at each pivot column p and
        0 elsewhere. The result is returned in reduced echelon form.
        """
        spec = self.spec
        free = [c for c in range(self.cols) if c not in self.pivots]
        vectors = []
        for f in free:
            vec = [spec.zero] * self.cols
            vec[f] = spec.one
            for p, prow in self.pivots.items():
                v = prow.get(f)
                if v:
                    vec[p] = spec.neg(v)
            vectors.append(vec)
        return canonical_basis(spec, self.cols, vectors)


def canonical_basis(spec: FieldSpec, cols: int, vectors: Iterable[Sequence[RawValue]]) -> List[Tuple[RawValue, ...]]:
    """RREF of the span of vectors (nonzero rows only)."""
    reducer = RowReducer(spec, cols)
    for v in vectors:
        reducer.insert({i: x for i, x in enumerate(v) if x != 0})
    out = []
    for row in reducer.echelon_rows():
        dense = [spec.zero] * cols
        for c, v in row.items():
            dense[c] = v
        out.append(tuple(dense))
    return out


def _sparse_rows(M: Matrix) -> Iterable[SparseRow]:
    for i in range(M.rows):
        yield {j: v for j, v in enumerate(M.row(i)) if v != 0}


def rref(M: Matrix) -> Tuple[Matrix, int]:
    """Reduced row-echelon form (zero rows at the bottom) and rank."""
    reducer = RowReducer(M.field, M.cols)
    reducer.extend(_sparse_rows(M))
    spec = M.field
    rows = []
    for row in reducer.echelon_rows():
        dense = [spec.zero] * M.cols
        for c, v in row.items():
            dense[c] = v
        rows.append(dense)
    while len(rows) < M.rows:
        rows.append([spec.zero] * M.cols)
    return Matrix.from_rows(spec, rows, M.cols), reducer.rank


def rank(M: Matrix) -> int:
    reducer = RowReducer(M.field, M.cols)
    return reducer.extend(_sparse_rows(M))


def kernel(M: Matrix) -> KernelBasis:
    reducer = RowReducer(M.field, M.cols)
    reducer.extend(_sparse_rows(M))
    vectors = reducer.kernel_vectors()
    logger.debug(f"Kernel of {M.rows}x{M.cols} matrix: rank {reducer.rank}, dim {len(vectors)}")
    return KernelBasis(M.field, M.cols, tuple(vectors))


def kernel_of_rows(spec: FieldSpec, cols: int, rows: Iterable[SparseRow]) -> KernelBasis:
    """Kernel of a system given directly as sparse rows."""
    reducer = RowReducer(spec, cols)
    reducer.extend(rows)
    return KernelBasis(spec, cols, tuple(reducer.kernel_vectors()))


def solve_affine(spec: FieldSpec, rows: Sequence[SparseRow], rhs: Sequence[RawValue], cols: int) -> Optional[List[RawValue]]:
    """
    One solution of A·x = b (free variables set to 0), or None when inconsistent.

    The right-hand side rides along as the extra column `cols`.
    """
    reducer = RowReducer(spec, cols + 1)
    for row, b in zip(rows, rhs):
        augmented = dict(row)
        b = spec.normalize(b)
        if b != 0:
            augmented[cols] = b
        reducer.insert(augmented)
    if cols in reducer.pivots:
        return None
    x = [spec.zero] * cols
    for p, prow in reducer.pivots.items():
        x[p] = prow.get(cols, spec.zero)
    return x


# --- parametric elimination --------------------------------------------------


@dataclass(frozen=True)
class PolyMatrix:
    """Matrix with univariate polynomial entries (the δ-parametric solver system)."""

    field: FieldSpec
    rows: int
    cols: int
    entries: Tuple[SparsePoly, ...]

    def __post_init__(self):
        if self.field.is_prime:
            raise FieldError("parametric elimination runs over Q")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[SparsePoly]]) -> "PolyMatrix":
        width = len(rows[0]) if rows else 0
        return cls(spec, len(rows), width, tuple(e for r in rows for e in r))

    def entry(self, i: int, j: int) -> SparsePoly:
        return self.entries[i * self.cols + j]

    def evaluate_at(self, value) -> Matrix:
        spec = self.field
        return Matrix(spec, self.rows, self.cols, tuple(e.evaluate([value]) for e in self.entries))


def bareiss_pivots(M: PolyMatrix) -> Tuple[int, List[SparsePoly]]:
    """
    Fraction-free elimination over F[δ].

    Returns the generic rank and the pivots met along the way. The k-th pivot is a
    nonzero k×k minor, so every δ at which the rank drops is a root of some pivot.
    """
    spec = M.field
    zero = SparsePoly.zero(spec, 1)
    a = [[M.entry(i, j) for j in range(M.cols)] for i in range(M.rows)]
    prev = SparsePoly.constant(spec, 1, 1)
    pivots: List[SparsePoly] = []
    r = 0
    for c in range(M.cols):
        if r >= M.rows:
            break
        swap = next((i for i in range(r, M.rows) if not a[i][c].is_zero()), None)
        if swap is None:
            continue
        if swap != r:
            a[r], a[swap] = a[swap], a[r]
        pivot = a[r][c]
        for i in range(r + 1, M.rows):
            for j in range(c + 1, M.cols):
                num = psub(pmul(pivot, a[i][j]), pmul(a[i][c], a[r][j]))
                a[i][j] = pdiv_exact(num, prev) if not num.is_zero() else zero
            a[i][c] = zero
        pivots.append(pivot)
        prev = pivot
        r += 1
    logger.debug(f"Bareiss on {M.rows}x{M.cols}: generic rank {r}")
    return r, pivots
