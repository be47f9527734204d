"""
Superalgebra - structure constants, graded products and identity checks.

A superalgebra is stored as a sparse table of structure constants
b_i·b_j = Σ_k c·b_k over one field, with a parity (0 even, 1 odd) per basis index.
The Jordan superidentity is verified on the Grassmann envelope by formal
coefficient expansion, so the check is exact in every characteristic.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from engine.linalg import Matrix, solve_affine
from engine.poly import SparsePoly, padd, pmul, truncate
from engine.scalars import FieldSpec, RawValue, Scalar

logger = logging.getLogger(__name__)

TableEntry = Tuple[int, int, int, RawValue]

MIN_GRASSMANN_GENERATORS = 4


class AlgebraError(ValueError):
    """Structurally invalid superalgebra data or an operation mixing algebras."""


@dataclass(frozen=True)
class Superalgebra:
    """Finite-dimensional superalgebra given by sparse structure constants."""

    field: FieldSpec
    dim: int
    parity: Tuple[int, ...]
    table: Tuple[TableEntry, ...]
    labels: Tuple[str, ...] = ()
    name: str = ""
    blocks: Tuple[Tuple[int, int], ...] = ()
    meta: Mapping = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        spec = self.field
        n = self.dim
        if n < 0:
            raise AlgebraError("negative dimension")
        parity = tuple(int(p) for p in self.parity)
        if len(parity) != n or any(p not in (0, 1) for p in parity):
            raise AlgebraError(f"parity vector must hold {n} entries from {{0, 1}}")
        labels = tuple(self.labels) if self.labels else tuple(f"b{i}" for i in range(n))
        if len(labels) != n:
            raise AlgebraError(f"expected {n} labels, got {len(labels)}")

        seen = set()
        table = []
        for entry in self.table:
            i, j, k, c = entry
            if not all(0 <= t < n for t in (i, j, k)):
                raise AlgebraError(f"index out of range in table entry {(i, j, k)}")
            if (i, j, k) in seen:
                raise AlgebraError(f"duplicate table entry for {(i, j, k)}")
            seen.add((i, j, k))
            c = spec.normalize(c)
            if c == 0:
                raise AlgebraError(f"zero coefficient stored for {(i, j, k)}")
            table.append((int(i), int(j), int(k), c))
        table.sort(key=lambda e: e[:3])

        for start, stop in self.blocks:
            if not 0 <= start < stop <= n:
                raise AlgebraError(f"bad block [{start}, {stop})")

        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "table", tuple(table))
        object.__setattr__(self, "blocks", tuple((int(a), int(b)) for a, b in self.blocks))

    @cached_property
    def products(self) -> Dict[Tuple[int, int], Tuple[Tuple[int, RawValue], ...]]:
        """(i, j) -> ((k, c), ...) for the nonzero products b_i·b_j."""
        acc: Dict[Tuple[int, int], List[Tuple[int, RawValue]]] = {}
        for i, j, k, c in self.table:
            acc.setdefault((i, j), []).append((k, c))
        return {key: tuple(v) for key, v in acc.items()}

    @cached_property
    def fingerprint(self) -> str:
        """Short content hash used as the algebra id in reports."""
        payload = json.dumps(
            {
                "field": self.field.token,
                "parity": list(self.parity),
                "table": [[i, j, k, self.field.format(c)] for i, j, k, c in self.table],
            },
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:12]

    @property
    def even_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parity) if p == 0]

    @property
    def odd_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.parity) if p == 1]

    def basis_product(self, i: int, j: int) -> Tuple[Tuple[int, RawValue], ...]:
        return self.products.get((i, j), ())

    def basis(self, i: int) -> "Element":
        return Element.basis(self, i)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AlgebraError(f"no basis element labelled '{label}' in {self.name or 'algebra'}") from None

    def describe(self) -> str:
        even = len(self.even_indices)
        return f"{self.name or 'algebra'} over {self.field.label} (dim {self.dim} = {even}|{self.dim - even})"


@dataclass(frozen=True)
class Element:
    """Coefficient vector in the basis of a superalgebra."""

    algebra: Superalgebra
    coeffs: Tuple[RawValue, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise AlgebraError(f"element has {len(self.coeffs)} coefficients, algebra has dim {self.algebra.dim}")
        spec = self.algebra.field
        object.__setattr__(self, "coeffs", tuple(spec.normalize(c) for c in self.coeffs))

    @classmethod
    def basis(cls, A: Superalgebra, i: int) -> "Element":
        spec = A.field
        return cls(A, tuple(spec.one if t == i else spec.zero for t in range(A.dim)))

    @classmethod
    def zero(cls, A: Superalgebra) -> "Element":
        return cls(A, (A.field.zero,) * A.dim)

    @classmethod
    def from_labels(cls, A: Superalgebra, terms: Mapping[str, object]) -> "Element":
        coeffs = [A.field.zero] * A.dim
        for label, c in terms.items():
            coeffs[A.index(label)] = A.field.normalize(c)
        return cls(A, tuple(coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous elements (zero counts as even), None otherwise."""
        found = {self.algebra.parity[i] for i, c in enumerate(self.coeffs) if c != 0}
        if len(found) > 1:
            return None
        return found.pop() if found else 0

    def coefficient(self, i: int) -> Scalar:
        return Scalar(self.algebra.field, self.coeffs[i])

    def __add__(self, other: "Element") -> "Element":
        _same_algebra(self.algebra, other.algebra)
        spec = self.algebra.field
        return Element(self.algebra, tuple(spec.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Element") -> "Element":
        _same_algebra(self.algebra, other.algebra)
        spec = self.algebra.field
        return Element(self.algebra, tuple(spec.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, value) -> "Element":
        spec = self.algebra.field
        c = spec.normalize(value)
        return Element(self.algebra, tuple(spec.mul(a, c) for a in self.coeffs))

    def __mul__(self, other: "Element") -> "Element":
        return mul(self.algebra, self, other)

    def __str__(self) -> str:
        spec = self.algebra.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            label = self.algebra.labels[i]
            parts.append(label if c == 1 else f"{spec.format(c)}*{label}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomMap:
    """Homogeneous linear self-map; column j of the matrix is the image of b_j."""

    algebra: Superalgebra
    parity: int
    matrix: Matrix

    def __post_init__(self):
        A = self.algebra
        M = self.matrix
        if M.rows != A.dim or M.cols != A.dim:
            raise AlgebraError(f"map matrix must be {A.dim}x{A.dim}")
        if self.parity not in (0, 1):
            raise AlgebraError(f"map parity must be 0 or 1, got {self.parity}")
        for k in range(A.dim):
            for j in range(A.dim):
                if M.entry(k, j) != 0 and A.parity[k] != A.parity[j] ^ self.parity:
                    raise AlgebraError(
                        f"entry ({k}, {j}) breaks parity {self.parity} of the map"
                    )

    @classmethod
    def from_flat(cls, A: Superalgebra, q: int, flat: Sequence[RawValue]) -> "HomMap":
        return cls(A, q, Matrix(A.field, A.dim, A.dim, tuple(flat)))

    @classmethod
    def identity(cls, A: Superalgebra) -> "HomMap":
        return cls(A, 0, Matrix.identity(A.field, A.dim))

    def image(self, j: int) -> Element:
        A = self.algebra
        return Element(A, tuple(self.matrix.entry(k, j) for k in range(A.dim)))

    def apply(self, x: Element) -> Element:
        _same_algebra(self.algebra, x.algebra)
        return Element(self.algebra, tuple(self.matrix.apply(x.coeffs)))

    def compose(self, other: "HomMap") -> "HomMap":
        """self ∘ other."""
        _same_algebra(self.algebra, other.algebra)
        A = self.algebra
        spec = A.field
        n = A.dim
        entries = []
        for k in range(n):
            for j in range(n):
                acc = spec.zero
                for t in range(n):
                    a = self.matrix.entry(k, t)
                    if a != 0:
                        b = other.matrix.entry(t, j)
                        if b != 0:
                            acc = spec.add(acc, spec.mul(a, b))
                entries.append(acc)
        return HomMap(A, self.parity ^ other.parity, Matrix(spec, n, n, tuple(entries)))

    def combine(self, other: "HomMap", coeff) -> "HomMap":
        """self + coeff·other (same parity)."""
        if self.parity != other.parity:
            raise AlgebraError("cannot add maps of different parity")
        spec = self.algebra.field
        c = spec.normalize(coeff)
        entries = tuple(
            spec.add(a, spec.mul(c, b)) for a, b in zip(self.matrix.entries, other.matrix.entries)
        )
        return HomMap(self.algebra, self.parity, Matrix(spec, self.matrix.rows, self.matrix.cols, entries))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.matrix.entries)

    @property
    def flat(self) -> Tuple[RawValue, ...]:
        return self.matrix.entries


def _same_algebra(a: Superalgebra, b: Superalgebra):
    if a is not b and a != b:
        raise AlgebraError("operands belong to different algebras")


# --- products and structural checks -----------------------------------------


def product_coeffs(A: Superalgebra, u: Sequence[RawValue], v: Sequence[RawValue]) -> List[RawValue]:
    """Raw bilinear product of two coefficient vectors."""
    spec = A.field
    out = [spec.zero] * A.dim
    for (i, j), terms in A.products.items():
        a = u[i]
        if a == 0:
            continue
        b = v[j]
        if b == 0:
            continue
        ab = spec.mul(a, b)
        for k, c in terms:
            out[k] = spec.add(out[k], spec.mul(ab, c))
    return out


def mul(A: Superalgebra, u: Element, v: Element) -> Element:
    """Bilinear extension of the structure-constant table."""
    _same_algebra(A, u.algebra)
    _same_algebra(A, v.algebra)
    return Element(A, tuple(product_coeffs(A, u.coeffs, v.coeffs)))


def validate_grading(A: Superalgebra) -> List[TableEntry]:
    """Table entries with parity[k] != parity[i] + parity[j] (mod 2)."""
    violations = [
        (i, j, k, c) for i, j, k, c in A.table if A.parity[k] != A.parity[i] ^ A.parity[j]
    ]
    if violations:
        logger.warning(f"{len(violations)} grading violations in {A.name or A.fingerprint}")
    return violations


def check_supercommutative(A: Superalgebra) -> List[Tuple[int, int]]:
    """Pairs i <= j with b_i·b_j != (-1)^{p(i)p(j)} b_j·b_i (odd squares must vanish)."""
    spec = A.field
    violations = []
    for i in range(A.dim):
        for j in range(i, A.dim):
            sign = -1 if A.parity[i] and A.parity[j] else 1
            left = dict(A.basis_product(i, j))
            right = {k: spec.mul(spec.normalize(sign), c) for k, c in A.basis_product(j, i)}
            if left != right:
                violations.append((i, j))
    if violations:
        logger.warning(f"{len(violations)} supercommutativity violations in {A.name or A.fingerprint}")
    return violations


def right_mul(A: Superalgebra, z: Element) -> HomMap:
    """R_z: y ↦ z·y."""
    _same_algebra(A, z.algebra)
    q = z.parity()
    if q is None:
        raise AlgebraError(f"right multiplication needs a homogeneous element, got {z}")
    spec = A.field
    n = A.dim
    entries = [spec.zero] * (n * n)
    for j in range(n):
        col = product_coeffs(A, z.coeffs, [spec.one if t == j else spec.zero for t in range(n)])
        for k, v in enumerate(col):
            entries[k * n + j] = v
    return HomMap(A, q, Matrix(spec, n, n, tuple(entries)))


def find_unit(A: Superalgebra) -> Optional[Element]:
    """An element u with u·b_j = b_j·u = b_j for every basis element, if one exists."""
    spec = A.field
    n = A.dim
    rows = []
    rhs = []
    for j in range(n):
        left: Dict[int, Dict[int, RawValue]] = {}
        right: Dict[int, Dict[int, RawValue]] = {}
        for i in range(n):
            for k, c in A.basis_product(i, j):
                left.setdefault(k, {})[i] = c
            for k, c in A.basis_product(j, i):
                right.setdefault(k, {})[i] = c
        for k in range(n):
            target = spec.one if k == j else spec.zero
            rows.append(left.get(k, {}))
            rhs.append(target)
            rows.append(right.get(k, {}))
            rhs.append(target)
    solution = solve_affine(spec, rows, rhs, n)
    if solution is None:
        return None
    return Element(A, tuple(solution))


# --- Grassmann algebras -------------------------------------------------------


def grassmann_sign(left: int, right: int) -> int:
    """
    Sign of ξ_I·ξ_J for generator bitmasks I and J, 0 when they share a generator.

    Reordering the concatenation costs one transposition for every pair i in I,
    j in J with i > j.
    """
    if left & right:
        return 0
    swaps = 0
    rest = left
    while rest:
        low = rest & -rest
        swaps += bin(right & (low - 1)).count("1")
        rest ^= low
    return -1 if swaps % 2 else 1


def _mask_label(mask: int) -> str:
    if not mask:
        return "1"
    bits = [str(t + 1) for t in range(mask.bit_length()) if mask >> t & 1]
    sep = "," if any(len(b) > 1 for b in bits) else ""
    return "ξ" + sep.join(bits)


def grassmann_algebra(spec: FieldSpec, N: int) -> Superalgebra:
    """Grassmann algebra on N generators; basis index = generator bitmask."""
    if N < 0:
        raise AlgebraError("number of generators must be non-negative")
    size = 1 << N
    table = []
    for a in range(size):
        for b in range(size):
            s = grassmann_sign(a, b)
            if s:
                table.append((a, b, a | b, s))
    parity = tuple(bin(m).count("1") % 2 for m in range(size))
    labels = tuple(_mask_label(m) for m in range(size))
    return Superalgebra(spec, size, parity, tuple(table), labels, name=f"G({N})")


def grassmann_envelope(A: Superalgebra, N: int) -> Superalgebra:
    """G_0⊗A_0 + G_1⊗A_1 over N generators, as a purely even algebra."""
    if N < 0:
        raise AlgebraError("number of generators must be non-negative")
    masks = range(1 << N)
    pairs = [(g, b) for b in range(A.dim) for g in masks if bin(g).count("1") % 2 == A.parity[b]]
    position = {pair: t for t, pair in enumerate(pairs)}
    spec = A.field
    acc: Dict[Tuple[int, int, int], RawValue] = {}
    for s, (g, a) in enumerate(pairs):
        for t, (h, b) in enumerate(pairs):
            sign = grassmann_sign(g, h)
            if not sign:
                continue
            for k, c in A.basis_product(a, b):
                target = position[(g | h, k)]
                key = (s, t, target)
                acc[key] = spec.add(acc.get(key, spec.zero), spec.mul(spec.normalize(sign), c))
    table = tuple((s, t, k, c) for (s, t, k), c in acc.items() if c != 0)
    labels = tuple(f"{_mask_label(g)}⊗{A.labels[b]}" for g, b in pairs)
    name = f"G{N}({A.name})" if A.name else f"G{N}"
    return Superalgebra(spec, len(pairs), (0,) * len(pairs), table, labels, name=name)


# --- Jordan superidentity ----------------------------------------------------


@dataclass(frozen=True)
class JordanFailure:
    """One instance of (x²y)x - x²(yx) with a nonzero coefficient."""

    x_indices: Tuple[int, int, int]
    y_index: int
    residue: Tuple[Tuple[int, int, RawValue], ...]  # (grassmann mask, basis index, value)

    def describe(self, A: Superalgebra) -> str:
        xs = ", ".join(A.labels[i] for i in self.x_indices)
        parts = [f"{A.field.format(c)}*{_mask_label(g)}⊗{A.labels[k]}" for g, k, c in self.residue]
        return f"x∈{{{xs}}}, y={A.labels[self.y_index]}: residue {' + '.join(parts)}"


@dataclass
class JordanReport:
    grading_violations: List[TableEntry]
    supercommutativity_violations: List[Tuple[int, int]]
    failures: List[JordanFailure]
    instances_checked: int
    generators: int

    @property
    def passed(self) -> bool:
        return not (self.grading_violations or self.supercommutativity_violations or self.failures)


EnvElement = Dict[Tuple[int, int], SparsePoly]


def _env_mul(A: Superalgebra, X: EnvElement, Y: EnvElement, cap: Tuple[int, ...]) -> EnvElement:
    """Product in G⊗A of generic envelope elements, dropping monomials above cap."""
    spec = A.field
    out: EnvElement = {}
    for (g, a), f in X.items():
        for (h, b), e in Y.items():
            terms = A.basis_product(a, b)
            if not terms:
                continue
            sign = grassmann_sign(g, h)
            if not sign:
                continue
            fe = truncate(pmul(f, e), cap)
            if fe.is_zero():
                continue
            for k, c in terms:
                key = (g | h, k)
                term = fe.scale(spec.mul(spec.normalize(sign), c))
                out[key] = padd(out[key], term) if key in out else term
    return {key: f for key, f in out.items() if not f.is_zero()}


def _generic_x(A: Superalgebra, x_indices: Tuple[int, int, int]):
    """
    Generic x for one instance: one indeterminate per distinct even index (its
    exponent in the target is the multiplicity) and one indeterminate plus its own
    Grassmann generator per odd occurrence.
    """
    spec = A.field
    slots = []
    even_vars: Dict[int, int] = {}
    exponents: List[int] = []
    generator = 0
    for b in x_indices:
        if A.parity[b] == 0:
            if b not in even_vars:
                even_vars[b] = len(exponents)
                exponents.append(0)
                slots.append((0, b, even_vars[b]))
            exponents[even_vars[b]] += 1
        else:
            exponents.append(1)
            slots.append((1 << generator, b, len(exponents) - 1))
            generator += 1
    nvars = len(exponents)
    X: EnvElement = {}
    for mask, b, var in slots:
        X[(mask, b)] = SparsePoly.variable(spec, nvars, var)
    return X, tuple(exponents)


def jordan_instance(A: Superalgebra, x_indices: Tuple[int, int, int], y_index: int,
                    generators: int = MIN_GRASSMANN_GENERATORS) -> Optional[JordanFailure]:
    """Coefficient of one instance of the Jordan identity in the envelope, or None when it vanishes."""
    X, target = _generic_x(A, x_indices)
    nvars = len(target)
    y_mask = 1 << (generators - 1) if A.parity[y_index] else 0
    Y: EnvElement = {(y_mask, y_index): SparsePoly.constant(A.field, nvars, 1)}

    x2 = _env_mul(A, X, X, target)
    left = _env_mul(A, _env_mul(A, x2, Y, target), X, target)
    right = _env_mul(A, x2, _env_mul(A, Y, X, target), target)

    spec = A.field
    residue = []
    for key in sorted(set(left) | set(right)):
        value = spec.sub(
            left[key].terms.get(target, spec.zero) if key in left else spec.zero,
            right[key].terms.get(target, spec.zero) if key in right else spec.zero,
        )
        if value != 0:
            residue.append((key[0], key[1], value))
    if residue:
        return JordanFailure(tuple(x_indices), y_index, tuple(residue))
    return None


def check_jordan_super(A: Superalgebra, generators: int = MIN_GRASSMANN_GENERATORS) -> JordanReport:
    """
    Grading, supercommutativity and the Jordan identity of the Grassmann envelope.

    The identity is cubic in x and linear in y, so every coefficient is indexed by a
    multiset of three basis indices for x and one index for y. Three x-slots plus the
    y-slot need at most four distinct generators.
    """
    if generators < MIN_GRASSMANN_GENERATORS:
        raise AlgebraError(f"the Jordan check needs at least {MIN_GRASSMANN_GENERATORS} Grassmann generators")
    grading = validate_grading(A)
    supercomm = check_supercommutative(A) if not grading else []
    failures: List[JordanFailure] = []
    checked = 0
    if not grading:
        for x_indices in combinations_with_replacement(range(A.dim), 3):
            for y in range(A.dim):
                checked += 1
                failure = jordan_instance(A, x_indices, y, generators)
                if failure:
                    failures.append(failure)
    report = JordanReport(grading, supercomm, failures, checked, generators)
    if report.passed:
        logger.info(f"Jordan check passed for {A.name or A.fingerprint} ({checked} instances)")
    else:
        logger.warning(
            f"Jordan check failed for {A.name or A.fingerprint}: {len(grading)} grading, "
            f"{len(supercomm)} supercommutativity, {len(failures)} identity failures"
        )
    return report
