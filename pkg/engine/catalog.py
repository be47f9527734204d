"""
Catalog - constructors for the named Jordan superalgebras and their combinators.

K3 (Kaplansky), K9 (Kac, characteristic 3), truncated polynomial algebras B(m),
the vector-type superalgebras J(B, D) and V_1/2(Z, D), direct sums and unital hulls.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from engine.linalg import Matrix, RowReducer, kernel
from engine.scalars import PRIME, FieldError, FieldSpec, RawValue
from engine.superalgebra import (
    Element,
    HomMap,
    Superalgebra,
    check_jordan_super,
    product_coeffs,
)

logger = logging.getLogger(__name__)


class CatalogError(ValueError):
    """Unknown catalog entry, bad parameters or a construction that failed validation."""


# --- K3 and K9 ---------------------------------------------------------------


def build_k3(spec: FieldSpec) -> Superalgebra:
    """Kaplansky superalgebra: Fe + (Fz + Fw), e² = e, ez = ½z, ew = ½w, zw = e."""
    half = spec.half
    table = (
        (0, 0, 0, 1),
        (0, 1, 1, half), (1, 0, 1, half),
        (0, 2, 2, half), (2, 0, 2, half),
        (1, 2, 0, 1), (2, 1, 0, -1),
    )
    A = Superalgebra(spec, 3, (0, 1, 1), table, ("e", "z", "w"), name="K3", meta={"catalog": "k3"})
    _require_jordan(A)
    return A


K9_LABELS = ("e", "uz", "uw", "vz", "vw", "z", "w", "u", "v")
K9_PARITY = (0, 0, 0, 0, 0, 1, 1, 1, 1)

# Signed substitutions label -> (label, sign); each σ satisfies σ(x)·σ(y) = σ(x·y).
SKEW_ZW = {
    "e": ("e", 1), "uz": ("uw", 1), "uw": ("uz", -1), "vz": ("vw", 1), "vw": ("vz", -1),
    "z": ("w", 1), "w": ("z", -1), "u": ("u", 1), "v": ("v", 1),
}
SKEW_UV = {
    "e": ("e", 1), "uz": ("vz", 1), "uw": ("vw", 1), "vz": ("uz", -1), "vw": ("uw", -1),
    "u": ("v", 1), "v": ("u", -1), "z": ("z", 1), "w": ("w", 1),
}
SWAP_ZU_WV = {
    "e": ("e", 1), "uz": ("uz", -1), "uw": ("vz", -1), "vz": ("uw", -1), "vw": ("vw", -1),
    "z": ("u", 1), "u": ("z", 1), "w": ("v", 1), "v": ("w", 1),
}
K9_SUBSTITUTIONS = (SKEW_ZW, SKEW_UV, SWAP_ZU_WV)


def _k9_seed(half: RawValue) -> Dict[Tuple[str, str], Dict[str, int]]:
    seed: Dict[Tuple[str, str], Dict[str, int]] = {}
    for x in K9_LABELS[:5]:
        seed[("e", x)] = {x: 1}
    for m in K9_LABELS[5:]:
        seed[("e", m)] = {m: half}
    seed[("u", "z")] = {"uz": 1}
    seed[("u", "w")] = {"uw": 1}
    seed[("v", "z")] = {"vz": 1}
    seed[("v", "w")] = {"vw": 1}
    seed[("z", "w")] = {"e": 1}
    seed[("uz", "w")] = {"u": -1}
    seed[("vz", "w")] = {"v": -1}
    seed[("uz", "vw")] = {"e": 2}
    return seed


def _complete_k9(spec: FieldSpec) -> Dict[Tuple[str, str], Dict[str, RawValue]]:
    """Close the seeded products under supercommutativity and the signed substitutions."""
    parity = dict(zip(K9_LABELS, K9_PARITY))
    known: Dict[Tuple[str, str], Dict[str, RawValue]] = {}
    pending = []
    for key, value in _k9_seed(spec.half).items():
        pending.append((key, {k: spec.normalize(c) for k, c in value.items()}))

    while pending:
        (x, y), value = pending.pop()
        value = {k: c for k, c in value.items() if c != 0}
        if (x, y) in known:
            if known[(x, y)] != value:
                raise CatalogError(
                    f"K9 completion is contradictory at {x}·{y}: {known[(x, y)]} vs {value}"
                )
            continue
        known[(x, y)] = value

        sign = -1 if parity[x] and parity[y] else 1
        pending.append(((y, x), {k: spec.mul(spec.normalize(sign), c) for k, c in value.items()}))
        for sigma in K9_SUBSTITUTIONS:
            (sx, ex), (sy, ey) = sigma[x], sigma[y]
            image = {}
            for k, c in value.items():
                sk, ek = sigma[k]
                image[sk] = spec.mul(c, spec.normalize(ex * ey * ek))
            pending.append(((sx, sy), image))
    return known


def build_k9(spec: Optional[FieldSpec] = None) -> Superalgebra:
    """Kac superalgebra over GF(3); products not fixed by the completion are zero."""
    if spec is None:
        spec = FieldSpec(PRIME, 3)
    if spec.characteristic != 3:
        raise CatalogError(f"K9 requires characteristic 3, got {spec.label}")
    known = _complete_k9(spec)
    index = {label: t for t, label in enumerate(K9_LABELS)}
    table = tuple(
        (index[x], index[y], index[k], c)
        for (x, y), value in known.items()
        for k, c in value.items()
    )
    A = Superalgebra(spec, 9, K9_PARITY, table, K9_LABELS, name="K9", meta={"catalog": "k9"})
    logger.info(f"K9 completed with {len(table)} nonzero structure constants")
    _require_jordan(A)
    return A


def _require_jordan(A: Superalgebra):
    report = check_jordan_super(A)
    if not report.passed:
        raise CatalogError(f"{A.name} failed its Jordan superidentity check")


# --- truncated polynomials and derivations -----------------------------------


def _variable_names(m: int) -> List[str]:
    return ["a"] if m == 1 else [f"a{i + 1}" for i in range(m)]


def _monomial_label(exp: Tuple[int, ...], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class TruncatedPolyAlgebra:
    """B(m) = F[a_1..a_m | a_i^p = 0], monomials in lexicographic exponent order."""

    algebra: Superalgebra
    m: int
    p: int
    exponents: Tuple[Tuple[int, ...], ...]

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def names(self) -> List[str]:
        return _variable_names(self.m)

    def index(self, exp: Sequence[int]) -> int:
        return self.exponents.index(tuple(exp))

    def monomial(self, exp: Sequence[int]) -> Element:
        return Element.basis(self.algebra, self.index(exp))

    def unit(self) -> Element:
        return Element.basis(self.algebra, 0)

    def variable(self, i: int) -> Element:
        exp = [0] * self.m
        exp[i] = 1
        return self.monomial(exp)


def build_b(spec: FieldSpec, m: int) -> TruncatedPolyAlgebra:
    if not spec.is_prime:
        raise CatalogError("B(m) needs a prime field: truncation uses the characteristic")
    if m < 1:
        raise CatalogError(f"B(m) needs m >= 1, got {m}")
    p = spec.p
    exponents = tuple(product(range(p), repeat=m))
    index = {e: t for t, e in enumerate(exponents)}
    table = []
    for s, e1 in enumerate(exponents):
        for t, e2 in enumerate(exponents):
            total = tuple(a + b for a, b in zip(e1, e2))
            if all(v < p for v in total):
                table.append((s, t, index[total], 1))
    names = _variable_names(m)
    labels = tuple(_monomial_label(e, names) for e in exponents)
    A = Superalgebra(
        spec, len(exponents), (0,) * len(exponents), tuple(table), labels,
        name=f"B({m})", meta={"catalog": "b", "p": p, "m": m},
    )
    return TruncatedPolyAlgebra(A, m, p, exponents)


@dataclass(frozen=True)
class DerivationSpec:
    """D = Σ f_i ∂/∂a_i with coefficient polynomials f_i in B(m)."""

    coefficients: Tuple[Element, ...]

    def texts(self) -> List[str]:
        return [str(f) for f in self.coefficients]


def default_derivation(B: TruncatedPolyAlgebra) -> DerivationSpec:
    """∂/∂a_1."""
    coeffs = [B.unit()] + [Element.zero(B.algebra) for _ in range(B.m - 1)]
    return DerivationSpec(tuple(coeffs))


def parse_derivation(B: TruncatedPolyAlgebra, texts: Sequence[str]) -> DerivationSpec:
    """Coefficient polynomials in a1..am (or a when m = 1), reduced into B(m)."""
    if len(texts) != B.m:
        raise CatalogError(f"derivation of B({B.m}) needs {B.m} coefficient polynomials, got {len(texts)}")
    names = B.names
    symbols = [Symbol(n) for n in names]
    local = {n: s for n, s in zip(names, symbols)}
    if B.m == 1:
        local["a1"] = symbols[0]
    spec = B.field
    transformations = standard_transformations + (convert_xor,)
    coeffs = []
    for text in texts:
        try:
            expr = parse_expr(str(text), local_dict=local, transformations=transformations)
            poly = Poly(expr, *symbols)
        except Exception as e:
            raise CatalogError(f"cannot read derivation coefficient '{text}': {e}") from e
        values = [spec.zero] * B.dim
        for exp, c in poly.terms():
            if any(e >= B.p for e in exp):
                continue
            try:
                value = spec.normalize(Fraction(int(c.p), int(c.q)))
            except (AttributeError, TypeError) as e:
                raise CatalogError(f"non-rational coefficient {c} in '{text}'") from e
            except FieldError as e:
                raise CatalogError(str(e)) from e
            t = B.index(exp)
            values[t] = spec.add(values[t], value)
        coeffs.append(Element(B.algebra, tuple(values)))
    return DerivationSpec(tuple(coeffs))


def derivation_from_spec(B: TruncatedPolyAlgebra, derivation: DerivationSpec) -> HomMap:
    """Even map a^e ↦ Σ_i e_i f_i a^(e - ε_i), checked against the Leibniz rule."""
    if len(derivation.coefficients) != B.m:
        raise CatalogError(f"derivation of B({B.m}) needs {B.m} coefficients")
    spec = B.field
    n = B.dim
    A = B.algebra
    entries = [spec.zero] * (n * n)
    for j, exp in enumerate(B.exponents):
        column = [spec.zero] * n
        for i, e in enumerate(exp):
            if e == 0:
                continue
            lowered = list(exp)
            lowered[i] -= 1
            mono = B.monomial(lowered).scale(e)
            term = product_coeffs(A, derivation.coefficients[i].coeffs, mono.coeffs)
            column = [spec.add(a, b) for a, b in zip(column, term)]
        for k, v in enumerate(column):
            entries[k * n + j] = v
    D = HomMap(A, 0, Matrix(spec, n, n, tuple(entries)))
    violations = leibniz_violations(A, D)
    if violations:
        raise CatalogError(f"derivation breaks the Leibniz rule on {len(violations)} basis pairs")
    return D


def leibniz_violations(A: Superalgebra, D: HomMap) -> List[Tuple[int, int]]:
    """Basis pairs with D(b_i b_j) != D(b_i) b_j + b_i D(b_j) (even D on an even algebra)."""
    spec = A.field
    out = []
    for i in range(A.dim):
        Di = D.image(i).coeffs
        for j in range(A.dim):
            Dj = D.image(j).coeffs
            bi = Element.basis(A, i).coeffs
            bj = Element.basis(A, j).coeffs
            lhs = D.matrix.apply(product_coeffs(A, bi, bj))
            rhs = [spec.add(x, y) for x, y in zip(product_coeffs(A, Di, bj), product_coeffs(A, bi, Dj))]
            if lhs != rhs:
                out.append((i, j))
    return out


# --- vector-type superalgebras -----------------------------------------------


def _vector_type_table(B: TruncatedPolyAlgebra, D: HomMap, mixed: RawValue) -> Tuple:
    """Table of Z + Zx; `mixed` is the coefficient of a·bx and bx·a."""
    if D.is_zero():
        raise CatalogError("the derivation must be nonzero")
    spec = B.field
    n = B.dim
    A = B.algebra
    acc: Dict[Tuple[int, int, int], RawValue] = {}

    def put(i, j, k, c):
        key = (i, j, k)
        acc[key] = spec.add(acc.get(key, spec.zero), c)

    for (i, j), terms in A.products.items():
        for k, c in terms:
            put(i, j, k, c)
            put(i, n + j, n + k, spec.mul(mixed, c))
            put(n + j, i, n + k, spec.mul(mixed, c))
    for i in range(n):
        Di = D.image(i).coeffs
        bi = Element.basis(A, i).coeffs
        for j in range(n):
            Dj = D.image(j).coeffs
            bj = Element.basis(A, j).coeffs
            left = product_coeffs(A, Di, bj)
            right = product_coeffs(A, bi, Dj)
            for k in range(n):
                c = spec.sub(left[k], right[k])
                if c != 0:
                    put(n + i, n + j, k, c)
    return tuple((i, j, k, c) for (i, j, k), c in acc.items() if c != 0)


def _vector_type_labels(B: TruncatedPolyAlgebra) -> Tuple[str, ...]:
    base = B.algebra.labels
    return base + tuple("x" if label == "1" else f"{label}·x" for label in base)


def _vector_meta(kind: str, B: TruncatedPolyAlgebra, derivation: DerivationSpec) -> dict:
    return {"catalog": kind, "p": B.p, "m": B.m, "derivation": derivation.texts()}


def build_j_vector_type(B: TruncatedPolyAlgebra, derivation: DerivationSpec) -> Superalgebra:
    """J(B, D): a·b = ab, a·bx = ax·b = (ab)x, ax·bx = D(a)b - aD(b)."""
    D = derivation_from_spec(B, derivation)
    table = _vector_type_table(B, D, B.field.one)
    n = B.dim
    A = Superalgebra(
        B.field, 2 * n, (0,) * n + (1,) * n, table, _vector_type_labels(B),
        name=f"J(B({B.m}),D)", meta=_vector_meta("j-vector", B, derivation),
    )
    _require_jordan(A)
    return A


def build_v_half(B: TruncatedPolyAlgebra, derivation: DerivationSpec) -> Superalgebra:
    """V_1/2(Z, D): a·b = ab, a·bx = bx·a = ½(ab)x, ax·bx = D(a)b - aD(b)."""
    D = derivation_from_spec(B, derivation)
    table = _vector_type_table(B, D, B.field.half)
    n = B.dim
    A = Superalgebra(
        B.field, 2 * n, (0,) * n + (1,) * n, table, _vector_type_labels(B),
        name=f"V1/2(B({B.m}),D)", meta=_vector_meta("v-half", B, derivation),
    )
    _require_jordan(A)
    return A


def split_vector_type(A: Superalgebra) -> Tuple[TruncatedPolyAlgebra, DerivationSpec, HomMap]:
    """Recover (Z, D) from the provenance of a vector-type algebra."""
    meta = A.meta or {}
    if meta.get("catalog") not in ("j-vector", "v-half"):
        raise CatalogError(f"{A.name or 'algebra'} carries no vector-type provenance")
    try:
        B = build_b(A.field, int(meta["m"]))
        derivation = parse_derivation(B, meta["derivation"])
    except KeyError as e:
        raise CatalogError(f"{A.name or 'algebra'} provenance is missing {e}") from e
    return B, derivation, derivation_from_spec(B, derivation)


def validate_v_conditions(B: TruncatedPolyAlgebra, derivation: DerivationSpec) -> dict:
    """
    Audit the two conditions on (Z, D).

    The kernel condition is checked exactly. The ideal condition is a necessary
    audit: the D-invariant ideal generated by each non-unit monomial must be Z.
    """
    D = derivation_from_spec(B, derivation)
    if D.is_zero():
        raise CatalogError("the derivation must be nonzero")
    spec = B.field
    A = B.algebra
    n = B.dim
    ker = kernel(D.matrix)
    unit = tuple(spec.one if t == 0 else spec.zero for t in range(n))
    kernel_ok = ker.dim == 1 and ker.vectors[0] == unit

    closures = {}
    for t in range(1, n):
        reducer = RowReducer(spec, n)
        frontier = [Element.basis(A, t).coeffs]
        reducer.insert({t: spec.one})
        while frontier:
            vec = frontier.pop()
            images = [D.matrix.apply(vec)]
            images += [product_coeffs(A, vec, Element.basis(A, s).coeffs) for s in range(n)]
            for img in images:
                if reducer.insert({i: v for i, v in enumerate(img) if v != 0}):
                    frontier.append(img)
        closures[A.labels[t]] = reducer.rank == n
    report = {
        "kernel_dim": ker.dim,
        "kernel_is_unit_span": kernel_ok,
        "ideal_closures": closures,
        "ideal_audit_passed": all(closures.values()),
        "ideal_audit_note": "necessary condition only",
    }
    logger.info(f"V conditions for B({B.m}): kernel {'ok' if kernel_ok else 'fails'}, "
                f"ideal audit {'ok' if report['ideal_audit_passed'] else 'fails'}")
    return report


# --- combinators ---------------------------------------------------------------


def _summand_blocks(A: Superalgebra, offset: int) -> List[Tuple[int, int]]:
    blocks = A.blocks or ((0, A.dim),)
    return [(a + offset, b + offset) for a, b in blocks]


def direct_sum(A: Superalgebra, B: Superalgebra) -> Superalgebra:
    """Block-diagonal sum; cross products vanish. Clashing labels of B get primes."""
    if A.field != B.field:
        raise FieldError(f"cannot sum algebras over {A.field.label} and {B.field.label}")
    n = A.dim
    table = A.table + tuple((i + n, j + n, k + n, c) for i, j, k, c in B.table)
    used = set(A.labels)
    labels = list(A.labels)
    for label in B.labels:
        while label in used:
            label += "'"
        used.add(label)
        labels.append(label)
    S = Superalgebra(
        A.field, n + B.dim, A.parity + B.parity, table, tuple(labels),
        name=f"{A.name or 'A'}⊕{B.name or 'B'}",
        blocks=tuple(_summand_blocks(A, 0) + _summand_blocks(B, n)),
        meta={"catalog": "sum", "parts": [dict(A.meta or {}), dict(B.meta or {})]},
    )
    _require_jordan(S)
    return S


def unital_hull(A: Superalgebra) -> Superalgebra:
    """A + F·1 with the adjoined even unit as the last basis element."""
    n = A.dim
    table = list(A.table)
    for j in range(n + 1):
        table.append((n, j, j, 1))
        if j != n:
            table.append((j, n, j, 1))
    label = "1"
    while label in A.labels:
        label += "'"
    H = Superalgebra(
        A.field, n + 1, A.parity + (0,), tuple(table), A.labels + (label,),
        name=f"({A.name or 'A'})+F1", blocks=A.blocks,
        meta={"catalog": "hull", "base": dict(A.meta or {})},
    )
    _require_jordan(H)
    return H


# --- CLI entry -----------------------------------------------------------------

CATALOG_NAMES = ("k3", "k9", "b", "j-vector", "v-half")


def build_catalog(name: str, spec: FieldSpec, m: int = 1, derivation: Optional[Sequence[str]] = None) -> Superalgebra:
    """Build a named catalog algebra with the CLI's parameters."""
    key = name.lower()
    if key == "k3":
        return build_k3(spec)
    if key == "k9":
        return build_k9(spec)
    if key not in CATALOG_NAMES:
        raise CatalogError(f"unknown catalog algebra '{name}' (expected one of {', '.join(CATALOG_NAMES)})")
    B = build_b(spec, m)
    if key == "b":
        return B.algebra
    spec_d = parse_derivation(B, derivation) if derivation else default_derivation(B)
    if key == "j-vector":
        return build_j_vector_type(B, spec_d)
    return build_v_half(B, spec_d)
