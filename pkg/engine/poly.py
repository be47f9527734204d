"""
Sparse multivariate polynomials with exact coefficients.

Used by the Jordan-superidentity checker (formal coefficient expansion) and by the
parametric δ-scan (univariate pivots, exact division, rational roots).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import divisors

from engine.scalars import FieldError, FieldSpec, RawValue, Scalar

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


@dataclass(frozen=True)
class SparsePoly:
    """Polynomial as a map exponent-vector -> nonzero coefficient. Treated as immutable."""

    field: FieldSpec
    nvars: int
    terms: Dict[Exponent, RawValue] = field(default_factory=dict)

    # --- constructors -------------------------------------------------------

    @classmethod
    def from_terms(cls, spec: FieldSpec, nvars: int, terms) -> "SparsePoly":
        """Build from (exponent, coefficient) pairs or a dict; merges and drops zeros."""
        items = terms.items() if isinstance(terms, dict) else terms
        acc: Dict[Exponent, RawValue] = {}
        for exp, coeff in items:
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have {nvars} entries")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = spec.normalize(coeff)
            if exp in acc:
                c = spec.add(acc[exp], c)
            acc[exp] = c
        return cls(spec, nvars, {e: c for e, c in acc.items() if c != 0})

    @classmethod
    def zero(cls, spec: FieldSpec, nvars: int) -> "SparsePoly":
        return cls(spec, nvars, {})

    @classmethod
    def constant(cls, spec: FieldSpec, nvars: int, value) -> "SparsePoly":
        return cls.from_terms(spec, nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, spec: FieldSpec, nvars: int, index: int, power: int = 1) -> "SparsePoly":
        exp = [0] * nvars
        exp[index] = power
        return cls(spec, nvars, {tuple(exp): spec.one})

    # --- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: Sequence[int]) -> Scalar:
        return Scalar(self.field, self.terms.get(tuple(exp), self.field.zero))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def evaluate(self, point: Sequence) -> RawValue:
        spec = self.field
        values = [spec.normalize(v) for v in point]
        total = spec.zero
        for exp, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exp):
                if e:
                    term = spec.mul(term, _raw_pow(spec, v, e))
            total = spec.add(total, term)
        return total

    def sorted_terms(self) -> List[Tuple[Exponent, RawValue]]:
        """Terms in descending lexicographic exponent order."""
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    # --- arithmetic ---------------------------------------------------------

    def _check(self, other: "SparsePoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")
        if self.field != other.field:
            raise FieldError(f"mismatched fields {self.field.label} and {other.field.label}")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        return padd(self, other)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return psub(self, other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        return pmul(self, other)

    def __neg__(self) -> "SparsePoly":
        spec = self.field
        return SparsePoly(spec, self.nvars, {e: spec.neg(c) for e, c in self.terms.items()})

    def scale(self, value) -> "SparsePoly":
        spec = self.field
        c = spec.normalize(value)
        if c == 0:
            return SparsePoly.zero(spec, self.nvars)
        return SparsePoly(spec, self.nvars, {e: spec.mul(v, c) for e, v in self.terms.items()})

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        """Text form such as 'δ^2 - 1'."""
        return render(self, names)


def _raw_pow(spec: FieldSpec, value: RawValue, power: int) -> RawValue:
    result = spec.one
    for _ in range(power):
        result = spec.mul(result, value)
    return result


def padd(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    f._check(g)
    spec = f.field
    terms = dict(f.terms)
    for exp, coeff in g.terms.items():
        c = spec.add(terms.get(exp, spec.zero), coeff)
        if c == 0:
            terms.pop(exp, None)
        else:
            terms[exp] = c
    return SparsePoly(spec, f.nvars, terms)


def psub(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    return padd(f, -g)


def pmul(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    f._check(g)
    spec = f.field
    terms: Dict[Exponent, RawValue] = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            exp = tuple(a + b for a, b in zip(e1, e2))
            terms[exp] = spec.add(terms.get(exp, spec.zero), spec.mul(c1, c2))
    return SparsePoly(spec, f.nvars, {e: c for e, c in terms.items() if c != 0})


def truncate(f: SparsePoly, cap: Exponent) -> SparsePoly:
    """Drop every term whose exponent exceeds cap in some variable."""
    return SparsePoly(
        f.field,
        f.nvars,
        {e: c for e, c in f.terms.items() if all(a <= b for a, b in zip(e, cap))},
    )


def is_zero(f: SparsePoly) -> bool:
    return f.is_zero()


# --- univariate helpers (parametric scan) -----------------------------------


def _require_univariate(f: SparsePoly):
    if f.nvars != 1:
        raise ValueError("univariate polynomial expected")


def leading(f: SparsePoly) -> Tuple[int, RawValue]:
    _require_univariate(f)
    if f.is_zero():
        raise ZeroDivisionError("zero polynomial has no leading term")
    exp = max(f.terms)
    return exp[0], f.terms[exp]


def pdivmod(f: SparsePoly, g: SparsePoly) -> Tuple[SparsePoly, SparsePoly]:
    """Univariate division with remainder over the base field."""
    _require_univariate(f)
    f._check(g)
    spec = f.field
    g_deg, g_lead = leading(g)
    g_lead_inv = spec.inv(g_lead)
    quotient: Dict[Exponent, RawValue] = {}
    remainder = f
    while not remainder.is_zero():
        r_deg, r_lead = leading(remainder)
        if r_deg < g_deg:
            break
        shift = r_deg - g_deg
        factor = spec.mul(r_lead, g_lead_inv)
        quotient[(shift,)] = factor
        step = SparsePoly(spec, 1, {(e[0] + shift,): spec.mul(c, factor) for e, c in g.terms.items()})
        remainder = psub(remainder, step)
    return SparsePoly(spec, 1, quotient), remainder


def pdiv_exact(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    quotient, remainder = pdivmod(f, g)
    if not remainder.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return quotient


def rational_roots(f: SparsePoly) -> Tuple[List[Fraction], bool]:
    """
    Rational roots of a univariate polynomial over Q (rational root theorem).

    Returns:
        (sorted distinct roots, True when roots outside Q remain after dividing
        out the rational ones)
    """
    _require_univariate(f)
    if f.field.is_prime:
        raise FieldError("rational roots are computed over Q only")
    if f.is_zero():
        raise ValueError("the zero polynomial has every value as a root")

    den = 1
    for c in f.terms.values():
        den = lcm(den, Fraction(c).denominator)
    ints = {e[0]: int(Fraction(c) * den) for e, c in f.terms.items()}
    content = 0
    for v in ints.values():
        content = gcd(content, v)
    ints = {e: v // content for e, v in ints.items()}

    roots: List[Fraction] = []
    low = min(ints)
    if low > 0:
        roots.append(Fraction(0))
        ints = {e - low: v for e, v in ints.items()}
    degree = max(ints)
    reduced = SparsePoly.from_terms(f.field, 1, {(e,): v for e, v in ints.items()})

    if degree > 0:
        a0 = abs(ints[0])
        an = abs(ints[degree])
        for num in divisors(a0):
            for den_ in divisors(an):
                for candidate in (Fraction(num, den_), Fraction(-num, den_)):
                    if candidate not in roots and reduced.evaluate([candidate]) == 0:
                        roots.append(candidate)

    remaining = reduced
    for root in roots:
        if root == 0:
            continue
        linear = SparsePoly.from_terms(f.field, 1, {(1,): 1, (0,): -root})
        while True:
            quotient, remainder = pdivmod(remaining, linear)
            if not remainder.is_zero():
                break
            remaining = quotient
    return sorted(roots), remaining.degree() > 0


# --- rendering --------------------------------------------------------------


def _monomial(exp: Exponent, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render(f: SparsePoly, names: Optional[Sequence[str]] = None) -> str:
    names = list(names) if names else [f"x{i + 1}" for i in range(f.nvars)]
    if f.is_zero():
        return "0"
    spec = f.field
    pieces: List[str] = []
    for exp, coeff in f.sorted_terms():
        negative = not spec.is_prime and coeff < 0
        magnitude = -coeff if negative else coeff
        mono = _monomial(exp, names)
        if not mono:
            body = spec.format(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{spec.format(magnitude)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


def affine(spec: FieldSpec, constant: RawValue, slope: RawValue) -> SparsePoly:
    """constant + slope·t as a univariate polynomial."""
    return SparsePoly.from_terms(spec, 1, {(0,): constant, (1,): slope})

