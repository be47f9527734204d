"""
Scalars - exact arithmetic over GF(p) (p an odd prime) and over the rationals.

Heavy computations work on canonical raw values (int residues or Fractions) through
the FieldSpec methods; Scalar is the boxed form used at API boundaries.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from sympy import isprime

logger = logging.getLogger(__name__)

PRIME = "prime"
RATIONAL = "rational"

RawValue = Union[int, Fraction]


class FieldError(ValueError):
    """Invalid field, mismatched fields or an impossible field operation."""


@dataclass(frozen=True)
class FieldSpec:
    """A base field: GF(p) for an odd prime p, or the rational numbers."""

    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == PRIME:
            if not isinstance(self.p, int) or self.p < 2:
                raise FieldError(f"prime field needs a positive integer modulus, got {self.p!r}")
            if self.p == 2:
                raise FieldError("characteristic 2 excluded")
            if not isprime(self.p):
                raise FieldError(f"{self.p} is not prime")
        elif self.kind == RATIONAL:
            if self.p is not None:
                raise FieldError("rational field carries no modulus")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == PRIME else 0

    @property
    def label(self) -> str:
        return f"GF({self.p})" if self.is_prime else "Q"

    @property
    def token(self) -> str:
        """CLI form: 'p:N' or 'q'."""
        return f"p:{self.p}" if self.is_prime else "q"

    # --- raw arithmetic ---------------------------------------------------

    def normalize(self, value) -> RawValue:
        """Canonical representative of an int, Fraction or Scalar of this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"scalar of {value.field.label} used in {self.label}")
            return value.value
        if isinstance(value, bool):
            value = int(value)
        if self.kind == PRIME:
            if isinstance(value, int):
                return value % self.p
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise FieldError(f"{value} has no image in {self.label}")
                return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
            raise FieldError(f"cannot interpret {value!r} in {self.label}")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise FieldError(f"cannot interpret {value!r} in {self.label}")

    @property
    def zero(self) -> RawValue:
        return 0 if self.kind == PRIME else Fraction(0)

    @property
    def one(self) -> RawValue:
        return 1 if self.kind == PRIME else Fraction(1)

    def add(self, a: RawValue, b: RawValue) -> RawValue:
        if self.kind == PRIME:
            return (a + b) % self.p
        return a + b

    def sub(self, a: RawValue, b: RawValue) -> RawValue:
        if self.kind == PRIME:
            return (a - b) % self.p
        return a - b

    def mul(self, a: RawValue, b: RawValue) -> RawValue:
        if self.kind == PRIME:
            return (a * b) % self.p
        return a * b

    def neg(self, a: RawValue) -> RawValue:
        if self.kind == PRIME:
            return (-a) % self.p
        return -a

    def inv(self, a: RawValue) -> RawValue:
        if a == 0:
            raise FieldError(f"inversion of zero in {self.label}")
        if self.kind == PRIME:
            return pow(a, -1, self.p)
        return 1 / a

    def div(self, a: RawValue, b: RawValue) -> RawValue:
        return self.mul(a, self.inv(b))

    @property
    def half(self) -> RawValue:
        return self.inv(self.normalize(2))

    def elements(self) -> Iterator[RawValue]:
        """All field elements in residue order (prime fields only)."""
        if self.kind != PRIME:
            raise FieldError("the rational field cannot be enumerated")
        return iter(range(self.p))

    # --- text form ----------------------------------------------------------

    def parse(self, text: str) -> RawValue:
        """Parse 'n' or, over Q, 'n/d'."""
        raw = str(text).strip()
        try:
            if self.kind == PRIME:
                if "/" in raw:
                    raise FieldError(
                        f"'{raw}' is not an element of {self.label}: write residues as integers"
                    )
                return int(raw) % self.p
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as e:
            if isinstance(e, FieldError):
                raise
            raise FieldError(f"cannot parse '{raw}' as a scalar of {self.label}") from e

    def format(self, value: RawValue) -> str:
        if self.kind == PRIME:
            return str(value)
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def to_json(self) -> dict:
        if self.kind == PRIME:
            return {"type": PRIME, "p": self.p}
        return {"type": RATIONAL}

    @classmethod
    def from_json(cls, doc: dict) -> "FieldSpec":
        kind = doc.get("type")
        if kind == PRIME:
            return cls(PRIME, doc.get("p"))
        return cls(kind)

    @classmethod
    def from_token(cls, token: str) -> "FieldSpec":
        """Parse the CLI form 'q' or 'p:N'."""
        raw = token.strip().lower()
        if raw in ("q", "rational"):
            return cls(RATIONAL)
        if raw.startswith("p:"):
            try:
                return cls(PRIME, int(raw[2:]))
            except ValueError as e:
                raise FieldError(f"bad field token '{token}'") from e
        raise FieldError(f"bad field token '{token}' (expected 'q' or 'p:N')")


@dataclass(frozen=True)
class Scalar:
    """An element of a FieldSpec in canonical form."""

    field: FieldSpec
    value: RawValue

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.normalize(self.value))

    def _coerce(self, other) -> RawValue:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mismatched fields {self.field.label} and {other.field.label}")
            return other.value
        return self.field.normalize(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._coerce(other)))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return self.field.format(self.value)


def field_new(kind: str, p: Optional[int] = None) -> FieldSpec:
    """Validated FieldSpec; rejects p = 2 and composite moduli."""
    spec = FieldSpec(kind, p)
    logger.debug(f"Field {spec.label} created")
    return spec


def _check_same(a: Scalar, b: Scalar):
    if a.field != b.field:
        raise FieldError(f"mismatched fields {a.field.label} and {b.field.label}")


def add(a: Scalar, b: Scalar) -> Scalar:
    _check_same(a, b)
    return a + b


def sub(a: Scalar, b: Scalar) -> Scalar:
    _check_same(a, b)
    return a - b


def mul(a: Scalar, b: Scalar) -> Scalar:
    _check_same(a, b)
    return a * b


def inv(a: Scalar) -> Scalar:
    return a.inverse()


def one_half(spec: FieldSpec) -> Scalar:
    """The inverse of 2, the distinguished value of δ."""
    return Scalar(spec, spec.half)


def parse_scalar(spec: FieldSpec, text: str) -> Scalar:
    return Scalar(spec, spec.parse(text))
