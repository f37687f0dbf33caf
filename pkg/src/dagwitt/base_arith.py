"""Scalars of Z/p^m with tracked precision, and the global truncation policy."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAUnit, NotDivisible, PrecisionExhausted


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def valuation(n, p: int) -> int | float:
    """p-adic valuation of an integer or Fraction; ``inf`` for zero."""
    if isinstance(n, Fraction):
        if n == 0:
            return float("inf")
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    if n == 0:
        return float("inf")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kappa_for(p: int, d: int) -> int:
    """floor(log_p d), computed without floating point."""
    k = 0
    while p ** (k + 1) <= d:
        k += 1
    return k


@dataclass(frozen=True)
class GlobalParams:
    p: int
    N: int
    D: int = 6
    d: int = 1

    def __post_init__(self):
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.D < 1:
            raise ValueError("D must be >= 1")
        if not 1 <= self.d <= 3:
            raise ValueError("d must lie in 1..3")

    @property
    def kappa(self) -> int:
        return kappa_for(self.p, self.d)

    @property
    def reserve(self) -> int:
        # extra digits carried through ghost-equation solving
        return self.N


class PAdicScalar:
    """An integer known modulo p^precision.

    A precision-0 scalar carries no information and compares equal to anything.
    """

    __slots__ = ("p", "residue", "precision")

    def __init__(self, residue: int, p: int, precision: int):
        if precision < 0:
            raise PrecisionExhausted("negative precision")
        self.p = p
        self.precision = precision
        self.residue = residue % (p ** precision)

    @classmethod
    def from_fraction(cls, q: Fraction, p: int, precision: int) -> "PAdicScalar":
        q = Fraction(q)
        if q.denominator % p == 0:
            raise NotDivisible(f"{q} is not p-integral")
        m = p ** precision
        return cls(q.numerator * pow(q.denominator, -1, m) if m > 1 else 0, p, precision)

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    def valuation(self) -> int:
        """Valuation capped at the known precision."""
        v = valuation(self.residue, self.p)
        return self.precision if v == float("inf") else min(v, self.precision)

    def _check(self, other: "PAdicScalar"):
        if self.p != other.p:
            raise ValueError("prime mismatch")

    def _coerce(self, other):
        if isinstance(other, int):
            return PAdicScalar(other, self.p, self.precision)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        m = min(self.precision, other.precision)
        return PAdicScalar(self.residue + other.residue, self.p, m)

    __radd__ = __add__

    def __neg__(self):
        return PAdicScalar(-self.residue, self.p, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        m = min(self.precision, other.precision)
        return PAdicScalar(self.residue * other.residue, self.p, m)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = PAdicScalar(other, self.p, self.precision)
        if not isinstance(other, PAdicScalar):
            return NotImplemented
        m = min(self.precision, other.precision)
        return (self.residue - other.residue) % (self.p ** m) == 0

    def __hash__(self):
        # equality is not transitive across precisions; hash only the prime
        return hash(self.p)

    def __repr__(self):
        return f"{self.residue} mod {self.p}^{self.precision}"


def scalar_arith(a: PAdicScalar, b: PAdicScalar, op: str) -> PAdicScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def divide_exact_p(a: PAdicScalar, j: int) -> PAdicScalar:
    """Return a / p^j, losing j digits of precision."""
    if j == 0:
        return a
    if a.precision - j <= 0:
        raise PrecisionExhausted(f"cannot divide {a} by {a.p}^{j}")
    if a.residue % (a.p ** j):
        raise NotDivisible(f"{a} is not divisible by {a.p}^{j}")
    return PAdicScalar(a.residue // a.p ** j, a.p, a.precision - j)


def invert_unit(a: PAdicScalar) -> PAdicScalar:
    if a.residue % a.p == 0:
        raise NotAUnit(f"{a} is not a unit")
    return PAdicScalar(pow(a.residue, -1, a.modulus), a.p, a.precision)
