"""Exact arithmetic in Q and Q(sqrt D)."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from ..gl2core import is_prime


def squarefree_part(n: int) -> int:
    if n == 0:
        raise ValueError("0 has no squarefree part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
        if n % k == 0:
            out *= k
            n //= k
        k += 1
    return sign * out * n


def is_squarefree(n: int) -> bool:
    return n != 0 and squarefree_part(n) == n


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def square_class(x: Fraction) -> int:
    """The squarefree integer D with x in D * (Q^*)^2."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no square class")
    return squarefree_part(x.numerator * x.denominator)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class QuadFieldElem:
    """a + b sqrt(D) with a, b rational; D = 1 stands for Q itself (then b = 0)."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D: int = 1):
        a, b = Fraction(a), Fraction(b)
        if D == 1:
            if b != 0:
                raise ValueError("rational elements carry b = 0")
        elif not is_squarefree(D) or D == 0:
            raise ValueError(f"D = {D} is not a squarefree integer != 0, 1")
        self.a, self.b, self.D = a, b, D

    @classmethod
    def rational(cls, x) -> "QuadFieldElem":
        return cls(Fraction(x), 0, 1)

    def is_rational(self) -> bool:
        return self.b == 0

    def in_field(self, D: int) -> "QuadFieldElem":
        if self.D == D:
            return self
        if self.b != 0:
            raise ValueError(f"element of Q(sqrt {self.D}) is not in Q(sqrt {D})")
        return QuadFieldElem(self.a, 0, D)

    def _coerce(self, other):
        if isinstance(other, QuadFieldElem):
            if other.D == self.D:
                return self, other
            if other.b == 0 and other.D != self.D:
                return self, QuadFieldElem(other.a, 0, self.D)
            if self.b == 0:
                return QuadFieldElem(self.a, 0, other.D), other
            raise ValueError(f"mixing Q(sqrt {self.D}) and Q(sqrt {other.D})")
        if isinstance(other, (int, Fraction)):
            return self, QuadFieldElem(other, 0, self.D)
        return NotImplemented, NotImplemented

    def __add__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        return QuadFieldElem(x.a + y.a, x.b + y.b, x.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(-self.a, -self.b, self.D)

    def __sub__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        return QuadFieldElem(x.a - y.a, x.b - y.b, x.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        D = x.D
        return QuadFieldElem(x.a * y.a + D * x.b * y.b, x.a * y.b + x.b * y.a, D)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadFieldElem":
        return QuadFieldElem(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadFieldElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadFieldElem(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        x, y = self._coerce(other)
        if x is NotImplemented:
            return NotImplemented
        return x * y.inverse()

    def __rtruediv__(self, other):
        return QuadFieldElem(Fraction(other), 0, self.D) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadFieldElem(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadFieldElem):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.D == other.D and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        if self.b == 0:
            return f"QuadFieldElem({self.a})"
        return f"QuadFieldElem({self.a} + {self.b}*sqrt({self.D}))"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + ({self.b})*sqrt({self.D})"

    def to_json(self):
        if self.b == 0:
            return str(self.a)
        return {"a": str(self.a), "b": str(self.b), "D": self.D}

    def denominator(self) -> int:
        from math import lcm
        return lcm(self.a.denominator, self.b.denominator)

    def is_square(self) -> bool:
        return self.sqrt() is not None

    def sqrt(self) -> "QuadFieldElem | None":
        """An exact square root in the same field, or None."""
        if self.b == 0:
            r = rational_sqrt(self.a)
            if r is not None:
                return QuadFieldElem(r, 0, self.D)
            if self.D != 1 and self.a != 0:
                s = rational_sqrt(self.a / self.D)
                if s is not None:
                    return QuadFieldElem(0, s, self.D)
            return None
        n = rational_sqrt(self.norm())
        if n is None:
            return None
        for cand in ((self.a + n) / 2, (self.a - n) / 2):
            x = rational_sqrt(cand)
            if x is not None and x != 0:
                root = QuadFieldElem(x, self.b / (2 * x), self.D)
                if root * root == self:
                    return root
        return None

    def reduce_split(self, p: int, r: int) -> int:
        """Image in F_p under sqrt(D) -> r."""
        den = self.denominator()
        if den % p == 0:
            raise ZeroDivisionError(f"{self} is not integral at {p}")
        return (self.a.numerator * pow(self.a.denominator, -1, p)
                + self.b.numerator * pow(self.b.denominator, -1, p) * r) % p

    def reduce_inert(self, p: int) -> tuple[int, int]:
        """Image (u, v) in F_p[s]/(s^2 - D) as u + v s."""
        den = self.denominator()
        if den % p == 0:
            raise ZeroDivisionError(f"{self} is not integral at {p}")
        return (self.a.numerator * pow(self.a.denominator, -1, p) % p,
                self.b.numerator * pow(self.b.denominator, -1, p) % p)


def field_discriminant(D: int) -> int:
    if D == 1:
        return 1
    return D if D % 4 == 1 else 4 * D


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a mod p (Tonelli-Shanks); a must be a square."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = next(z for z in range(2, p) if pow(z, (p - 1) // 2, p) == p - 1)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


__all__ = [
    "QuadFieldElem", "squarefree_part", "is_squarefree", "rational_sqrt", "square_class",
    "parse_rational", "field_discriminant", "sqrt_mod_prime", "is_prime",
]
