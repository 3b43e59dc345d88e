"""Arithmetic over F_ell, 2x2 invertible matrices and the projective line P^1(F_ell)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_MODULUS = 1 << 16
_EULER_CUTOFF = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


@dataclass(frozen=True)
class PrimeField:
    ell: int

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.ell >= MAX_MODULUS:
            raise ValueError(f"modulus {self.ell} exceeds {MAX_MODULUS}")

    def __call__(self, a: int) -> int:
        return a % self.ell

    def inv(self, a: int) -> int:
        a %= self.ell
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.ell}")
        return pow(a, -1, self.ell)

    def is_square(self, a: int) -> bool:
        """True for 0 and the nonzero squares."""
        return is_square_mod(a, self.ell)

    def generator(self) -> int:
        return primitive_root(self.ell)


@lru_cache(maxsize=None)
def _square_table(ell: int) -> frozenset[int]:
    return frozenset(x * x % ell for x in range(ell))


def is_square_mod(a: int, ell: int) -> bool:
    a %= ell
    if a == 0 or ell == 2:
        return True
    if ell < _EULER_CUTOFF:
        return pow(a, (ell - 1) // 2, ell) == 1
    return a in _square_table(ell)


def legendre(a: int, ell: int) -> int:
    """Quadratic residue symbol (a/ell) for an odd prime ell, by Euler's criterion."""
    if ell == 2 or not is_prime(ell):
        raise ValueError(f"legendre symbol needs an odd prime, got {ell}")
    a %= ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol (d/p) for a prime p (covers p = 2 for discriminants)."""
    if p != 2:
        return legendre(d, p)
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


@lru_cache(maxsize=None)
def primitive_root(ell: int) -> int:
    if ell == 2:
        return 1
    n = ell - 1
    factors = {q for q in range(2, n + 1) if n % q == 0 and is_prime(q)}
    for g in range(2, ell):
        if all(pow(g, n // q, ell) != 1 for q in factors):
            return g
    raise ArithmeticError(f"no primitive root mod {ell}")


def multiplicative_order(a: int, ell: int) -> int:
    a %= ell
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    k, x = 1, a
    while x != 1:
        x = x * a % ell
        k += 1
    return k


@dataclass(frozen=True, order=True)
class Gl2Matrix:
    """[[a, b], [c, d]] over F_ell, entries stored reduced."""

    a: int
    b: int
    c: int
    d: int
    ell: int

    def __post_init__(self):
        ell = self.ell
        object.__setattr__(self, "a", self.a % ell)
        object.__setattr__(self, "b", self.b % ell)
        object.__setattr__(self, "c", self.c % ell)
        object.__setattr__(self, "d", self.d % ell)
        if (self.a * self.d - self.b * self.c) % ell == 0:
            raise ValueError(f"singular matrix mod {ell}: {self.entries}")

    @classmethod
    def of(cls, rows, ell: int) -> "Gl2Matrix":
        (a, b), (c, d) = rows
        return cls(a, b, c, d, ell)

    @classmethod
    def identity(cls, ell: int) -> "Gl2Matrix":
        return cls(1, 0, 0, 1, ell)

    @classmethod
    def scalar(cls, lam: int, ell: int) -> "Gl2Matrix":
        return cls(lam, 0, 0, lam, ell)

    @classmethod
    def diag(cls, x: int, y: int, ell: int) -> "Gl2Matrix":
        return cls(x, 0, 0, y, ell)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.ell

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.ell

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __matmul__(self, other: "Gl2Matrix") -> "Gl2Matrix":
        return mat_mul(self, other)

    def inverse(self) -> "Gl2Matrix":
        ell = self.ell
        k = pow(self.det, -1, ell)
        return Gl2Matrix(self.d * k, -self.b * k, -self.c * k, self.a * k, ell)

    def __pow__(self, n: int) -> "Gl2Matrix":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Gl2Matrix.identity(self.ell), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def projective_key(self) -> tuple[int, int, int, int]:
        """Entries scaled so the first nonzero entry is 1 (the class in PGL_2)."""
        ell = self.ell
        first = next(x for x in self.entries if x)
        k = pow(first, -1, ell)
        return tuple(x * k % ell for x in self.entries)

    def act(self, P: "ProjPoint") -> "ProjPoint":
        x, y = P.x, P.y
        return ProjPoint.make(self.a * x + self.b * y, self.c * x + self.d * y, self.ell)


def mat_mul(A: Gl2Matrix, B: Gl2Matrix) -> Gl2Matrix:
    if A.ell != B.ell:
        raise ValueError(f"modulus mismatch: {A.ell} vs {B.ell}")
    return Gl2Matrix(
        A.a * B.a + A.b * B.c,
        A.a * B.b + A.b * B.d,
        A.c * B.a + A.d * B.c,
        A.c * B.b + A.d * B.d,
        A.ell,
    )


@dataclass(frozen=True, order=True)
class ProjPoint:
    """(x : y) with the first nonzero coordinate equal to 1."""

    x: int
    y: int
    ell: int

    @classmethod
    def make(cls, x: int, y: int, ell: int) -> "ProjPoint":
        x, y = x % ell, y % ell
        if x:
            k = pow(x, -1, ell)
            return cls(1, y * k % ell, ell)
        if y:
            return cls(0, 1, ell)
        raise ValueError("(0, 0) is not a projective point")

    def __str__(self) -> str:
        return f"({self.x}:{self.y})"


@lru_cache(maxsize=None)
def projective_line(ell: int) -> tuple[ProjPoint, ...]:
    """The ell+1 points of P^1(F_ell) in canonical order."""
    return tuple(sorted([ProjPoint(1, y, ell) for y in range(ell)] + [ProjPoint(0, 1, ell)]))


def fixed_points(g: Gl2Matrix) -> set[ProjPoint]:
    return {P for P in projective_line(g.ell) if g.act(P) == P}


def char_poly_reducible(g: Gl2Matrix) -> bool:
    """Whether x^2 - tr(g) x + det(g) has a root in F_ell."""
    ell = g.ell
    if ell == 2:
        t, n = g.trace, g.det
        return any((x * x - t * x + n) % 2 == 0 for x in (0, 1))
    return is_square_mod(g.trace * g.trace - 4 * g.det, ell)


def proj_order(g: Gl2Matrix) -> int:
    k, h = 1, g
    while not h.is_scalar():
        h = h @ g
        k += 1
    return k


def all_gl2(ell: int):
    """Iterate over GL_2(F_ell) in lexicographic entry order."""
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                for d in range(ell):
                    if (a * d - b * c) % ell:
                        yield Gl2Matrix(a, b, c, d, ell)


def gl2_order(ell: int) -> int:
    return (ell * ell - 1) * (ell * ell - ell)
