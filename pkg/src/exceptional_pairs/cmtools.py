"""Class numbers of imaginary quadratic orders by reduced forms, and the CM guard."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .gl2core import is_prime, kronecker
from .ellcurves.field import squarefree_part


@dataclass(frozen=True, order=True)
class BQF:
    """a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (a > 0 and abs(b) <= a <= c):
            return False
        return b >= 0 or (abs(b) != a and a != c)

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c]


def _check_disc(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant (D < 0, D = 0 or 1 mod 4)")


def reduced_forms(D: int) -> list[BQF]:
    """All primitive reduced positive definite forms of discriminant D."""
    _check_disc(D)
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            f = BQF(a, b, num // (4 * a))
            if f.is_reduced() and f.is_primitive():
                out.append(f)
    return sorted(out)


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return squarefree_part(D) == D
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def unit_index(D: int) -> int:
    return {-3: 3, -4: 2}.get(D, 1)


@dataclass(frozen=True)
class RatioReport:
    D: int
    ell: int
    h: int
    h_ell: int
    unit_index: int
    symbol: int

    @property
    def ratio_counted(self) -> Fraction:
        return Fraction(self.h_ell, self.h)

    @property
    def ratio_formula(self) -> Fraction:
        return Fraction(self.ell - self.symbol, self.unit_index)

    @property
    def match(self) -> bool:
        return self.ratio_counted == self.ratio_formula

    @property
    def inequality(self) -> bool | None:
        """ratio >= ell - 1, asserted only when the unit index is 1."""
        if self.unit_index != 1:
            return None
        return self.ratio_counted >= self.ell - 1

    def to_json(self) -> dict:
        return {
            "D": self.D, "ell": self.ell, "h": self.h, "h_ell": self.h_ell,
            "unit_index": self.unit_index, "symbol": self.symbol,
            "ratio_counted": str(self.ratio_counted), "ratio_formula": str(self.ratio_formula),
            "match": self.match, "ratio_at_least_ell_minus_1": self.inequality,
        }


def isogenous_order_ratio_check(D: int, ell: int) -> RatioReport:
    """Compare h(ell^2 D)/h(D) by form counting against (ell - (D/ell))/u."""
    _check_disc(D)
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if D % ell == 0:
        raise ValueError(f"{ell} divides {D}")
    return RatioReport(D, ell, class_number(D), class_number(ell * ell * D), unit_index(D), kronecker(D, ell))


def cm_guard(ell: int, d: int) -> bool:
    """True iff ell > 2d + 1, where an exceptional pair cannot have CM."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    return ell > 2 * d + 1


def cm_ratio_upper_bound(d: int) -> int:
    return 2 * d
