"""The level-7 parametrization on E': v^2 = u^3 - 1715 u + 33614."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .field import QuadFieldElem

E7_A = -1715
E7_B = 33614


def _q(x, D: int = 1) -> QuadFieldElem:
    if isinstance(x, QuadFieldElem):
        return x
    return QuadFieldElem(Fraction(x), 0, D)


def on_e7(u, v) -> bool:
    u, v = _q(u), _q(v)
    return v * v == u**3 + E7_A * u + E7_B


def elkies7_t(u, v) -> QuadFieldElem:
    u, v = _q(u), _q(v)
    if not on_e7(u, v):
        raise ValueError(f"({u}, {v}) is not on v^2 = u^3 - 1715u + 33614")
    if v == 0:
        raise ValueError("v = 0: 2-torsion point, t undefined")
    return (7 * u - v + 343) / (2 * v)


def j_from_t(t) -> QuadFieldElem:
    t = _q(t)
    den = t**3 - 2 * t**2 - t + 1
    if den == 0:
        raise ZeroDivisionError("t^3 - 2t^2 - t + 1 = 0")
    num = ((t - 3) ** 3 * (t - 2) * (t**2 + t - 5) ** 3 * (t**2 + t + 2) ** 3
           * (t**4 - 3 * t**3 + 2 * t**2 + 3 * t + 1) ** 3)
    return -num / den**7


def elkies7_j(u, v) -> QuadFieldElem:
    """j-invariant attached to a point (u, v) of E' with v != 0."""
    return j_from_t(elkies7_t(u, v))


# t -> -1/2 as (u, v) runs off to the point at infinity, since v ~ u^(3/2)
T_AT_INFINITY = Fraction(-1, 2)


def elkies7_j_at_infinity() -> QuadFieldElem:
    return j_from_t(T_AT_INFINITY)


def elkies7_js(H: int, D: int = 1, irrational: bool | None = None) -> list[tuple[str, QuadFieldElem]]:
    """Distinct j-invariants from the point at infinity and the searched points with v != 0.

    Points whose parameter hits a pole of j (the 2-torsion, t infinite) are cusps and are dropped.
    """
    out: list[tuple[str, QuadFieldElem]] = [("infinity", elkies7_j_at_infinity())]
    seen = {out[0][1]}
    for P in elkies7_point_search(H, D, irrational):
        if P.v == 0:
            continue
        try:
            j = elkies7_j(P.u, P.v)
        except ZeroDivisionError:
            continue
        if j not in seen:
            seen.add(j)
            out.append((f"({P.u}, {P.v})", j))
    return out


@dataclass(frozen=True)
class E7Point:
    u: QuadFieldElem
    v: QuadFieldElem

    def to_json(self) -> dict:
        return {"u": self.u.to_json(), "v": self.v.to_json()}


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def elkies7_point_search(H: int, D: int = 1, irrational: bool | None = None) -> list[E7Point]:
    """Affine points of E' over Q(sqrt D) (D = 1 for Q) with bounded numerators and denominators.

    Rational u = n/d uses |n| <= H, 1 <= d <= H. Over a quadratic field the
    search also tries u = (a + b sqrt D)/c with |a|, |b|, c <= H, unless
    ``irrational`` is False.
    """
    if H < 1:
        raise ValueError("height bound must be at least 1")
    if irrational is None:
        irrational = D != 1
    pts: set[tuple] = set()
    out: list[E7Point] = []

    def add(u: QuadFieldElem, v: QuadFieldElem):
        for w in ((v, -v) if v else (v,)):
            key = (u.a, u.b, w.a, w.b)
            if key not in pts:
                pts.add(key)
                out.append(E7Point(u, w))

    for d in range(1, H + 1):
        for n in range(-H, H + 1):
            if gcd(n, d) != 1:
                continue
            # f(n/d) = m / d^4 with m integral
            m = (n**3 - 1715 * n * d * d + 33614 * d**3) * d
            u = QuadFieldElem(Fraction(n, d), 0, D)
            r = _isqrt_exact(m)
            if r is not None:
                add(u, QuadFieldElem(Fraction(r, d * d), 0, D))
            elif D != 1 and m % D == 0:
                k = _isqrt_exact(m // D)
                if k is not None:
                    add(u, QuadFieldElem(0, Fraction(k, d * d), D))
    if irrational and D != 1:
        for c in range(1, H + 1):
            for b in range(1, H + 1):
                for a in range(-H, H + 1):
                    if gcd(gcd(a, b), c) != 1:
                        continue
                    for sb in (b, -b):
                        u = QuadFieldElem(Fraction(a, c), Fraction(sb, c), D)
                        v = (u**3 + E7_A * u + E7_B).sqrt()
                        if v is not None:
                            add(u, v)
    out.sort(key=lambda P: (P.u.b, P.u.a, P.v.b, P.v.a))
    return out
