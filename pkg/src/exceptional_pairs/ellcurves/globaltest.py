"""Global ell-isogeny decisions from the roots of Phi_ell(j, Y).

Roots are located numerically at high precision and rounded to candidate
roots or monic quadratic factors over K, using the integrality bound: if
c f has integral coefficients and leading term c, then c r, c s and c^2 t are
integral for roots r and factors Y^2 - s Y + t. Every candidate is then
certified by exact division; nothing numeric survives into a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import mpmath

from ..modpoly import ModularPolynomial, shipped
from .field import QuadFieldElem, rational_sqrt, square_class, squarefree_part

# ------------------------------------------------------------ Q[Y] helpers (low degree first)


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Quotient and remainder over any exact field (Fraction, QuadFieldElem)."""
    num, den = _trim(num), _trim(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(num) < len(den):
        return [], num
    num = [Fraction(c) if isinstance(c, int) else c for c in num]
    lead = Fraction(den[-1]) if isinstance(den[-1], int) else den[-1]
    quot = [0] * (len(num) - len(den) + 1)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + len(den) - 1] / lead
        quot[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    return _trim(quot), _trim(num[: len(den) - 1])


def poly_gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return [c / a[-1] for c in a]


def poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] = out[i + k] + x * y
    return out


def poly_eval(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def primitive_integer(p: list[Fraction]) -> list[int]:
    """Scale a rational polynomial to a primitive integer one with positive leading term."""
    p = _trim([Fraction(c) for c in p])
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    sign = 1 if ints[-1] > 0 else -1
    return [sign * c // g for c in ints]



# ------------------------------------------------------------ factors


@dataclass(frozen=True)
class QuadraticFactor:
    """Y^2 - s Y + t over K, irreducible over K."""

    s: QuadFieldElem
    t: QuadFieldElem

    @property
    def disc(self) -> QuadFieldElem:
        return self.s * self.s - 4 * self.t

    @property
    def square_class(self) -> int | None:
        """Square class of a rational discriminant, None otherwise."""
        d = self.disc
        return square_class(d.a) if d.b == 0 else None

    def splits_over(self, c: int) -> bool:
        """Whether the roots lie in K(sqrt c), c a rational integer."""
        return (self.disc / c).sqrt() is not None

    def roots_in(self, c: int) -> tuple[QuadFieldElem, QuadFieldElem]:
        """Roots over Q(sqrt c) when K = Q and the disc lies in c (Q^*)^2."""
        k = rational_sqrt(self.disc.a / c)
        D = squarefree_part(c)
        k = k * rational_sqrt(Fraction(c, D))
        return (QuadFieldElem(self.s.a / 2, k / 2, D), QuadFieldElem(self.s.a / 2, -k / 2, D))

    def to_json(self) -> dict:
        return {"kind": "quadratic-factor", "s": self.s.to_json(), "t": self.t.to_json(),
                "disc": self.disc.to_json(), "square_class": self.square_class}


@dataclass
class GlobalTestResult:
    ell: int
    j: QuadFieldElem
    D: int
    over_K: bool
    over_ext: bool
    witness_K: QuadFieldElem | None = None
    witness_ext: QuadFieldElem | QuadraticFactor | None = None
    roots: list[QuadFieldElem] = field(default_factory=list)
    quadratic_factors: list[QuadraticFactor] = field(default_factory=list)

    @property
    def sqrt_minus_ell_in_K(self) -> bool:
        return self.D == squarefree_part(-self.ell)

    def to_json(self) -> dict:
        def wj(w):
            if w is None:
                return None
            if isinstance(w, QuadraticFactor):
                return w.to_json()
            return {"kind": "root", "value": w.to_json()}

        return {
            "ell": self.ell,
            "j": self.j.to_json(),
            "field": {"D": self.D},
            "extension": {"adjoin_sqrt": -self.ell, "already_in_K": self.sqrt_minus_ell_in_K},
            "has_isogeny_over_K": self.over_K,
            "has_isogeny_over_K_sqrt_minus_ell": self.over_ext,
            "witness_K": wj(self.witness_K),
            "witness_ext": wj(self.witness_ext),
            "roots_in_K": [r.to_json() for r in self.roots],
            "quadratic_factors": [q.to_json() for q in self.quadratic_factors],
        }


# ------------------------------------------------------------ numerics


def _dps_for(magnitude_digits: int) -> int:
    return 2 * magnitude_digits + 60


def _coef_digits(cs: list[QuadFieldElem], c: int) -> int:
    big = max(max(abs(x.a * c), abs(x.b * c)) for x in cs)
    return len(str(int(big) + 1))


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _roots(coeffs, emb) -> list:
    return mpmath.polyroots([emb(x) for x in reversed(coeffs)], maxsteps=600 + 40 * len(coeffs),
                            extraprec=2 * mpmath.mp.dps)


def _near_int(x, tol) -> int | None:
    """nint(x) when x is within tol of a real integer."""
    if abs(mpmath.im(x)) > tol:
        return None
    n = mpmath.nint(mpmath.re(x))
    if abs(mpmath.re(x) - n) > tol:
        return None
    return int(n)


def rational_roots_and_quadratics(F: list[Fraction]) -> tuple[list[Fraction], list[QuadraticFactor]]:
    """Rational roots and irreducible monic rational quadratic factors of F, certified exactly."""
    F = _trim([Fraction(c) for c in F])
    if not F:
        raise ValueError("zero polynomial")
    roots: list[Fraction] = []
    if F[0] == 0:
        roots.append(Fraction(0))
        while F[0] == 0:
            F = F[1:]
    if len(F) <= 1:
        return roots, []
    deriv = [k * c for k, c in enumerate(F)][1:]
    g = poly_gcd(F, deriv)
    sqf = poly_divmod(F, g)[0] if len(g) > 1 else F
    P = primitive_integer(sqf)
    L = P[-1]
    n = len(P) - 1
    digits = max(len(str(abs(c))) for c in P) + 2 * len(str(L))
    quads: list[QuadraticFactor] = []
    with mpmath.workdps(_dps_for(digits)):
        found = _roots(P, mpmath.mpf)
        tol = mpmath.mpf("0.01")
        for r in found:
            u = _near_int(L * r, tol)
            if u is not None:
                cand = Fraction(u, L)
                if cand not in roots and poly_eval(P, cand) == 0:
                    roots.append(cand)
        seen = set()
        for a in range(n):
            for b in range(a + 1, n):
                S = _near_int(L * (found[a] + found[b]), tol)
                T = _near_int(L * found[a] * found[b], tol)
                if S is None or T is None or (S, T) in seen:
                    continue
                seen.add((S, T))
                q = QuadraticFactor(QuadFieldElem(Fraction(S, L)), QuadFieldElem(Fraction(T, L)))
                if q.disc.sqrt() is not None:
                    continue
                if not poly_divmod(P, [q.t.a, -q.s.a, Fraction(1)])[1]:
                    quads.append(q)
    roots.sort()
    quads.sort(key=lambda q: (q.s.a, q.t.a))
    return roots, quads


def k_roots_and_quadratics(f: list[QuadFieldElem], D: int) -> tuple[list[QuadFieldElem], list[QuadraticFactor]]:
    """Roots in K = Q(sqrt D) and irreducible monic quadratic factors over K of f, certified exactly."""
    f = _trim([x if isinstance(x, QuadFieldElem) else QuadFieldElem(x, 0, D) for x in f])
    f = [x.in_field(D) for x in f]
    if not f:
        raise ValueError("zero polynomial")
    roots: list[QuadFieldElem] = []
    if f[0] == 0:
        roots.append(QuadFieldElem(0, 0, D))
        while f[0] == 0:
            f = f[1:]
    f = [x / f[-1] for x in f]
    if len(f) <= 1:
        return roots, []
    g = poly_gcd(f, [k * x for k, x in enumerate(f)][1:])
    if len(g) > 1:
        f = poly_divmod(f, g)[0]
    c = lcm(*(x.denominator() for x in f))
    n = len(f) - 1
    # 2c r, 2c s and 2c^2 t have integer coordinates in the basis 1, sqrt D
    digits = _coef_digits(f, c) + 3 * len(str(c)) + 4
    quads: list[QuadraticFactor] = []
    with mpmath.workdps(_dps_for(digits)):
        sq = mpmath.sqrt(mpmath.mpf(D)) if D > 0 else mpmath.mpc(0, mpmath.sqrt(-D))
        r1 = _roots(f, lambda x: _mp(x.a) + _mp(x.b) * sq)
        r2 = _roots(f, lambda x: _mp(x.a) - _mp(x.b) * sq) if D > 0 else [mpmath.conj(z) for z in r1]
        tol = mpmath.mpf("0.01")

        def recognise(x1, x2, scale):
            a = _near_int(scale * (x1 + x2), tol)
            b = _near_int(scale * (x1 - x2) / sq, tol)
            if a is None or b is None:
                return None
            return QuadFieldElem(Fraction(a, 2 * scale), Fraction(b, 2 * scale), D)

        pairs = [(r1[i], r2[i]) for i in range(n)] if D < 0 else [(x, y) for x in r1 for y in r2]
        for x1, x2 in pairs:
            r = recognise(x1, x2, c)
            if r is not None and r not in roots and poly_eval(f, r) == 0:
                roots.append(r)
        sums1 = [(r1[i] + r1[k], r1[i] * r1[k]) for i in range(n) for k in range(i + 1, n)]
        if D < 0:
            combos = [(s, t, mpmath.conj(s), mpmath.conj(t)) for s, t in sums1]
        else:
            sums2 = [(r2[i] + r2[k], r2[i] * r2[k]) for i in range(n) for k in range(i + 1, n)]
            combos = [(s1, t1, s2, t2) for s1, t1 in sums1 for s2, t2 in sums2]
        seen = set()
        for s1, t1, s2, t2 in combos:
            s = recognise(s1, s2, c)
            if s is None:
                continue
            t = recognise(t1, t2, c * c)
            if t is None or (s, t) in seen:
                continue
            seen.add((s, t))
            q = QuadraticFactor(s, t)
            if q.disc.sqrt() is not None:
                continue
            if not poly_divmod(f, [t, -s, QuadFieldElem(1, 0, D)])[1]:
                quads.append(q)
    roots.sort(key=lambda r: (r.a, r.b))
    quads.sort(key=lambda q: (q.s.a, q.s.b, q.t.a, q.t.b))
    return roots, quads


# ------------------------------------------------------------ decision


def global_isogeny_test(j, ell: int, D: int = 1, modpoly: ModularPolynomial | None = None) -> GlobalTestResult:
    """Decide whether a curve with invariant j has an ell-isogeny over K = Q(sqrt D) and over K(sqrt -ell)."""
    if not isinstance(j, QuadFieldElem):
        j = QuadFieldElem(Fraction(j), 0, D)
    if j.b != 0:
        if D not in (1, j.D):
            raise ValueError(f"j lies in Q(sqrt {j.D}), not in Q(sqrt {D})")
        D = j.D
    if j == 0 or j == 1728:
        raise ValueError("j = 0 and j = 1728 are excluded")
    phi = modpoly if modpoly is not None else shipped(ell)
    if phi.ell != ell:
        raise ValueError(f"modular polynomial has level {phi.ell}, expected {ell}")
    f = phi.specialize(j.in_field(D) if D != 1 else j)
    if all(x == 0 for x in f):
        raise ValueError("Phi(j, Y) vanishes identically")
    minus_ell = -ell
    if D == 1:
        rroots, quads = rational_roots_and_quadratics([x.a if isinstance(x, QuadFieldElem) else x for x in f])
        roots = [QuadFieldElem(r) for r in rroots]
    else:
        roots, quads = k_roots_and_quadratics(f, D)
    witness_K = roots[0] if roots else None
    witness_ext = witness_K
    if witness_ext is None:
        witness_ext = next((q for q in quads if q.splits_over(minus_ell)), None)
    return GlobalTestResult(
        ell=ell, j=j, D=D, over_K=witness_K is not None, over_ext=witness_ext is not None,
        witness_K=witness_K, witness_ext=witness_ext, roots=roots, quadratic_factors=quads,
    )
