"""Short Weierstrass curves over Q and Q(sqrt D): reduction, point counts, local isogeny scans."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..gl2core import Gl2Matrix, char_poly_reducible, is_prime, is_square_mod, legendre
from .field import QuadFieldElem, sqrt_mod_prime

MAX_COUNT_FIELD = 10**6


def _elem(x, D: int) -> QuadFieldElem:
    if isinstance(x, QuadFieldElem):
        return x.in_field(D) if x.D != D else x
    return QuadFieldElem(Fraction(x), 0, D)


@dataclass(frozen=True)
class EllipticCurveDesc:
    """y^2 = x^3 + A x + B over Q (D = 1) or Q(sqrt D)."""

    A: QuadFieldElem
    B: QuadFieldElem
    D: int = 1
    label: str = ""

    def __post_init__(self):
        D = self.D
        if D == 1:
            D = next((z.D for z in (self.A, self.B) if isinstance(z, QuadFieldElem) and z.b != 0), 1)
            object.__setattr__(self, "D", D)
        object.__setattr__(self, "A", _elem(self.A, D))
        object.__setattr__(self, "B", _elem(self.B, D))
        if not self.discriminant:
            raise ValueError("singular curve: 4A^3 + 27B^2 = 0")

    @classmethod
    def over(cls, A, B, D: int = 1, label: str = "") -> "EllipticCurveDesc":
        return cls(_elem(A, D), _elem(B, D), D, label)

    @property
    def discriminant(self) -> QuadFieldElem:
        return 4 * self.A**3 + 27 * self.B**2

    @property
    def j_invariant(self) -> QuadFieldElem:
        a3 = 4 * self.A**3
        return 1728 * a3 / (a3 + 27 * self.B**2)

    def contains(self, x, y) -> bool:
        return y * y == x**3 + self.A * x + self.B

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "B": self.B.to_json(), "D": self.D}


def curve_from_j(j, D: int = 1) -> EllipticCurveDesc:
    """A curve with j-invariant j: A = 3j(1728 - j), B = 2j(1728 - j)^2."""
    j = _elem(j, D if not isinstance(j, QuadFieldElem) else j.D)
    if j == 0 or j == 1728:
        raise ValueError("j = 0 and j = 1728 are excluded")
    k = 1728 - j
    return EllipticCurveDesc(3 * j * k, 2 * j * k * k, j.D)


def quadratic_twist(E: EllipticCurveDesc, d: int) -> EllipticCurveDesc:
    """(A, B) -> (A d^2, B d^3)."""
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    return EllipticCurveDesc(E.A * (d * d), E.B * (d**3), E.D, E.label)


# ---------------------------------------------------------------- primes of K

@dataclass(frozen=True, order=True)
class ResiduePrime:
    """A prime of K above p: residue degree f, and sqrt(D) -> root when split."""

    norm: int
    p: int
    f: int
    root: int | None = None

    @property
    def label(self) -> str:
        if self.f == 2:
            return f"{self.p}^2"
        if self.root is None:
            return str(self.p)
        return f"({self.p},{self.root})"


def primes_above(p: int, D: int) -> list[ResiduePrime] | None:
    """Primes of Q(sqrt D) above an odd prime p; None when p ramifies."""
    if D == 1:
        return [ResiduePrime(p, p, 1)]
    if D % p == 0:
        return None
    if legendre(D, p) == 1:
        r = sqrt_mod_prime(D, p)
        return [ResiduePrime(p, p, 1, min(r, p - r)), ResiduePrime(p, p, 1, max(r, p - r))]
    return [ResiduePrime(p * p, p, 2)]


# ---------------------------------------------------------------- point counting

@dataclass(frozen=True)
class FrobeniusData:
    p: int
    f: int
    q: int
    N: int
    root: int | None = None

    @property
    def a(self) -> int:
        return self.q + 1 - self.N

    def det_class(self, ell: int) -> int:
        return self.q % ell


@dataclass(frozen=True)
class BadReduction:
    p: int
    f: int
    q: int
    reason: str


@lru_cache(maxsize=64)
def _square_counts(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    return np.bincount(x * x % p, minlength=p)


def count_points_fp(A: int, B: int, p: int) -> int:
    """#E(F_p) for y^2 = x^3 + A x + B, by x-enumeration."""
    if p > MAX_COUNT_FIELD:
        raise ValueError(f"field size {p} above {MAX_COUNT_FIELD}")
    x = np.arange(p, dtype=np.int64)
    f = (x * x % p * x + A * x + B) % p
    return 1 + int(_square_counts(p)[f].sum())


def count_points_fp2(A: tuple[int, int], B: tuple[int, int], p: int, n: int) -> int:
    """#E(F_{p^2}) with F_{p^2} = F_p[s]/(s^2 - n), n a non-residue; A, B given as (u, v)."""
    q = p * p
    if q > MAX_COUNT_FIELD:
        raise ValueError(f"field size {q} above {MAX_COUNT_FIELD}")
    u, v = (g.ravel() for g in np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64)))

    def mul(x0, x1, y0, y1):
        return (x0 * y0 + n * (x1 * y1 % p)) % p, (x0 * y1 + x1 * y0) % p

    x2 = mul(u, v, u, v)
    x3 = mul(x2[0], x2[1], u, v)
    ax = mul(A[0], A[1], u, v)
    f0 = (x3[0] + ax[0] + B[0]) % p
    f1 = (x3[1] + ax[1] + B[1]) % p
    norm = (f0 * f0 - n * (f1 * f1 % p)) % p
    sq = np.zeros(p, dtype=bool)
    sq[np.arange(p) ** 2 % p] = True
    zero = (f0 == 0) & (f1 == 0)
    chi = np.where(zero, 0, np.where(sq[norm], 1, -1))
    return int(1 + q + chi.sum())


def reduce_at(E: EllipticCurveDesc, P: ResiduePrime) -> FrobeniusData | BadReduction:
    p = P.p
    try:
        if P.f == 1:
            r = P.root if P.root is not None else 0
            A, B = E.A.reduce_split(p, r), E.B.reduce_split(p, r)
            disc = (4 * A**3 + 27 * B * B) % p
        else:
            A, B = E.A.reduce_inert(p), E.B.reduce_inert(p)
            disc = E.discriminant.reduce_inert(p)
            disc = disc if any(disc) else 0
    except ZeroDivisionError:
        return BadReduction(p, P.f, P.norm, "non-integral model")
    if not disc:
        return BadReduction(p, P.f, P.norm, "discriminant vanishes")
    if P.f == 1:
        N = count_points_fp(A, B, p)
    else:
        N = count_points_fp2(A, B, p, E.D % p)
    return FrobeniusData(p, P.f, P.norm, N, P.root)


def reduce_and_count(E: EllipticCurveDesc, p: int) -> list[FrobeniusData | BadReduction]:
    """Frobenius data at each prime of K above the odd prime p (empty if p ramifies)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    above = primes_above(p, E.D)
    if above is None:
        return []
    return [reduce_at(E, P) for P in above]


def hasse_ok(F: FrobeniusData) -> bool:
    return F.a * F.a <= 4 * F.q


def local_isogeny_test(F: FrobeniusData, ell: int) -> bool:
    """Whether x^2 - a x + q has a root mod ell (Frobenius fixes a line of E[ell])."""
    if F.q % ell == 0:
        raise ValueError(f"residue field size {F.q} is divisible by {ell}")
    if ell == 2:
        return any((x * x - F.a * x + F.q) % 2 == 0 for x in (0, 1))
    return is_square_mod(F.a * F.a - 4 * F.q, ell)


def frobenius_matrix(F: FrobeniusData, ell: int) -> Gl2Matrix:
    """Companion matrix [[0, -q], [1, a]] mod ell."""
    return Gl2Matrix(0, -F.q, 1, F.a, ell)


def local_test_via_matrix(F: FrobeniusData, ell: int) -> bool:
    return char_poly_reducible(frobenius_matrix(F, ell))


@dataclass
class LocalScanReport:
    ell: int
    D: int
    bound: int
    records: list[tuple[str, int, int, int, bool]] = field(default_factory=list)  # (label, p, q, a, reducible)
    bad: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    curve: dict | None = None

    @property
    def good(self) -> int:
        return len(self.records)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.records if r[4])

    @property
    def pass_fraction(self) -> float:
        return self.passed / self.good if self.records else 0.0

    @property
    def failures(self) -> list[tuple[str, int, int, int]]:
        return [r[:4] for r in self.records if not r[4]]

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "field": {"D": self.D},
            "bound": self.bound,
            "good": self.good,
            "passed": self.passed,
            "pass_fraction": self.pass_fraction,
            "failures": [{"p": p, "q": q, "a": a, "prime": name} for name, p, q, a in self.failures],
            "skipped": self.skipped + self.bad,
            "curve": self.curve,
        }


def good_primes(E: EllipticCurveDesc, ell: int, bound: int):
    """Yield (ResiduePrime, FrobeniusData | BadReduction | None) for norms <= bound, p odd."""
    for p in range(3, bound + 1, 2):
        if not is_prime(p):
            continue
        above = primes_above(p, E.D)
        if above is None:
            yield ResiduePrime(p, p, 1), None
            continue
        for P in above:
            if P.norm > bound:
                continue
            if p == ell:
                yield P, "ell"
                continue
            yield P, reduce_at(E, P)


def local_scan(E: EllipticCurveDesc, ell: int, bound: int) -> LocalScanReport:
    """Local ell-isogeny test at every good prime of norm <= bound (odd, prime to ell)."""
    if bound < 100:
        raise ValueError("bound must be at least 100")
    rep = LocalScanReport(ell, E.D, bound, curve=E.to_json())
    rep.skipped.append("2")
    for P, F in good_primes(E, ell, bound):
        if F is None:
            rep.skipped.append(f"{P.p} (ramified)")
        elif F == "ell":
            rep.skipped.append(f"{P.label} (above ell)")
        elif isinstance(F, BadReduction):
            rep.bad.append(f"{P.label} ({F.reason})")
        else:
            if not hasse_ok(F):
                raise ArithmeticError(f"Hasse bound violated at {P.label}: a={F.a}, q={F.q}")
            rep.records.append((P.label, P.p, F.q, F.a, local_isogeny_test(F, ell)))
    return rep
