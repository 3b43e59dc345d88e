"""Genera of the modular curves X_H(ell) and the cusp bookkeeping on X(5).

Two independent routes to the genus: the published closed forms, and a direct
count of index, elliptic points and cusps from the coset action of SL_2(F_ell).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .gl2core import Gl2Matrix, is_prime, legendre, primes_between
from .grouplab import (
    SubgroupDesc,
    _pclose,
    _pnorm,
    exceptional_type_subgroup,
    split_cartan_normalizer_image,
)

CURVE_KINDS = ("split-normalizer", "A4", "S4", "A5", "borel", "custom")


class NonIntegralGenus(ArithmeticError):
    def __init__(self, value: Fraction, where: str):
        super().__init__(f"{where}: genus formula gives non-integral {value}")
        self.value = value


@dataclass(frozen=True)
class GenusReport:
    ell: int
    curve_kind: str
    mu: int
    nu2: int
    nu3: int
    nu_inf: int
    genus: int
    method: str = "cosets"

    def to_json(self) -> dict:
        d = asdict(self)
        return {"ell": d["ell"], "kind": d["curve_kind"], "method": d["method"], "mu": d["mu"],
                "nu2": d["nu2"], "nu3": d["nu3"], "nu_inf": d["nu_inf"], "genus": d["genus"]}


def _integral(value: Fraction, where: str) -> int:
    if value.denominator != 1:
        raise NonIntegralGenus(value, where)
    return int(value)


def genus_split_closed(ell: int) -> int:
    if ell < 5 or not is_prime(ell):
        raise ValueError(f"need a prime ell >= 5, got {ell}")
    value = Fraction(ell * ell - 8 * ell + 11 - 4 * legendre(-3, ell), 24)
    return _integral(value, f"X_split({ell})")


_EXCEPTIONAL = {
    # denominator, linear coefficient, constant, eps2 weight, eps3 weight
    "A4": (288, -51, 294, 18, 32),
    "S4": (576, -87, 582, 54, 32),
    "A5": (1440, -171, 1446, 90, 80),
}


def genus_exceptional_value(ell: int, kind: str) -> Fraction:
    den, lin, const, w2, w3 = _EXCEPTIONAL[kind]
    eps2 = 1 if ell % 4 == 1 else -1
    eps3 = 1 if ell % 3 == 1 else -1
    return Fraction(ell**3 - 6 * ell**2 + lin * ell + const + w2 * eps2 + w3 * eps3, den)


def genus_exceptional_closed(ell: int, kind: str) -> int:
    if kind not in _EXCEPTIONAL:
        raise ValueError(f"kind must be one of {sorted(_EXCEPTIONAL)}")
    return _integral(genus_exceptional_value(ell, kind), f"X_{kind}({ell})")


# ---------------------------------------------------------------- coset route

@lru_cache(maxsize=4)
def _sl2_elements(ell: int) -> np.ndarray:
    """All of SL_2(F_ell) as an (n, 4) array."""
    rng = np.arange(ell)
    a, b, c = (x.ravel() for x in np.meshgrid(rng, rng, rng, indexing="ij"))
    rows = []
    nz = a != 0
    inv = np.array([0] + [pow(int(x), -1, ell) for x in range(1, ell)])
    d = (1 + b[nz] * c[nz]) * inv[a[nz]] % ell
    rows.append(np.stack([a[nz], b[nz], c[nz], d], axis=1))
    # a = 0: need -b c = 1, d free
    for bb in range(1, ell):
        cc = (-pow(bb, -1, ell)) % ell
        dd = np.arange(ell)
        rows.append(np.stack([np.zeros(ell, int), np.full(ell, bb), np.full(ell, cc), dd], axis=1))
    return np.concatenate(rows).astype(np.int64)


def _encode(M: np.ndarray, ell: int) -> np.ndarray:
    return ((M[..., 0] * ell + M[..., 1]) * ell + M[..., 2]) * ell + M[..., 3]


def _sl2_lift(H_proj: frozenset, ell: int) -> np.ndarray:
    """Codes of the preimage in SL_2 of a set of PGL_2 classes (keeps those of square det)."""
    sl = _sl2_elements(ell)
    keys = np.array(sorted(H_proj), dtype=np.int64).reshape(-1, 4)
    # an SL_2 element lies over class k iff it equals lambda * k for some lambda
    out = []
    for k in keys:
        lam = np.arange(1, ell)
        cand = (lam[:, None] * k[None, :]) % ell
        det = (cand[:, 0] * cand[:, 3] - cand[:, 1] * cand[:, 2]) % ell
        out.append(_encode(cand[det == 1], ell))
    codes = np.unique(np.concatenate(out)) if out else np.array([], dtype=np.int64)
    assert np.all(np.isin(codes, _encode(sl, ell)))
    return codes


def _fixed_cosets(x: np.ndarray, hcodes: np.ndarray, ell: int) -> int:
    """Number of right cosets Hg with Hgx = Hg, i.e. #{g : g x g^-1 in H} / |H|."""
    g = _sl2_elements(ell)
    a, b, c, d = g[:, 0], g[:, 1], g[:, 2], g[:, 3]
    p, q, r, s = (int(v) for v in x)
    # g^-1 = [[d, -b], [-c, a]] for det 1
    m0 = a * p + b * r
    m1 = a * q + b * s
    m2 = c * p + d * r
    m3 = c * q + d * s
    conj = np.stack([m0 * d - m1 * c, -m0 * b + m1 * a, m2 * d - m3 * c, -m2 * b + m3 * a], axis=1) % ell
    hits = int(np.count_nonzero(np.isin(_encode(conj, ell), hcodes)))
    if hits % len(hcodes):
        raise ArithmeticError("conjugation count not a multiple of |H|")
    return hits // len(hcodes)


def genus_from_subgroup(H_proj: frozenset, ell: int, kind: str = "custom") -> GenusReport:
    """Coset-action genus for H <= PGL_2(F_ell); uses H intersected with PSL_2."""
    hcodes = _sl2_lift(H_proj, ell)
    if len(hcodes) == 0:
        raise ValueError("subgroup has no elements of square determinant")
    order_sl2 = ell * (ell * ell - 1)
    if order_sl2 % len(hcodes):
        raise ArithmeticError("|H| does not divide |SL_2|")
    mu = order_sl2 // len(hcodes)
    S = np.array([0, ell - 1, 1, 0])
    ST = np.array([0, ell - 1, 1, 1])
    nu2 = _fixed_cosets(S, hcodes, ell)
    nu3 = _fixed_cosets(ST, hcodes, ell)
    # cusps: orbits of T = [[1,1],[0,1]] on cosets, counted by Burnside over <T>
    total = mu
    for k in range(1, ell):
        total += _fixed_cosets(np.array([1, k, 0, 1]), hcodes, ell)
    if total % ell:
        raise ArithmeticError("Burnside count not divisible by ell")
    nu_inf = total // ell
    # -I lies in the lift, so SL_2 cosets and PSL_2 cosets coincide
    twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf
    genus = _integral(Fraction(twelve_g, 12), f"coset genus ({kind}, ell={ell})")
    return GenusReport(ell, kind, mu, nu2, nu3, nu_inf, genus, "cosets")


def named_subgroup(kind: str, ell: int) -> frozenset:
    """Projective image of the named level structure."""
    if kind == "split-normalizer":
        return split_cartan_normalizer_image(ell)
    if kind == "borel":
        return frozenset(_pnorm((a, b, 0, 1), ell) for a in range(1, ell) for b in range(ell))
    if kind == "psl":
        return _pclose((_pnorm((1, 1, 0, 1), ell), _pnorm((0, -1, 1, 0), ell)), ell)
    if kind in ("A4", "S4", "A5"):
        found = exceptional_type_subgroup(ell, kind)
        if found is None:
            raise ValueError(f"PSL_2(F_{ell}) has no subgroup isomorphic to {kind}")
        return found[0]
    raise ValueError(f"unknown curve kind {kind!r}")


def genus_from_cosets(H, ell: int | None = None) -> GenusReport:
    """Genus of X_H by the coset action.  ``H`` is a SubgroupDesc, a set of
    projective keys, or one of the names in CURVE_KINDS (plus "psl")."""
    if isinstance(H, str):
        if ell is None:
            raise ValueError("ell is required with a named kind")
        kind = "custom" if H == "psl" else H
        return genus_from_subgroup(named_subgroup(H, ell), ell, kind)
    if isinstance(H, SubgroupDesc):
        return genus_from_subgroup(H.projective_image(), H.ell, "custom")
    if ell is None:
        raise ValueError("ell is required for a raw projective subgroup")
    return genus_from_subgroup(frozenset(H), ell, "custom")


def genus_closed(ell: int, kind: str) -> int:
    if kind == "split-normalizer":
        return genus_split_closed(ell)
    return genus_exceptional_closed(ell, kind)


def genus_closed_report(ell: int, kind: str) -> dict:
    return {"ell": ell, "kind": kind, "method": "closed", "genus": genus_closed(ell, kind)}


def finiteness_frontier(ell_max: int) -> list[dict]:
    """For each prime 11 <= ell <= ell_max: split genus, and exceptional genera where admissible."""
    if ell_max < 11:
        raise ValueError("ell_max must be at least 11")
    rows = []
    for ell in primes_between(11, ell_max):
        row = {"ell": ell, "split": genus_split_closed(ell)}
        for kind, modulus in (("A4", 12), ("S4", 24), ("A5", 60)):
            if ell % modulus == 1:
                row[kind] = genus_exceptional_closed(ell, kind)
        row["certified"] = all(v >= 2 for k, v in row.items() if k not in ("ell",) and isinstance(v, int))
        rows.append(row)
    return rows


# ---------------------------------------------------------------- cusps of X(5)

@dataclass(frozen=True, order=True)
class CuspDatum:
    """Level structure on a 5-gon: e1 -> (zeta^w1, a1), e2 -> (zeta^w2, a2), exponents mod 5."""

    w1: int
    a1: int
    w2: int
    a2: int

    def __post_init__(self):
        for name in ("w1", "a1", "w2", "a2"):
            object.__setattr__(self, name, getattr(self, name) % 5)
        if self.pairing == 0:
            raise ValueError(f"{self.pairs()} is not an isomorphism")

    @classmethod
    def from_pairs(cls, pairs) -> "CuspDatum":
        (w1, a1), (w2, a2) = pairs
        return cls(w1, a1, w2, a2)

    def pairs(self):
        return ((self.w1, self.a1), (self.w2, self.a2))

    @property
    def pairing(self) -> int:
        return (self.w1 * self.a2 - self.w2 * self.a1) % 5


DISTINGUISHED_CUSP = CuspDatum(1, 0, 0, 1)


def cusp_aut_action(eps: int, alpha: int, c: CuspDatum) -> CuspDatum:
    """(w, j) -> (w^eps alpha^j, eps j), written additively: (eps w + alpha a, eps a)."""
    if eps % 5 not in (1, 4):
        raise ValueError("eps must be +1 or -1")
    return CuspDatum(eps * c.w1 + alpha * c.a1, eps * c.a1, eps * c.w2 + alpha * c.a2, eps * c.a2)


def cusp_matrix_action(g: Gl2Matrix, c: CuspDatum) -> CuspDatum:
    """Precompose the level structure with g: e_i -> phi(g e_i)."""
    if g.ell != 5:
        raise ValueError("cusp data live on X(5)")
    return CuspDatum(
        g.a * c.w1 + g.c * c.w2, g.a * c.a1 + g.c * c.a2,
        g.b * c.w1 + g.d * c.w2, g.b * c.a1 + g.d * c.a2,
    )


def cusp_galois_action(cg: int, c: CuspDatum) -> CuspDatum:
    """zeta -> zeta^cg on the mu_5 coordinates."""
    return CuspDatum(cg * c.w1, c.a1, cg * c.w2, c.a2)


def aut_orbit(c: CuspDatum) -> frozenset:
    return frozenset(cusp_aut_action(e, k, c) for e in (1, -1) for k in range(5))


def v4_preimage() -> SubgroupDesc:
    from .grouplab import scalar_saturate
    V4 = [Gl2Matrix.of(((1, 0), (0, 1)), 5), Gl2Matrix.of(((0, -1), (1, 0)), 5),
          Gl2Matrix.of(((1, 0), (0, -1)), 5), Gl2Matrix.of(((0, 1), (1, 0)), 5)]
    return scalar_saturate(V4, 5)


def cusp_class(c: CuspDatum, G: SubgroupDesc) -> frozenset:
    """Orbit of c under {+-1} x mu_5 on the left and G on the right."""
    seen = {c}
    stack = [c]
    while stack:
        x = stack.pop()
        nbrs = [cusp_aut_action(e, k, x) for e in (1, -1) for k in range(5)]
        nbrs += [cusp_matrix_action(g, x) for g in G.generators]
        for y in nbrs:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def cusp_galois_stability(G: SubgroupDesc | None = None) -> dict:
    """Whether the class of the distinguished cusp on X_G(5) is fixed by zeta -> zeta^4.

    Returns the verdict together with the data certifying it.
    """
    G = G or v4_preimage()
    c0 = DISTINGUISHED_CUSP
    orbit = aut_orbit(c0)
    cls = cusp_class(c0, G)
    per_element = {}
    for cg in (1, 2, 3, 4):
        image = cusp_galois_action(cg, c0)
        per_element[cg] = {
            "image": image.pairs(),
            "same_cusp_on_X5": image in orbit,
            "same_class_on_XG": image in cls,
        }
    stable = all(per_element[cg]["same_class_on_XG"] for cg in (1, 4))
    witness = None
    conj = cusp_galois_action(4, c0)
    for g in G.elements:
        if cusp_matrix_action(g, conj) in orbit:
            witness = g
            break
    return {
        "stable": stable,
        "orbit": sorted(x.pairs() for x in orbit),
        "class_size": len(cls),
        "galois": per_element,
        "witness": list(witness.entries) if witness is not None else None,
    }
