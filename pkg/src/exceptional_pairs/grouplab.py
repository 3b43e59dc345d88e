"""Subgroups of GL_2(F_ell): closure, projective classification, and exhaustive scans
for groups whose elements each fix a point of P^1(F_ell) while the group fixes none.

Exhaustive scans work in PGL_2(F_ell) with integer-indexed multiplication and
conjugation tables; exceptionality only depends on the projective image, and the
reported group is the full preimage (saturated by scalars).
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gl2core import (
    Gl2Matrix,
    ProjPoint,
    char_poly_reducible,
    gl2_order,
    is_prime,
    is_square_mod,
    primitive_root,
    projective_line,
)

log = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 13
KINDS = ("cyclic", "dihedral", "borel-reducible", "A4", "S4", "A5", "psl-containing")
MODES = ("split", "sl2", "all")


class SizeCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SubgroupDesc:
    ell: int
    generators: tuple[Gl2Matrix, ...]
    elements: tuple[Gl2Matrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def projective_image(self) -> frozenset:
        return frozenset(g.projective_key() for g in self.elements)

    def det_group(self) -> tuple[int, ...]:
        return tuple(sorted({g.det for g in self.elements}))


@dataclass(frozen=True)
class ProjClassification:
    kind: str
    n: int | None
    in_psl: bool
    det_group: tuple[int, ...]
    proj_order: int


def closure(gens, ell: int | None = None, cap: int | None = None) -> SubgroupDesc:
    """Subgroup of GL_2(F_ell) generated by ``gens``, by breadth-first products."""
    gens = list(gens)
    if ell is None:
        if not gens:
            raise ValueError("ell is required for an empty generator list")
        ell = gens[0].ell
    if any(g.ell != ell for g in gens):
        raise ValueError("generators have different moduli")
    cap = gl2_order(ell) if cap is None else cap
    ident = Gl2Matrix.identity(ell)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise SizeCapExceeded(f"closure exceeds {cap} elements")
        frontier = nxt
    return SubgroupDesc(ell, tuple(gens), tuple(sorted(seen)))


def scalar_saturate(gens, ell: int) -> SubgroupDesc:
    mu = primitive_root(ell)
    return closure(list(gens) + [Gl2Matrix.scalar(mu, ell)], ell)


# ---------------------------------------------------------------- projective helpers

def _pmul(x, y, ell):
    a, b, c, d = x
    e, f, g, h = y
    return _pnorm((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), ell)


def _pnorm(t, ell):
    first = next(v % ell for v in t if v % ell)
    k = pow(first, -1, ell)
    return tuple(v * k % ell for v in t)


def _pact(x, P, ell):
    a, b, c, d = x
    return ProjPoint.make(a * P.x + b * P.y, c * P.x + d * P.y, ell)


_PID = (1, 0, 0, 1)


def _porder(x, ell):
    k, y = 1, x
    while y != _PID:
        y = _pmul(y, x, ell)
        k += 1
    return k


def _pdet_square(x, ell):
    a, b, c, d = x
    return is_square_mod(a * d - b * c, ell)


def _pinv(x, ell):
    a, b, c, d = x
    return _pnorm((d, -b, -c, a), ell)


def _pfix(x, ell):
    return frozenset(P for P in projective_line(ell) if _pact(x, P, ell) == P)


def _pclose(gens, ell):
    seen = {_PID}
    frontier = [_PID]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _pmul(x, g, ell)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _psl_order(ell):
    return 6 if ell == 2 else ell * (ell * ell - 1) // 2


def split_cartan_normalizer_image(ell: int) -> frozenset:
    diag = {_pnorm((a, 0, 0, 1), ell) for a in range(1, ell)}
    anti = {_pnorm((0, a, 1, 0), ell) for a in range(1, ell)}
    return frozenset(diag | anti)


def split_cartan_normalizer(ell: int) -> SubgroupDesc:
    mu = primitive_root(ell)
    gens = [Gl2Matrix.diag(mu, 1, ell), Gl2Matrix.diag(1, mu, ell), Gl2Matrix(0, 1, 1, 0, ell)]
    return closure(gens, ell)


def borel(ell: int) -> SubgroupDesc:
    mu = primitive_root(ell)
    gens = [Gl2Matrix.diag(mu, 1, ell), Gl2Matrix.diag(1, mu, ell), Gl2Matrix(1, 1, 0, 1, ell)]
    return closure(gens, ell)


def _classify_projective(H: frozenset, ell: int):
    order = len(H)
    orders = {x: _porder(x, ell) for x in H}
    profile = set(orders.values())
    in_psl = all(_pdet_square(x, ell) for x in H)
    psl_part = sum(1 for x in H if _pdet_square(x, ell))
    if psl_part == _psl_order(ell):
        return "psl-containing", None, in_psl
    if order in profile:
        return "cyclic", order, in_psl
    if order % 2 == 0 and order >= 4:
        n = order // 2
        for c, oc in orders.items():
            if oc != n:
                continue
            cyc = set()
            y = _PID
            for _ in range(n):
                cyc.add(y)
                y = _pmul(y, c, ell)
            cinv = _pinv(c, ell)
            for t in H:
                if t in cyc or orders[t] != 2:
                    continue
                if _pmul(_pmul(t, c, ell), t, ell) == cinv:
                    return "dihedral", n, in_psl
    for kind, size, prof in (("A4", 12, {1, 2, 3}), ("S4", 24, {1, 2, 3, 4}), ("A5", 60, {1, 2, 3, 5})):
        if order == size and profile == prof:
            return kind, None, in_psl
    common = frozenset(projective_line(ell))
    for x in H:
        common &= _pfix(x, ell)
    if common:
        return "borel-reducible", None, in_psl
    raise RuntimeError(f"subgroup of order {order} fits no Dickson type (ell={ell})")


def proj_classify(G: SubgroupDesc) -> ProjClassification:
    H = G.projective_image()
    kind, n, in_psl = _classify_projective(H, G.ell)
    return ProjClassification(kind, n, in_psl, _det_group_closure(G), len(H))


def _det_group_closure(G: SubgroupDesc) -> tuple[int, ...]:
    ell = G.ell
    out = {1}
    frontier = [1]
    dets = set(G.det_group())
    while frontier:
        nxt = []
        for x in frontier:
            for d in dets:
                y = x * d % ell
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(out))


def is_exceptional_group(G: SubgroupDesc) -> bool:
    """Every element fixes a point of P^1(F_ell), the whole group fixes none."""
    if not all(char_poly_reducible(g) for g in G.elements):
        return False
    common = set(projective_line(G.ell))
    for g in G.elements:
        common = {P for P in common if g.act(P) == P}
        if not common:
            return True
    return False


def orbit_structure(g_or_G, ell: int | None = None) -> list[int]:
    """Sorted orbit sizes of an element or subgroup acting on P^1(F_ell)."""
    gens = list(g_or_G.elements) if isinstance(g_or_G, SubgroupDesc) else [g_or_G]
    ell = gens[0].ell if ell is None else ell
    remaining = set(projective_line(ell))
    sizes = []
    while remaining:
        start = min(remaining)
        orbit = {start}
        stack = [start]
        while stack:
            P = stack.pop()
            for g in gens:
                Q = g.act(P)
                if Q not in orbit:
                    orbit.add(Q)
                    stack.append(Q)
        remaining -= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


def _orbits_projective(H, ell):
    remaining = set(projective_line(ell))
    sizes = []
    while remaining:
        start = min(remaining)
        orbit = {_pact(x, start, ell) for x in H}
        remaining -= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


# ---------------------------------------------------------------- PGL_2 tables

class PGL2Tables:
    """Integer-indexed PGL_2(F_ell): multiplication, inverse, conjugation, fixed points."""

    def __init__(self, ell: int):
        if not is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        self.ell = ell
        keys = []
        for a in range(ell):
            for b in range(ell):
                for c in range(ell):
                    for d in range(ell):
                        t = (a, b, c, d)
                        if (a * d - b * c) % ell and next(v for v in t if v) == 1:
                            keys.append(t)
        self.keys = keys
        self.n = len(keys)
        E = np.array(keys, dtype=np.int64)
        self._code = np.full(ell**4, -1, dtype=np.int64)
        self._code[self._encode(E)] = np.arange(self.n)
        self.index = {k: i for i, k in enumerate(keys)}
        a, b, c, d = (E[:, k][:, None] for k in range(4))
        e, f, g, h = (E[:, k][None, :] for k in range(4))
        prod = np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=-1) % ell
        self.mul = self._lookup(prod.reshape(-1, 4)).reshape(self.n, self.n)
        self.identity = self.index[_PID]
        self.inv = np.argmax(self.mul == self.identity, axis=1)
        self.conj = self.mul[self.mul, self.inv[:, None]]  # conj[g, x] = g x g^-1
        pts = projective_line(ell)
        self.points = pts
        fixmask = np.zeros(self.n, dtype=np.int64)
        for i, k in enumerate(keys):
            m = 0
            for j, P in enumerate(pts):
                if _pact(k, P, ell) == P:
                    m |= 1 << j
            fixmask[i] = m
        self.fixmask = fixmask
        self.det_square = np.array([_pdet_square(k, ell) for k in keys])

    def _encode(self, E):
        ell = self.ell
        return ((E[:, 0] * ell + E[:, 1]) * ell + E[:, 2]) * ell + E[:, 3]

    def _lookup(self, M):
        ell = self.ell
        M = M % ell
        nz = M != 0
        first_idx = np.argmax(nz, axis=1)
        first = M[np.arange(len(M)), first_idx]
        invs = np.array([0] + [pow(x, -1, ell) for x in range(1, ell)], dtype=np.int64)
        M = M * invs[first][:, None] % ell
        return self._code[self._encode(M)]

    def close(self, gens, allowed=None):
        """Closure of generator indices; None if an element outside ``allowed`` appears."""
        mul = self.mul
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                row = mul[x]
                for g in gens:
                    y = int(row[g])
                    if y not in seen:
                        if allowed is not None and not allowed[y]:
                            return None
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def canonical(self, S) -> tuple[int, ...]:
        """Lexicographically least sorted element list over all conjugates of S."""
        cols = np.fromiter(S, dtype=np.int64)
        M = np.sort(self.conj[:, cols], axis=1)
        best = np.lexsort(M.T[::-1])[0]
        return tuple(int(v) for v in M[best])

    def is_conjugate_into(self, S, T) -> bool:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(T)] = True
        cols = np.fromiter(S, dtype=np.int64)
        return bool(np.any(np.all(mask[self.conj[:, cols]], axis=1)))

    def to_keys(self, S) -> frozenset:
        return frozenset(self.keys[i] for i in S)


@lru_cache(maxsize=4)
def pgl2_tables(ell: int) -> PGL2Tables:
    return PGL2Tables(ell)


def _pointwise_reducible_subgroups(ell: int) -> list[frozenset]:
    """All subgroups of PGL_2(F_ell), up to conjugacy, in which every element fixes a point.

    Lattice search from the trivial group, adjoining one element at a time; a
    closure that produces a fixed-point-free element is abandoned, which loses
    nothing since every supergroup would contain it too.
    """
    T = pgl2_tables(ell)
    allowed = T.fixmask != 0
    reducible = [int(i) for i in np.flatnonzero(allowed)]
    trivial = frozenset([T.identity])
    classes = {T.canonical(trivial): (trivial, ())}
    seen = {trivial}
    stack = [(trivial, ())]
    while stack:
        S, gens = stack.pop()
        for r in reducible:
            if r in S:
                continue
            new_gens = gens + (r,)
            U = T.close(new_gens, allowed)
            if U is None or U in seen:
                continue
            seen.add(U)
            key = T.canonical(U)
            if key in classes:
                continue
            classes[key] = (U, new_gens)
            stack.append((U, new_gens))
    log.debug("ell=%d: %d classes of pointwise-reducible subgroups", ell, len(classes))
    return [(classes[k][0], classes[k][1]) for k in sorted(classes, key=lambda k: (len(k), k))]


# ---------------------------------------------------------------- scan reports

@dataclass
class ScanEntry:
    group: SubgroupDesc
    classification: ProjClassification
    orbit_sizes: list[int]
    projective: frozenset = field(repr=False)

    @property
    def smallest_orbit(self) -> int:
        return min(self.orbit_sizes)

    @property
    def det_squares(self) -> bool:
        return self.classification.in_psl

    def to_json(self) -> dict:
        return {
            "order": self.group.order,
            "kind": self.classification.kind,
            "n": self.classification.n,
            "det_squares": self.det_squares,
            "orbit_sizes": self.orbit_sizes,
            "generators": [list(g.entries) for g in self.group.generators],
        }


@dataclass
class ExceptionalScanReport:
    ell: int
    mode: str
    entries: list[ScanEntry]
    violations: list[str] = field(default_factory=list)
    exhaustive: bool = True

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "mode": self.mode,
            "exhaustive": self.exhaustive,
            "groups": [e.to_json() for e in self.entries],
            "violations": list(self.violations),
        }


def _entry_from_projective(H: frozenset, gens_keys, ell: int) -> ScanEntry:
    lifts = [Gl2Matrix(*k, ell) for k in gens_keys]
    G = scalar_saturate(lifts, ell)
    G = SubgroupDesc(ell, tuple(lifts) + (Gl2Matrix.scalar(primitive_root(ell), ell),), G.elements)
    kind, n, in_psl = _classify_projective(H, ell)
    cls = ProjClassification(kind, n, in_psl, _det_group_closure(G), len(H))
    return ScanEntry(G, cls, _orbits_projective(H, ell), H)


def _is_exceptional_projective(H, ell) -> bool:
    common = frozenset(projective_line(ell))
    for x in H:
        fx = _pfix(x, ell)
        if not fx:
            return False
        common &= fx
    return not common


def _mode_filter(entry: ScanEntry, mode: str) -> bool:
    if mode == "split":
        return not entry.det_squares
    if mode == "sl2":
        return entry.det_squares
    return True


def _targeted_candidates(ell: int):
    """Dihedral subgroups of the split-Cartan normalizer plus A4/S4/A5 images."""
    out = []
    mu = primitive_root(ell)
    nonsq = next(a for a in range(2, ell) if not is_square_mod(a, ell))
    for n in range(2, ell):
        if (ell - 1) % n:
            continue
        rot = _pnorm((pow(mu, (ell - 1) // n, ell), 0, 0, 1), ell)
        for a in sorted({1, nonsq}):
            gens = (rot, _pnorm((0, a, 1, 0), ell))
            out.append((_pclose(gens, ell), gens))
    for kind in ("A4", "S4", "A5"):
        found = exceptional_type_subgroup(ell, kind, require_reducible=True)
        if found is not None:
            out.append(found)
    uniq = {}
    for H, gens in out:
        uniq.setdefault(H, gens)
    return list(uniq.items())


def exceptional_type_subgroup(ell: int, kind: str, require_reducible: bool = False):
    """A subgroup of PSL_2(F_ell) isomorphic to A4, S4 or A5, as (elements, generators).

    Uses the (2, 3, k) presentation: a of order 2, b of order 3, ab of order k
    with k = 3, 4, 5.  Returns None if no such pair exists.
    """
    k = {"A4": 3, "S4": 4, "A5": 5}[kind]
    size = {"A4": 12, "S4": 24, "A5": 60}[kind]
    if ell < 5:
        return None
    b = _pnorm((0, -1, 1, 1), ell)  # order 3 in PSL_2
    # involutions of PSL_2 have trace 0; conjugates of [[0,-1],[1,0]] with det 1
    for x in range(ell):
        for y in range(ell):
            # a = [[x, y], [z, -x]] with -x^2 - y z = 1
            for z in range(ell):
                if (-x * x - y * z - 1) % ell:
                    continue
                a = _pnorm((x, y, z, -x), ell)
                if _porder(_pmul(a, b, ell), ell) != k:
                    continue
                H = _pclose((a, b), ell)
                if len(H) != size:
                    continue
                if require_reducible and not all(_pfix(h, ell) for h in H):
                    continue
                return H, (a, b)
    return None


def enumerate_exceptional(ell: int, mode: str = "all", cap: int = EXHAUSTIVE_CAP) -> ExceptionalScanReport:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if ell <= cap:
        pairs = [(pgl2_tables(ell).to_keys(H), [pgl2_tables(ell).keys[g] for g in gens])
                 for H, gens in _pointwise_reducible_subgroups(ell)]
        exhaustive = True
    elif ell <= 200:
        pairs = _targeted_candidates(ell)
        exhaustive = False
    else:
        raise SizeCapExceeded(f"ell={ell} exceeds the scan limit")
    entries = []
    for H, gens in pairs:
        if not _is_exceptional_projective(H, ell):
            continue
        entry = _entry_from_projective(H, gens, ell)
        if _mode_filter(entry, mode):
            entries.append(entry)
    entries.sort(key=lambda e: (e.group.order, e.classification.kind, sorted(e.projective)))
    return ExceptionalScanReport(ell, mode, entries, exhaustive=exhaustive)


# ---------------------------------------------------------------- lemma checks

def _contained_in_normalizer(entry: ScanEntry, ell: int) -> bool:
    N = split_cartan_normalizer_image(ell)
    if ell <= EXHAUSTIVE_CAP:
        T = pgl2_tables(ell)
        return T.is_conjugate_into([T.index[k] for k in entry.projective], [T.index[k] for k in N])
    # targeted candidates are built inside the normalizer
    return entry.projective <= N


def _cyclic_core(H, ell, n):
    """The unique index-2 cyclic subgroup of a dihedral group with n odd."""
    for x in H:
        if _porder(x, ell) == n:
            return _pclose((x,), ell)
    return frozenset()


def _check_dihedral_common(entry, ell, tag, out):
    if not _contained_in_normalizer(entry, ell):
        out.append(f"{tag}: dihedral image not conjugate into the split-Cartan normalizer")
    elif len(entry.projective) >= 2 * (ell - 1):
        out.append(f"{tag}: not properly contained in the split-Cartan normalizer")
    if 2 not in entry.orbit_sizes:
        out.append(f"{tag}: no orbit of size 2 on P^1 (orbits {entry.orbit_sizes})")


def verify_lemma_split(ell: int, report: ExceptionalScanReport | None = None) -> list[str]:
    """Violations among exceptional groups whose determinants are not all squares."""
    report = report or enumerate_exceptional(ell, "split")
    out = []
    for entry in report.entries:
        if entry.det_squares:
            continue
        cls = entry.classification
        tag = f"ell={ell} order={entry.group.order} kind={cls.kind}"
        if ell % 4 != 3:
            out.append(f"{tag}: ell is not 3 mod 4")
        if cls.kind != "dihedral":
            out.append(f"{tag}: projective image is not dihedral")
            continue
        n = cls.n
        if not (n > 1 and n % 2 == 1 and ((ell - 1) // 2) % n == 0):
            out.append(f"{tag}: n={n} is not an odd divisor > 1 of (ell-1)/2")
        _check_dihedral_common(entry, ell, tag, out)
        if n % 2 == 1:
            core = _cyclic_core(entry.projective, ell, n)
            bad = [g for g in entry.group.elements
                   if g.projective_key() in core and not is_square_mod(g.det, ell)]
            if bad:
                out.append(f"{tag}: preimage of the cyclic part has a non-square determinant")
        if ((ell - 1) ** 2) % entry.group.order:
            out.append(f"{tag}: |G|={entry.group.order} does not divide (ell-1)^2")
    return out


def verify_lemma_sl2(ell: int, report: ExceptionalScanReport | None = None,
                     flags: list[str] | None = None) -> list[str]:
    """Violations among exceptional groups with all determinants square."""
    report = report or enumerate_exceptional(ell, "sl2")
    out = []
    for entry in report.entries:
        if not entry.det_squares:
            continue
        cls = entry.classification
        tag = f"ell={ell} order={entry.group.order} kind={cls.kind}"
        if ell % 4 != 1:
            out.append(f"{tag}: ell is not 1 mod 4")
        if cls.kind == "dihedral":
            if not (cls.n > 1 and (ell - 1) % cls.n == 0):
                out.append(f"{tag}: n={cls.n} does not divide ell-1")
            before = len(out)
            _check_dihedral_common(entry, ell, tag, out)
            if flags is not None and len(out) > before:
                flags.extend(out[before:])
        elif cls.kind in ("A4", "S4", "A5"):
            modulus = {"A4": 12, "S4": 24, "A5": 60}[cls.kind]
            if ell % modulus != 1:
                out.append(f"{tag}: ell is not 1 mod {modulus}")
        else:
            out.append(f"{tag}: projective image is {cls.kind}")
    return out


def lemma_summary(ell: int) -> dict:
    report = enumerate_exceptional(ell, "all")
    split = verify_lemma_split(ell, report)
    sl2 = verify_lemma_sl2(ell, report)
    kinds = Counter((e.classification.kind, e.det_squares) for e in report.entries)
    return {
        "ell": ell,
        "exceptional_groups": len(report.entries),
        "kinds": {f"{k}/{'sl2' if sq else 'split'}": v for (k, sq), v in sorted(kinds.items())},
        "split_violations": split,
        "sl2_violations": sl2,
    }


__all__ = [
    "SubgroupDesc", "ProjClassification", "ExceptionalScanReport", "ScanEntry",
    "closure", "scalar_saturate", "proj_classify", "is_exceptional_group", "orbit_structure",
    "enumerate_exceptional", "verify_lemma_split", "verify_lemma_sl2", "lemma_summary",
    "split_cartan_normalizer", "split_cartan_normalizer_image", "borel",
    "exceptional_type_subgroup", "PGL2Tables", "pgl2_tables",
]
