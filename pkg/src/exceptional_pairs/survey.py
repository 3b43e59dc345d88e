"""The bound on ell, the semistability table, and the end-to-end survey of j-invariants."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .cmtools import cm_guard
from .ellcurves import (
    EllipticCurveDesc,
    QuadFieldElem,
    curve_from_j,
    elkies7_js,
    global_isogeny_test,
    local_scan,
)
from .ellcurves.field import field_discriminant, is_squarefree
from .gl2core import is_prime, primes_between

log = logging.getLogger(__name__)

DEFAULT_BOUND = 10**4
CLASSES = ("exceptional-candidate", "globally-isogenous", "locally-failing")

# the curve y^2 = x^3 - 56x + 4848, whose 5-adic image over Q(sqrt 5) is the index-2 subgroup
FIVE_CURVE = (-56, 4848)


@dataclass(frozen=True)
class NumberFieldDesc:
    d: int
    disc: int
    D: int | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree must be at least 1")
        if self.disc == 0:
            raise ValueError("discriminant must be nonzero")
        if self.d == 1:
            if self.disc != 1:
                raise ValueError("Q has discriminant 1")
            object.__setattr__(self, "D", 1)
        if self.D is not None and self.D != 1:
            if self.d != 2 or not is_squarefree(self.D):
                raise ValueError(f"quadratic realization sqrt({self.D}) needs d = 2 and D squarefree")
            if field_discriminant(self.D) != self.disc:
                raise ValueError(f"Q(sqrt {self.D}) has discriminant {field_discriminant(self.D)}, not {self.disc}")

    @classmethod
    def rationals(cls) -> "NumberFieldDesc":
        return cls(1, 1, 1)

    @classmethod
    def quadratic(cls, D: int) -> "NumberFieldDesc":
        if D == 1:
            return cls.rationals()
        return cls(2, field_discriminant(D), D)

    def to_json(self) -> dict:
        return {"degree": self.d, "disc": self.disc, "D": self.D}


def exceptional_bound(K: NumberFieldDesc) -> int:
    """ell_K = max(|disc|, 6d + 1)."""
    return max(abs(K.disc), 6 * K.d + 1)


def theorem4_window(d) -> list[int]:
    """Primes ell = 3 mod 4 with 7 <= ell <= 6d + 1."""
    if isinstance(d, NumberFieldDesc):
        d = d.d
    if d < 1:
        raise ValueError("degree must be at least 1")
    return [p for p in primes_between(7, 6 * d + 1) if p % 4 == 3]


def semistable_degree(j_class: str, ell: int) -> int:
    """Degree d' of the extension giving semistable reduction, by the class of j mod lambda."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if j_class not in ("generic", "0", "1728"):
        raise ValueError(f"unknown j class {j_class!r}")
    if j_class == "1728" and ell <= 3:
        j_class = "0"  # 1728 = 2^6 3^3 vanishes mod 2 and mod 3
    if j_class == "generic":
        return 1
    if j_class == "1728":
        return 2
    return {2: 12, 3: 6}.get(ell, 3)


def sqrt_ell_star_in(K: NumberFieldDesc, ell: int) -> tuple[bool, bool]:
    """(whether sqrt((-1/ell) ell) lies in K, whether that answer is only a proxy)."""
    if ell == 2:
        return False, False
    star = ell if ell % 4 == 1 else -ell
    if K.D is not None:
        return K.D == star, False
    # conservative proxy: ell must ramify in K
    return K.disc % ell == 0, True


def as_field_elem(j, D: int) -> QuadFieldElem:
    if isinstance(j, QuadFieldElem):
        return j.in_field(D) if j.b == 0 and D != 1 else j
    return QuadFieldElem(Fraction(j), 0, D)


@dataclass
class SurveyVerdict:
    ell: int
    j: QuadFieldElem
    D: int
    source: str
    pass_fraction: float
    good_primes: int
    first_failure: dict | None
    over_K: bool
    over_ext: bool
    witness_ext: dict | None
    cm_guard: bool

    @property
    def classification(self) -> str:
        if self.over_K:
            return "globally-isogenous"
        if self.pass_fraction == 1.0:
            return "exceptional-candidate"
        return "locally-failing"

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "j": self.j.to_json(),
            "source": self.source,
            "pass_fraction": self.pass_fraction,
            "good_primes": self.good_primes,
            "first_failure": self.first_failure,
            "global_over_K": self.over_K,
            "global_over_K_sqrt_minus_ell": self.over_ext,
            "witness_ext": self.witness_ext,
            "classification": self.classification,
            "cm_guard": self.cm_guard,
        }


@dataclass
class SurveyReport:
    field: NumberFieldDesc
    ell: int
    bound: int
    verdicts: list[SurveyVerdict] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)

    def candidates(self) -> list[SurveyVerdict]:
        return [v for v in self.verdicts if v.classification == "exceptional-candidate"]

    def violations(self) -> list[str]:
        """Global consistency checks on the verdicts."""
        out = []
        in_K, _ = sqrt_ell_star_in(self.field, self.ell)
        for v in self.verdicts:
            if v.classification != "exceptional-candidate":
                continue
            if self.ell in (2, 3):
                out.append(f"j={v.j}: exceptional candidate at ell={self.ell}")
            if self.ell % 4 == 3 and not in_K and not v.over_ext:
                out.append(f"j={v.j}: candidate without an isogeny over K(sqrt -{self.ell})")
        return out

    def to_json(self) -> dict:
        counts = {c: sum(1 for v in self.verdicts if v.classification == c) for c in CLASSES}
        return {
            "field": self.field.to_json(),
            "ell": self.ell,
            "bound": self.bound,
            "counts": counts,
            "verdicts": [v.to_json() for v in self.verdicts],
            "errors": self.errors,
            "violations": self.violations(),
        }


def survey_one(K: NumberFieldDesc, ell: int, j, B: int = DEFAULT_BOUND, source: str = "input",
               curve: EllipticCurveDesc | None = None) -> SurveyVerdict:
    D = K.D if K.D is not None else 1
    j = as_field_elem(j, D)
    E = curve if curve is not None else curve_from_j(j, D)
    scan = local_scan(E, ell, B)
    g = global_isogeny_test(j, ell, D)
    fails = scan.failures
    first = {"p": fails[0][1], "q": fails[0][2], "a": fails[0][3], "prime": fails[0][0]} if fails else None
    return SurveyVerdict(
        ell=ell, j=j, D=D, source=source,
        pass_fraction=scan.pass_fraction, good_primes=scan.good, first_failure=first,
        over_K=g.over_K, over_ext=g.over_ext,
        witness_ext=g.to_json()["witness_ext"], cm_guard=cm_guard(ell, K.d),
    )


def survey(K: NumberFieldDesc, ell: int, js, B: int = DEFAULT_BOUND) -> SurveyReport:
    """Classify each j (a value or a (label, value) pair); failures on one j are recorded, not raised."""
    if K.D is None:
        raise ValueError("the survey needs a quadratic realization of K")
    if not is_prime(ell) or not 2 <= ell <= exceptional_bound(K):
        raise ValueError(f"ell = {ell} is not a prime in [2, {exceptional_bound(K)}]")
    report = SurveyReport(K, ell, B)
    for item in js:
        label, j = item if isinstance(item, tuple) else ("input", item)
        try:
            report.verdicts.append(survey_one(K, ell, j, B, label))
        except (ValueError, ArithmeticError) as exc:
            log.warning("survey: j=%s failed: %s", j, exc)
            report.errors.append({"j": str(j), "source": label, "error": str(exc)})
    return report


def survey_elkies(K: NumberFieldDesc, H: int, B: int = DEFAULT_BOUND) -> SurveyReport:
    """Survey at ell = 7 of the j-invariants coming from points of E' found up to height H."""
    D = K.D if K.D is not None else 1
    return survey(K, 7, elkies7_js(H, D), B)


def five_curve(D: int = 1) -> EllipticCurveDesc:
    return EllipticCurveDesc.over(*FIVE_CURVE, D=D)


def five_infinitude_check(K: NumberFieldDesc, B: int = DEFAULT_BOUND) -> dict:
    """Evidence for the ell = 5 dichotomy: infinitely many pairs iff sqrt 5 lies in K."""
    from .grouplab import enumerate_exceptional
    from .modcurves import cusp_galois_stability

    cusp = cusp_galois_stability()
    in_K, proxy = sqrt_ell_star_in(K, 5)
    out = {"field": K.to_json(), "sqrt5_in_K": in_K, "proxy": proxy,
           "cusp_certificate": cusp["stable"], "witness": None, "emptiness": None}
    if in_K:
        E = five_curve(K.D)
        v = survey_one(K, 5, E.j_invariant, B, "y^2 = x^3 - 56x + 4848", curve=E)
        out["witness"] = v.to_json()
        out["verdict"] = "infinitely-many" if cusp["stable"] and v.classification == "exceptional-candidate" else "unresolved"
    else:
        report = enumerate_exceptional(5, "all")
        nonsquare = [e.to_json() for e in report.entries if not e.det_squares]
        out["emptiness"] = {"exceptional_groups": len(report.entries),
                            "with_nonsquare_determinant": len(nonsquare)}
        out["verdict"] = "none" if not nonsquare else "unresolved"
    return out
