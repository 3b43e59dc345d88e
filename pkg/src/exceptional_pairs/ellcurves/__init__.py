"""Elliptic curves over Q and quadratic fields."""

from .curves import (
    BadReduction,
    EllipticCurveDesc,
    FrobeniusData,
    LocalScanReport,
    ResiduePrime,
    count_points_fp,
    count_points_fp2,
    curve_from_j,
    frobenius_matrix,
    hasse_ok,
    local_isogeny_test,
    local_scan,
    local_test_via_matrix,
    primes_above,
    quadratic_twist,
    reduce_and_count,
)
from .elkies import (
    T_AT_INFINITY,
    E7Point,
    elkies7_j,
    elkies7_j_at_infinity,
    elkies7_js,
    elkies7_point_search,
    elkies7_t,
    j_from_t,
    on_e7,
)
from .field import QuadFieldElem, rational_sqrt, square_class, squarefree_part
from .globaltest import (
    GlobalTestResult,
    QuadraticFactor,
    global_isogeny_test,
    k_roots_and_quadratics,
    rational_roots_and_quadratics,
)

__all__ = [
    "BadReduction", "EllipticCurveDesc", "FrobeniusData", "LocalScanReport", "ResiduePrime",
    "count_points_fp", "count_points_fp2", "curve_from_j", "frobenius_matrix", "hasse_ok",
    "local_isogeny_test", "local_scan", "local_test_via_matrix", "primes_above", "quadratic_twist",
    "reduce_and_count", "T_AT_INFINITY", "elkies7_j_at_infinity", "elkies7_js", "E7Point", "elkies7_j", "elkies7_point_search", "elkies7_t", "j_from_t",
    "on_e7", "QuadFieldElem", "rational_sqrt", "square_class", "squarefree_part",
    "GlobalTestResult", "QuadraticFactor", "global_isogeny_test", "k_roots_and_quadratics",
    "rational_roots_and_quadratics",
]
