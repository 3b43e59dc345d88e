from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from exceptional_pairs.ellcurves import (
    BadReduction, EllipticCurveDesc, FrobeniusData, QuadFieldElem, count_points_fp, count_points_fp2,
    curve_from_j, elkies7_j, elkies7_j_at_infinity, elkies7_js, elkies7_point_search,
    global_isogeny_test, hasse_ok, k_roots_and_quadratics, local_isogeny_test, local_scan,
    local_test_via_matrix, on_e7, primes_above, quadratic_twist, rational_roots_and_quadratics,
    reduce_and_count, squarefree_part,
)
from exceptional_pairs.ellcurves.field import sqrt_mod_prime
from exceptional_pairs.gl2core import is_prime, primes_between

J_RATIONAL_PAIR = Fraction(2268945, 128)
FIELDS = [-7, -3, -1, 2, 5]
rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)


def x0_5_j(s):
    """j-invariants on X_0(5): every such curve has a rational 5-isogeny."""
    s = Fraction(s)
    return (s * s + 250 * s + 3125) ** 3 / s**5


@st.composite
def field_elems(draw, D=None):
    D = D if D is not None else draw(st.sampled_from(FIELDS))
    return QuadFieldElem(draw(rationals), draw(rationals), D)


# ---------------------------------------------------------------- field arithmetic


@given(st.sampled_from(FIELDS).flatmap(lambda D: st.tuples(*(field_elems(D) for _ in range(3)))))
def test_field_axioms(t):
    x, y, z = t
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert (x * y).norm() == x.norm() * y.norm()
    if x:
        assert x * x.inverse() == 1
        assert (x * y) / x == y


@given(field_elems())
def test_sqrt_of_squares(x):
    r = (x * x).sqrt()
    assert r is not None and r * r == x * x


def test_sqrt_nonsquare():
    assert QuadFieldElem(2, 0, 5).sqrt() is None
    assert QuadFieldElem(5, 0, 5).sqrt() == QuadFieldElem(0, 1, 5)


def test_field_validation():
    with pytest.raises(ValueError):
        QuadFieldElem(1, 1, 8)
    with pytest.raises(ValueError):
        QuadFieldElem(1, 1, 1)
    with pytest.raises(ValueError):
        QuadFieldElem(1, 1, 5) + QuadFieldElem(1, 1, 2)


def test_squarefree_part():
    assert squarefree_part(-196) == -1 and squarefree_part(72) == 2 and squarefree_part(-7) == -7


@given(st.sampled_from(primes_between(3, 400)), st.integers(1, 10**6))
def test_sqrt_mod_prime(p, a):
    a = a * a % p
    r = sqrt_mod_prime(a, p)
    assert r * r % p == a


# ---------------------------------------------------------------- point counting


def brute_count(A, B, p):
    return 1 + sum(1 for x in range(p) for y in range(p) if (y * y - x**3 - A * x - B) % p == 0)


def brute_count_fp2(A, B, p, n):
    elems = [(u, v) for u in range(p) for v in range(p)]

    def mul(x, y):
        return ((x[0] * y[0] + n * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    squares = {}
    for y in elems:
        s = mul(y, y)
        squares[s] = squares.get(s, 0) + 1
    total = 1
    for x in elems:
        f = mul(mul(x, x), x)
        ax = mul(A, x)
        f = ((f[0] + ax[0] + B[0]) % p, (f[1] + ax[1] + B[1]) % p)
        total += squares.get(f, 0)
    return total


def test_small_example():
    (F,) = reduce_and_count(EllipticCurveDesc.over(1, 0), 3)
    assert (F.N, F.a) == (4, 0)


@given(st.sampled_from(primes_between(3, 60)), st.integers(0, 10**4), st.integers(0, 10**4))
@settings(max_examples=60)
def test_count_matches_brute_force(p, A, B):
    assert count_points_fp(A % p, B % p, p) == brute_count(A % p, B % p, p)


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (7, 3), (11, 2)])
def test_fp2_count_matches_brute_force(p, n):
    for A, B in [((1, 0), (2, 1)), ((0, 1), (1, 0)), ((2, 2), (3 % p, 1))]:
        assert count_points_fp2(A, B, p, n) == brute_count_fp2(A, B, p, n)


@pytest.mark.parametrize("p", [3, 11, 13, 17, 23, 37])
def test_fp2_count_of_rational_curve(p):
    """For a curve over F_p, a_{p^2} = a_p^2 - 2p."""
    A, B = -56 % p, 4848 % p
    n = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1)
    a_p = p + 1 - count_points_fp(A, B, p)
    assert count_points_fp2((A, 0), (B, 0), p, n) == p * p + 1 - (a_p * a_p - 2 * p)


def test_hasse_on_remark_curve():
    E = EllipticCurveDesc.over(-56, 4848)
    for p in primes_between(3, 300):
        for F in reduce_and_count(E, p):
            if isinstance(F, FrobeniusData):
                assert hasse_ok(F)


def test_bad_reduction_marker():
    E = EllipticCurveDesc.over(-56, 4848)
    disc = int((E.discriminant).a)
    p = next(q for q in primes_between(3, 1000) if disc % q == 0)
    (F,) = reduce_and_count(E, p)
    assert isinstance(F, BadReduction)


def test_reduce_preconditions():
    E = EllipticCurveDesc.over(1, 1)
    with pytest.raises(ValueError):
        reduce_and_count(E, 2)
    assert reduce_and_count(EllipticCurveDesc.over(1, 1, 5), 5) == []


def test_primes_above():
    assert [P.f for P in primes_above(11, 5)] == [1, 1]
    assert [P.norm for P in primes_above(7, 5)] == [49]
    assert primes_above(5, 5) is None


def test_singular_curve_rejected():
    with pytest.raises(ValueError):
        EllipticCurveDesc.over(-3, 2)


# ---------------------------------------------------------------- local tests


@given(st.sampled_from([2, 3, 5, 7, 11, 13]), st.sampled_from(primes_between(3, 500)), st.data())
def test_local_test_matches_companion_matrix(ell, p, data):
    assume(p != ell)
    bound = int(2 * p**0.5)
    a = data.draw(st.integers(-bound, bound))
    F = FrobeniusData(p, 1, p, p + 1 - a)
    assert local_isogeny_test(F, ell) == local_test_via_matrix(F, ell)


def test_local_test_examples():
    assert local_isogeny_test(FrobeniusData(11, 1, 11, 0), 5)  # a = q + 1 mod 5 pattern: N = 0 mod 5
    assert not local_isogeny_test(FrobeniusData(11, 1, 11, 12), 7)  # a = 0, -44 nonsquare mod 7
    with pytest.raises(ValueError):
        local_isogeny_test(FrobeniusData(7, 1, 7, 8), 7)


def test_local_scan_requires_bound():
    with pytest.raises(ValueError):
        local_scan(curve_from_j(J_RATIONAL_PAIR), 7, 50)


def test_scan_json_shape():
    rep = local_scan(curve_from_j(J_RATIONAL_PAIR), 11, 500).to_json()
    assert set(rep) >= {"ell", "field", "bound", "pass_fraction", "failures", "skipped"}
    assert rep["failures"] and {"p", "q", "a"} <= set(rep["failures"][0])


@given(rationals, st.sampled_from([-7, -3, -1, 2, 3, 5, 6]))
@settings(max_examples=10, deadline=None)
def test_twist_invariance(j, d):
    assume(j not in (0, 1728))
    E = curve_from_j(j)
    Ed = quadratic_twist(E, d)
    assert Ed.j_invariant == E.j_invariant
    for ell in (5, 7):
        v1 = {r[0]: r[4] for r in local_scan(E, ell, 400).records}
        v2 = {r[0]: r[4] for r in local_scan(Ed, ell, 400).records}
        common = set(v1) & set(v2)
        assert common and all(v1[k] == v2[k] for k in common)


def test_twist_by_one_is_identity():
    E = EllipticCurveDesc.over(-56, 4848)
    assert quadratic_twist(E, 1) == E


# ---------------------------------------------------------------- curves from j


@given(rationals)
def test_curve_from_j_round_trip(j):
    assume(j not in (0, 1728))
    assert curve_from_j(j).j_invariant == j


@given(field_elems(-7))
@settings(max_examples=30)
def test_curve_from_j_round_trip_quadratic(j):
    assume(j != 0 and j != 1728)
    assert curve_from_j(j).j_invariant == j


@pytest.mark.parametrize("j", [0, 1728])
def test_curve_from_j_excluded(j):
    with pytest.raises(ValueError):
        curve_from_j(j)


# ---------------------------------------------------------------- global tests


@pytest.mark.parametrize("s", [1, 2, -3, Fraction(7, 2), 125])
def test_x0_5_points_are_isogenous(s):
    j = x0_5_j(s)
    assume_ok = j not in (0, 1728)
    assert assume_ok
    g = global_isogeny_test(j, 5)
    assert g.over_K and g.over_ext
    assert local_scan(curve_from_j(j), 5, 1000).pass_fraction == 1.0


def test_rational_pair_globally():
    g = global_isogeny_test(J_RATIONAL_PAIR, 7)
    assert not g.over_K and g.over_ext
    q = g.witness_ext
    assert q.square_class == -7


def test_quadratic_field_routes_agree():
    # over Q(sqrt -7) the conjugate pair of roots becomes rational
    g = global_isogeny_test(J_RATIONAL_PAIR, 7, -7)
    assert g.over_K and len(g.roots) == 2
    # over Q(sqrt 2) the K(sqrt -7) witness is a quadratic factor over K
    g2 = global_isogeny_test(J_RATIONAL_PAIR, 7, 2)
    assert not g2.over_K and g2.over_ext


def test_cm_j_with_repeated_structure():
    # j = -3375 has CM by the maximal order of Q(sqrt -7); 2 splits there
    g = global_isogeny_test(-3375, 2)
    assert g.over_K and QuadFieldElem(16581375) in g.roots


def test_k_roots_certified():
    # (Y - (1 + sqrt 5))(Y^2 - 3) over Q(sqrt 5)
    D = 5
    r = QuadFieldElem(1, 1, D)
    f = [QuadFieldElem(3, 0, D) * r, QuadFieldElem(-3, 0, D), -r, QuadFieldElem(1, 0, D)]
    roots, quads = k_roots_and_quadratics(f, D)
    assert roots == [r]
    assert len(quads) == 1 and quads[0].t == -3 and quads[0].s == 0


def test_rational_quadratics():
    # (Y^2 + 7)(Y - 3/2)
    roots, quads = rational_roots_and_quadratics([Fraction(-21, 2), 7, Fraction(-3, 2), 1])
    assert roots == [Fraction(3, 2)] and quads[0].square_class == -7


def test_global_preconditions():
    with pytest.raises(ValueError):
        global_isogeny_test(1728, 7)


@given(st.integers(-50, 50).filter(lambda s: s != 0))
@settings(max_examples=8, deadline=None)
def test_global_implies_local(s):
    j = x0_5_j(s)
    assume(j not in (0, 1728))
    assert global_isogeny_test(j, 5).over_K
    assert local_scan(curve_from_j(j), 5, 300).pass_fraction == 1.0


# ---------------------------------------------------------------- the level-7 curve


def test_two_torsion_point():
    assert on_e7(-49, 0)
    with pytest.raises(ValueError):
        elkies7_j(-49, 0)


def test_point_at_infinity_gives_rational_pair():
    assert elkies7_j_at_infinity() == J_RATIONAL_PAIR


def test_search_over_q():
    pts = elkies7_point_search(49)
    assert any(P.u == -49 and P.v == 0 for P in pts)
    assert all(on_e7(P.u, P.v) for P in pts)
    assert [j for _, j in elkies7_js(60)] == [J_RATIONAL_PAIR]


def test_search_over_gaussian_field():
    pts = elkies7_point_search(60, -1, irrational=False)
    assert all(on_e7(P.u, P.v) for P in pts)
    finite = [P for P in pts if P.v != 0]
    assert finite
    P = finite[0]
    j = elkies7_j(P.u, P.v)
    assert local_scan(curve_from_j(j), 7, 800).pass_fraction == 1.0
    g = global_isogeny_test(j, 7)
    assert not g.over_K and g.over_ext


def test_search_precondition():
    with pytest.raises(ValueError):
        elkies7_point_search(0)
