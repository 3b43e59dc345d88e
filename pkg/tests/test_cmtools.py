from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exceptional_pairs.cmtools import (
    BQF, class_number, cm_guard, cm_ratio_upper_bound, is_fundamental, isogenous_order_ratio_check,
    reduced_forms, unit_index,
)
from exceptional_pairs.gl2core import legendre

FUNDAMENTAL = [-3, -4, -7, -8, -11, -15, -19, -20]
discs = st.integers(3, 3000).map(lambda n: -n).filter(lambda D: D % 4 in (0, 1))


def brute_class_number(D):
    """Count reduced forms without using the a <= sqrt(|D|/3) shortcut."""
    n = 0
    for a in range(1, -D + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            f = BQF(a, b, c)
            if c >= a and f.is_reduced() and f.is_primitive():
                n += 1
    return n


def test_examples():
    assert class_number(-4) == 1 and class_number(-196) == 4
    assert class_number(-8) == 1 and class_number(-200) == 6
    assert [class_number(D) for D in (-23, -47, -71)] == [3, 5, 7]
    assert class_number(-163) == 1


@given(discs)
def test_forms_reduced_primitive(D):
    for f in reduced_forms(D):
        assert f.disc == D and f.is_reduced() and f.is_primitive()


@given(st.integers(3, 400).map(lambda n: -n).filter(lambda D: D % 4 in (0, 1)))
def test_brute_force_oracle(D):
    assert class_number(D) == brute_class_number(D)


@pytest.mark.parametrize("D", [-5, 0, 7, -2])
def test_invalid_discriminant(D):
    with pytest.raises(ValueError):
        reduced_forms(D)


def test_fundamental():
    assert all(is_fundamental(D) for D in FUNDAMENTAL)
    assert not any(is_fundamental(D) for D in (-12, -16, -27, -196))
    assert (unit_index(-3), unit_index(-4), unit_index(-7)) == (3, 2, 1)


@pytest.mark.parametrize("D", FUNDAMENTAL)
@pytest.mark.parametrize("ell", [3, 5, 7])
def test_ratio_grid(D, ell):
    if D % ell == 0:
        with pytest.raises(ValueError):
            isogenous_order_ratio_check(D, ell)
        return
    rep = isogenous_order_ratio_check(D, ell)
    assert rep.ratio_counted == Fraction(class_number(ell * ell * D), class_number(D))
    assert rep.ratio_formula == Fraction(ell - legendre(D, ell), unit_index(D))
    assert rep.match
    if unit_index(D) == 1:
        assert rep.inequality and rep.ratio_counted >= ell - 1
    else:
        assert rep.inequality is None


def test_ratio_examples():
    r = isogenous_order_ratio_check(-4, 7)
    assert r.ratio_counted == 4 == Fraction(1, 2) * (7 + 1)
    r = isogenous_order_ratio_check(-8, 5)
    assert r.ratio_counted == 6 and r.inequality
    assert set(r.to_json()) >= {"D", "ell", "ratio_counted", "ratio_formula", "match"}


def test_ratio_preconditions():
    with pytest.raises(ValueError):
        isogenous_order_ratio_check(-12, 5)
    with pytest.raises(ValueError):
        isogenous_order_ratio_check(-4, 9)


def test_cm_guard():
    assert cm_guard(7, 1) and not cm_guard(5, 2) and cm_guard(13, 2)
    assert cm_ratio_upper_bound(3) == 6
    with pytest.raises(ValueError):
        cm_guard(7, 0)


@given(st.integers(1, 50), st.integers(2, 400))
def test_cm_guard_threshold(d, ell):
    assert cm_guard(ell, d) == (ell > 2 * d + 1)


def test_reduction_bound_is_sharp_enough():
    # every reduced form has a <= sqrt(|D|/3)
    for D in range(-3, -2000, -1):
        if D % 4 in (0, 1):
            assert all(f.a <= isqrt(-D // 3) for f in reduced_forms(D))
