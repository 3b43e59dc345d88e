import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exceptional_pairs.ellcurves import QuadFieldElem
from exceptional_pairs.survey import (
    CLASSES, NumberFieldDesc, SurveyVerdict, exceptional_bound, five_curve, five_infinitude_check,
    semistable_degree, sqrt_ell_star_in, survey, survey_elkies, survey_one, theorem4_window,
)

Q = NumberFieldDesc.rationals()
J7 = Fraction(2268945, 128)


def test_bound_examples():
    assert exceptional_bound(Q) == 7
    assert exceptional_bound(NumberFieldDesc.quadratic(-1)) == 13
    assert exceptional_bound(NumberFieldDesc.quadratic(5)) == 13
    assert exceptional_bound(NumberFieldDesc(3, -23)) == 23


@given(st.integers(2, 20), st.integers(1, 10**4), st.integers(0, 5), st.integers(0, 100))
def test_bound_monotone(d, disc, dd, ddisc):
    assert exceptional_bound(NumberFieldDesc(d, disc)) <= exceptional_bound(NumberFieldDesc(d + dd, disc + ddisc))
    assert exceptional_bound(NumberFieldDesc(d, -disc)) <= exceptional_bound(NumberFieldDesc(d, -disc - ddisc))


def test_field_validation():
    with pytest.raises(ValueError):
        NumberFieldDesc(1, 5)
    with pytest.raises(ValueError):
        NumberFieldDesc(2, -4, -2)
    with pytest.raises(ValueError):
        NumberFieldDesc(0, 1)
    assert NumberFieldDesc.quadratic(-7).disc == -7
    assert NumberFieldDesc.quadratic(2).disc == 8


def test_window():
    assert theorem4_window(1) == [7]
    assert theorem4_window(2) == [7, 11]
    assert theorem4_window(3) == [7, 11, 19]


def test_semistable_table():
    assert semistable_degree("generic", 101) == 1
    assert semistable_degree("0", 3) == 6
    assert semistable_degree("0", 2) == 12
    assert semistable_degree("0", 7) == 3
    assert semistable_degree("1728", 7) == 2
    with pytest.raises(ValueError):
        semistable_degree("5", 7)


def test_sqrt_ell_star():
    assert sqrt_ell_star_in(NumberFieldDesc.quadratic(-7), 7) == (True, False)
    assert sqrt_ell_star_in(NumberFieldDesc.quadratic(5), 5) == (True, False)
    assert sqrt_ell_star_in(NumberFieldDesc.quadratic(7), 7) == (False, False)
    assert sqrt_ell_star_in(NumberFieldDesc(3, -23), 23) == (True, True)


@given(st.floats(0, 1), st.booleans())
def test_classification_rule(frac, over_K):
    v = SurveyVerdict(7, QuadFieldElem(5), 1, "x", frac, 10, None, over_K, over_K, None, True)
    assert v.classification in CLASSES
    assert (v.classification == "exceptional-candidate") == (frac == 1.0 and not over_K)


def test_rational_pair_candidate():
    v = survey_one(Q, 7, J7, 2000)
    assert v.classification == "exceptional-candidate" and v.over_ext and v.witness_ext
    assert v.cm_guard


def test_isogenous_and_failing():
    j5 = Fraction(3**2 + 250 * 3 + 3125) ** 3 / 3**5
    assert survey_one(Q, 5, j5, 1000).classification == "globally-isogenous"
    v = survey_one(Q, 7, 1, 1000)
    assert v.classification == "locally-failing" and v.first_failure


def test_error_isolation():
    rep = survey(Q, 7, [("a", J7), ("zero", 0), ("b", 1728), ("c", 5)], 500)
    assert len(rep.verdicts) == 2 and len(rep.errors) == 2
    assert {e["source"] for e in rep.errors} == {"zero", "b"}


def test_survey_preconditions():
    with pytest.raises(ValueError):
        survey(Q, 11, [J7], 500)
    with pytest.raises(ValueError):
        survey(NumberFieldDesc(3, -23), 7, [J7], 500)


def test_deterministic_json():
    js = [J7, Fraction(-5, 3), 11]
    a = json.dumps(survey(Q, 7, js, 500).to_json(), sort_keys=False)
    b = json.dumps(survey(Q, 7, js, 500).to_json(), sort_keys=False)
    assert a == b


@pytest.mark.parametrize("ell", [2, 3])
def test_no_candidates_at_small_ell(ell):
    js = [J7, Fraction(1, 2), -3375, 16581375, 1, 2, Fraction(-7, 11), 8000]
    rep = survey(Q, ell, js, 600)
    assert not rep.candidates() and not rep.violations()


def test_candidates_have_extension_witness():
    K = NumberFieldDesc.quadratic(-1)
    rep = survey(K, 7, [J7, QuadFieldElem(3, 1, -1)], 600)
    assert not rep.violations()
    for v in rep.candidates():
        assert v.over_ext


def test_survey_elkies_over_q():
    rep = survey_elkies(Q, 40, 600)
    assert [v.j for v in rep.candidates()] == [QuadFieldElem(J7)]


def test_five_curve_over_q5():
    K = NumberFieldDesc.quadratic(5)
    E = five_curve(5)
    v = survey_one(K, 5, E.j_invariant, 1500, curve=E)
    assert v.classification == "exceptional-candidate"


@pytest.mark.parametrize("D,verdict", [(1, "none"), (2, "none"), (5, "infinitely-many")])
def test_five_check(D, verdict):
    res = five_infinitude_check(NumberFieldDesc.quadratic(D), 1500)
    assert res["verdict"] == verdict and res["cusp_certificate"]
    assert (res["witness"] is not None) == (D == 5)
