from pathlib import Path

import pytest

from exceptional_pairs.modpoly import (
    SHIPPED_LEVELS, ModularPolynomialError, compute_modular_polynomial, format_table,
    load_modular_polynomial, parse_table, shipped, validate,
)
from exceptional_pairs.qseries import j_series

PHI2 = {
    (3, 0): 1, (2, 2): -1, (2, 1): 1488, (2, 0): -162000, (1, 1): 40773375,
    (1, 0): 8748000000, (0, 0): -157464000000000,
}


def test_j_series_coefficients():
    j = j_series(5)
    assert [j[e] for e in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]


def test_phi2_is_classical():
    phi = shipped(2)
    expect = {}
    for (i, k), c in PHI2.items():
        expect[(i, k)] = c
        expect[(k, i)] = c
    assert {k: v for k, v in phi.coeffs.items() if v} == expect


def test_phi3_low_terms():
    phi = shipped(3)
    assert phi.coefficient(0, 0) == 0  # j = 0 has CM by Z[zeta_3], so it is 3-isogenous to itself
    assert phi.coefficient(1, 0) == 1855425871872000000000


@pytest.mark.parametrize("ell", SHIPPED_LEVELS)
def test_shipped_tables_validate(ell):
    phi = shipped(ell)
    validate(phi)
    assert phi.degree == ell + 1


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_generator_reproduces_shipped(ell):
    assert compute_modular_polynomial(ell).coeffs == {k: v for k, v in shipped(ell).coeffs.items() if v}


def test_round_trip_format():
    phi = shipped(5)
    assert parse_table(format_table(phi)).coeffs == {k: v for k, v in phi.coeffs.items() if v}


def _write(tmp_path: Path, ell: int, text: str) -> Path:
    p = tmp_path / f"phi_{ell}.txt"
    p.write_text(text)
    return tmp_path


def test_symmetry_corruption(tmp_path):
    text = format_table(shipped(2)) + "0 1 8748000001\n"
    with pytest.raises(ModularPolynomialError) as err:
        load_modular_polynomial(2, _write(tmp_path, 2, text))
    assert err.value.cause == "symmetry"


def test_degree_corruption(tmp_path):
    text = format_table(shipped(2)) + "4 0 2\n"
    with pytest.raises(ModularPolynomialError) as err:
        load_modular_polynomial(2, _write(tmp_path, 2, text))
    assert err.value.cause == "degree"


def test_kronecker_corruption(tmp_path):
    lines = format_table(shipped(3)).splitlines()
    lines = [ln if not ln.startswith("2 1 ") else f"2 1 {int(ln.split()[2]) + 1}" for ln in lines]
    with pytest.raises(ModularPolynomialError) as err:
        load_modular_polynomial(3, _write(tmp_path, 3, "\n".join(lines) + "\n"))
    assert err.value.cause == "kronecker"


@pytest.mark.parametrize("text", ["", "ell\n", "ell 2\n1 2\n", "ell 2\n1 1 3\n1 1 3\n"])
def test_format_errors(text):
    with pytest.raises(ModularPolynomialError) as err:
        parse_table(text)
    assert err.value.cause == "format"


def test_level_mismatch(tmp_path):
    with pytest.raises(ModularPolynomialError):
        load_modular_polynomial(3, _write(tmp_path, 3, format_table(shipped(2))))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_modular_polynomial(7, tmp_path)


def test_specialize_matches_symmetry():
    phi = shipped(3)
    # Phi(x, y) = Phi(y, x) evaluated at small integers
    def ev(x, y):
        return sum(c * x**i * y**k for (i, k), c in phi.coeffs.items())
    assert ev(2, 5) == ev(5, 2)
    assert sum(c * 5**k for k, c in enumerate(phi.specialize(2))) == ev(2, 5)
