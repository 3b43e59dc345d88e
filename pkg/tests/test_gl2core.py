import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exceptional_pairs.gl2core import (
    Gl2Matrix, PrimeField, ProjPoint, all_gl2, char_poly_reducible, fixed_points, gl2_order,
    is_prime, is_square_mod, kronecker, legendre, mat_mul, multiplicative_order, primitive_root,
    proj_order, projective_line,
)

PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 101]


def _entries(ell):
    e = st.integers(0, ell - 1)
    return st.tuples(e, e, e, e).filter(lambda t: (t[0] * t[3] - t[1] * t[2]) % ell)


@st.composite
def matrices(draw, ell=None):
    ell = ell or draw(st.sampled_from(PRIMES))
    return Gl2Matrix(*draw(_entries(ell)), ell)


@st.composite
def matrix_triples(draw):
    ell = draw(st.sampled_from(PRIMES))
    return tuple(draw(matrices(ell)) for _ in range(3))


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(15)
    F = PrimeField(7)
    assert F.inv(3) * 3 % 7 == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        Gl2Matrix(1, 2, 2, 4, 5)


def test_modulus_mismatch():
    with pytest.raises(ValueError):
        mat_mul(Gl2Matrix.identity(5), Gl2Matrix.identity(7))


@given(matrix_triples())
def test_group_axioms(t):
    A, B, C = t
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ A.inverse() == Gl2Matrix.identity(A.ell)
    assert (A @ B).det == A.det * B.det % A.ell


@given(matrices())
def test_fixed_points_match_char_poly(g):
    """A matrix fixes a point of P^1 exactly when its characteristic polynomial has a root."""
    fp = fixed_points(g)
    assert len(fp) in (0, 1, 2, g.ell + 1)
    assert (len(fp) > 0) == char_poly_reducible(g)
    if g.is_scalar():
        assert len(fp) == g.ell + 1


@given(matrices())
def test_projective_key_is_class_invariant(g):
    lam = primitive_root(g.ell)
    assert (g @ Gl2Matrix.scalar(lam, g.ell)).projective_key() == g.projective_key()


@given(matrices())
def test_proj_order_kills(g):
    assert (g ** proj_order(g)).is_scalar()


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_gl2_enumeration_count(ell):
    assert sum(1 for _ in all_gl2(ell)) == gl2_order(ell)


@pytest.mark.parametrize("ell", PRIMES)
def test_projective_line(ell):
    pts = projective_line(ell)
    assert len(pts) == ell + 1 == len(set(pts))
    assert ProjPoint.make(3 * ell + 1, 4, ell) in pts


@given(st.sampled_from([p for p in PRIMES if p > 2]), st.integers(-10**6, 10**6))
def test_legendre_matches_brute_force(ell, a):
    squares = {x * x % ell for x in range(1, ell)}
    expect = 0 if a % ell == 0 else (1 if a % ell in squares else -1)
    assert legendre(a, ell) == expect
    assert is_square_mod(a, ell) == (expect >= 0)


def test_legendre_preconditions():
    with pytest.raises(ValueError):
        legendre(3, 2)
    with pytest.raises(ValueError):
        legendre(3, 9)


def test_kronecker_at_two():
    assert kronecker(-7, 2) == 1 and kronecker(5, 2) == -1 and kronecker(-4, 2) == 0


@pytest.mark.parametrize("ell", PRIMES)
def test_primitive_root(ell):
    assert multiplicative_order(primitive_root(ell), ell) == ell - 1


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
