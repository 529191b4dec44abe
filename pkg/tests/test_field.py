import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from solvergen import field as zp
from solvergen.field import FieldError, PrimeField, ZeroInverseError, inverse, normalize


def test_normalize_examples():
    assert normalize(-1, PrimeField(7)).value == 6
    assert normalize(0, PrimeField(30011)).value == 0
    assert normalize(30011, PrimeField(30011)).value == 0


def test_arith_examples():
    F = PrimeField(7)
    a = F(3)
    assert (a + F(5)).value == 1
    assert (a * F(0)).value == 0
    assert a + F(0) == a
    assert (F(2) - F(5)).value == 4


def test_inverse_examples():
    assert inverse(PrimeField(7)(2)).value == 4
    for p in (2, 7, 30011):
        assert inverse(PrimeField(p)(1)).value == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroInverseError):
        inverse(PrimeField(7)(0))


def test_nonprime_modulus_rejected():
    with pytest.raises(FieldError):
        PrimeField(4)


def test_random_inverses():
    F = PrimeField(30011)
    rng = np.random.default_rng(1)
    for a in rng.integers(1, F.p, 1000):
        assert F.mul(int(a), F.inv(int(a))) == 1


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_field_axioms(a, b):
    F = PrimeField(30011)
    x, y = F(a), F(b)
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    if y.value:
        assert (x / y) * y == x


def test_signed_representative():
    F = PrimeField(7)
    assert [F.signed(v) for v in range(7)] == [0, 1, 2, 3, -3, -2, -1]


def _sympy_rank(a, p):
    from sympy.polys.matrices import DomainMatrix
    from sympy import GF

    dm = DomainMatrix([[GF(p)(int(v)) for v in row] for row in a], a.shape, GF(p))
    return dm.rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**31 - 1), st.sampled_from([2, 7, 30011]))
def test_rank_matches_sympy(r, c, seed, p):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, (r, c))
    # make some rows dependent
    if r > 2:
        a[-1] = (a[0] * 3 + a[1]) % p
    assert zp.rank(a, p) == _sympy_rank(a, p)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**31 - 1))
def test_solve_roundtrip(n, seed):
    p = 30011
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, (n, n))
    x = rng.integers(0, p, (n, 2))
    b = zp.matmul(a, x, p)
    if zp.rank(a, p) < n:
        with pytest.raises(FieldError):
            zp.solve(a, b, p)
    else:
        assert np.array_equal(zp.solve(a, b, p), x)


def test_rref_pivots_and_form():
    p = 7
    a = np.array([[0, 2, 4], [1, 1, 1], [1, 3, 5]])
    red, piv, _ = zp.rref(a, p)
    assert piv == [0, 1]
    assert np.array_equal(red[:2, :2], np.eye(2, dtype=np.int64))
    assert not red[2].any()


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_charpoly_matches_sympy(n, seed):
    p = 30011
    a = np.random.default_rng(seed).integers(0, p, (n, n))
    t = sympy.Symbol("t")
    ref = sympy.Poly(sympy.Matrix(a.tolist()).charpoly(t).as_expr(), t, modulus=p)
    mine = [c % p for c in zp.charpoly(a, p)]
    assert mine == [int(c) % p for c in ref.all_coeffs()]
