import pytest
from hypothesis import given, strategies as st

from solvergen.poly import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    PolyError,
    Ring,
    RingMismatchError,
    compare,
    format_monomial,
    graded_key,
    leading_term,
    mono_div,
    mono_divides,
    mono_mul,
    monomials_up_to_degree,
)

from conftest import zsys

exps = st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))


def test_grevlex_examples():
    assert compare(GREVLEX, (2, 1), (1, 2)) == 1
    assert compare(GREVLEX, (1, 1), (1, 1)) == 0
    # degree dominates
    assert compare(GREVLEX, (0, 2), (1, 0)) == 1
    # reverse-lex tiebreak in three variables: x*z < y^2
    assert compare(GREVLEX, (1, 0, 1), (0, 2, 0)) == -1


def test_weighted_example():
    assert compare(MonomialOrder.weighted((0, 1)), (5, 0), (0, 1)) == -1


def test_lex_with_precedence():
    lex_yx = MonomialOrder.lex((1, 0))
    assert compare(MonomialOrder.lex(), (1, 0), (0, 5)) == 1
    assert compare(lex_yx, (1, 0), (0, 5)) == -1


@pytest.mark.parametrize("order", [GREVLEX, MonomialOrder.lex(), MonomialOrder.weighted((3, 1, 2)),
                                   MonomialOrder.grevlex((2, 0, 1))])
@given(a=exps, b=exps, c=exps)
def test_order_is_admissible(order, a, b, c):
    # total, antisymmetric and compatible with multiplication
    ab = compare(order, a, b)
    assert ab == -compare(order, b, a)
    assert (ab == 0) == (a == b)
    assert compare(order, mono_mul(a, c), mono_mul(b, c)) == ab
    assert compare(order, mono_mul(a, c), a) >= 0


def test_monomial_ops():
    assert mono_mul((1, 1), (0, 2)) == (1, 3)
    assert not mono_divides((1, 0), (0, 1))
    assert mono_div((2, 1), (1, 0)) == (1, 1)
    with pytest.raises(PolyError):
        mono_div((0, 1), (1, 0))


def test_poly_arith_examples():
    R = Ring.zp(["x"], 7)
    (x,) = R.gens()
    assert (x + 1) * (x - 1) == x**2 + 6
    f = x**3 + 2 * x
    assert f + R.zero() == f
    assert (f - f).is_zero()
    assert len(f - f) == 0


def test_ring_mismatch():
    a = Ring.zp(["x"], 7).var(0)
    b = Ring.zp(["x"], 11).var(0)
    with pytest.raises(RingMismatchError):
        a + b


def test_leading_term_examples():
    (f,) = zsys(["x", "y"], ["x + y^2 - 1"])
    assert leading_term(f, GREVLEX) == ((0, 2), 1)
    assert leading_term(f, MonomialOrder.lex()) == ((1, 0), 1)
    c = Ring.zp(["x", "y"]).const(5)
    assert leading_term(c, GREVLEX) == ((0, 0), 5)


def test_evaluate_examples():
    f, g = zsys(["x", "y"], ["x + y^2 - 1", "x*y - 1"])
    assert f.evaluate([1, 0]) == 0
    assert g.evaluate([1, 1]) == 0
    R = Ring.complex(["x", "y"])
    x, y = R.gens()
    fc = x + y**2 - 1
    yr = -1.324717957244746
    assert abs(fc.evaluate([1 - yr**2, yr])) < 1e-9


def test_graded_listing():
    assert sorted(monomials_up_to_degree(2, 2), key=graded_key) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert format_monomial((2, 1), ["x", "y"]) == "x^2*y"
    assert format_monomial((0, 0), ["x", "y"]) == "1"


@given(st.lists(st.tuples(exps, st.integers(0, 30010)), max_size=6),
       st.lists(st.tuples(exps, st.integers(0, 30010)), max_size=6),
       st.tuples(st.integers(0, 30010), st.integers(0, 30010), st.integers(0, 30010)))
def test_evaluation_is_a_ring_homomorphism(ft, gt, pt):
    R = Ring.zp(["x", "y", "z"])
    F = R.field
    f = Polynomial(R, dict(ft))
    g = Polynomial(R, dict(gt))
    pt = list(pt)
    assert (f * g).evaluate(pt) == F.mul(f.evaluate(pt), g.evaluate(pt))
    assert (f + g).evaluate(pt) == F.add(f.evaluate(pt), g.evaluate(pt))
