import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from solvergen.groebner import (
    BudgetExceededError,
    PositiveDimensionalError,
    QuotientCoordinates,
    basis_signature,
    buchberger,
    fglm,
    groebner_basis,
    normal_form,
    quotient_dimension,
    reduce_basis,
    s_polynomial,
    standard_monomials,
)
from solvergen.poly import GREVLEX, MonomialOrder, Polynomial, Ring, compare, mono_lcm
from solvergen.sysio import format_polynomial

from conftest import LEX_YX, P, zsys


def _gens(gb):
    return sorted(format_polynomial(g) for g in gb.generators)


def test_toy_grevlex(toy):
    gb = groebner_basis(toy)
    assert _gens(gb) == sorted(["x^2 - x + y", "x*y - 1", "y^2 + x - 1"])
    assert set(gb.leading_monomials) == {(2, 0), (1, 1), (0, 2)}
    assert standard_monomials(gb) == [(0, 0), (1, 0), (0, 1)]


def test_toy_lex_both_precedences(toy):
    lex = groebner_basis(toy, MonomialOrder.lex())
    assert _gens(lex) == sorted(["y^2 + x - 1", "y^3 - y + 1"])
    assert standard_monomials(lex) == [(0, 0), (0, 1), (0, 2)]
    lyx = groebner_basis(toy, LEX_YX)
    assert _gens(lyx) == sorted(["x^2 - x + y", "x^3 - x^2 + 1"])


def test_toy_quotient_dimension_every_order(toy):
    for order in (GREVLEX, MonomialOrder.lex(), LEX_YX):
        assert quotient_dimension(groebner_basis(toy, order)) == 3


def test_normal_form_example(toy_gb):
    x2 = toy_gb.ring.monomial((2, 0))
    assert format_polynomial(normal_form(x2, toy_gb.generators)) == "x - y"
    for g in toy_gb.generators:
        assert normal_form(g, toy_gb.generators).is_zero()


def test_s_polynomial_example(toy):
    f, g = toy
    assert format_polynomial(s_polynomial(f, g)) == "x^2 - x + y"
    assert s_polynomial(f, f).is_zero()


def test_trivial_ideals():
    (x,) = zsys(["x", "y"], ["x"])
    gb = groebner_basis([x], MonomialOrder.lex())
    assert gb.generators == (x,)
    pt = groebner_basis(zsys(["x", "y"], ["x - 1", "y - 2"]))
    assert quotient_dimension(pt) == 1
    assert standard_monomials(groebner_basis(zsys(["x", "y"], ["x", "y"]))) == [(0, 0)]


def test_already_groebner_input_is_stable(toy_gb):
    again = groebner_basis(list(toy_gb.generators))
    assert again.generators == toy_gb.generators


def test_positive_dimensional():
    gb = groebner_basis(zsys(["x", "y"], ["x*y - 1"]))
    assert not gb.is_zero_dimensional
    with pytest.raises(PositiveDimensionalError):
        standard_monomials(gb)


def test_pair_budget():
    eqs = zsys(["x", "y", "z"], ["x^2 + y*z - 3", "x*y - z + 1", "y*z - x + 2"])
    with pytest.raises(BudgetExceededError):
        buchberger(eqs, GREVLEX, max_pairs=1)


def test_signature(toy):
    assert basis_signature(groebner_basis(toy)) == "x^2, x*y, y^2"
    assert basis_signature(groebner_basis(toy, MonomialOrder.lex())) == "x, y^3"


def _random_system(seed, nvars=3, neq=3, deg=2):
    rng = np.random.default_rng(seed)
    ring = Ring.zp(["x", "y", "z"][:nvars], P)
    from solvergen.poly import monomials_up_to_degree

    mons = monomials_up_to_degree(nvars, deg)
    eqs = []
    for _ in range(neq):
        terms = {m: int(rng.integers(1, P)) for m in mons if rng.random() < 0.7}
        terms[(deg,) + (0,) * (nvars - 1)] = 1
        eqs.append(Polynomial(ring, terms))
    return eqs


def _sympy_gb(eqs, order):
    names = eqs[0].ring.var_names
    syms = sympy.symbols(names)
    exprs = [sum(int(c) * sympy.prod([s**e for s, e in zip(syms, m)]) for m, c in f.terms.items()) for f in eqs]
    G = sympy.groebner(exprs, *syms, order=order, modulus=P)
    out = set()
    for g in G.exprs:
        poly = sympy.Poly(g, *syms, modulus=P)
        lc = int(poly.LC(order=order)) % P
        inv = pow(lc, P - 2, P)
        out.add(frozenset((m, int(c) * inv % P) for m, c in poly.terms()))
    return out


def _ours(gb):
    return {frozenset((m, int(c) % P) for m, c in g.terms.items()) for g in gb.generators}


@pytest.mark.parametrize("seed", range(6))
def test_matches_sympy_grevlex_and_lex(seed):
    eqs = _random_system(seed)
    assert _ours(groebner_basis(eqs)) == _sympy_gb(eqs, "grevlex")
    assert _ours(groebner_basis(eqs, MonomialOrder.lex())) == _sympy_gb(eqs, "lex")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)))
def test_fglm_equals_buchberger(seed, w):
    eqs = _random_system(seed)
    gb = groebner_basis(eqs)
    order = MonomialOrder.weighted(w)
    assert fglm(gb, order).generators == groebner_basis(eqs, order).generators


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_normal_form_ideal_membership(seed):
    eqs = _random_system(seed % 7)
    gb = groebner_basis(eqs)
    rng = np.random.default_rng(seed)
    ring = gb.ring
    f = Polynomial(ring, {(int(a), int(b), int(c)): int(rng.integers(1, P)) for a, b, c in rng.integers(0, 3, (4, 3))})
    h = Polynomial(ring, {(int(a), int(b), int(c)): int(rng.integers(1, P)) for a, b, c in rng.integers(0, 2, (3, 3))})
    g = eqs[int(rng.integers(len(eqs)))]
    assert gb.normal_form(f + h * g) == gb.normal_form(f)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_normal_form_is_linear(seed):
    gb = groebner_basis(_random_system(seed % 5))
    rng = np.random.default_rng(seed)
    ring = gb.ring

    def rnd():
        return Polynomial(ring, {tuple(int(v) for v in rng.integers(0, 4, 3)): int(rng.integers(1, P)) for _ in range(4)})

    f, g = rnd(), rnd()
    c = int(rng.integers(1, P))
    assert gb.normal_form(f + g.scale(c)) == gb.normal_form(f) + gb.normal_form(g).scale(c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_s_polynomial_cancels_leading_terms(seed):
    eqs = _random_system(seed % 9)
    f, g = eqs[0], eqs[1] * eqs[2] + eqs[0]
    s = s_polynomial(f, g)
    if not s.is_zero():
        lcm = mono_lcm(f.leading_monomial(), g.leading_monomial())
        assert compare(GREVLEX, s.leading_monomial(), lcm) < 0


def test_quotient_coordinates_agree_with_normal_forms(efl_zp):
    gb = groebner_basis(efl_zp)
    qc = QuotientCoordinates(gb)
    std = standard_monomials(gb)
    idx = {b: i for i, b in enumerate(std)}
    for m in [(2, 1, 0, 1), (0, 3, 2, 0), (1, 1, 1, 1)]:
        nf = gb.normal_form(gb.ring.monomial(m))
        v = np.zeros(len(std), dtype=np.int64)
        for b, c in nf.terms.items():
            v[idx[b]] = c
        assert np.array_equal(qc(m), v)


def test_reduce_basis_is_idempotent(toy_gb):
    again = reduce_basis(list(toy_gb.generators), GREVLEX)
    assert again == toy_gb
