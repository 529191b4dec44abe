import time

import pytest
from hypothesis import given, settings, strategies as st

from solvergen.fan import enumerate_reduced_gbs, named_orders, sampled_orders
from solvergen.groebner import PositiveDimensionalError, groebner_basis
from solvergen.poly import MonomialOrder

from conftest import LEX_YX, zsys


def test_toy_has_three_bases(toy):
    t0 = time.perf_counter()
    fan = enumerate_reduced_gbs(toy, budget=200, seed=0)
    assert time.perf_counter() - t0 < 1.0
    assert len(fan) == 3
    assert set(fan.signatures) == {"x^2, x*y, y^2", "x, y^3", "y, x^3"}
    expected = {groebner_basis(toy, o).generators for o in (MonomialOrder.grevlex(), MonomialOrder.lex(), LEX_YX)}
    assert {b.generators for b in fan.bases} == expected
    assert fan.exhausted


def test_single_solution_ideal():
    fan = enumerate_reduced_gbs(zsys(["x", "y"], ["x - 1", "y - 2"]), budget=50)
    assert len(fan) == 1


def test_positive_dimensional_rejected():
    with pytest.raises(PositiveDimensionalError):
        enumerate_reduced_gbs(zsys(["x", "y"], ["x*y - 1"]), budget=5)


def test_fglm_and_buchberger_agree(toy):
    a = enumerate_reduced_gbs(toy, budget=40, seed=3, method="fglm")
    b = enumerate_reduced_gbs(toy, budget=40, seed=3, method="buchberger")
    assert a.signatures == b.signatures


def test_named_orders_cover_permutations():
    assert len(named_orders(3)) == 12
    assert len(named_orders(7)) == 2


def test_weights_are_deterministic_and_in_range():
    a = sampled_orders(4, 30, 5)
    assert a == sampled_orders(4, 30, 5)
    assert all(0 <= w < 2**12 for o in a for w in o.weights)


CUBIC = ["x^2 + y*z - 3", "y^2 - x*z + 1", "z^2 + x*y - 2"]


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 50), st.integers(0, 1000))
def test_more_samples_never_lose_bases(budget, seed):
    eqs = zsys(["x", "y", "z"], CUBIC)
    small = set(enumerate_reduced_gbs(eqs, budget, seed).signatures)
    large = set(enumerate_reduced_gbs(eqs, budget + 20, seed).signatures)
    assert small <= large


def test_enumeration_is_deterministic():
    eqs = zsys(["x", "y", "z"], CUBIC)
    a = enumerate_reduced_gbs(eqs, 30, 11)
    b = enumerate_reduced_gbs(eqs, 30, 11)
    assert a.signatures == b.signatures
    assert [w.label() for w in a.witnesses] == [w.label() for w in b.witnesses]
    assert all(len(g.standard_monomials) == len(a.bases[0].standard_monomials) for g in a.bases)
