import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solvergen.basis import (
    SamplerConfig,
    SpanError,
    build_candidate_set,
    coordinate_rank,
    coordinate_vector,
    extractable_actions,
    extraction_complete,
    is_independent,
    neighbors,
    quotient_coordinates,
    sample_basis,
    sample_basis_uniform,
    uniform_pool,
    weight_w,
)
from solvergen.groebner import QuotientCoordinates, groebner_basis
from solvergen.poly import support

from conftest import P, zsys

X, Y, ONE = (1, 0), (0, 1), (0, 0)


def test_coordinate_vectors(toy_gb):
    assert coordinate_vector(X, toy_gb).tolist() == [0, 1, 0]
    assert coordinate_vector((2, 0), toy_gb).tolist() == [0, 1, P - 1]
    assert coordinate_vector((1, 1), toy_gb).tolist() == [1, 0, 0]


def test_fast_coordinates_match_division(efl_zp):
    gb = groebner_basis(efl_zp)
    qc = QuotientCoordinates(gb)
    rng = np.random.default_rng(0)
    for m in rng.integers(0, 4, (15, 4)):
        m = tuple(int(v) for v in m)
        assert np.array_equal(qc(m), coordinate_vector(m, gb))


def test_independence_examples(toy_gb):
    assert is_independent([ONE, X, Y], toy_gb)
    assert is_independent([ONE, X, (2, 0)], toy_gb)
    assert not is_independent([ONE, X, (1, 1)], toy_gb)
    assert not is_independent([ONE, X, Y, (2, 0)], toy_gb)
    assert not is_independent([ONE, ONE], toy_gb)


def test_toy_candidate_set(toy, toy_gb):
    E = support(toy)
    # the equation monomials alone reach only rank 2 (no y direction)
    assert coordinate_rank(sorted(E), toy_gb) == 2
    M = build_candidate_set(toy, toy_gb)
    assert M.E == E
    assert set(E) <= set(M)
    assert coordinate_rank(list(M), toy_gb) == 3


def test_candidate_fallback_adds_variables():
    eqs = zsys(["x"], ["x^2 - 2"])
    M = build_candidate_set(eqs, groebner_basis(eqs))
    assert set(M) == {(0,), (1,), (2,), (4,)}


def test_candidate_set_span_error():
    # a single constant-plus-square equation in two variables is not zero-dimensional,
    # so feed coordinates of a zero-dimensional ideal with unrelated equations
    eqs = zsys(["x", "y"], ["x^2 - 1", "y^2 - 1"])
    gb = groebner_basis(eqs)
    only_x = zsys(["x", "y"], ["x^2 - 1"])
    with pytest.raises(SpanError):
        build_candidate_set(only_x, gb)


def test_weight_examples():
    cfg = SamplerConfig(epsilon=0.01)
    m = (1, 1, 2)
    assert weight_w(m, set(), set(), 0, cfg, (0, 1, 1)) == pytest.approx(2**-3 + 0.01)
    E = {(0, 0, 0)}
    B = {(1, 0, 0)}
    assert weight_w((0, 0, 0), E, B, 0, cfg, (0, 0, 0)) == pytest.approx(3.01)
    assert weight_w((0, 0, 40), set(), set(), 0, cfg, (1, 1, 1)) == pytest.approx(0.01)


def test_epsilon_must_be_positive():
    with pytest.raises(ValueError):
        SamplerConfig(epsilon=0)


def test_neighbors_examples():
    M = [X, Y, (2, 0), (1, 1), (2, 1), (1, 2), (3, 3)]
    assert sorted(neighbors({ONE}, M)) == sorted([X, Y])
    assert sorted(neighbors({(1, 1)}, M)) == sorted([X, Y, (2, 1), (1, 2)])
    assert neighbors(set(), M) == []


def test_extraction_complete_examples():
    assert extraction_complete([ONE, X, Y], 1)
    assert not extraction_complete([ONE, Y, (0, 2)], 1)
    # powers of the action variable alone leave y without an edge
    assert not extraction_complete([ONE, X, (2, 0)], 0)
    assert extraction_complete([ONE, X, (1, 1)], 0)
    assert extractable_actions([ONE, X, Y], 2) == [0, 1]


def test_toy_samples_are_valid(toy, toy_gb):
    M = build_candidate_set(toy, toy_gb)
    qc = quotient_coordinates(toy_gb)
    valid = {frozenset(c) for c in itertools.combinations(M, 3) if is_independent(c, qc)}
    for seed in range(30):
        b = sample_basis(M, qc, SamplerConfig(seed=seed))
        assert frozenset(b.monomials) in valid
        assert b.extractable


def test_sampling_is_deterministic(stitch2_zp):
    qc = quotient_coordinates(groebner_basis(stitch2_zp))
    M = build_candidate_set(stitch2_zp, qc)
    assert sample_basis(M, qc, SamplerConfig(seed=4)) == sample_basis(M, qc, SamplerConfig(seed=4))


def test_stitching_samples_independent(stitch2_zp):
    qc = quotient_coordinates(groebner_basis(stitch2_zp))
    M = build_candidate_set(stitch2_zp, qc)
    for seed in range(100):
        b = sample_basis(M, qc, SamplerConfig(seed=seed))
        assert b.K == 18
        assert is_independent(b.monomials, qc)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["from-M", "from-degree-closure"]))
def test_uniform_samples_independent(seed, mode):
    eqs = zsys(["x", "y"], ["x + y^2 - 1", "x*y - 1"])
    qc = quotient_coordinates(groebner_basis(eqs))
    M = build_candidate_set(eqs, qc)
    b = sample_basis_uniform(M, qc, seed, mode)
    assert b.K == 3 and is_independent(b.monomials, qc)


def test_uniform_pools_nest(stitch2_zp):
    qc = quotient_coordinates(groebner_basis(stitch2_zp))
    M = build_candidate_set(stitch2_zp, qc)
    assert set(uniform_pool(M, "from-M")) <= set(uniform_pool(M, "from-degree-closure"))
    with pytest.raises(ValueError):
        uniform_pool(M, "bogus")
