"""Enumerate distinct reduced Groebner bases by sampling monomial orders.

This approximates the Groebner fan: every named order and every sampled
weight vector yields one reduced basis, and bases are deduplicated by their
leading-monomial sets. Completeness is probabilistic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groebner import (
    DEFAULT_MAX_PAIRS,
    PositiveDimensionalError,
    QuotientCoordinates,
    ReducedGroebnerBasis,
    basis_signature,
    fglm,
    groebner_basis,
)
from .poly import MonomialOrder, Polynomial

MAX_WEIGHT_EXP = 12


@dataclass(frozen=True)
class FanEnumeration:
    bases: tuple[ReducedGroebnerBasis, ...]
    witnesses: tuple[MonomialOrder, ...]
    sample_budget: int
    exhausted: bool

    def __len__(self):
        return len(self.bases)

    @property
    def signatures(self) -> list[str]:
        return [basis_signature(b) for b in self.bases]


def named_orders(nvars: int) -> list[MonomialOrder]:
    """grevlex and lex under every variable precedence (identity first)."""
    if nvars > 6:
        return [MonomialOrder.grevlex(), MonomialOrder.lex()]
    out = []
    for perm in itertools.permutations(range(nvars)):
        prec = None if perm == tuple(range(nvars)) else perm
        out.append(MonomialOrder.grevlex(prec))
        out.append(MonomialOrder.lex(prec))
    return out


def random_weights(rng: np.random.Generator, nvars: int) -> tuple[int, ...]:
    """Weights in [0, 2^12 - 1], log-uniformly spread so extreme ratios occur."""
    return tuple(int(2.0 ** rng.uniform(0, MAX_WEIGHT_EXP)) - 1 for _ in range(nvars))


def sampled_orders(nvars: int, budget: int, seed: int) -> list[MonomialOrder]:
    rng = np.random.default_rng(seed)
    return [MonomialOrder.weighted(random_weights(rng, nvars)) for _ in range(budget)]


def enumerate_reduced_gbs(
    gens: Sequence[Polynomial],
    budget: int = 200,
    seed: int = 0,
    method: str = "fglm",
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> FanEnumeration:
    """Distinct reduced GBs of <gens> over named orders plus `budget` weighted ones.

    With method="fglm" one grevlex basis is computed by Buchberger and every
    other order is reached by FGLM conversion; method="buchberger" runs
    Buchberger for each order. Both produce the same reduced bases.
    """
    if method not in ("fglm", "buchberger"):
        raise ValueError(f"unknown method {method!r}")
    gens = list(gens)
    nvars = gens[0].ring.nvars
    reference = groebner_basis(gens, MonomialOrder.grevlex(), max_pairs)
    if not reference.is_zero_dimensional:
        raise PositiveDimensionalError("ideal is not zero-dimensional")
    coords = QuotientCoordinates(reference) if method == "fglm" else None

    def compute(order: MonomialOrder) -> ReducedGroebnerBasis:
        if order == reference.order:
            return reference
        if method == "fglm":
            return fglm(reference, order, coords)
        return groebner_basis(gens, order, max_pairs)

    found: dict[str, tuple[ReducedGroebnerBasis, MonomialOrder]] = {}
    for order in named_orders(nvars):
        gb = compute(order)
        found.setdefault(basis_signature(gb), (gb, order))

    last_new = -1
    for i, order in enumerate(sampled_orders(nvars, budget, seed)):
        gb = compute(order)
        sig = basis_signature(gb)
        if sig not in found:
            found[sig] = (gb, order)
            last_new = i
    exhausted = budget > 0 and last_new < budget - max(1, budget // 4)

    items = sorted(found.items())
    return FanEnumeration(
        tuple(gb for _, (gb, _) in items),
        tuple(o for _, (_, o) in items),
        budget,
        exhausted,
    )
