"""Buchberger's algorithm, reduction and reduced Groebner bases over Z_p.

Internally monomials are packed into single ints, 12 bits per variable with
the top bit of every field kept clear as a guard: products are integer sums
and ``a | b`` is ``(b - a) & guard == 0``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import field as zp
from .poly import (
    GREVLEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    Ring,
    format_monomial,
    graded_key,
    mono_divides,
)

DEFAULT_MAX_PAIRS = 100_000
_BITS = 12
_FIELD = (1 << (_BITS - 1)) - 1  # largest exponent that keeps the guard clear


class GroebnerError(RuntimeError):
    pass


class BudgetExceededError(GroebnerError):
    pass


class PositiveDimensionalError(GroebnerError):
    pass


class _Packer:
    def __init__(self, nvars: int):
        self.n = nvars
        self.shifts = [_BITS * (nvars - 1 - i) for i in range(nvars)]
        self.guard = sum(1 << (s + _BITS - 1) for s in self.shifts)
        self.mask = (1 << _BITS) - 1

    def pack(self, m: Monomial) -> int:
        out = 0
        for e, s in zip(m, self.shifts):
            if e > _FIELD:
                raise GroebnerError(f"exponent {e} exceeds the supported maximum {_FIELD}")
            out |= e << s
        return out

    def unpack(self, k: int) -> Monomial:
        mask = self.mask
        return tuple((k >> s) & mask for s in self.shifts)


class _Ctx:
    """Packing plus a memoized order key for one (ring, order) pair."""

    def __init__(self, ring: Ring, order: MonomialOrder):
        if not ring.is_exact:
            raise GroebnerError("Groebner bases are only computed over Z_p")
        self.ring = ring
        self.p = ring.p
        self.order = order
        self.pk = _Packer(ring.nvars)
        self._key = order.key
        self._neg: dict[int, tuple] = {}

    def negkey(self, k: int) -> tuple:
        v = self._neg.get(k)
        if v is None:
            v = tuple(-x for x in self._key(self.pk.unpack(k)))
            self._neg[k] = v
        return v

    def lm(self, f: dict) -> int:
        return min(f, key=self.negkey)

    def to_dict(self, f: Polynomial) -> dict:
        if f.ring != self.ring:
            raise GroebnerError("polynomial from a different ring")
        pack = self.pk.pack
        return {pack(m): c for m, c in f.terms.items()}

    def to_poly(self, f: dict) -> Polynomial:
        unpack = self.pk.unpack
        return Polynomial._raw(self.ring, {unpack(k): c for k, c in f.items()})

    def monic(self, f: dict) -> tuple[int, dict]:
        lm = self.lm(f)
        p = self.p
        inv = pow(f[lm], p - 2, p)
        if inv != 1:
            f = {m: c * inv % p for m, c in f.items()}
        return lm, f

    def divides(self, a: int, b: int) -> bool:
        return not ((b - a) & self.pk.guard)

    def lcm(self, a: int, b: int) -> int:
        out = 0
        mask = self.pk.mask
        for s in self.pk.shifts:
            out |= max((a >> s) & mask, (b >> s) & mask) << s
        return out

    def coprime(self, a: int, b: int) -> bool:
        mask = self.pk.mask
        for s in self.pk.shifts:
            if (a >> s) & mask and (b >> s) & mask:
                return False
        return True

    def reduce(self, f: dict, basis: Sequence[tuple[int, dict]]) -> dict:
        """Full remainder of f modulo monic (lm, terms) reducers."""
        p = self.p
        guard = self.pk.guard
        negkey = self.negkey
        f = dict(f)
        rem: dict = {}
        heap = [(negkey(m), m) for m in f]
        heapq.heapify(heap)
        queued = set(f)
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            _, m = pop(heap)
            queued.discard(m)
            c = f.pop(m, 0)
            if not c:
                continue
            for lm, g in basis:
                if not ((m - lm) & guard):
                    q = m - lm
                    for gm, gc in g.items():
                        if gm == lm:
                            continue
                        mm = gm + q
                        v = (f.get(mm, 0) - c * gc) % p
                        if v:
                            f[mm] = v
                            if mm not in queued:
                                queued.add(mm)
                                push(heap, (negkey(mm), mm))
                        else:
                            f.pop(mm, None)
                    break
            else:
                rem[m] = c
        return rem

    def spoly(self, a: tuple[int, dict], b: tuple[int, dict]) -> dict:
        p = self.p
        la, ta = a
        lb, tb = b
        l = self.lcm(la, lb)
        qa, qb = l - la, l - lb
        out = {m + qa: c for m, c in ta.items()}
        for m, c in tb.items():
            mm = m + qb
            v = (out.get(mm, 0) - c) % p
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
        return out


def _require_exact(polys: Sequence[Polynomial]):
    for f in polys:
        if not f.ring.is_exact:
            raise GroebnerError("Groebner bases are only computed over Z_p")


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> Polynomial:
    """Remainder of multivariate division of f by G (every term reduced)."""
    _require_exact([f, *G])
    if f.is_zero():
        return f
    ctx = _Ctx(f.ring, order)
    basis = []
    for g in G:
        if g.is_zero():
            raise GroebnerError("zero polynomial in divisor list")
        basis.append(ctx.monic(ctx.to_dict(g)))
    return ctx.to_poly(ctx.reduce(ctx.to_dict(f), basis))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """(lcm/lt f) f - (lcm/lt g) g, using the monic normalizations of f and g."""
    _require_exact([f, g])
    if f.is_zero() or g.is_zero():
        raise GroebnerError("S-polynomial of a zero polynomial")
    ctx = _Ctx(f.ring, order)
    a = ctx.monic(ctx.to_dict(f))
    b = ctx.monic(ctx.to_dict(g))
    return ctx.to_poly(ctx.spoly(a, b))


def buchberger(
    gens: Sequence[Polynomial],
    order: MonomialOrder = GREVLEX,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> list[Polynomial]:
    """A Groebner basis of <gens> (not reduced).

    Normal selection (pair with the smallest lcm first). Pairs are pruned with
    Buchberger's coprime criterion and the Gebauer-Moeller chain criteria.
    Raises BudgetExceededError after `max_pairs` S-polynomial reductions.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise GroebnerError("no nonzero generators")
    _require_exact(gens)
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise GroebnerError("generators live in different rings")
    ctx = _Ctx(ring, order)

    polys: list[tuple[int, dict]] = []  # every element ever added
    active: list[int] = []  # indices whose leading monomial is not redundant
    pairs: dict[tuple[int, int], int] = {}  # (i, j) -> lcm
    heap: list = []

    def update(h: int):
        lh = polys[h][0]
        cands = [(g, ctx.lcm(lh, polys[g][0])) for g in active]
        keep = []
        for idx, (g, l) in enumerate(cands):
            if ctx.coprime(lh, polys[g][0]):
                keep.append((g, l))
                continue
            others = cands[idx + 1 :] + keep
            if any(ctx.divides(l2, l) for _, l2 in others):
                continue
            keep.append((g, l))
        new = [(g, l) for g, l in keep if not ctx.coprime(lh, polys[g][0])]
        for (a, b), l in list(pairs.items()):
            if (
                ctx.divides(lh, l)
                and ctx.lcm(polys[a][0], lh) != l
                and ctx.lcm(polys[b][0], lh) != l
            ):
                del pairs[(a, b)]
        for g, l in new:
            pairs[(g, h)] = l
            heapq.heappush(heap, (tuple(-x for x in ctx.negkey(l)), g, h))
        active[:] = [g for g in active if not ctx.divides(lh, polys[g][0])] + [h]

    # feed the input one element at a time so redundant generators drop out
    start = sorted((ctx.monic(ctx.to_dict(g)) for g in gens), key=lambda t: ctx.negkey(t[0]), reverse=True)
    for t in start:
        r = ctx.reduce(t[1], [polys[i] for i in active]) if active else t[1]
        if r:
            polys.append(ctx.monic(r))
            update(len(polys) - 1)

    done = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        del pairs[(i, j)]
        done += 1
        if done > max_pairs:
            raise BudgetExceededError(f"more than {max_pairs} pair reductions")
        h = ctx.reduce(ctx.spoly(polys[i], polys[j]), [polys[k] for k in active])
        if h:
            polys.append(ctx.monic(h))
            update(len(polys) - 1)
    return [ctx.to_poly(polys[k][1]) for k in active]


@dataclass(frozen=True)
class ReducedGroebnerBasis:
    order: MonomialOrder
    generators: tuple[Polynomial, ...]
    leading_monomials: tuple[Monomial, ...]
    standard_monomials: tuple[Monomial, ...] | None

    @property
    def ring(self) -> Ring:
        return self.generators[0].ring

    @property
    def is_zero_dimensional(self) -> bool:
        return self.standard_monomials is not None

    @property
    def signature(self) -> str:
        return basis_signature(self)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.generators, self.order)

    def quotient_dimension(self) -> int:
        return quotient_dimension(self)


def _is_zero_dimensional(lms: Sequence[Monomial], nvars: int) -> bool:
    for i in range(nvars):
        if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
            return False
    return True


def _staircase(lms: Sequence[Monomial], nvars: int) -> list[Monomial]:
    start = (0,) * nvars
    if any(mono_divides(l, start) for l in lms):
        return []
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(nvars):
                mm = m[:i] + (m[i] + 1,) + m[i + 1 :]
                if mm in seen or any(mono_divides(l, mm) for l in lms):
                    continue
                seen.add(mm)
                nxt.append(mm)
        frontier = nxt
    return sorted(seen, key=graded_key)


def _assemble(ring: Ring, order: MonomialOrder, reduced: list[tuple[Monomial, Polynomial]]) -> ReducedGroebnerBasis:
    reduced.sort(key=lambda t: graded_key(t[0]))
    lms = tuple(lm for lm, _ in reduced)
    gens = tuple(g for _, g in reduced)
    std = tuple(_staircase(lms, ring.nvars)) if _is_zero_dimensional(lms, ring.nvars) else None
    return ReducedGroebnerBasis(order, gens, lms, std)


def reduce_basis(G: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> ReducedGroebnerBasis:
    """The unique reduced Groebner basis from any Groebner basis G."""
    _require_exact(G)
    G = [g for g in G if not g.is_zero()]
    if not G:
        raise GroebnerError("empty basis")
    ring = G[0].ring
    ctx = _Ctx(ring, order)
    items = sorted((ctx.monic(ctx.to_dict(g)) for g in G), key=lambda t: ctx.negkey(t[0]), reverse=True)
    minimal: list[tuple[int, dict]] = []
    for lm, t in items:
        if not any(ctx.divides(l, lm) for l, _ in minimal):
            minimal.append((lm, t))
    reduced = []
    for idx, (lm, t) in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = dict(t)
        del tail[lm]
        r = ctx.reduce(tail, others) if tail else {}
        r[lm] = 1
        reduced.append((ctx.pk.unpack(lm), ctx.to_poly(r)))
    return _assemble(ring, order, reduced)


def groebner_basis(
    gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX, max_pairs: int = DEFAULT_MAX_PAIRS
) -> ReducedGroebnerBasis:
    """Reduced Groebner basis of <gens> computed directly with Buchberger."""
    return reduce_basis(buchberger(gens, order, max_pairs), order)


def standard_monomials(gb: ReducedGroebnerBasis) -> list[Monomial]:
    if gb.standard_monomials is None:
        raise PositiveDimensionalError("ideal is not zero-dimensional: the staircase is unbounded")
    return list(gb.standard_monomials)


def quotient_dimension(gb: ReducedGroebnerBasis) -> int:
    return len(standard_monomials(gb))


def basis_signature(gb: ReducedGroebnerBasis) -> str:
    names = gb.ring.var_names
    return ", ".join(format_monomial(m, names) for m in sorted(gb.leading_monomials, key=graded_key))


# ---------------------------------------------------------------------------
# quotient-ring coordinates and order conversion
# ---------------------------------------------------------------------------


class QuotientCoordinates:
    """Coordinates of monomials in the standard-monomial basis of a reduced GB.

    coords(x_i * m) = T_i coords(m), where the multiplication matrices T_i are
    read off normal forms of x_i * b for the standard monomials b. Results are
    memoized per monomial.
    """

    def __init__(self, gb: ReducedGroebnerBasis):
        std = standard_monomials(gb)
        self.gb = gb
        self.ring = gb.ring
        self.p = gb.ring.p
        self.basis = std
        self.K = len(std)
        self.index = {m: i for i, m in enumerate(std)}
        n = self.ring.nvars
        self._mult = []
        for i in range(n):
            T = np.zeros((self.K, self.K), dtype=np.int64)
            for col, b in enumerate(std):
                mb = b[:i] + (b[i] + 1,) + b[i + 1 :]
                T[:, col] = self.from_normal_form(gb.normal_form(self.ring.monomial(mb)))
            self._mult.append(T)
        self._cache: dict[Monomial, np.ndarray] = {}
        one = (0,) * n
        v = np.zeros(self.K, dtype=np.int64)
        if one in self.index:
            v[self.index[one]] = 1
        self._cache[one] = v

    def from_normal_form(self, r: Polynomial) -> np.ndarray:
        v = np.zeros(self.K, dtype=np.int64)
        for m, c in r.terms.items():
            try:
                v[self.index[m]] = c
            except KeyError:
                raise GroebnerError(f"{m} is not a standard monomial; input not reduced") from None
        return v

    def multiplication_matrix(self, i: int) -> np.ndarray:
        return self._mult[i].copy()

    def __call__(self, m: Monomial) -> np.ndarray:
        m = tuple(m)
        v = self._cache.get(m)
        if v is not None:
            return v
        i = max(range(len(m)), key=lambda j: m[j])
        prev = m[:i] + (m[i] - 1,) + m[i + 1 :]
        v = zp.matmul(self._mult[i], self(prev).reshape(-1, 1), self.p)[:, 0]
        self._cache[m] = v
        return v


def fglm(gb: ReducedGroebnerBasis, order: MonomialOrder, coords: QuotientCoordinates | None = None) -> ReducedGroebnerBasis:
    """Convert a zero-dimensional reduced GB to another monomial order.

    Walks monomials in increasing target order; each one either extends the
    new staircase (its coordinate vector is independent of those found so far)
    or yields a new generator m - sum c_j b_j with leading monomial m.
    """
    if order == gb.order:
        return gb
    coords = coords or QuotientCoordinates(gb)
    ring = gb.ring
    p = ring.p
    n = ring.nvars
    K = coords.K
    key = order.key

    staircase: list[Monomial] = []
    # echelon rows of the span of staircase coordinate vectors; `comb` tracks
    # each row as a combination of staircase elements
    ech: list[np.ndarray] = []
    ech_piv: list[int] = []
    comb: list[np.ndarray] = []
    new_lms: list[Monomial] = []
    reduced: list[tuple[Monomial, Polynomial]] = []

    cand: list = [(key((0,) * n), (0,) * n)]
    seen = {(0,) * n}
    while cand:
        _, m = heapq.heappop(cand)
        if any(mono_divides(l, m) for l in new_lms):
            continue
        v = coords(m).copy()
        c = np.zeros(K + 1, dtype=np.int64)
        c[len(staircase)] = 1  # coefficient of m itself, stored in slot len(staircase)
        for row, piv, rc in zip(ech, ech_piv, comb):
            if v[piv]:
                f = int(v[piv])
                v = (v - f * row) % p
                c = (c - f * rc) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            # m - ... in ideal: c holds coefficients over staircase + m
            terms = {m: 1}
            slot = len(staircase)
            for j, b in enumerate(staircase):
                if c[j]:
                    terms[b] = int(c[j])
            # normalize so m has coefficient 1 (c[slot] is 1 by construction)
            assert c[slot] == 1
            new_lms.append(m)
            reduced.append((m, Polynomial(ring, terms)))
            continue
        if len(staircase) >= K:
            raise GroebnerError("staircase larger than quotient dimension")
        piv = int(nz[0])
        inv = pow(int(v[piv]), p - 2, p)
        # combination bookkeeping: slot for m becomes this staircase element
        staircase.append(m)
        ech.append(v * inv % p)
        ech_piv.append(piv)
        comb.append(c * inv % p)
        for i in range(n):
            mm = m[:i] + (m[i] + 1,) + m[i + 1 :]
            if mm not in seen:
                seen.add(mm)
                heapq.heappush(cand, (key(mm), mm))
    if len(staircase) != K:
        raise GroebnerError(f"conversion found {len(staircase)} standard monomials, expected {K}")
    return _assemble(ring, order, reduced)


def groebner_basis_any(
    gens: Sequence[Polynomial],
    order: MonomialOrder,
    reference: ReducedGroebnerBasis | None = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> ReducedGroebnerBasis:
    """Reduced GB under `order`, converted from a zero-dimensional reference
    basis when one is given, else computed directly."""
    if reference is not None and reference.is_zero_dimensional:
        return fglm(reference, order)
    return groebner_basis(gens, order, max_pairs)
