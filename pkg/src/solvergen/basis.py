"""Quotient-ring bases that need not come from a Groebner basis.

A set of K monomials is a basis of C[X]/I exactly when their coordinate
vectors (normal forms expressed over the standard monomials of a reference
GB) are linearly independent. Everything here is exact over Z_p.

The heuristic sampler grows a basis one monomial at a time. Candidates are
weighted to favour monomials that occur in the equations, whose product with
the action variable is already covered, and that have low degree in a random
subset of directions; draws are restricted to monomials adjacent to the
partial basis so the result forms a connected block.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .field import rank
from .groebner import QuotientCoordinates, ReducedGroebnerBasis, standard_monomials
from .poly import Monomial, Polynomial, format_monomial, graded_key, monomials_up_to_degree, support

DEFAULT_EPSILON = 0.01
MAX_RESAMPLES = 20
MAX_CANDIDATE_ROUNDS = 64


class BasisError(RuntimeError):
    pass


class SpanError(BasisError):
    """The candidate set could not be grown to span the quotient ring."""


def quotient_coordinates(obj) -> QuotientCoordinates:
    if isinstance(obj, QuotientCoordinates):
        return obj
    if isinstance(obj, ReducedGroebnerBasis):
        return QuotientCoordinates(obj)
    raise TypeError(f"expected a reduced GB or QuotientCoordinates, got {type(obj).__name__}")


def coordinate_vector(m: Monomial, gb: ReducedGroebnerBasis) -> np.ndarray:
    """Coordinates of NF(m) in the standard-monomial basis of gb.

    Computed by direct division; QuotientCoordinates gives the same vectors
    faster through multiplication matrices.
    """
    std = standard_monomials(gb)
    index = {b: i for i, b in enumerate(std)}
    r = gb.normal_form(gb.ring.monomial(tuple(m)))
    v = np.zeros(len(std), dtype=np.int64)
    for b, c in r.terms.items():
        v[index[b]] = c
    return v


def coordinate_matrix(mons: Sequence[Monomial], coords) -> np.ndarray:
    qc = quotient_coordinates(coords)
    if not mons:
        return np.zeros((0, qc.K), dtype=np.int64)
    return np.stack([qc(m) for m in mons])


def coordinate_rank(mons: Sequence[Monomial], coords) -> int:
    qc = quotient_coordinates(coords)
    return rank(coordinate_matrix(list(mons), qc), qc.p)


def is_independent(mons: Sequence[Monomial], coords) -> bool:
    qc = quotient_coordinates(coords)
    mons = list(mons)
    if len(mons) > qc.K or len(set(mons)) != len(mons):
        return False
    return coordinate_rank(mons, qc) == len(mons)


# ---------------------------------------------------------------------------
# candidate set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CandidateSet:
    monomials: tuple[Monomial, ...]
    from_equations: tuple[bool, ...]

    @property
    def E(self) -> frozenset[Monomial]:
        return frozenset(m for m, e in zip(self.monomials, self.from_equations) if e)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)


def _make_candidate_set(M: Iterable[Monomial], E: set[Monomial]) -> CandidateSet:
    mons = tuple(sorted(set(M), key=graded_key))
    return CandidateSet(mons, tuple(m in E for m in mons))


def build_candidate_set(equations: Sequence[Polynomial], coords) -> CandidateSet:
    """Grow M from the equation monomials until it spans the quotient ring.

    Each round multiplies M by the lowest-degree monomials occurring in the
    equations (degree one when there are any). After a round without rank
    gain the bare variables are added; a second stalled round is an error.
    """
    qc = quotient_coordinates(coords)
    n = qc.ring.nvars
    E = support(equations)
    positive = [m for m in E if sum(m) > 0]
    if not positive:
        raise SpanError("equations contain no non-constant monomials")
    dmin = min(sum(m) for m in positive)
    shifts = sorted((m for m in positive if sum(m) == dmin), key=graded_key)
    variables = [tuple(int(i == j) for j in range(n)) for i in range(n)]

    M = set(E)
    r = coordinate_rank(sorted(M, key=graded_key), qc)
    stalls = 0
    rounds = 0
    while r < qc.K:
        rounds += 1
        if rounds > MAX_CANDIDATE_ROUNDS:
            raise SpanError(f"candidate set still has rank {r} < {qc.K} after {MAX_CANDIDATE_ROUNDS} rounds")
        M |= {tuple(a + b for a, b in zip(m, s)) for m in list(M) for s in shifts}
        r_new = coordinate_rank(sorted(M, key=graded_key), qc)
        if r_new == r:
            stalls += 1
            M |= set(variables)
            r_new = coordinate_rank(sorted(M, key=graded_key), qc)
            if r_new == r and stalls >= 2:
                raise SpanError(f"candidate rank stalled at {r} < {qc.K}")
        else:
            stalls = 0
        r = r_new
    return _make_candidate_set(M, E)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    epsilon: float = DEFAULT_EPSILON
    omega: tuple[int, ...] | None = None  # drawn from the seed when None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class QuotientBasis:
    monomials: tuple[Monomial, ...]
    action_var: int
    provenance: str
    extractable: bool = True
    omega: tuple[int, ...] | None = dc_field(default=None, compare=False)

    @property
    def K(self) -> int:
        return len(self.monomials)

    def label(self, names: Sequence[str]) -> str:
        return "[" + ", ".join(format_monomial(m, names) for m in self.monomials) + "]"


def basis_from_gb(gb: ReducedGroebnerBasis, action_var: int = 0) -> QuotientBasis:
    std = tuple(standard_monomials(gb))
    return QuotientBasis(std, action_var, f"standard-monomials({gb.order.label(gb.ring.var_names)})",
                         extraction_complete(std, action_var))


def weighted_degree(m: Monomial, omega: Sequence[int]) -> int:
    return sum(w * e for w, e in zip(omega, m))


def weight_w(m: Monomial, E, B, alpha: int, cfg: SamplerConfig, omega: Sequence[int] | None = None) -> float:
    omega = omega if omega is not None else cfg.omega
    if omega is None:
        omega = (0,) * len(m)
    am = m[:alpha] + (m[alpha] + 1,) + m[alpha + 1 :]
    w = float(m in E) + float(am in E or am in B)
    return w + 2.0 ** (-weighted_degree(m, omega)) + cfg.epsilon


def neighbors(B: Iterable[Monomial], M: Iterable[Monomial]) -> list[Monomial]:
    B = set(B)
    if not B:
        return []
    out = []
    for m in M:
        if m in B:
            continue
        for i in range(len(m)):
            if m[i] > 0 and m[:i] + (m[i] - 1,) + m[i + 1 :] in B:
                out.append(m)
                break
            if m[:i] + (m[i] + 1,) + m[i + 1 :] in B:
                out.append(m)
                break
    return out


def extraction_complete(B: Iterable[Monomial], alpha: int) -> bool:
    B = set(B)
    n = len(next(iter(B))) if B else 0
    for i in range(n):
        if i == alpha:
            continue
        if not any(b[i] > 0 and b[:i] + (b[i] - 1,) + b[i + 1 :] in B for b in B):
            return False
    return True


def extractable_actions(B: Iterable[Monomial], nvars: int) -> list[int]:
    B = list(B)
    return [a for a in range(nvars) if extraction_complete(B, a)]


class _Span:
    """Incremental echelon form of the span of chosen coordinate vectors.

    `resid` holds every pool vector reduced against the span; a pool monomial
    is independent of the partial basis iff its residual row is nonzero.
    """

    def __init__(self, V: np.ndarray, p: int):
        self.p = p
        self.resid = V % p

    def independent(self) -> np.ndarray:
        return np.any(self.resid != 0, axis=1)

    def add(self, i: int):
        r = self.resid[i]
        nz = np.nonzero(r)[0]
        piv = int(nz[0])
        row = r * pow(int(r[piv]), self.p - 2, self.p) % self.p
        f = self.resid[:, piv].copy()
        self.resid = (self.resid - f[:, None] * row[None, :]) % self.p


def _grow(pool: Sequence[Monomial], qc: QuotientCoordinates, rng: np.random.Generator,
          weight_fn, use_neighbors: bool) -> list[Monomial]:
    span = _Span(coordinate_matrix(pool, qc), qc.p)
    pos = {m: i for i, m in enumerate(pool)}
    B: list[Monomial] = []
    Bset: set[Monomial] = set()
    while len(B) < qc.K:
        ok = span.independent()
        MB = [m for m, f in zip(pool, ok) if f and m not in Bset]
        if not MB:
            raise SpanError(f"pool spans only {len(B)} of {qc.K} dimensions")
        if use_neighbors:
            nb = neighbors(Bset, MB)
            if nb:
                MB = nb
        w = np.array([weight_fn(m, Bset) for m in MB], dtype=float)
        m = MB[int(rng.choice(len(MB), p=w / w.sum()))]
        B.append(m)
        Bset.add(m)
        span.add(pos[m])
    return sorted(B, key=graded_key)


def sample_basis(M: CandidateSet, coords, cfg: SamplerConfig = SamplerConfig()) -> QuotientBasis:
    """Heuristic weighted sampling of a K-element basis from M.

    Bases with no variable admitting full solution readout are redrawn up to
    MAX_RESAMPLES times; the last draw is returned flagged otherwise.
    """
    qc = quotient_coordinates(coords)
    n = qc.ring.nvars
    rng = np.random.default_rng(cfg.seed)
    E = M.E
    pool = list(M.monomials)
    B: list[Monomial] = []
    for _ in range(MAX_RESAMPLES):
        omega = tuple(cfg.omega) if cfg.omega is not None else tuple(int(v) for v in rng.integers(0, 2, n))
        active = [i for i in range(n) if omega[i]] or list(range(n))
        alpha = int(active[int(rng.integers(len(active)))])

        def wfn(m, Bset, omega=omega, alpha=alpha):
            return weight_w(m, E, Bset, alpha, cfg, omega)

        B = _grow(pool, qc, rng, wfn, use_neighbors=True)
        if extractable_actions(B, n):
            return QuotientBasis(tuple(B), alpha, f"sampled(seed={cfg.seed})", True, omega)
    return QuotientBasis(tuple(B), alpha, f"sampled(seed={cfg.seed})", False, omega)


UNIFORM_MODES = ("from-M", "from-degree-closure")


def uniform_pool(M: CandidateSet, mode: str) -> list[Monomial]:
    if mode == "from-M":
        return list(M.monomials)
    if mode == "from-degree-closure":
        n = len(M.monomials[0])
        return monomials_up_to_degree(n, max(sum(m) for m in M.monomials))
    raise ValueError(f"unknown uniform mode {mode!r}")


def sample_basis_uniform(M: CandidateSet, coords, seed: int = 0, mode: str = "from-M") -> QuotientBasis:
    """Basis drawn uniformly among independent pool monomials, one at a time."""
    qc = quotient_coordinates(coords)
    n = qc.ring.nvars
    rng = np.random.default_rng(seed)
    pool = sorted(uniform_pool(M, mode), key=graded_key)
    B: list[Monomial] = []
    for _ in range(MAX_RESAMPLES):
        B = _grow(pool, qc, rng, lambda m, Bset: 1.0, use_neighbors=False)
        acts = extractable_actions(B, n)
        if acts:
            return QuotientBasis(tuple(B), acts[0], f"uniform-{mode}(seed={seed})", True)
    return QuotientBasis(tuple(B), 0, f"uniform-{mode}(seed={seed})", False)
