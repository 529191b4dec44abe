"""Floating-point action-matrix solvers built from exact templates.

The template fixes which rows to stack and how columns are ordered. A float
instance fills the matrix, elimination expresses each reducible monomial in
the basis, and the eigenvectors of the resulting action matrix hold the
basis monomials evaluated at each solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groebner import groebner_basis
from .basis import QuotientBasis, basis_from_gb, extraction_complete
from .poly import Monomial, Polynomial
from .template import (
    EliminationTemplate,
    TemplateError,
    best_template,
    build_template,
    excess_pivot_columns,
    prune,
    template_matrix,
)

PIVOT_TOL = 1e-12
READOUT_TOL = 1e-12


class NumericError(RuntimeError):
    pass


class SupportMismatchError(NumericError):
    pass


class RankDeficiencyError(NumericError):
    pass


class EigenError(NumericError):
    pass


class UnreadableVariableError(NumericError):
    pass


@dataclass(frozen=True)
class SolutionSet:
    points: np.ndarray  # (count, nvars) complex
    residuals: np.ndarray  # (count,)
    eigenvalues: np.ndarray

    def __len__(self):
        return len(self.points)


def instantiate(template: EliminationTemplate, equations: Sequence[Polynomial]) -> np.ndarray:
    """Complex coefficient matrix of a float instance in template order."""
    for f in equations:
        if f.ring.is_exact:
            raise SupportMismatchError("numeric instances need complex coefficients")
    used = {i for i, _ in template.rows}
    for i in used:
        if i >= len(equations):
            raise SupportMismatchError(f"template uses equation {i}, instance has {len(equations)}")
    try:
        return template_matrix(template, equations, dtype=complex)
    except TemplateError as e:
        raise SupportMismatchError(str(e)) from None


def eliminate_extract(
    C: np.ndarray,
    template: EliminationTemplate,
    excess_pivots: Sequence[int] | None = None,
) -> np.ndarray:
    """Float action matrix via partial-pivoting elimination of E, then R.

    `excess_pivots` lists the excess columns to eliminate; they come from
    the exact template (see template.excess_pivot_columns). Without it an
    excess column is skipped when its best pivot is negligible.
    """
    A = np.array(C, dtype=complex)
    nE, nR, K = len(template.excess), len(template.reducible), template.K
    nrows = A.shape[0]
    norms = np.linalg.norm(A, axis=1)
    norms[norms == 0] = 1.0
    pivot_set = set(excess_pivots) if excess_pivots is not None else None
    r = 0

    def pivot_on(c: int, required: bool) -> bool:
        nonlocal r
        if r >= nrows:
            if required:
                raise RankDeficiencyError(f"ran out of rows at column {c}")
            return False
        mags = np.abs(A[r:, c])
        k = r + int(np.argmax(mags))
        # the exact template guarantees required pivots are generically
        # nonzero, so only an exactly vanishing one is fatal
        if mags[k - r] == 0 or not np.isfinite(mags[k - r]):
            if required:
                raise RankDeficiencyError(f"zero pivot in column {c}")
            return False
        if not required and mags[k - r] <= PIVOT_TOL * norms[k]:
            return False
        if k != r:
            A[[r, k]] = A[[k, r]]
            norms[[r, k]] = norms[[k, r]]
        f = A[r + 1 :, c] / A[r, c]
        A[r + 1 :, c:] -= np.outer(f, A[r, c:])
        A[r + 1 :, c] = 0
        r += 1
        return True

    for c in range(nE):
        if pivot_set is None:
            pivot_on(c, False)
        elif c in pivot_set:
            pivot_on(c, True)
    r0 = r
    for c in range(nE, nE + nR):
        pivot_on(c, True)
    # rows r0..r0+nR-1: upper triangular in R, then basis columns
    U = A[r0 : r0 + nR, nE : nE + nR]
    W = A[r0 : r0 + nR, nE + nR :]
    X = -np.linalg.solve(U, W) if nR else np.zeros((0, K), dtype=complex)

    alpha = template.action_var
    bidx = {b: k for k, b in enumerate(template.basis)}
    ridx = {m: k for k, m in enumerate(template.reducible)}
    col_of = {b: j for j, b in enumerate(template.basis_cols)}
    M = np.zeros((K, K), dtype=complex)
    for i, b in enumerate(template.basis):
        ab = b[:alpha] + (b[alpha] + 1,) + b[alpha + 1 :]
        if ab in bidx:
            M[i, bidx[ab]] = 1
        else:
            row = X[ridx[ab]]
            for bj, j in col_of.items():
                M[i, bidx[bj]] = row[j]
    return M


def eigen_solve(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unit-norm right eigenvectors (as columns)."""
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise EigenError("action matrix has non-finite entries")
    try:
        vals, vecs = np.linalg.eig(M)
    except np.linalg.LinAlgError as e:
        raise EigenError(str(e)) from None
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    return vals, vecs


def _edges(B: Sequence[Monomial], i: int) -> list[tuple[int, int]]:
    """Pairs (j, k) with B[j] = x_i * B[k]."""
    index = {b: k for k, b in enumerate(B)}
    out = []
    for j, b in enumerate(B):
        if b[i] > 0:
            k = index.get(b[:i] + (b[i] - 1,) + b[i + 1 :])
            if k is not None:
                out.append((j, k))
    return out


def extract_solutions(
    eigvals: np.ndarray,
    eigvecs: np.ndarray,
    B: Sequence[Monomial],
    alpha: int,
    equations: Sequence[Polynomial] | None = None,
) -> SolutionSet:
    B = list(B)
    n = len(B[0])
    if not extraction_complete(B, alpha):
        raise UnreadableVariableError("basis does not allow reading every variable")
    edges = {i: _edges(B, i) for i in range(n) if i != alpha}
    pts = np.zeros((len(eigvals), n), dtype=complex)
    for s, lam in enumerate(eigvals):
        v = eigvecs[:, s]
        scale = np.linalg.norm(v)
        pts[s, alpha] = lam
        for i, es in edges.items():
            ranked = sorted(es, key=lambda e: -abs(v[e[1]]))
            j, k = ranked[0]
            if abs(v[k]) <= READOUT_TOL * scale:
                raise UnreadableVariableError(f"variable {i} has no usable edge for eigenvalue {lam}")
            pts[s, i] = v[j] / v[k]
    res = residuals(pts, equations) if equations is not None else np.zeros(len(pts))
    return SolutionSet(pts, res, np.asarray(eigvals))


def residuals(points, equations: Sequence[Polynomial]) -> np.ndarray:
    """max_i |f_i(x)| / (1 + max |coefficient of f_i|) for each point x."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    out = np.zeros(len(pts))
    for s, x in enumerate(pts):
        worst = 0.0
        for f in equations:
            val = abs(f.evaluate(list(x)))
            worst = max(worst, val / (1.0 + f.coefficient_scale()))
        out[s] = worst
    return out


def _compile(equations: Sequence[Polynomial]):
    """Stacked exponent/coefficient arrays for fast evaluation."""
    exps, coefs, rows = [], [], []
    for r, f in enumerate(equations):
        for m, c in f.terms.items():
            exps.append(m)
            coefs.append(complex(c))
            rows.append(r)
    return np.array(exps, dtype=int), np.array(coefs), np.array(rows), len(equations)


def _value_and_jacobian(compiled, x: np.ndarray):
    exps, coefs, rows, neq = compiled
    n = len(x)
    powers = x[None, :] ** exps
    terms = coefs * np.prod(powers, axis=1)
    F = np.zeros(neq, dtype=complex)
    np.add.at(F, rows, terms)
    J = np.zeros((neq, n), dtype=complex)
    for i in range(n):
        d = exps.copy()
        live = d[:, i] > 0
        d[live, i] -= 1
        t = np.where(live, coefs * exps[:, i] * np.prod(x[None, :] ** d, axis=1), 0)
        np.add.at(J[:, i], rows, t)
    return F, J


def refine(points, equations: Sequence[Polynomial], steps: int = 2) -> np.ndarray:
    """Gauss-Newton polish of each point on the (possibly overdetermined) system.

    A step is kept only if it lowers the residual norm.
    """
    pts = np.array(np.atleast_2d(points), dtype=complex)
    scale = np.array([1.0 + f.coefficient_scale() for f in equations])
    compiled = _compile(equations)
    for s in range(len(pts)):
        x = pts[s]
        F, J = _value_and_jacobian(compiled, x)
        for _ in range(steps):
            if not np.all(np.isfinite(J)):
                break
            dx = np.linalg.lstsq(J / scale[:, None], -F / scale, rcond=None)[0]
            F2, J2 = _value_and_jacobian(compiled, x + dx)
            if not np.linalg.norm(F2 / scale) < np.linalg.norm(F / scale):
                break
            x, F, J = x + dx, F2, J2
        pts[s] = x
    return pts


# ---------------------------------------------------------------------------
# solver objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Solver:
    template: EliminationTemplate
    excess_pivots: tuple[int, ...]

    @property
    def basis(self) -> tuple[Monomial, ...]:
        return self.template.basis

    @property
    def action_var(self) -> int:
        return self.template.action_var

    def action_matrix(self, equations: Sequence[Polynomial]) -> np.ndarray:
        return eliminate_extract(instantiate(self.template, equations), self.template, self.excess_pivots)

    def solve(self, equations: Sequence[Polynomial], refine_steps: int = 0) -> SolutionSet:
        M = self.action_matrix(equations)
        vals, vecs = eigen_solve(M)
        sol = extract_solutions(vals, vecs, self.basis, self.action_var, equations)
        if refine_steps:
            pts = refine(sol.points, equations, refine_steps)
            sol = SolutionSet(pts, residuals(pts, equations), sol.eigenvalues)
        return sol


def make_solver(
    zp_equations: Sequence[Polynomial],
    basis: QuotientBasis | Sequence[Monomial] | None = None,
    action: int | None = None,
    do_prune: bool = True,
) -> Solver:
    """Template-based solver from an exact instance.

    Without a basis the grevlex standard monomials are used. Without an
    action the smallest extraction-complete template over all variables wins.
    """
    if basis is None:
        basis = basis_from_gb(groebner_basis(list(zp_equations)))
    B = tuple(basis.monomials) if isinstance(basis, QuotientBasis) else tuple(basis)
    n = zp_equations[0].ring.nvars
    if action is None:
        actions = [a for a in range(n) if extraction_complete(B, a)]
        if not actions:
            raise UnreadableVariableError("no action variable allows full solution readout")
        t = best_template(zp_equations, B, actions=actions) if do_prune else build_template(zp_equations, B, actions[0])
    else:
        t = build_template(zp_equations, B, action)
        if do_prune:
            t = prune(t, zp_equations)
    return Solver(t, excess_pivot_columns(t, zp_equations))
