"""Elimination templates and exact action matrices over Z_p.

A template is a list of (equation index, multiplier) rows. Its columns are
split into excess monomials E, reducible monomials R = alpha*B \\ B and the
basis B. Eliminating E and then R expresses every reducible monomial in the
basis, which is all the action matrix needs.

Feasibility has a rank form that the pruning pass relies on: the row space
restricted to vectors vanishing on E projects onto the R columns with
dimension rank(E|R) - rank(E), so a template is feasible exactly when that
difference equals |R|.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import field as zp
from .basis import QuotientBasis, quotient_coordinates
from .poly import GREVLEX, Monomial, Polynomial, format_monomial, mono_mul, monomials_up_to_degree

DEFAULT_DEGREE_CAP = 14


class TemplateError(RuntimeError):
    pass


class CapExceededError(TemplateError):
    """No feasible template exists within the degree cap."""


class EliminationRankError(TemplateError):
    """The instance loses rank on a template that is feasible generically."""


class AllActionsFailedError(TemplateError):
    pass


def _desc(mons) -> list[Monomial]:
    return sorted(mons, key=GREVLEX.key, reverse=True)


@dataclass(frozen=True)
class EliminationTemplate:
    rows: tuple[tuple[int, Monomial], ...]
    excess: tuple[Monomial, ...]
    reducible: tuple[Monomial, ...]
    basis_cols: tuple[Monomial, ...]
    basis: tuple[Monomial, ...]  # basis order used to index the action matrix
    action_var: int
    var_names: tuple[str, ...]

    @property
    def columns(self) -> tuple[Monomial, ...]:
        return self.excess + self.reducible + self.basis_cols

    @property
    def size(self) -> tuple[int, int]:
        return (len(self.rows), len(self.columns))

    @property
    def K(self) -> int:
        return len(self.basis)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def reducible_set(B: Sequence[Monomial], alpha: int) -> list[Monomial]:
    Bset = set(B)
    R = {b[:alpha] + (b[alpha] + 1,) + b[alpha + 1 :] for b in Bset}
    return _desc(R - Bset)


def expand_rows(equations: Sequence[Polynomial], max_deg: int) -> list[tuple[int, Monomial]]:
    """All (i, m) with deg(m * f_i) <= max_deg, by equation then ascending degree."""
    n = equations[0].ring.nvars
    rows = []
    for i, f in enumerate(equations):
        d = max_deg - f.total_degree()
        if d >= 0:
            rows.extend((i, m) for m in monomials_up_to_degree(n, d))
    return rows


def _row_support(equations, rows) -> set[Monomial]:
    out = set()
    for i, m in rows:
        out.update(mono_mul(m, t) for t in equations[i].terms)
    return out


def make_template(equations: Sequence[Polynomial], rows, B: Sequence[Monomial], alpha: int) -> EliminationTemplate:
    """Partition the columns of `rows` as excess | reducible | basis."""
    rows = tuple((int(i), tuple(m)) for i, m in rows)
    B = tuple(B)
    R = reducible_set(B, alpha)
    Bset = set(B)
    Rset = set(R)
    touched = _row_support(equations, rows)
    excess = _desc(touched - Bset - Rset)
    return EliminationTemplate(rows, tuple(excess), tuple(R), tuple(_desc(Bset)), B, alpha,
                               tuple(equations[0].ring.var_names))


def template_matrix(template: EliminationTemplate, equations: Sequence[Polynomial], dtype=None) -> np.ndarray:
    """Coefficient matrix in template column order (mod p for exact rings)."""
    ring = equations[0].ring
    col = {m: j for j, m in enumerate(template.columns)}
    if dtype is None:
        dtype = np.int64 if ring.is_exact else complex
    C = np.zeros((len(template.rows), len(col)), dtype=dtype)
    for r, (i, mul) in enumerate(template.rows):
        for t, c in equations[i].terms.items():
            m = mono_mul(mul, t)
            try:
                C[r, col[m]] = c
            except KeyError:
                raise TemplateError(f"monomial {m} of row {r} is not a template column") from None
    return C


# ---------------------------------------------------------------------------
# feasibility and pruning
# ---------------------------------------------------------------------------


def _reducible_rank(C: np.ndarray, nE: int, nR: int, p: int) -> int:
    piv = zp.pivot_columns(C[:, : nE + nR], p)
    return sum(1 for c in piv if c >= nE)


def is_feasible(template: EliminationTemplate, equations: Sequence[Polynomial]) -> bool:
    nE, nR = len(template.excess), len(template.reducible)
    if nR == 0:
        return True
    if not template.rows:
        return False
    C = template_matrix(template, equations)
    return _reducible_rank(C, nE, nR, equations[0].ring.p) == nR


def feasible(rows, B, alpha, equations) -> bool:
    return is_feasible(make_template(equations, rows, B, alpha), equations)


def prune(template: EliminationTemplate, equations: Sequence[Polynomial]) -> EliminationTemplate:
    """Greedy single pass in reverse row order: drop a row when the rest stays feasible.

    The pass has a closed form. Let G be the rows that are independent of
    all earlier rows (restricted to the E and R columns); they form a basis
    of the row space in which each prefix of the template spans the same
    space as the G-rows it contains. The pass keeps row i exactly when the
    unit vectors of R cannot be written without it given the earlier rows
    and the rows already kept, which makes the kept set the support of the
    unique expression of those unit vectors in the basis G.
    """
    p = equations[0].ring.p
    nE, nR = len(template.excess), len(template.reducible)
    if nR == 0:
        return make_template(equations, (), template.basis, template.action_var)
    C = template_matrix(template, equations)[:, : nE + nR]
    G = zp.pivot_columns(C.T, p)  # first maximal independent set of rows
    CG = C[G]
    U = np.zeros((nR, nE + nR), dtype=np.int64)
    U[:, nE:] = np.eye(nR, dtype=np.int64)
    # Y @ CG = U, solved as CG^T @ Y^T = U^T
    aug = np.hstack([CG.T, U.T])
    red, piv, _ = zp.rref(aug, p, pivot_cols=range(len(G)))
    if len(piv) != len(G):
        raise TemplateError("row basis is not independent")
    rest = red[len(G) :, len(G) :]
    if np.any(rest):
        raise TemplateError("cannot prune an infeasible template")
    Y = np.zeros((len(G), nR), dtype=np.int64)
    Y[piv] = red[: len(piv), len(G) :]
    keep = sorted(G[k] for k in range(len(G)) if np.any(Y[k]))
    rows = [template.rows[r] for r in keep]
    return make_template(equations, rows, template.basis, template.action_var)


def build_template(
    equations: Sequence[Polynomial],
    B: Sequence[Monomial] | QuotientBasis,
    alpha: int,
    max_deg_cap: int = DEFAULT_DEGREE_CAP,
) -> EliminationTemplate:
    """Smallest degree closure of the equations that reduces every alpha*b.

    Degrees below that of the highest reducible monomial cannot be feasible
    and are skipped.
    """
    B = tuple(B.monomials) if isinstance(B, QuotientBasis) else tuple(B)
    R = reducible_set(B, alpha)
    d = max(f.total_degree() for f in equations)
    if R:
        d = max(d, max(sum(r) for r in R))
    while d <= max_deg_cap:
        t = make_template(equations, expand_rows(equations, d), B, alpha)
        if is_feasible(t, equations):
            return t
        d += 1
    raise CapExceededError(f"no feasible template up to degree {max_deg_cap} for action {alpha}")


def best_template(
    equations: Sequence[Polynomial],
    B: Sequence[Monomial] | QuotientBasis,
    max_deg_cap: int = DEFAULT_DEGREE_CAP,
    actions: Sequence[int] | None = None,
) -> EliminationTemplate:
    """Build and prune for every action variable; smallest (rows, cols) wins."""
    n = equations[0].ring.nvars
    best = None
    for a in actions if actions is not None else range(n):
        try:
            t = prune(build_template(equations, B, a, max_deg_cap), equations)
        except CapExceededError:
            continue
        if best is None or t.size < best.size:
            best = t
    if best is None:
        raise AllActionsFailedError("every action variable exceeded the degree cap")
    return best


# ---------------------------------------------------------------------------
# action matrices
# ---------------------------------------------------------------------------


def action_matrix_from_template(template: EliminationTemplate, equations: Sequence[Polynomial]) -> np.ndarray:
    """Exact K x K matrix M with alpha*b_i = sum_j M[i, j] b_j modulo the ideal."""
    p = equations[0].ring.p
    nE, nR = len(template.excess), len(template.reducible)
    alpha = template.action_var
    bidx = {b: k for k, b in enumerate(template.basis)}
    bcol = [nE + nR + j for j in range(len(template.basis_cols))]
    K = template.K
    M = np.zeros((K, K), dtype=np.int64)
    expr: dict[Monomial, np.ndarray] = {}
    if nR:
        C = template_matrix(template, equations)
        red, piv, _ = zp.rref(C, p, pivot_cols=range(nE + nR))
        for r, c in enumerate(piv):
            if c >= nE:
                expr[template.reducible[c - nE]] = red[r]
        if len(expr) != nR:
            raise EliminationRankError(f"only {len(expr)} of {nR} reducible monomials eliminated")
    for i, b in enumerate(template.basis):
        ab = b[:alpha] + (b[alpha] + 1,) + b[alpha + 1 :]
        if ab in bidx:
            M[i, bidx[ab]] = 1
            continue
        row = expr[ab]
        for j, col in enumerate(bcol):
            if row[col]:
                M[i, bidx[template.basis_cols[j]]] = (-int(row[col])) % p
    return M


def action_matrix_oracle(B: Sequence[Monomial], alpha: int, coords) -> np.ndarray:
    """Ground truth from normal forms: solve coords(alpha*b_i) = M[i] @ coords(B)."""
    qc = quotient_coordinates(coords)
    B = list(B)
    CB = np.stack([qc(b) for b in B])
    CA = np.stack([qc(b[:alpha] + (b[alpha] + 1,) + b[alpha + 1 :]) for b in B])
    # M @ CB = CA  <=>  CB^T @ M^T = CA^T
    try:
        return zp.solve(CB.T, CA.T, qc.p).T.copy()
    except zp.FieldError:
        raise TemplateError("basis coordinate vectors are dependent") from None


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def parse_monomial(text: str, names: Sequence[str]) -> Monomial:
    text = text.strip()
    exps = [0] * len(names)
    if text == "1":
        return tuple(exps)
    idx = {n: i for i, n in enumerate(names)}
    for part in text.split("*"):
        m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?", part)
        if m is None or m.group(1) not in idx:
            raise TemplateError(f"bad monomial {text!r}")
        exps[idx[m.group(1)]] += int(m.group(2) or 1)
    return tuple(exps)


def format_template(t: EliminationTemplate) -> str:
    names = t.var_names

    def fm(ms):
        return " ".join(format_monomial(m, names) for m in ms)

    r, c = t.size
    lines = [f"rows {r} cols {c} basis {t.K} action {names[t.action_var]}", "vars " + " ".join(names)]
    lines += [f"eq={i} mul={format_monomial(m, names)}" for i, m in t.rows]
    lines.append(f"columns {fm(t.excess)} | {fm(t.reducible)} | {fm(t.basis_cols)}")
    lines.append(f"basis {fm(t.basis)}")
    return "\n".join(lines) + "\n"


def parse_template(text: str) -> EliminationTemplate:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = re.fullmatch(r"rows (\d+) cols (\d+) basis (\d+) action (\S+)", lines[0].strip())
    if head is None or not lines[1].startswith("vars "):
        raise TemplateError("malformed template header")
    names = tuple(lines[1].split()[1:])
    nrows = int(head.group(1))
    rows = []
    for ln in lines[2 : 2 + nrows]:
        m = re.fullmatch(r"eq=(\d+) mul=(\S+)", ln.strip())
        if m is None:
            raise TemplateError(f"malformed row line {ln!r}")
        rows.append((int(m.group(1)), parse_monomial(m.group(2), names)))
    cols_line = lines[2 + nrows]
    basis_line = lines[3 + nrows]
    if not cols_line.startswith("columns ") or not basis_line.startswith("basis"):
        raise TemplateError("malformed column or basis line")
    parts = cols_line[len("columns ") :].split("|")
    if len(parts) != 3:
        raise TemplateError("columns line needs three parts")
    E, R, Bc = (tuple(parse_monomial(s, names) for s in part.split()) for part in parts)
    basis = tuple(parse_monomial(s, names) for s in basis_line.split()[1:])
    t = EliminationTemplate(tuple(rows), E, R, Bc, basis, names.index(head.group(4)), names)
    if t.size != (nrows, int(head.group(2))) or t.K != int(head.group(3)):
        raise TemplateError("template header does not match its body")
    return t


def write_template(t: EliminationTemplate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_template(t))


def read_template(path) -> EliminationTemplate:
    with open(path, encoding="utf-8") as fh:
        return parse_template(fh.read())


def excess_pivot_columns(template: EliminationTemplate, equations: Sequence[Polynomial]) -> tuple[int, ...]:
    """Excess columns that carry a pivot under left-to-right elimination.

    The pattern is generic: any instance with the same structure and generic
    data pivots on the same columns, so a float solver can reuse it instead
    of deciding numerically which excess columns are dependent.
    """
    nE = len(template.excess)
    if nE == 0:
        return ()
    C = template_matrix(template, equations)[:, :nE]
    return tuple(zp.pivot_columns(C, equations[0].ring.p))
