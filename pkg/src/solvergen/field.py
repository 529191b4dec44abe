"""Prime-field arithmetic and exact linear algebra over Z_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PRIME = 30011


class FieldError(ArithmeticError):
    pass


class ZeroInverseError(FieldError, ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field Z_p. Elements are plain ints in [0, p) unless wrapped."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p < 2**31:
            raise FieldError(f"modulus must be an integer in [2, 2^31), got {self.p!r}")
        if not is_prime(self.p):
            raise FieldError(f"modulus {self.p} is not prime")

    def __call__(self, n: int) -> "FieldElem":
        return FieldElem(n % self.p, self)

    def normalize(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverseError("zero has no inverse")
        return pow(a, self.p - 2, self.p)

    def sqrt(self, a: int) -> int | None:
        """A square root of `a`, or None for a non-residue."""
        from sympy.ntheory import sqrt_mod

        return sqrt_mod(a % self.p, self.p)

    def signed(self, a: int) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


@dataclass(frozen=True)
class FieldElem:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            object.__setattr__(self, "value", self.value % self.field.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElem((self.value + b) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return FieldElem((self.value - b) % self.field.p, self.field)

    def __rsub__(self, other):
        b = self._coerce(other)
        return FieldElem((b - self.value) % self.field.p, self.field)

    def __mul__(self, other):
        b = self._coerce(other)
        return FieldElem((self.value * b) % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value % self.field.p, self.field)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field.inv(self.value), self.field)

    def __truediv__(self, other):
        b = self._coerce(other)
        return self * FieldElem(self.field.inv(b), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def normalize(n: int, field: PrimeField) -> FieldElem:
    return field(n)


def inverse(a: FieldElem) -> FieldElem:
    return a.inverse()


# ---------------------------------------------------------------------------
# matrices over Z_p (int64 numpy arrays, entries in [0, p))
# ---------------------------------------------------------------------------


def as_zp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(
    a: np.ndarray,
    p: int,
    pivot_cols: Sequence[int] | None = None,
) -> tuple[np.ndarray, list[int], list[int]]:
    """Reduced row echelon form over Z_p.

    Pivots are searched only in `pivot_cols` (in that order; default all
    columns left to right), but row operations act on every column.
    Returns (reduced matrix, pivot columns, pivot rows), where the i-th pivot
    row holds a leading 1 in the i-th pivot column after the pivot rows have
    been moved to the top.
    """
    m = as_zp(a, p).copy()
    nrows = m.shape[0]
    cols = range(m.shape[1]) if pivot_cols is None else pivot_cols
    pivots: list[int] = []
    r = 0
    for c in cols:
        if r >= nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            m[rows] = (m[rows] - col[rows, None] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots, list(range(r))


def pivot_columns(a: np.ndarray, p: int) -> list[int]:
    """Pivot columns of a row echelon form over Z_p, scanning left to right."""
    m = as_zp(a, p).copy()
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        below = m[r + 1 :, c]
        rows = np.flatnonzero(below)
        if rows.size:
            f = (below[rows] * inv) % p
            m[r + 1 + rows, c:] = (m[r + 1 + rows, c:] - f[:, None] * m[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def rank(a: np.ndarray, p: int) -> int:
    """Rank over Z_p via forward elimination only."""
    return len(pivot_columns(a, p))


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve a @ x = b over Z_p for square nonsingular `a`."""
    a = as_zp(a, p)
    b = as_zp(b, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise FieldError("solve needs a square matrix")
    vec = b.ndim == 1
    aug = np.hstack([a, b.reshape(n, -1)])
    red, piv, _ = rref(aug, p, pivot_cols=range(n))
    if len(piv) < n:
        raise FieldError("singular matrix over Z_p")
    x = red[:, n:]
    return x[:, 0] if vec else x


def charpoly(a: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial det(tI - a) over Z_p, highest degree first.

    Uses the Faddeev-LeVerrier-free Hessenberg recurrence, which needs no
    division by k (so it works for any p > n).
    """
    h = _hessenberg(as_zp(a, p), p)
    n = h.shape[0]
    # polys[k] = charpoly of leading k x k block, low degree first
    polys: list[list[int]] = [[1]]
    for k in range(1, n + 1):
        # p_k(t) = (t - h[k-1,k-1]) p_{k-1}(t) - sum_{i<k-1} h[i,k-1] * prod h[j+1,j] * p_i(t)
        prev = polys[k - 1]
        cur = [0] * (k + 1)
        for i, c in enumerate(prev):
            cur[i + 1] = (cur[i + 1] + c) % p
            cur[i] = (cur[i] - int(h[k - 1, k - 1]) * c) % p
        prod = 1
        for i in range(k - 2, -1, -1):
            prod = (prod * int(h[i + 1, i])) % p
            coef = (int(h[i, k - 1]) * prod) % p
            if coef:
                for j, c in enumerate(polys[i]):
                    cur[j] = (cur[j] - coef * c) % p
        polys.append(cur)
    return list(reversed(polys[n]))


def _hessenberg(a: np.ndarray, p: int) -> np.ndarray:
    h = a.copy()
    n = h.shape[0]
    for j in range(n - 2):
        nz = np.nonzero(h[j + 1 :, j])[0]
        if nz.size == 0:
            continue
        k = j + 1 + int(nz[0])
        if k != j + 1:
            h[[j + 1, k]] = h[[k, j + 1]]
            h[:, [j + 1, k]] = h[:, [k, j + 1]]
        inv = pow(int(h[j + 1, j]), p - 2, p)
        for i in range(j + 2, n):
            f = (int(h[i, j]) * inv) % p
            if f:
                h[i] = (h[i] - f * h[j + 1]) % p
                h[:, j + 1] = (h[:, j + 1] + f * h[:, i]) % p
    return h


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p; chunks the inner dimension so int64 never overflows."""
    a = as_zp(a, p)
    b = as_zp(b, p)
    # each partial sum of `step` products stays below 2^63
    step = max(1, (2**62) // ((p - 1) ** 2 + 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], step):
        out = (out + a[:, s : s + step] @ b[s : s + step]) % p
    return out


def to_signed(values: Iterable[int], p: int) -> list[int]:
    half = p // 2
    return [v - p if v > half else v for v in (int(x) % p for x in values)]
