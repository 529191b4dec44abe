"""Monomials, monomial orders and sparse multivariate polynomials.

Monomials are plain tuples of nonnegative exponents. A polynomial stores a
dict mapping monomials to nonzero coefficients; coefficients are ints in
[0, p) over a prime field, or Python complex numbers over the complex ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .field import DEFAULT_PRIME, PrimeField

Monomial = tuple  # tuple[int, ...]


class PolyError(ValueError):
    pass


class RingMismatchError(PolyError):
    pass


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ring:
    var_names: tuple[str, ...]
    field: PrimeField | None = None  # None means complex floats

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        if not self.var_names:
            raise PolyError("a ring needs at least one variable")
        if len(set(self.var_names)) != len(self.var_names):
            raise PolyError(f"duplicate variable names in {self.var_names}")

    @classmethod
    def zp(cls, var_names: Sequence[str], p: int = DEFAULT_PRIME) -> "Ring":
        return cls(tuple(var_names), PrimeField(p))

    @classmethod
    def complex(cls, var_names: Sequence[str]) -> "Ring":
        return cls(tuple(var_names), None)

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    @property
    def is_exact(self) -> bool:
        return self.field is not None

    @property
    def p(self) -> int:
        if self.field is None:
            raise PolyError("complex ring has no modulus")
        return self.field.p

    @property
    def coeff_kind(self) -> str:
        return f"zp({self.field.p})" if self.field else "complex"

    def with_field(self, field: PrimeField | None) -> "Ring":
        return Ring(self.var_names, field)

    def one(self) -> Monomial:
        return (0,) * self.nvars

    def var(self, i: int) -> "Polynomial":
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {self.one(): c})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def monomial(self, m: Monomial, c=1) -> "Polynomial":
        return Polynomial(self, {tuple(m): c})

    def coerce(self, c):
        if self.field is not None:
            if isinstance(c, complex) or isinstance(c, float):
                raise PolyError(f"cannot coerce {c!r} into {self.coeff_kind}")
            return int(c) % self.field.p
        return complex(c)


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """b / a; raises if a does not divide b."""
    q = tuple(y - x for x, y in zip(a, b))
    if any(e < 0 for e in q):
        raise PolyError(f"{a} does not divide {b}")
    return q


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(m: Monomial) -> int:
    return sum(m)


def graded_key(m: Monomial):
    """Canonical listing order for monomial sets: 1, x, y, x^2, x*y, y^2, ..."""
    return (sum(m), tuple(-e for e in m))


def monomials_up_to_degree(nvars: int, deg: int) -> list[Monomial]:
    out: list[Monomial] = []

    def rec(prefix: list[int], left: int):
        if len(prefix) == nvars - 1:
            for e in range(left + 1):
                out.append(tuple(prefix) + (e,))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e)

    if nvars == 0:
        return [()]
    rec([], deg)
    return sorted(out, key=graded_key)


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for e, n in zip(m, names):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, or a nonnegative weight vector with grevlex tiebreak.

    `precedence` lists variable indices from most to least significant; the
    default is declaration order.
    """

    kind: str = "grevlex"
    weights: tuple[int, ...] | None = None
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "weighted"):
            raise PolyError(f"unknown order kind {self.kind!r}")
        if self.kind == "weighted":
            if self.weights is None:
                raise PolyError("weighted order needs weights")
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
            if any(w < 0 or w > 2**16 for w in self.weights):
                raise PolyError("weights must be integers in [0, 2^16]")
        elif self.weights is not None:
            raise PolyError(f"{self.kind} order takes no weights")
        if self.precedence is not None:
            object.__setattr__(self, "precedence", tuple(self.precedence))
            if sorted(self.precedence) != list(range(len(self.precedence))):
                raise PolyError(f"precedence must be a permutation, got {self.precedence}")

    @classmethod
    def grevlex(cls, precedence=None) -> "MonomialOrder":
        return cls("grevlex", None, precedence)

    @classmethod
    def lex(cls, precedence=None) -> "MonomialOrder":
        return cls("lex", None, precedence)

    @classmethod
    def weighted(cls, weights, precedence=None) -> "MonomialOrder":
        return cls("weighted", tuple(weights), precedence)

    @cached_property
    def key(self) -> Callable[[Monomial], tuple]:
        """Flat int-tuple sort key: a < b under this order iff key(a) < key(b)."""
        perm = self.precedence
        w = self.weights
        if self.kind == "lex":
            if perm is None:
                return lambda m: m
            return lambda m: tuple(m[i] for i in perm)
        if perm is None:
            def grev(m):
                return (sum(m),) + tuple(-e for e in reversed(m))
        else:
            rev = tuple(reversed(perm))

            def grev(m):
                return (sum(m),) + tuple(-m[i] for i in rev)
        if self.kind == "grevlex":
            return grev
        return lambda m: (sum(a * b for a, b in zip(w, m)),) + grev(m)

    def compare(self, a: Monomial, b: Monomial) -> int:
        if len(a) != len(b):
            raise PolyError("monomials of different length")
        if self.weights is not None and len(self.weights) != len(a):
            raise PolyError("weight vector length does not match monomial")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def label(self, names: Sequence[str] | None = None) -> str:
        def var(i):
            return names[i] if names else str(i)

        s = self.kind
        if self.weights is not None:
            s += "(" + ":".join(map(str, self.weights)) + ")"
        if self.precedence is not None:
            s += "[" + ">".join(var(i) for i in self.precedence) + "]"
        return s


GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


def compare(order: MonomialOrder, a: Monomial, b: Monomial) -> int:
    return order.compare(a, b)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Polynomial:
    ring: Ring
    terms: Mapping[Monomial, object] = dc_field(default_factory=dict)

    def __post_init__(self):
        ring = self.ring
        n = ring.nvars
        clean = {}
        for m, c in self.terms.items():
            m = tuple(m)
            if len(m) != n:
                raise PolyError(f"monomial {m} has wrong length for {n} variables")
            c = ring.coerce(c)
            if ring.field is not None and c == 0:
                continue
            if ring.field is None and c == 0:
                continue
            clean[m] = c
        # descending grevlex so iteration order never depends on construction
        key = GREVLEX.key
        ordered = dict(sorted(clean.items(), key=lambda t: key(t[0]), reverse=True))
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Polynomial":
        """Build from an already clean dict (no coercion, no zero filtering)."""
        obj = object.__new__(cls)
        key = GREVLEX.key
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(
            obj, "terms", dict(sorted(terms.items(), key=lambda t: key(t[0]), reverse=True))
        )
        return obj

    # -- basic protocol ---------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[Monomial]:
        return list(self.terms)

    def coeff(self, m: Monomial):
        return self.terms.get(tuple(m), 0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    def to_str(self) -> str:
        from .sysio import format_polynomial

        return format_polynomial(self)

    __str__ = to_str

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.ring, _add(self.terms, other.terms, self.ring.field, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.ring, _add(self.terms, other.terms, self.ring.field, -1))

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.ring, _mul(self.terms, other.terms, self.ring.field))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        out = self.ring.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = self.ring.coerce(c)
        if f is not None:
            p = f.p
            return Polynomial._raw(
                self.ring, {m: v * c % p for m, v in self.terms.items()} if c else {}
            )
        return Polynomial._raw(self.ring, {m: v * c for m, v in self.terms.items() if v * c != 0})

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        c = self.ring.coerce(c)
        f = self.ring.field
        if f is not None:
            p = f.p
            if c == 0:
                return self.ring.zero()
            return Polynomial._raw(
                self.ring, {mono_mul(m, mono): v * c % p for m, v in self.terms.items()}
            )
        return Polynomial._raw(self.ring, {mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        _, c = self.leading_term(order)
        if self.ring.field is not None:
            return self.scale(self.ring.field.inv(c))
        return self.scale(1 / c)

    def evaluate(self, point: Sequence):
        if len(point) != self.ring.nvars:
            raise PolyError(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
        f = self.ring.field
        if f is not None:
            p = f.p
            pt = [int(v) % p for v in point]
            total = 0
            for m, c in self.terms.items():
                t = c
                for x, e in zip(pt, m):
                    if e:
                        t = t * pow(x, e, p) % p
                total += t
            return total % p
        pt = [complex(v) for v in point]
        total = 0j
        for m, c in self.terms.items():
            t = c
            for x, e in zip(pt, m):
                if e:
                    t *= x**e
            total += t
        return total

    def coefficient_scale(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def map_coefficients(self, ring: Ring, fn: Callable) -> "Polynomial":
        return Polynomial(ring, {m: fn(c) for m, c in self.terms.items()})

    def substitute_var(self, i: int, value: "Polynomial") -> "Polynomial":
        """Replace variable i by a polynomial in the same ring."""
        out = self.ring.zero()
        powers = {0: self.ring.const(1)}
        for m, c in self.terms.items():
            e = m[i]
            if e not in powers:
                powers[e] = value**e
            rest = m[:i] + (0,) + m[i + 1 :]
            out = out + (powers[e].mul_monomial(rest, c))
        return out


def _add(a: dict, b: dict, field: PrimeField | None, sign: int) -> dict:
    out = dict(a)
    if field is not None:
        p = field.p
        for m, c in b.items():
            v = (out.get(m, 0) + sign * c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    else:
        for m, c in b.items():
            v = out.get(m, 0) + sign * c
            if v != 0:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _mul(a: dict, b: dict, field: PrimeField | None) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    if field is not None:
        p = field.p
        return {m: v % p for m, v in out.items() if v % p}
    return {m: v for m, v in out.items() if v != 0}


def poly_arith(f: Polynomial, g: Polynomial, op: str, scale=1) -> Polynomial:
    """f op (scale * g) for op in add/sub/mul."""
    if f.ring != g.ring:
        raise RingMismatchError(f"{f.ring} vs {g.ring}")
    g = g.scale(scale) if scale != 1 else g
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise PolyError(f"unknown op {op!r}")


def leading_term(f: Polynomial, order: MonomialOrder):
    return f.leading_term(order)


def evaluate(f: Polynomial, point: Sequence):
    return f.evaluate(point)


def support(polys: Iterable[Polynomial]) -> set[Monomial]:
    out: set[Monomial] = set()
    for f in polys:
        out.update(f.terms)
    return out
