"""Reader and writer for polynomial-system files (``.sys``).

Format::

    # comments run to end of line
    name toy                      (optional)
    ring x, y over zp(30011)      (or: over complex)
    x + y^2 - 1
    x*y - 1

Expressions use integer literals, variables, ``+ - * ^`` and parentheses.
Multiplication is always explicit. Complex rings additionally accept decimal
literals and an imaginary suffix ``j`` (``2.5``, ``1e-3``, ``0.5j``) so that
floating-point instances can be written out and read back exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .field import FieldError, PrimeField
from .poly import Polynomial, Ring, format_monomial


class SysError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg = msg
        self.line = line
        self.col = col
        loc = f"line {line}, column {col}: " if line else ""
        super().__init__(loc + msg)


class LexError(SysError):
    pass


class ParseError(SysError):
    pass


class SemanticError(SysError):
    pass


@dataclass(frozen=True)
class SystemFile:
    ring: Ring
    equations: tuple[Polynomial, ...]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        if not self.equations:
            raise SemanticError("a system needs at least one equation")
        for f in self.equations:
            if f.ring != self.ring:
                raise SemanticError("equation ring differs from system ring")

    @property
    def nvars(self) -> int:
        return self.ring.nvars


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?j?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "float", "imag", "ident", "op", "end"
    text: str
    line: int
    col: int


def tokenize(text: str, line: int) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LexError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind == "num":
            if tok.endswith("j"):
                kind = "imag"
            elif re.fullmatch(r"\d+", tok):
                kind = "int"
            else:
                kind = "float"
        if kind != "ws":
            out.append(Token(kind, tok, line, pos + 1))
        pos = m.end()
    out.append(Token("end", "", line, len(text) + 1))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _ExprParser:
    """Recursive descent: expr := term (('+'|'-') term)*; term := unary ('*' unary)*;
    unary := '-' unary | '+' unary | power; power := atom ('^' exponent)?"""

    def __init__(self, tokens: list[Token], ring: Ring, names: dict[str, int]):
        self.toks = tokens
        self.i = 0
        self.ring = ring
        self.names = names

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> Token:
        t = self.tok
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}, found {_describe(t)}", t.line, t.col)
        return self.take()

    def parse(self) -> Polynomial:
        f = self.expr()
        t = self.tok
        if t.kind != "end":
            raise ParseError(f"expected operator or end of line, found {_describe(t)}", t.line, t.col)
        return f

    def expr(self) -> Polynomial:
        f = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> Polynomial:
        f = self.unary()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.take()
            f = f * self.unary()
        return f

    def unary(self) -> Polynomial:
        t = self.tok
        if t.kind == "op" and t.text == "-":
            self.take()
            return -self.unary()
        if t.kind == "op" and t.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.take()
            neg = False
            if self.tok.kind == "op" and self.tok.text == "-":
                neg = True
                self.take()
            t = self.tok
            if t.kind != "int":
                raise ParseError(f"expected integer exponent, found {_describe(t)}", t.line, t.col)
            self.take()
            e = int(t.text)
            if neg or e <= 0:
                raise SemanticError(
                    f"exponent must be a positive integer, got {'-' if neg else ''}{e}",
                    caret.line,
                    caret.col,
                )
            return base**e
        return base

    def atom(self) -> Polynomial:
        t = self.tok
        ring = self.ring
        if t.kind == "int":
            self.take()
            return ring.const(int(t.text)) if ring.is_exact else ring.const(complex(int(t.text)))
        if t.kind in ("float", "imag"):
            if ring.is_exact:
                raise SemanticError(
                    f"non-integer literal {t.text!r} in a prime-field ring", t.line, t.col
                )
            self.take()
            if t.kind == "imag":
                return ring.const(complex(0, float(t.text[:-1])))
            return ring.const(complex(float(t.text)))
        if t.kind == "ident":
            self.take()
            if t.text not in self.names:
                raise SemanticError(f"undeclared variable {t.text!r}", t.line, t.col)
            return ring.var(self.names[t.text])
        if t.kind == "op" and t.text == "(":
            self.take()
            f = self.expr()
            self.expect_op(")")
            return f
        raise ParseError(f"expected number, variable or '(', found {_describe(t)}", t.line, t.col)


def _describe(t: Token) -> str:
    return "end of line" if t.kind == "end" else repr(t.text)


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield lineno, line


def _parse_header(toks: list[Token]) -> Ring:
    it = iter(toks)
    t = next(it)
    if t.kind != "ident" or t.text != "ring":
        raise ParseError(f"expected 'ring', found {_describe(t)}", t.line, t.col)
    names: list[str] = []
    while True:
        t = next(it)
        if t.kind != "ident":
            raise ParseError(f"expected variable name, found {_describe(t)}", t.line, t.col)
        if t.text in names:
            raise SemanticError(f"variable {t.text!r} declared twice", t.line, t.col)
        names.append(t.text)
        t = next(it)
        if t.kind == "op" and t.text == ",":
            continue
        break
    if t.kind != "ident" or t.text != "over":
        raise ParseError(f"expected ',' or 'over', found {_describe(t)}", t.line, t.col)
    t = next(it)
    if t.kind == "ident" and t.text == "complex":
        field = None
    elif t.kind == "ident" and t.text == "zp":
        t = next(it)
        if not (t.kind == "op" and t.text == "("):
            raise ParseError(f"expected '(', found {_describe(t)}", t.line, t.col)
        t = next(it)
        if t.kind != "int":
            raise ParseError(f"expected prime modulus, found {_describe(t)}", t.line, t.col)
        try:
            field = PrimeField(int(t.text))
        except FieldError as e:
            raise SemanticError(str(e), t.line, t.col) from None
        t = next(it)
        if not (t.kind == "op" and t.text == ")"):
            raise ParseError(f"expected ')', found {_describe(t)}", t.line, t.col)
    else:
        raise ParseError(f"expected 'zp' or 'complex', found {_describe(t)}", t.line, t.col)
    t = next(it)
    if t.kind != "end":
        raise ParseError(f"expected end of line, found {_describe(t)}", t.line, t.col)
    return Ring(tuple(names), field)


def parse_system(text: str) -> SystemFile:
    lines = list(_content_lines(text))
    name = None
    ring = None
    equations = []
    for lineno, line in lines:
        toks = tokenize(line, lineno)
        if ring is None:
            if toks[0].kind == "ident" and toks[0].text == "name" and name is None:
                if len(toks) < 3:
                    raise ParseError("expected a name", lineno, toks[0].col + 4)
                name = line.strip()[4:].strip()
                continue
            ring = _parse_header(toks)
            continue
        names = {n: i for i, n in enumerate(ring.var_names)}
        equations.append(_ExprParser(toks, ring, names).parse())
    if ring is None:
        raise ParseError("missing 'ring' header", 1, 1)
    if not equations:
        raise SemanticError("a system needs at least one equation", lines[-1][0], 1)
    return SystemFile(ring, tuple(equations), name)


def read_system(path) -> SystemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    s = repr(float(x))
    if s in ("inf", "-inf", "nan"):
        raise SysError(f"cannot write non-finite coefficient {x}")
    return s


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    names = f.ring.var_names
    field = f.ring.field
    parts: list[str] = []
    for m, c in f.terms.items():
        mono = format_monomial(m, names)
        is_one = mono == "1"
        if field is not None:
            v = field.signed(c)
            neg = v < 0
            mag = str(abs(v))
        elif c.imag == 0:
            neg = c.real < 0 or (c.real == 0 and str(c.real).startswith("-"))
            mag = _fmt_float(abs(c.real))
        else:
            sign = "+" if c.imag >= 0 else "-"
            neg = False
            mag = f"({_fmt_float(c.real)}{sign}{_fmt_float(abs(c.imag))}j)"
        if is_one:
            body = mag
        elif mag in ("1", "1.0"):
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def format_system(s: SystemFile) -> str:
    lines = []
    if s.name:
        lines.append(f"name {s.name}")
    over = f"zp({s.ring.field.p})" if s.ring.field else "complex"
    lines.append(f"ring {', '.join(s.ring.var_names)} over {over}")
    lines.extend(format_polynomial(f) for f in s.equations)
    return "\n".join(lines) + "\n"


def write_system(s: SystemFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_system(s))


def system_from_strings(var_names: Sequence[str], equations: Sequence[str], p: int | None = 30011,
                        name: str | None = None) -> SystemFile:
    over = f"zp({p})" if p else "complex"
    head = f"name {name}\n" if name else ""
    return parse_system(head + f"ring {', '.join(var_names)} over {over}\n" + "\n".join(equations))
