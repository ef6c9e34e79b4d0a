"""Scalar fields on a coordinate space as expression trees.

Fields are immutable trees over the coordinates ``x1 .. xN`` built from
constants, coordinates, sums, products, negation, integer powers, ``sin``
and ``cos``.  Partial derivatives are again trees, so every derivative is
exact up to rounding of the constants.

>>> f = parse("x1*x2 + sin(x3)^2")
>>> str(f.diff(3))
'2*sin(x3)*cos(x3)'
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product

import numpy as np

__all__ = [
    "ScalarField",
    "Const",
    "Coord",
    "Add",
    "Mul",
    "Neg",
    "Pow",
    "Sin",
    "Cos",
    "ParseError",
    "parse",
    "coords",
]


class ScalarField:
    """Base class of all expression nodes."""

    precedence = 100

    # -- construction sugar ---------------------------------------------------

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            raise TypeError("only integer powers are supported")
        return power(self, int(k))

    # -- interface --------------------------------------------------------------

    def evaluate(self, x, xp=np):
        """Evaluate at points ``x`` of shape ``(..., N)``; returns shape ``(...)``."""
        raise NotImplementedError

    def __call__(self, x, xp=np):
        return self.evaluate(x, xp)

    def diff(self, i: int) -> "ScalarField":
        """Partial derivative in the 1-based coordinate ``x_i``."""
        raise NotImplementedError

    def substitute(self, mapping: dict[int, "ScalarField"]) -> "ScalarField":
        """Replace coordinates ``x_i`` by the fields ``mapping[i]``."""
        raise NotImplementedError

    def max_coordinate(self) -> int:
        raise NotImplementedError

    # -- derivative tables ------------------------------------------------------

    def _table(self, order: int, n: int):
        key = (order, n)
        cache = self.__dict__.setdefault("_tables", {})
        if key not in cache:
            lower = self._table(order - 1, n) if order > 1 else {(): self}
            cache[key] = {
                idx: lower[idx[:-1]].diff(idx[-1])
                for idx in combinations_with_replacement(range(1, n + 1), order)
            }
        return cache[key]

    def derivatives(self, x, order: int, xp=np):
        """Symmetric array of all ``order``-th partials at ``x`` (shape ``(..., N, ..., N)``)."""
        x = xp.asarray(x)
        n = x.shape[-1]
        if order == 0:
            return self.evaluate(x, xp)
        table = self._table(order, n)
        lead = x.shape[:-1]
        if xp is np:
            out = np.zeros(lead + (n,) * order)
            for idx, tree in table.items():
                if isinstance(tree, Const) and tree.value == 0.0:
                    continue
                val = tree.evaluate(x, xp)
                for perm in set(permutations(idx)):
                    out[(...,) + tuple(k - 1 for k in perm)] = val
            return out
        # tracing backends (jax) cannot assign into arrays
        entries = {idx: tree.evaluate(x, xp) for idx, tree in table.items()}
        flat = [entries[tuple(sorted(t))] for t in product(range(1, n + 1), repeat=order)]
        return xp.reshape(xp.stack(flat, axis=-1), lead + (n,) * order)

    def gradient(self, x, xp=np):
        return self.derivatives(x, 1, xp)

    def hessian(self, x, xp=np):
        return self.derivatives(x, 2, xp)

    def jet(self, x, order: int = 2):
        """Value and derivatives up to ``order`` at ``x``."""
        return tuple(self.derivatives(x, k) for k in range(order + 1))


def _coerce(v) -> ScalarField:
    if isinstance(v, ScalarField):
        return v
    if isinstance(v, (int, float, np.integer, np.floating)):
        return Const(float(v))
    raise TypeError(f"cannot use {type(v).__name__} in a scalar field")


def _zeros_like_points(x, xp):
    return xp.zeros(x.shape[:-1])


@dataclass(frozen=True)
class Const(ScalarField):
    value: float

    def evaluate(self, x, xp=np):
        x = xp.asarray(x)
        return _zeros_like_points(x, xp) + self.value

    def diff(self, i):
        return ZERO

    def substitute(self, mapping):
        return self

    def max_coordinate(self):
        return 0

    def __str__(self):
        v = self.value
        if v == int(v) and abs(v) < 1e15:
            return str(int(v))
        return repr(v)


@dataclass(frozen=True)
class Coord(ScalarField):
    index: int  # 1-based

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("coordinates are 1-based")

    def evaluate(self, x, xp=np):
        x = xp.asarray(x)
        if x.shape[-1] < self.index:
            raise ValueError(f"x{self.index} needs at least {self.index} coordinates, got {x.shape[-1]}")
        return x[..., self.index - 1]

    def diff(self, i):
        return ONE if i == self.index else ZERO

    def substitute(self, mapping):
        return mapping.get(self.index, self)

    def max_coordinate(self):
        return self.index

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Add(ScalarField):
    left: ScalarField
    right: ScalarField
    precedence = 1

    def evaluate(self, x, xp=np):
        return self.left.evaluate(x, xp) + self.right.evaluate(x, xp)

    def diff(self, i):
        return add(self.left.diff(i), self.right.diff(i))

    def substitute(self, mapping):
        return add(self.left.substitute(mapping), self.right.substitute(mapping))

    def max_coordinate(self):
        return max(self.left.max_coordinate(), self.right.max_coordinate())

    def __str__(self):
        if isinstance(self.right, Neg):
            return f"{self.left} - {_wrap(self.right.arg, 2)}"
        return f"{self.left} + {self.right}"


@dataclass(frozen=True)
class Mul(ScalarField):
    left: ScalarField
    right: ScalarField
    precedence = 2

    def evaluate(self, x, xp=np):
        return self.left.evaluate(x, xp) * self.right.evaluate(x, xp)

    def diff(self, i):
        return add(mul(self.left.diff(i), self.right), mul(self.left, self.right.diff(i)))

    def substitute(self, mapping):
        return mul(self.left.substitute(mapping), self.right.substitute(mapping))

    def max_coordinate(self):
        return max(self.left.max_coordinate(), self.right.max_coordinate())

    def __str__(self):
        right = f"({self.right})" if isinstance(self.right, Neg) else _wrap(self.right, 2)
        return f"{_wrap(self.left, 2)}*{right}"


@dataclass(frozen=True)
class Neg(ScalarField):
    arg: ScalarField
    precedence = 2

    def evaluate(self, x, xp=np):
        return -self.arg.evaluate(x, xp)

    def diff(self, i):
        return neg(self.arg.diff(i))

    def substitute(self, mapping):
        return neg(self.arg.substitute(mapping))

    def max_coordinate(self):
        return self.arg.max_coordinate()

    def __str__(self):
        return f"-{_wrap(self.arg, 3)}"


@dataclass(frozen=True)
class Pow(ScalarField):
    base: ScalarField
    exponent: int
    precedence = 3

    def evaluate(self, x, xp=np):
        b = self.base.evaluate(x, xp)
        if self.exponent < 0:
            return 1.0 / b ** (-self.exponent)
        return b**self.exponent

    def diff(self, i):
        db = self.base.diff(i)
        if _is_zero(db):
            return ZERO
        return mul(mul(Const(float(self.exponent)), power(self.base, self.exponent - 1)), db)

    def substitute(self, mapping):
        return power(self.base.substitute(mapping), self.exponent)

    def max_coordinate(self):
        return self.base.max_coordinate()

    def __str__(self):
        return f"{_wrap(self.base, 4)}^{self.exponent}"


@dataclass(frozen=True)
class Sin(ScalarField):
    arg: ScalarField

    def evaluate(self, x, xp=np):
        return xp.sin(self.arg.evaluate(x, xp))

    def diff(self, i):
        return mul(Cos(self.arg), self.arg.diff(i))

    def substitute(self, mapping):
        return sin(self.arg.substitute(mapping))

    def max_coordinate(self):
        return self.arg.max_coordinate()

    def __str__(self):
        return f"sin({self.arg})"


@dataclass(frozen=True)
class Cos(ScalarField):
    arg: ScalarField

    def evaluate(self, x, xp=np):
        return xp.cos(self.arg.evaluate(x, xp))

    def diff(self, i):
        return neg(mul(Sin(self.arg), self.arg.diff(i)))

    def substitute(self, mapping):
        return cos(self.arg.substitute(mapping))

    def max_coordinate(self):
        return self.arg.max_coordinate()

    def __str__(self):
        return f"cos({self.arg})"


ZERO = Const(0.0)
ONE = Const(1.0)


def _wrap(node: ScalarField, prec: int) -> str:
    s = str(node)
    if node.precedence < prec or (isinstance(node, Const) and node.value < 0):
        return f"({s})"
    return s


def _is_zero(node) -> bool:
    return isinstance(node, Const) and node.value == 0.0


def _is_const(node, value=None) -> bool:
    return isinstance(node, Const) and (value is None or node.value == value)


# -- simplifying constructors ---------------------------------------------------


def add(a: ScalarField, b: ScalarField) -> ScalarField:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    return Add(a, b)


def mul(a: ScalarField, b: ScalarField) -> ScalarField:
    if _is_zero(a) or _is_zero(b):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(b):
        a, b = b, a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(a) and isinstance(b, Mul) and _is_const(b.left):
        return mul(Const(a.value * b.left.value), b.right)
    return Mul(a, b)


def neg(a: ScalarField) -> ScalarField:
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a: ScalarField, k: int) -> ScalarField:
    if k == 0:
        return ONE
    if k == 1:
        return a
    if _is_const(a):
        if a.value == 0.0 and k < 0:
            raise ZeroDivisionError("negative power of zero")
        return Const(a.value**k)
    if isinstance(a, Pow):
        return power(a.base, a.exponent * k)
    return Pow(a, k)


def sin(a: ScalarField) -> ScalarField:
    a = _coerce(a)
    return Const(math.sin(a.value)) if _is_const(a) else Sin(a)


def cos(a: ScalarField) -> ScalarField:
    a = _coerce(a)
    return Const(math.cos(a.value)) if _is_const(a) else Cos(a)


def coords(n: int) -> tuple[Coord, ...]:
    """The coordinate functions ``x1 .. xn``."""
    return tuple(Coord(i) for i in range(1, n + 1))


# -- parser ---------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax error with the 0-based character position and the expected tokens."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<coord>x\d+)|(?P<func>sin\(|cos\()|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    _FACTOR_START = ("NUMBER", "x<INT>", "'('", "'sin('", "'cos('", "'-'")

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"unexpected {_describe(kind, val)}", pos, (f"'{op}'",))
        self.take()

    def parse(self) -> ScalarField:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {_describe(kind, val)}", pos, ("'+'", "'-'", "'*'", "'^'", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                node = add(node, rhs) if val == "+" else add(node, neg(rhs))
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                node = mul(node, self.factor())
            else:
                return node

    def factor(self):
        node = self.atom()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "^":
                self.take()
                node = power(node, self.integer())
            else:
                return node

    def integer(self) -> int:
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            sign = -1
            kind, val, pos = self.peek()
        if kind != "number" or not val.isdigit():
            raise ParseError(f"unexpected {_describe(kind, val)}", pos, ("INT",))
        self.take()
        return sign * int(val)

    def atom(self):
        kind, val, pos = self.take()
        if kind == "number":
            return Const(float(val))
        if kind == "coord":
            index = int(val[1:])
            if index < 1:
                raise ParseError("coordinates are 1-based", pos, ("x1", "x2", "..."))
            return Coord(index)
        if kind == "func":
            inner = self.expr()
            self.expect_op(")")
            return sin(inner) if val.startswith("sin") else cos(inner)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val == "-":
            return neg(self.factor())
        raise ParseError(f"unexpected {_describe(kind, val)}", pos, self._FACTOR_START)


def _describe(kind, val):
    return "end of input" if kind == "end" else f"{val!r}"


def parse(text: str) -> ScalarField:
    """Parse the textual mini-language into a :class:`ScalarField`.

    Grammar::

        expr   := term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := NUMBER | 'x'INT | '(' expr ')' | factor '^' INT
                | 'sin(' expr ')' | 'cos(' expr ')' | '-' factor

    Raises:
        ParseError: with the offending position and expected tokens.
    """
    if not isinstance(text, str):
        raise TypeError("expression must be a string")
    return _Parser(text).parse()
