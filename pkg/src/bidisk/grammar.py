"""Plain-text grammar for functions, self-maps, triplets and points.

Syntax: complex literals like ``0.3+0.1i`` or ``-0.2i``, variables ``z1``
``z2``, operators ``+ - * / ^`` (division by constants only, integer powers),
the constant ``sqrt2``, Blaschke calls ``blaschke(w, z1)`` and composition
``compose(f, (g1, g2))``.  Top-level tuples denote self-maps ``(f, g)`` and
triplets ``(f, g, h)``; points are written ``z1,z2`` with complex components.
"""

from __future__ import annotations

import math
import re

from .funcspace import (Blaschke, Compose, Const, Coord, Expr, Pow, Prod,
                        Scale, SelfMap, Sum, Triplet, bidegree, certify,
                        eval_point, selfmap_from_grid)
from .mobius import BidiskPoint


class GrammarError(ValueError):
    """Raised on any parse failure, with position information."""


_TOKEN = re.compile(r"""
    (?P<num>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GrammarError(f"unexpected character {text[pos]!r} at position {pos}")
        pos = m.end()
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), m.start()))
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        k, v, pos = self.toks[self.i]
        if (kind is not None and k != kind) or (value is not None and v != value):
            raise GrammarError(
                f"expected {value or kind!r} at position {pos}, found {v or 'end of input'!r}")
        self.i += 1
        return v

    def at_op(self, *vals) -> bool:
        k, v, _ = self.peek()
        return k == "op" and v in vals

    # expr := term (('+'|'-') term)*
    def expr(self) -> Expr:
        node = self.term()
        terms = [node]
        while self.at_op("+", "-"):
            op = self.take("op")
            rhs = self.term()
            terms.append(rhs if op == "+" else Scale(-1.0, rhs))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    # term := unary (('*'|'/') unary)*
    def term(self) -> Expr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.take("op")
            rhs = self.unary()
            if op == "*":
                node = Prod((node, rhs))
            else:
                c = as_constant(rhs)
                if c is None:
                    raise GrammarError("division is only defined by constant expressions")
                if c == 0:
                    raise GrammarError("division by zero")
                node = Scale(1.0 / c, node)
        return node

    # unary := ('-'|'+') unary | power
    def unary(self) -> Expr:
        if self.at_op("-"):
            self.take("op")
            return Scale(-1.0, self.unary())
        if self.at_op("+"):
            self.take("op")
            return self.unary()
        return self.power()

    # power := atom ('^' unsigned-integer)*
    def power(self) -> Expr:
        node = self.atom()
        while self.at_op("^"):
            self.take("op")
            k, v, pos = self.peek()
            if k != "num" or not re.fullmatch(r"\d+", v):
                raise GrammarError(f"exponent must be an unsigned integer at position {pos}")
            self.take()
            node = Pow(node, int(v))
        return node

    def atom(self) -> Expr:
        k, v, pos = self.peek()
        if k == "num":
            self.take()
            if v.endswith("i"):
                return Const(complex(0.0, float(v[:-1] or "1")))
            return Const(complex(float(v)))
        if k == "name":
            if v == "z1":
                self.take()
                return Coord(1)
            if v == "z2":
                self.take()
                return Coord(2)
            if v == "i":
                self.take()
                return Const(1j)
            if v == "sqrt2":
                self.take()
                return Const(complex(math.sqrt(2.0)))
            if v == "blaschke":
                self.take()
                self.take("op", "(")
                center = self.expr()
                c = as_constant(center)
                if c is None:
                    raise GrammarError("blaschke center must be a constant")
                self.take("op", ",")
                axis_tok = self.take("name")
                if axis_tok not in ("z1", "z2"):
                    raise GrammarError("blaschke argument must be z1 or z2")
                self.take("op", ")")
                return Blaschke(c, 1 if axis_tok == "z1" else 2)
            if v == "compose":
                self.take()
                self.take("op", "(")
                outer = self.expr()
                self.take("op", ",")
                self.take("op", "(")
                p1 = self.expr()
                self.take("op", ",")
                p2 = self.expr()
                self.take("op", ")")
                self.take("op", ")")
                return Compose(outer, _admit_selfmap(p1, p2))
            raise GrammarError(f"unknown name {v!r} at position {pos}")
        if self.at_op("("):
            self.take("op")
            node = self.expr()
            self.take("op", ")")
            return node
        raise GrammarError(f"unexpected token {v or 'end of input'!r} at position {pos}")

    def tuple_exprs(self, low: int, high: int) -> list[Expr]:
        self.take("op", "(")
        items = [self.expr()]
        while self.at_op(","):
            self.take("op")
            items.append(self.expr())
        self.take("op", ")")
        self.take("end")
        if not low <= len(items) <= high:
            raise GrammarError(f"expected a tuple of {low}..{high} components, got {len(items)}")
        return items


def _admit_selfmap(p1: Expr, p2: Expr) -> SelfMap:
    try:
        return certify(p1, p2)
    except ValueError:
        return selfmap_from_grid(p1, p2)


def as_constant(f: Expr):
    """The value of a variable-free tree, else None."""
    if isinstance(f, (Coord, Blaschke, Compose)):
        return None
    if isinstance(f, Const):
        return f.value
    if bidegree(f) != (0, 0):
        return None
    try:
        return eval_point(f, (0j, 0j))
    except ValueError:
        return None


def parse_expression(text: str) -> Expr:
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


def parse_selfmap(text: str) -> SelfMap:
    """Parse ``(f, g)`` and certify it (grid admission is not attempted here)."""
    e1, e2 = _Parser(text).tuple_exprs(2, 2)
    return certify(e1, e2)


def parse_triplet(text: str) -> Triplet:
    items = _Parser(text).tuple_exprs(3, 3)
    return Triplet(*items)


def parse_point(text: str) -> BidiskPoint:
    """Parse ``z1,z2`` where each component is a constant expression."""
    depth = 0
    split = None
    for idx, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            if split is not None:
                raise GrammarError("a point has exactly two components")
            split = idx
    if split is None:
        raise GrammarError("a point is written z1,z2")
    vals = []
    for part in (text[:split], text[split + 1:]):
        c = as_constant(parse_expression(part))
        if c is None:
            raise GrammarError(f"point component {part!r} is not constant")
        vals.append(c)
    return BidiskPoint(*vals)


# ---------------------------------------------------------------------------
# Serialization (canonical, re-parseable)

def format_complex(c: complex) -> str:
    re_part, im_part = c.real, c.imag
    if im_part == 0.0:
        return _fmt_float(re_part)
    if re_part == 0.0:
        return f"{_fmt_float(im_part)}i"
    sign = "+" if im_part > 0 else "-"
    return f"{_fmt_float(re_part)}{sign}{_fmt_float(abs(im_part))}i"


def _fmt_float(x: float) -> str:
    return repr(float(x))


def to_text(f: Expr) -> str:
    """Canonical grammar text for a tree (evaluation-equivalent on re-parse)."""
    if isinstance(f, Const):
        s = format_complex(f.value)
        # two-part literals and leading signs must not reassociate in products
        return f"({s})" if (s.startswith("-") or "+" in s[1:] or "-" in s[1:]) else s
    if isinstance(f, Coord):
        return f"z{f.axis}"
    if isinstance(f, Blaschke):
        return f"blaschke({format_complex(f.center)}, z{f.axis})"
    if isinstance(f, Sum):
        return "(" + " + ".join(to_text(t) for t in f.terms) + ")"
    if isinstance(f, Prod):
        return "(" + "*".join(to_text(t) for t in f.factors) + ")"
    if isinstance(f, Scale):
        return f"(({format_complex(f.coeff)})*{to_text(f.arg)})"
    if isinstance(f, Pow):
        return f"{to_text(f.base)}^{f.exponent}"
    if isinstance(f, Compose):
        return (f"compose({to_text(f.outer)}, "
                f"({to_text(f.inner.psi1)}, {to_text(f.inner.psi2)}))")
    raise TypeError(f"not an expression node: {f!r}")


def triplet_text(t: Triplet) -> str:
    return f"({to_text(t.phi1)}, {to_text(t.phi2)}, {to_text(t.phi3)})"


def selfmap_text(psi: SelfMap) -> str:
    return f"({to_text(psi.psi1)}, {to_text(psi.psi2)})"
