"""A small expression language for elements of span(g_i) + N_K[t].

    expr    := term ('+' term)*
    term    := primary ('t' ('^' INT)?)?
    primary := 'g' INT | 'c(' INT (',' INT)* '|' INT ')' | NAME
             | '[' expr ',' expr ']' | '(' expr ')' | '0'

``c(J|j)`` is the nested commutator c(J - j, g_j) with ascending outer
letters (a GPTW generator when j is in Theta(J)). ``[x, y]`` is the bracket of
the calculator and ``x t^k`` applies h k times. Names are looked up in an
alias table, e.g. ``a, b, c`` for k3.
"""

from __future__ import annotations

import re
from collections.abc import Mapping

from .complexes import FlagComplex, GptwEntry
from .errors import InputError
from .lcs import LElem, NKtElem, bracket_L, format_lelem, h, remove_repeats
from .nk import LiePoly, Nested, Tree

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[\[\]\(\),|+^]))")

ALIASES: dict[str, dict[str, tuple[tuple[int, ...], int]]] = {
    "k2": {"x": ((1, 2), 1)},
    "k3": {"a": ((1, 2), 1), "b": ((2, 3), 2), "c": ((1, 2, 3), 2)},
    "pentagon": {
        "alpha1": ((1, 3), 1),
        "alpha2": ((1, 4), 1),
        "alpha3": ((2, 4), 2),
        "alpha4": ((2, 5), 2),
        "alpha5": ((3, 5), 3),
        "beta1": ((2, 4, 5), 2),
        "beta2": ((2, 3, 5), 2),
        "beta3": ((1, 3, 5), 3),
        "beta4": ((1, 3, 4), 1),
        "beta5": ((1, 2, 4), 1),
    },
}


def alias_table(name: str | None, K: FlagComplex) -> dict[str, LElem]:
    table = ALIASES.get((name or "").lower(), {})
    return {k: LElem.of(NKtElem.symbol(K, v)) for k, v in table.items()}


def alias_names(name: str | None) -> dict[Tree, str]:
    """Display names for GPTW leaves, keyed by leaf tree."""
    out = {}
    for k, (J, j) in ALIASES.get((name or "").lower(), {}).items():
        e = GptwEntry(tuple(J), j)
        out[Nested(e.outer, e.j)] = k
    return out


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise InputError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
        out.append(mt.group(mt.lastgroup))
        pos = mt.end()
    return out


class _Parser:
    def __init__(self, text: str, K: FlagComplex, names: Mapping[str, LElem]):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.K = K
        self.names = names

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise InputError(f"expected {want or 'more input'} at token {self.pos} in {self.text!r}, got {tok!r}")
        self.pos += 1
        return tok

    def number(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise InputError(f"expected a number in {self.text!r}, got {tok!r}")
        return int(tok)

    def parse(self) -> LElem:
        x = self.expr()
        if self.peek() is not None:
            raise InputError(f"trailing input {self.peek()!r} in {self.text!r}")
        return x

    def expr(self) -> LElem:
        acc = self.term()
        while self.peek() == "+":
            self.take("+")
            acc = acc + self.term()
        return acc

    def term(self) -> LElem:
        x = self.primary()
        tok = self.peek()
        k = 0
        if tok is not None and re.fullmatch(r"t\d*", tok):
            self.take()
            k = 1
            if tok != "t":
                raise InputError(f"write t^{tok[1:]} rather than {tok}")
            if self.peek() == "^":
                self.take("^")
                k = self.number()
        for _ in range(k):
            x = h(x)
        return x

    def primary(self) -> LElem:
        tok = self.take()
        if tok == "[":
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]")
            return bracket_L(x, y, self.K)
        if tok == "(":
            x = self.expr()
            self.take(")")
            return x
        if tok == "0":
            return LElem(self.K)
        if tok == "c" and self.peek() == "(":
            self.take("(")
            J = [self.number()]
            while self.peek() == ",":
                self.take(",")
                J.append(self.number())
            self.take("|")
            j = self.number()
            self.take(")")
            return _c_symbol(self.K, J, j)
        mt = re.fullmatch(r"g(\d+)", tok)
        if mt:
            return LElem.gen(self.K, int(mt.group(1)))
        if tok == "g" and self.peek() is not None and self.peek().isdigit():
            return LElem.gen(self.K, self.number())
        if tok in self.names:
            return self.names[tok]
        if tok.endswith("t") and tok[:-1] in self.names:
            # "at" is the alias "a" followed by t
            self.toks.insert(self.pos, "t")
            return self.names[tok[:-1]]
        raise InputError(f"unknown symbol {tok!r} in {self.text!r}")


def _c_symbol(K: FlagComplex, J, j: int) -> LElem:
    if len(set(J)) != len(J):
        raise InputError(f"c({J}|{j}) has repeated vertices")
    if j not in J:
        raise InputError(f"c(J|j) needs j in J, got J={J}, j={j}")
    outer = tuple(sorted(v for v in J if v != j))
    if not outer:
        return LElem.gen(K, j)
    return LElem.of(remove_repeats(outer, j, K))


def parse_expr(text: str, K: FlagComplex, names: Mapping[str, LElem] | None = None) -> LElem:
    return _Parser(text, K, names or {}).parse()


def format_expr(x: LElem, names: Mapping[Tree, str] | None = None) -> str:
    return format_lelem(x, names)
