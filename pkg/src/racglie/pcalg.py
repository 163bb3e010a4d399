"""Partially commutative associative algebras over GF(2).

Three relation types share one implementation; all have letters 1..m and
``x_i x_j = x_j x_i`` for every edge {i,j} of K:

* ``"free"``: nothing else. This is A = U(L_K).
* ``"square_zero"``: additionally ``x_i^2 = 0``. This is B.
* ``"square_t"``: additionally ``x_i^2 = t x_i`` with a central letter ``t``,
  stored as letter 0. This is the associated graded ring of the integral
  group ring of RC_K for the filtration by powers of (2, augmentation ideal);
  ``t`` is the class of 2.

Elements are sets of normal-form words (tuples of ints): GF(2) coefficients
are implicit. The normal form of a word is the lexicographically least word
in its class under swaps of adjacent commuting letters.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .complexes import FlagComplex
from .errors import InputError
from .gf2 import pack

Word = tuple[int, ...]
ZERO = None  # marker returned by normal_form for the zero class

RELATIONS = ("free", "square_zero", "square_t")


def lex_normal(word: Iterable[int], noncomm) -> Word:
    """Lexicographically least representative of a trace.

    ``noncomm[a]`` is the bitmask of letters that do not commute with ``a``
    (including ``a`` itself). Repeatedly moves the least letter that can be
    brought to the front.
    """
    rest = list(word)
    out = []
    while rest:
        blocked = 0
        best = -1
        bi = -1
        for idx, a in enumerate(rest):
            if not (blocked >> a) & 1 and (best < 0 or a < best):
                best, bi = a, idx
            blocked |= noncomm[a]
        out.append(best)
        del rest[bi]
    return tuple(out)


def is_lex_normal_extension(prefix: Word, a: int, commute) -> bool:
    """True when ``prefix + (a,)`` is lex-normal, given a lex-normal prefix."""
    for b in reversed(prefix):
        if b == a or not commute(a, b):
            return True
        if b > a:
            return False
    return True


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    K: FlagComplex
    relation: str = "free"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise InputError(f"unknown relation type {self.relation!r}")
        m = self.K.m
        allmask = (1 << (m + 1)) - 1
        nc = [0] * (m + 1)
        for a in range(1, m + 1):
            nc[a] = (allmask & ~self.K.adj[a] & ~1)
        object.__setattr__(self, "_noncomm", tuple(nc))

    def __eq__(self, other):
        return isinstance(other, AlgebraSpec) and self.K == other.K and self.relation == other.relation

    def __hash__(self):
        return hash((self.K, self.relation))

    @property
    def square_zero(self) -> bool:
        return self.relation == "square_zero"

    @property
    def m(self) -> int:
        return self.K.m

    def commute(self, a: int, b: int) -> bool:
        return a == 0 or b == 0 or (a != b and self.K.commute(a, b))

    def normal_form(self, word: Iterable[int]) -> Word | None:
        word = tuple(word)
        hit = self._cache.get(word, 0)
        if hit != 0:
            return hit
        lo = 0 if self.relation == "square_t" else 1
        for a in word:
            if not (lo <= a <= self.m):
                raise InputError(f"letter {a} outside [{lo}, {self.m}]")
        res = self._normal_form(word)
        if len(self._cache) > 500_000:
            self._cache.clear()
        self._cache[word] = res
        return res

    def _normal_form(self, word: Word) -> Word | None:
        if self.relation == "free":
            return lex_normal(word, self._noncomm)
        adj = self.K.adj
        t = 0
        kept = []
        open_ = 0  # letters whose last occurrence can still be slid to the end
        for a in word:
            if a == 0:
                t += 1
                continue
            if (open_ >> a) & 1:
                if self.relation == "square_zero":
                    return ZERO
                t += 1  # x_a x_a -> t x_a, keep the earlier occurrence
                continue
            kept.append(a)
            open_ = (open_ & adj[a]) | (1 << a)
        return (0,) * t + lex_normal(kept, self._noncomm)

    def multidegree(self, word: Word) -> tuple[int, ...]:
        d = [0] * self.m
        for a in word:
            if a:
                d[a - 1] += 1
        return tuple(d)

    def multidegree_basis(self, alpha) -> list[Word]:
        """All nonzero normal-form words with letter multiset alpha (ascending order)."""
        alpha = tuple(alpha)
        if len(alpha) != self.m or min(alpha, default=0) < 0:
            raise InputError(f"bad multidegree {alpha}")
        key = ("basis", alpha)
        if key in self._cache:
            return self._cache[key]
        out: list[Word] = []
        need = list(alpha)
        total = sum(alpha)
        sq0 = self.relation != "free"
        adj = self.K.adj

        def rec(prefix, open_):
            if len(prefix) == total:
                out.append(prefix)
                return
            for a in range(1, self.m + 1):
                if not need[a - 1]:
                    continue
                if sq0 and (open_ >> a) & 1:
                    continue
                if not is_lex_normal_extension(prefix, a, self.commute):
                    continue
                need[a - 1] -= 1
                rec(prefix + (a,), (open_ & adj[a]) | (1 << a))
                need[a - 1] += 1

        rec((), 0)
        self._cache[key] = out
        return out

    def basis_index(self, alpha) -> dict[Word, int]:
        key = ("index", tuple(alpha))
        if key not in self._cache:
            self._cache[key] = {w: n for n, w in enumerate(self.multidegree_basis(alpha))}
        return self._cache[key]

    # element constructors
    def zero(self, truncation: int | None = None) -> AlgElem:
        return AlgElem(self, frozenset(), truncation)

    def one(self, truncation: int | None = None) -> AlgElem:
        return AlgElem(self, frozenset([()]), truncation)

    def gen(self, i: int, truncation: int | None = None) -> AlgElem:
        if not 1 <= i <= self.m:
            raise InputError(f"generator index {i} outside [1, {self.m}]")
        return AlgElem(self, frozenset([(i,)]), truncation)

    def t(self, truncation: int | None = None) -> AlgElem:
        if self.relation != "square_t":
            raise InputError("t exists only in the square_t algebra")
        return AlgElem(self, frozenset([(0,)]), truncation)

    def element(self, words: Iterable[Iterable[int]], truncation: int | None = None) -> AlgElem:
        """GF(2) sum of the given (not necessarily normal) words."""
        acc: set[Word] = set()
        for w in words:
            nf = self.normal_form(w)
            if nf is not ZERO and (truncation is None or len(nf) <= truncation):
                acc ^= {nf}
        return AlgElem(self, frozenset(acc), truncation)


def algebra_a(K: FlagComplex) -> AlgebraSpec:
    return AlgebraSpec(K, "free")


def algebra_b(K: FlagComplex) -> AlgebraSpec:
    return AlgebraSpec(K, "square_zero")


def algebra_t(K: FlagComplex) -> AlgebraSpec:
    return AlgebraSpec(K, "square_t")


class AlgElem:
    """GF(2) linear combination of normal-form words; immutable."""

    __slots__ = ("spec", "support", "truncation", "_hash")

    def __init__(self, spec: AlgebraSpec, support: frozenset, truncation: int | None = None):
        self.spec = spec
        self.support = support
        self.truncation = truncation
        self._hash = None

    def _join(self, other: AlgElem) -> int | None:
        if self.spec != other.spec:
            raise InputError("elements of different algebras")
        a, b = self.truncation, other.truncation
        if a is not None and b is not None and a != b:
            raise InputError(f"mixing truncations {a} and {b}")
        return a if a is not None else b

    def __add__(self, other: AlgElem) -> AlgElem:
        tr = self._join(other)
        return AlgElem(self.spec, self.support ^ other.support, tr)

    __sub__ = __add__

    def __mul__(self, other: AlgElem) -> AlgElem:
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.spec == other.spec and self.support == other.support

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.support)
        return self._hash

    def __bool__(self):
        return bool(self.support)

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        return f"AlgElem({format_elem(self)})"

    def is_zero(self) -> bool:
        return not self.support

    def words(self) -> list[Word]:
        return sorted(self.support, key=lambda w: (len(w), w))

    def degree_part(self, d: int) -> AlgElem:
        return AlgElem(self.spec, frozenset(w for w in self.support if len(w) == d), self.truncation)

    def low_degree(self) -> int | None:
        return min((len(w) for w in self.support), default=None)

    def multidegrees(self) -> set[tuple[int, ...]]:
        return {self.spec.multidegree(w) for w in self.support}

    def to_vector(self, alpha) -> np.ndarray:
        """Coordinates in the multidegree-alpha word basis (packed bits)."""
        index = self.spec.basis_index(alpha)
        try:
            return pack([index[w] for w in self.support], max(len(index), 1))
        except KeyError as exc:
            raise InputError(f"element not homogeneous of multidegree {tuple(alpha)}: {exc}") from None


def multiply(a: AlgElem, b: AlgElem, truncate_at: int | None = None) -> AlgElem:
    tr = a._join(b)
    if truncate_at is not None:
        if tr is not None and tr != truncate_at:
            raise InputError(f"mixing truncations {tr} and {truncate_at}")
        tr = truncate_at
    spec = a.spec
    acc: set[Word] = set()
    for u in a.support:
        for v in b.support:
            if tr is not None and len(u) + len(v) > tr and spec.relation == "free":
                continue
            nf = spec.normal_form(u + v)
            if nf is ZERO or (tr is not None and len(nf) > tr):
                continue
            if nf in acc:
                acc.remove(nf)
            else:
                acc.add(nf)
    return AlgElem(spec, frozenset(acc), tr)


def commutator(a: AlgElem, b: AlgElem) -> AlgElem:
    """a*b + b*a (over GF(2) all commutator signs agree)."""
    return multiply(a, b) + multiply(b, a)


def format_word(w: Word, var: str = "x") -> str:
    if not w:
        return "1"
    t = sum(1 for a in w if a == 0)
    body = "".join(f"{var}{a}" for a in w if a)
    pre = "" if not t else ("t" if t == 1 else f"t^{t}")
    return pre + body if body else pre


def format_elem(e: AlgElem, var: str = "x") -> str:
    if e.is_zero():
        return "0"
    return " + ".join(format_word(w, var) for w in e.words())


def enumerate_words_bruteforce(spec: AlgebraSpec, alpha) -> set[Word]:
    """All distinct nonzero normal forms of permutations of the multiset alpha."""
    letters = [i + 1 for i, k in enumerate(alpha) for _ in range(k)]
    out = set()
    for perm in set(itertools.permutations(letters)):
        nf = spec.normal_form(perm)
        if nf is not ZERO:
            out.add(nf)
    return out
