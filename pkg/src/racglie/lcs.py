"""The h-operation calculus on N_K[t] and a bracket calculator for the
(conjectural) description L(RC_K) = span(g_1..g_m) + N_K[t].

An ``NKtElem`` maps a t-power n to a Lie polynomial over GPTW leaves; entries
are kept in the canonical closure basis of ``nk`` so equality is exact.
Outputs of ``bracket_L`` describe L(RC_K) only under the conjecture that
psi: N_K[t] -> L'(RC_K) is injective, hence the ``CONJECTURAL`` label.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from functools import lru_cache

from .complexes import FlagComplex, GptwEntry
from .coxeter import GroupWord, group_commutator, nested_word, racg_normal_form
from .errors import InputError
from .nk import Bracket, LiePoly, Nested, Tree, eval_lie, format_tree, nested_poly, nk_for, tree_key

CONJECTURAL = "conjectural"


def _suffix(n: int) -> str:
    return "" if n == 0 else ("t" if n == 1 else f"t^{n}")


class NKtElem:
    """Element of N_K[t]: {t-power: Lie polynomial over GPTW leaves}."""

    __slots__ = ("K", "entries")

    def __init__(self, K: FlagComplex, entries: Mapping[int, LiePoly] | None = None, canonical: bool = False):
        self.K = K
        out = {}
        nk = nk_for(K)
        for n, p in (entries or {}).items():
            if n < 0:
                raise InputError("t-powers must be nonnegative")
            if not canonical:
                p = nk.canonical(p)
            if p:
                out[int(n)] = p
        self.entries: dict[int, LiePoly] = out

    @classmethod
    def zero(cls, K: FlagComplex) -> NKtElem:
        return cls(K, {}, canonical=True)

    @classmethod
    def symbol(cls, K: FlagComplex, entry: GptwEntry | tuple, n: int = 0) -> NKtElem:
        if not isinstance(entry, GptwEntry):
            entry = GptwEntry(tuple(sorted(entry[0])), entry[1])
        return cls(K, {n: LiePoly.leaf(entry.outer, entry.j)})

    @classmethod
    def from_lie(cls, K: FlagComplex, p: LiePoly, n: int = 0) -> NKtElem:
        return cls(K, {n: p})

    def __add__(self, other: NKtElem) -> NKtElem:
        if self.K != other.K:
            raise InputError("elements over different complexes")
        out = dict(self.entries)
        for n, p in other.entries.items():
            out[n] = out[n] + p if n in out else p
        return NKtElem(self.K, out, canonical=True)

    def __eq__(self, other):
        return isinstance(other, NKtElem) and self.K == other.K and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __bool__(self):
        return bool(self.entries)

    def __repr__(self):
        return f"NKtElem({format_nkt(self)})"

    def total_degrees(self) -> set[int]:
        out = set()
        for n, p in self.entries.items():
            for a in p.multidegrees(self.K.m):
                out.add(n + sum(a))
        return out

    def monomials(self) -> list[tuple[Tree, int]]:
        return [(tr, n) for n in sorted(self.entries) for tr in self.entries[n].sorted_terms()]


def format_nkt(x: NKtElem, names: Mapping[Tree, str] | None = None) -> str:
    if not x:
        return "0"
    parts = []
    for tr, n in x.monomials():
        body = _fmt_tree(tr, names)
        parts.append(body + _suffix(n))
    return " + ".join(parts)


def _fmt_tree(tr: Tree, names) -> str:
    if names and tr in names:
        return names[tr]
    if isinstance(tr, Bracket):
        return f"[{_fmt_tree(tr.left, names)},{_fmt_tree(tr.right, names)}]"
    return format_tree(tr)


def h(x: NKtElem | LElem) -> NKtElem | LElem:
    """The squaring operation: multiplies every entry by t."""
    if isinstance(x, LElem):
        if x.linear:
            raise InputError("h is defined only on elements of degree >= 2")
        return LElem(x.K, (), h(x.comm))
    return NKtElem(x.K, {n + 1: p for n, p in x.entries.items()}, canonical=True)


def h_power(x: NKtElem, k: int) -> NKtElem:
    return NKtElem(x.K, {n + k: p for n, p in x.entries.items()}, canonical=True)


def bracket_nkt(x: NKtElem, y: NKtElem) -> NKtElem:
    if x.K != y.K:
        raise InputError("elements over different complexes")
    acc: dict[int, LiePoly] = {}
    for n, p in x.entries.items():
        for k, q in y.entries.items():
            b = p.bracket(q)
            if b:
                acc[n + k] = acc[n + k] + b if n + k in acc else b
    return NKtElem(x.K, acc)


# ---------------------------------------------------------------------------
# repeat removal
# ---------------------------------------------------------------------------


def remove_repeats(seq: Sequence[int], base: int, K: FlagComplex) -> NKtElem:
    """The nested commutator [g_s1, [g_s2, ... [g_sk, g_base]...]] as an element of N_K[t]."""
    seq = tuple(int(a) for a in seq)
    if not seq:
        raise InputError("remove_repeats needs a commutator of length at least 2")
    for a in seq + (base,):
        if not 1 <= a <= K.m:
            raise InputError(f"letter {a} outside [1, {K.m}]")
    return _remove_repeats(K, seq, int(base))


@lru_cache(maxsize=200_000)
def _remove_repeats(K: FlagComplex, seq: tuple[int, ...], base: int) -> NKtElem:
    last = seq[-1]
    if last == base or K.commute(last, base):
        return NKtElem.zero(K)
    letters = seq + (base,)
    if len(set(letters)) == len(letters):
        return NKtElem.from_lie(K, nested_poly(seq, base))
    if base in seq:
        # [g_a, g_b] = [g_b, g_a]: move the repeated base letter into the outer sequence
        seq, base = seq[:-1] + (base,), last
    # innermost repeated pair of outer letters: largest p whose letter occurs again at q > p
    p = max(idx for idx in range(len(seq)) if seq[idx] in seq[idx + 1:])
    i = seq[p]
    q = seq.index(i, p + 1)
    W, V, xs = seq[:p], seq[p + 1:q], seq[q + 1:]
    acc = h(_remove_repeats(K, W + V + (i,) + xs, base))
    for nc in range(len(W) + 1):
        for C in itertools.combinations(range(len(W)), nc):
            WC = tuple(W[c] for c in C)
            WD = tuple(W[d] for d in range(len(W)) if d not in C)
            for na in range(1, len(V) + 1):
                for A in itertools.combinations(range(len(V)), na):
                    VA = tuple(V[a] for a in A)
                    VB = tuple(V[b] for b in range(len(V)) if b not in A)
                    left = _remove_repeats(K, WC + VA, i)
                    if not left:
                        continue
                    right = _remove_repeats(K, WD + VB + (i,) + xs, base)
                    if right:
                        acc = acc + bracket_nkt(left, right)
    return acc


# ---------------------------------------------------------------------------
# the calculator on span(g_i) + N_K[t]
# ---------------------------------------------------------------------------


class LElem:
    """linear: set of i with coefficient 1 on g_i; comm: the N_K[t] part."""

    __slots__ = ("K", "linear", "comm")

    def __init__(self, K: FlagComplex, linear: Iterable[int] = (), comm: NKtElem | None = None):
        self.K = K
        lin: set[int] = set()
        for i in linear:
            if not 1 <= i <= K.m:
                raise InputError(f"generator index {i} outside [1, {K.m}]")
            lin ^= {int(i)}
        self.linear = frozenset(lin)
        self.comm = comm if comm is not None else NKtElem.zero(K)

    @classmethod
    def gen(cls, K: FlagComplex, i: int) -> LElem:
        return cls(K, (i,))

    @classmethod
    def of(cls, x: NKtElem) -> LElem:
        return cls(x.K, (), x)

    def __add__(self, other: LElem) -> LElem:
        return LElem(self.K, self.linear ^ other.linear, self.comm + other.comm)

    def __eq__(self, other):
        return isinstance(other, LElem) and self.K == other.K and self.linear == other.linear and self.comm == other.comm

    def __hash__(self):
        return hash((self.linear, self.comm))

    def __bool__(self):
        return bool(self.linear) or bool(self.comm)

    def __repr__(self):
        return f"LElem({format_lelem(self)})"


def format_lelem(x: LElem, names: Mapping[Tree, str] | None = None) -> str:
    parts = [f"g{i}" for i in sorted(x.linear)]
    if x.comm:
        parts.append(format_nkt(x.comm, names))
    return " + ".join(parts) if parts else "0"


def gbar_bracket(i: int, j: int, K: FlagComplex) -> NKtElem:
    """[g_i, g_j]: the GPTW generator with the larger index outermost, or 0."""
    if i == j or K.commute(i, j):
        return NKtElem.zero(K)
    return NKtElem(K, {0: LiePoly.leaf((max(i, j),), min(i, j))}, canonical=True)


@lru_cache(maxsize=200_000)
def _ad_tree(K: FlagComplex, i: int, tr: Tree) -> NKtElem:
    if isinstance(tr, Nested):
        return _remove_repeats(K, (i,) + tr.outer, tr.base)
    u = NKtElem.from_lie(K, LiePoly([tr.left]))
    v = NKtElem.from_lie(K, LiePoly([tr.right]))
    return bracket_nkt(_ad_tree(K, i, tr.left), v) + bracket_nkt(u, _ad_tree(K, i, tr.right))


def ad_gbar(i: int, x: NKtElem) -> NKtElem:
    """[g_i, x] for x in N_K[t], using [g_i, h^n(p)] = h^n([g_i, p])."""
    acc = NKtElem.zero(x.K)
    for n, p in x.entries.items():
        for tr in p.terms:
            acc = acc + h_power(_ad_tree(x.K, i, tr), n)
    return acc


def bracket_L(x: LElem, y: LElem, K: FlagComplex | None = None) -> LElem:
    K = K or x.K
    if x.K != K or y.K != K:
        raise InputError("elements over different complexes")
    acc = bracket_nkt(x.comm, y.comm)
    for i in x.linear:
        for j in y.linear:
            acc = acc + gbar_bracket(i, j, K)
        acc = acc + ad_gbar(i, y.comm)
    for j in y.linear:
        acc = acc + ad_gbar(j, x.comm)
    return LElem(K, (), acc)


# ---------------------------------------------------------------------------
# psi: N_K[t] -> L'(RC_K), realized by group words
# ---------------------------------------------------------------------------


def tree_word(tr: Tree, K: FlagComplex) -> GroupWord:
    if isinstance(tr, Nested):
        return nested_word(tr.outer, tr.base, K)
    return group_commutator(tree_word(tr.left, K), tree_word(tr.right, K), K)


def psi_to_group(x: NKtElem) -> list[GroupWord]:
    """One group word per monomial p t^n: the word of p squared n times."""
    out = []
    for tr, n in x.monomials():
        w = tree_word(tr, x.K)
        for _ in range(n):
            w = racg_normal_form(w + w, x.K)
        out.append(w)
    return out


def psi_product(x: NKtElem) -> GroupWord:
    """A single word representing psi(x): the product of the monomial words."""
    acc: tuple[int, ...] = ()
    for w in psi_to_group(x):
        acc = acc + w
    return racg_normal_form(acc, x.K)


def psi_lelem(x: LElem) -> GroupWord:
    acc = tuple(sorted(x.linear)) + psi_product(x.comm)
    return racg_normal_form(acc, x.K)


def leading_class_t(x: NKtElem):
    """Image of psi(x) in the associated graded of Z[RC_K]: sum of t^n times the value of p."""
    from .pcalg import algebra_t

    T = algebra_t(x.K)
    acc = T.zero()
    for n, p in x.entries.items():
        val = eval_lie(p, T)
        acc = acc + T.element([(0,) * n + w for w in val.support])
    return acc
