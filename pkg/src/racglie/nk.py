"""Lie polynomials over GF(2), their evaluation in A = U(L_K), and the Lie
subalgebra N_K of L_K generated by the GPTW generators.

A Lie polynomial is a set of bracket trees (GF(2) coefficients implicit).
Leaves are ``Nested(outer, base)``, the right-nested commutator
``[mu_o1, [mu_o2, ... [mu_ok, mu_base]...]]``; ``Nested((), i)`` is mu_i and a
GPTW generator c(J - j, j) is ``Nested(J - j ascending, j)``. Brackets are
stored with their two children sorted, since [u, v] = [v, u] over GF(2), and
[u, u] is dropped.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from .complexes import FlagComplex, GptwEntry, gptw_index
from .errors import InputError, InternalInconsistency, ResourceCapExceeded
from .gf2 import EchelonBasis
from .pcalg import AlgebraSpec, AlgElem, algebra_a, commutator, multiply

DEFAULT_COLUMN_CAP = 20_000


class Nested(NamedTuple):
    outer: tuple[int, ...]
    base: int


class Bracket(NamedTuple):
    left: "Tree"
    right: "Tree"


Tree = Union[Nested, Bracket]


@lru_cache(maxsize=None)
def tree_key(t: Tree) -> tuple:
    if isinstance(t, Nested):
        return (0, len(t.outer), t.outer, t.base)
    return (1, tree_key(t.left), tree_key(t.right))


@lru_cache(maxsize=None)
def tree_letters(t: Tree) -> tuple[int, ...]:
    """Sorted multiset of generator letters in the tree."""
    if isinstance(t, Nested):
        return tuple(sorted(t.outer + (t.base,)))
    return tuple(sorted(tree_letters(t.left) + tree_letters(t.right)))


def tree_multidegree(t: Tree, m: int) -> tuple[int, ...]:
    d = [0] * m
    for a in tree_letters(t):
        d[a - 1] += 1
    return tuple(d)


def make_bracket(u: Tree, v: Tree) -> Bracket | None:
    if u == v:
        return None
    if tree_key(u) > tree_key(v):
        u, v = v, u
    return Bracket(u, v)


def format_tree(t: Tree) -> str:
    if isinstance(t, Bracket):
        return f"[{format_tree(t.left)},{format_tree(t.right)}]"
    if not t.outer:
        return f"g{t.base}"
    if list(t.outer) == sorted(t.outer) and len(set(t.outer + (t.base,))) == len(t.outer) + 1:
        J = sorted(t.outer + (t.base,))
        return f"c({','.join(map(str, J))}|{t.base})"
    s = f"g{t.base}"
    for a in reversed(t.outer):
        s = f"[g{a},{s}]"
    return s


class LiePoly:
    """Formal GF(2) sum of bracket trees; immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tree] = ()):
        acc: set[Tree] = set()
        for t in terms:
            if t is None:
                continue
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def leaf(cls, outer: Sequence[int], base: int) -> LiePoly:
        return cls([Nested(tuple(outer), base)])

    @classmethod
    def mu(cls, i: int) -> LiePoly:
        return cls([Nested((), i)])

    def __add__(self, other: LiePoly) -> LiePoly:
        out = LiePoly()
        out.terms = self.terms ^ other.terms
        return out

    def __eq__(self, other):
        return isinstance(other, LiePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[Tree]:
        return sorted(self.terms, key=tree_key)

    def bracket(self, other: LiePoly) -> LiePoly:
        return LiePoly(make_bracket(u, v) for u in self.terms for v in other.terms)

    def multidegrees(self, m: int) -> set[tuple[int, ...]]:
        return {tree_multidegree(t, m) for t in self.terms}

    def __repr__(self):
        return f"LiePoly({format_lie(self)})"


def format_lie(p: LiePoly) -> str:
    if not p:
        return "0"
    return " + ".join(format_tree(t) for t in p.sorted_terms())


def bracket(x: LiePoly, y: LiePoly) -> LiePoly:
    return x.bracket(y)


def nested_poly(seq: Sequence[int], base: int) -> LiePoly:
    """The nested commutator over mu as an explicit tree of brackets of generators."""
    acc = LiePoly.mu(base)
    for a in reversed(seq):
        acc = LiePoly.mu(a).bracket(acc)
    return acc


def as_nested(t: Tree) -> tuple[tuple[int, ...], int] | None:
    """(outer letters, base) when t is a right-nested commutator of generators."""
    if isinstance(t, Nested):
        return t.outer, t.base
    outer = []
    while isinstance(t, Bracket):
        left, right = t.left, t.right
        if isinstance(left, Nested) and not left.outer:
            outer.append(left.base)
            t = right
        elif isinstance(right, Nested) and not right.outer:
            outer.append(right.base)
            t = left
        else:
            return None
    if t.outer:
        return tuple(outer) + t.outer, t.base
    return tuple(outer), t.base


# ---------------------------------------------------------------------------
# evaluation in A
# ---------------------------------------------------------------------------


def eval_tree(t: Tree, spec: AlgebraSpec) -> AlgElem:
    key = ("tree", t)
    hit = spec._cache.get(key)
    if hit is not None:
        return hit
    if isinstance(t, Nested):
        acc = spec.gen(t.base)
        for a in reversed(t.outer):
            acc = commutator(spec.gen(a), acc)
    else:
        acc = commutator(eval_tree(t.left, spec), eval_tree(t.right, spec))
    spec._cache[key] = acc
    return acc


def eval_lie(p: LiePoly, spec: AlgebraSpec) -> AlgElem:
    acc = spec.zero()
    for t in p.terms:
        acc = acc + eval_tree(t, spec)
    return acc


# ---------------------------------------------------------------------------
# rewriting of nested commutators
# ---------------------------------------------------------------------------


def c_qv(A: Iterable[int], x: LiePoly, q, V: Sequence[int]) -> LiePoly:
    """[q_{V[t1]}, [q_{V[t2]}, ... [q_{V[ts]}, x]...]] for A = {t1 < ... < ts} (1-based positions)."""
    acc = x
    for t in sorted(A, reverse=True):
        acc = q[V[t - 1]].bracket(acc)
    return acc


def expand_c(I: Iterable[int], x: LiePoly, y: LiePoly, q, V: Sequence[int]) -> LiePoly:
    """Sum over ordered splittings I = A + B of [c(A, x), c(B, y)]."""
    I = sorted(set(I))
    for t in I:
        if not 1 <= t <= len(V):
            raise InputError(f"position {t} outside the index sequence")
    acc = LiePoly()
    for r in range(len(I) + 1):
        for A in itertools.combinations(I, r):
            B = [t for t in I if t not in A]
            acc = acc + c_qv(A, x, q, V).bracket(c_qv(B, y, q, V))
    return acc


def order_nested(c: LiePoly | Tree | tuple) -> LiePoly:
    """Rewrite a nested commutator without repeats as a Lie polynomial on
    leaves c(I, mu_i) with I ascending, nonempty, and max(I) > i."""
    if isinstance(c, LiePoly):
        if len(c) != 1:
            raise InputError("order_nested expects a single nested commutator")
        (c,) = c.terms
    if isinstance(c, (Nested, Bracket)):
        parsed = as_nested(c)
        if parsed is None:
            raise InputError("input is not a nested commutator")
        seq, base = parsed
    else:
        seq, base = c
    seq = tuple(seq)
    if len(set(seq + (base,))) != len(seq) + 1:
        raise InputError("order_nested needs pairwise distinct letters")
    if not seq:
        raise InputError("order_nested needs length at least 2")
    return _order(seq, base)


@lru_cache(maxsize=None)
def _order(seq: tuple[int, ...], j: int) -> LiePoly:
    k = len(seq)
    if k == 0:
        return LiePoly.mu(j)
    if k == 1:
        a = seq[0]
        return LiePoly.leaf((max(a, j),), min(a, j))
    s = list(seq)
    extra = LiePoly()
    # bubble-sort the first k-1 letters; each swap costs a shorter Jacobi term
    for end in range(k - 2, 0, -1):
        for t in range(end):
            if s[t] > s[t + 1]:
                p, r = s[t], s[t + 1]
                prefix, tail = s[:t], tuple(s[t + 2:])
                for n in range(len(prefix) + 1):
                    for A in itertools.combinations(range(len(prefix)), n):
                        left = tuple(prefix[i] for i in A) + (p,)
                        right = tuple(prefix[i] for i in range(len(prefix)) if i not in A) + tail
                        extra = extra + _order(left, r).bracket(_order(right, j))
                s[t], s[t + 1] = r, p
    if s[-1] < j:
        s[-1], j = j, s[-1]
    if s[-2] < s[-1]:
        return extra + LiePoly.leaf(tuple(s), j)
    a, b = s[-2], s[-1]
    prefix = tuple(s[:-2])
    return extra + _order(prefix + (j, a), b) + _order(prefix + (b, a), j)


# ---------------------------------------------------------------------------
# N_K
# ---------------------------------------------------------------------------


def gptw_leaf(e: GptwEntry) -> Nested:
    return Nested(e.outer, e.j)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


@dataclass
class Component:
    """Basis of (N_K)_alpha: independent bracket trees and their echelon form in A."""

    alpha: tuple[int, ...]
    trees: list[Tree]
    vectors: list[AlgElem]
    echelon: EchelonBasis

    @property
    def dim(self) -> int:
        return len(self.trees)


class NK:
    """Lazily computed multigraded bases of N_K inside A = U(L_K).

    The basis of (N_K)_alpha is extracted from the candidates
    ``s`` (GPTW of multidegree alpha) and ``[s, b]`` (s GPTW, b a basis tree
    of degree alpha - deg s), taken in ``tree_key`` order; the first
    independent candidates are kept.
    """

    def __init__(self, K: FlagComplex, column_cap: int = DEFAULT_COLUMN_CAP):
        self.K = K
        self.A = algebra_a(K)
        self.column_cap = column_cap
        self.gptw = gptw_index(K)
        self.leaves = [gptw_leaf(e) for e in self.gptw]
        self.leaf_deg = [tree_multidegree(t, K.m) for t in self.leaves]
        self._comp: dict[tuple[int, ...], Component] = {}

    def component(self, alpha) -> Component:
        alpha = tuple(alpha)
        hit = self._comp.get(alpha)
        if hit is not None:
            return hit
        cands: list[tuple[Tree, AlgElem | None]] = []
        for leaf, d in zip(self.leaves, self.leaf_deg):
            if d == alpha:
                cands.append((leaf, None))
            elif _leq(d, alpha):
                sub = self.component(_sub(alpha, d))
                for bt in sub.trees:
                    br = make_bracket(leaf, bt)
                    if br is not None:
                        cands.append((br, None))
        cands.sort(key=lambda c: tree_key(c[0]))
        comp = self._build(alpha, [t for t, _ in cands])
        self._comp[alpha] = comp
        return comp

    def _build(self, alpha, trees: list[Tree]) -> Component:
        ncols = len(self.A.multidegree_basis(alpha)) if trees else 0
        if ncols > self.column_cap:
            raise ResourceCapExceeded(f"multidegree {alpha} needs {ncols} columns (cap {self.column_cap})")
        ech = EchelonBasis(max(ncols, 1), provenance=max(len(trees), 1))
        kept, vecs = [], []
        seen: set[Tree] = set()
        for t in trees:
            if t in seen:
                continue
            seen.add(t)
            val = self._eval(t)
            if val.is_zero():
                continue
            if ech.add(val.to_vector(alpha), tag=t):
                kept.append(t)
                vecs.append(val)
        return Component(alpha, kept, vecs, ech)

    def _eval(self, t: Tree) -> AlgElem:
        if isinstance(t, Bracket):
            key = ("tree", t)
            hit = self.A._cache.get(key)
            if hit is None:
                hit = commutator(self._eval(t.left), self._eval(t.right))
                self.A._cache[key] = hit
            return hit
        return eval_tree(t, self.A)

    def dims(self, bound: int, threads: int = 1) -> dict[tuple[int, ...], int]:
        """dim (N_K)_alpha for every alpha of total degree <= bound with nonzero dimension."""
        m = self.K.m
        levels: dict[int, set[tuple[int, ...]]] = {}
        for d in self.leaf_deg:
            if sum(d) <= bound:
                levels.setdefault(sum(d), set()).add(d)
        out: dict[tuple[int, ...], int] = {}
        for total in range(2, bound + 1):
            todo = sorted(levels.get(total, ()))
            if threads > 1 and len(todo) > 1:
                with ThreadPoolExecutor(threads) as pool:
                    comps = list(pool.map(self._component_ready, todo))
            else:
                comps = [self._component_ready(a) for a in todo]
            for comp in comps:
                if comp.dim:
                    out[comp.alpha] = comp.dim
                    for d in self.leaf_deg:
                        nxt = tuple(x + y for x, y in zip(comp.alpha, d))
                        if sum(nxt) <= bound:
                            levels.setdefault(sum(nxt), set()).add(nxt)
        return out

    def _component_ready(self, alpha):
        # lower components are already cached by the level loop, so threads only read them
        return self.component(alpha)

    def express(self, value: AlgElem) -> LiePoly | None:
        """Write an element of A as a Lie polynomial on GPTW generators, or None if it is not in N_K."""
        if value.is_zero():
            return LiePoly()
        by_alpha: dict[tuple[int, ...], set] = {}
        for w in value.support:
            by_alpha.setdefault(self.A.multidegree(w), set()).add(w)
        terms: list[Tree] = []
        for alpha, words in by_alpha.items():
            comp = self.component(alpha)
            if not comp.dim:
                return None
            part = AlgElem(self.A, frozenset(words))
            idx = comp.echelon.express(part.to_vector(alpha))
            if idx is None:
                return None
            terms.extend(comp.echelon.tags[i] for i in idx)
        return LiePoly(terms)

    def canonical(self, p: LiePoly) -> LiePoly:
        """Re-express a Lie polynomial over GPTW leaves in the closure basis."""
        out = self.express(eval_lie(p, self.A))
        if out is None:
            raise InternalInconsistency(f"{format_lie(p)} does not lie in N_K")
        return out

    def enveloping_dims(self, bound: int) -> dict[tuple[int, ...], int]:
        """dim of the associative subalgebra of A generated by GPTW, per multidegree."""
        m = self.K.m
        gens = [(d, eval_tree(t, self.A)) for t, d in zip(self.leaves, self.leaf_deg)]
        zero = (0,) * m
        comps: dict[tuple[int, ...], list[AlgElem]] = {zero: [self.A.one()]}
        out = {}
        frontier = {zero}
        for total in range(1, bound + 1):
            targets = set()
            for a in comps:
                for d, _ in gens:
                    nxt = tuple(x + y for x, y in zip(a, d))
                    if sum(nxt) == total:
                        targets.add(nxt)
            for alpha in sorted(targets):
                ncols = len(self.A.multidegree_basis(alpha))
                if ncols > self.column_cap:
                    raise ResourceCapExceeded(f"multidegree {alpha} needs {ncols} columns")
                ech = EchelonBasis(max(ncols, 1))
                kept = []
                for d, g in gens:
                    if not _leq(d, alpha):
                        continue
                    for b in comps.get(_sub(alpha, d), ()):
                        val = multiply(g, b)
                        if val and ech.add(val.to_vector(alpha)):
                            kept.append(val)
                if kept:
                    comps[alpha] = kept
                    out[alpha] = len(kept)
        return out


def nk_dims(K: FlagComplex, bound: int, threads: int = 1, column_cap: int = DEFAULT_COLUMN_CAP) -> dict[tuple[int, ...], int]:
    if bound < 2:
        raise InputError("nk_dims needs a degree bound of at least 2")
    return NK(K, column_cap).dims(bound, threads)


_NK_CACHE: dict[FlagComplex, NK] = {}


def nk_for(K: FlagComplex) -> NK:
    """Shared N_K basis cache for K (bases are deterministic, so sharing is safe)."""
    hit = _NK_CACHE.get(K)
    if hit is None:
        hit = _NK_CACHE[K] = NK(K)
    return hit


def express_in_gptw(c: LiePoly, K: FlagComplex) -> LiePoly:
    """A Lie polynomial on GPTW generators with the same value in A as ``c``."""
    nk = nk_for(K)
    out = nk.express(eval_lie(c, nk.A))
    if out is None:
        raise InternalInconsistency(f"{format_lie(c)} is not a Lie polynomial on GPTW generators")
    return out
