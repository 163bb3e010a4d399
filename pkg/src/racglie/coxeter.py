"""Right-angled Coxeter groups: words, normal forms, commutators, and
Magnus-type evaluations giving lower bounds for dim L_k(RC_K).

Two evaluations are provided.

* ``magnus_eval``: g_i -> 1 + u_i into B truncated at degree D (GF(2)).
* ``group_ring_eval``: the integral group ring Z[RC_K] in the basis of
  monomials u_w (w a reduced word, u_i = g_i - 1), with coefficients modulo
  2^(D+1). Here u_i^2 = -2 u_i. Filtering by powers of J = (2, u_1..u_m)
  gives an associated graded ring isomorphic to the ``square_t`` algebra
  (t = class of 2). ``leading_term`` reads off the image in J^k / J^(k+1).

For g in gamma_k, g - 1 lies in J^k, and the induced map L_k -> J^k/J^(k+1)
sends Lie brackets to commutators. Its image in degree k is the degree-k
part of the Lie subalgebra generated by u_1..u_m, so the rank of that part is
an unconditional lower bound for dim L_k.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .complexes import FlagComplex, subcomplex_type_counts
from .errors import InputError, InternalInconsistency, ResourceCapExceeded
from .gf2 import EchelonBasis, pack
from .pcalg import ZERO, AlgebraSpec, AlgElem, algebra_b, algebra_t, commutator, lex_normal
from .series import nk_series

GroupWord = tuple[int, ...]

DEFAULT_COLUMN_CAP = 200_000
DEFAULT_TUPLE_CAP = 200_000
DEFAULT_RING_CAP = 400_000


def default_degree(K: FlagComplex) -> int:
    if K.m <= 5:
        return 6
    if K.m <= 8:
        return 4
    return 3


def _check_word(w, K: FlagComplex) -> GroupWord:
    w = tuple(int(a) for a in w)
    for a in w:
        if not 1 <= a <= K.m:
            raise InputError(f"letter {a} outside [1, {K.m}]")
    return w


def racg_normal_form(w: Iterable[int], K: FlagComplex) -> GroupWord:
    """Shortlex-least reduced word for the group element w."""
    out: list[int] = []
    for a in _check_word(w, K):
        for idx in range(len(out) - 1, -1, -1):
            b = out[idx]
            if b == a:
                del out[idx]
                break
            if not K.commute(a, b):
                out.append(a)
                break
        else:
            out.append(a)
    noncomm = [0] + [((1 << (K.m + 1)) - 2) & ~K.adj[a] for a in range(1, K.m + 1)]
    return lex_normal(out, noncomm)


def inverse(w: Sequence[int]) -> GroupWord:
    return tuple(reversed(tuple(w)))


def group_commutator(u: Sequence[int], v: Sequence[int], K: FlagComplex | None = None) -> GroupWord:
    """(u, v) = u^-1 v^-1 u v; reduced when K is given."""
    w = inverse(u) + inverse(v) + tuple(u) + tuple(v)
    return racg_normal_form(w, K) if K is not None else w


def nested_word(I: Sequence[int], j: int, K: FlagComplex | None = None) -> GroupWord:
    """(g_i1, (g_i2, ... (g_ik, g_j)...)) for the index sequence I."""
    acc: GroupWord = (j,)
    for a in reversed(tuple(I)):
        acc = group_commutator((a,), acc)
        if K is not None:
            acc = racg_normal_form(acc, K)
    return acc


def power(w: Sequence[int], n: int) -> GroupWord:
    return tuple(w) * n


# ---------------------------------------------------------------------------
# truncated rings
# ---------------------------------------------------------------------------


class TruncatedRing:
    """Truncated group-ring coordinates on reduced-word monomials u_w, |w| <= D.

    ``kind="B"``: coefficients in GF(2) and u_i^2 = 0 (the B evaluation).
    ``kind="Z"``: coefficients modulo 2^(D+1) and u_i^2 = -2 u_i.
    """

    def __init__(self, K: FlagComplex, D: int, kind: str = "Z", cap: int = DEFAULT_RING_CAP):
        if D < 1:
            raise InputError("truncation degree must be at least 1")
        if kind not in ("B", "Z"):
            raise InputError(f"unknown ring kind {kind!r}")
        self.K, self.D, self.kind = K, D, kind
        B = algebra_b(K)
        m = K.m
        words: list[GroupWord] = [()]
        index = {(): 0}
        rows_nxt: list[list[int]] = []
        rows_abs: list[list[bool]] = []
        pos = 0
        while pos < len(words):
            w = words[pos]
            nr = [-1] * (m + 1)
            ab = [False] * (m + 1)
            for i in range(1, m + 1):
                nf = B.normal_form(w + (i,))
                if nf is ZERO:
                    ab[i] = True
                elif len(nf) <= D:
                    if nf not in index:
                        index[nf] = len(words)
                        words.append(nf)
                        if len(words) > cap:
                            raise ResourceCapExceeded(f"truncated ring for D={D} exceeds {cap} basis words")
                    nr[i] = index[nf]
            rows_nxt.append(nr)
            rows_abs.append(ab)
            pos += 1
        self.words = words
        self.index = index
        self.nxt = np.array(rows_nxt, dtype=np.int64)
        self.absorb = np.array(rows_abs, dtype=np.bool_)
        self.modulus = 2 if kind == "B" else 2 ** (D + 1)
        self.factor = 0 if kind == "B" else self.modulus - 2
        self.lengths = np.array([len(w) for w in words], dtype=np.int64)

    def __len__(self):
        return len(self.words)

    def one(self) -> np.ndarray:
        v = np.zeros(len(self.words), dtype=np.int64)
        v[0] = 1
        return v

    def apply(self, coeffs: np.ndarray, word: Sequence[int]) -> np.ndarray:
        arr = np.asarray(_check_word(word, self.K), dtype=np.int64)
        if arr.size == 0:
            return coeffs.copy()
        return _kernels.apply_word(coeffs, arr, self.nxt, self.absorb, self.factor, self.modulus)

    def eval(self, word: Sequence[int]) -> np.ndarray:
        return self.apply(self.one(), word)

    def weights(self, coeffs: np.ndarray) -> np.ndarray:
        """2-adic valuation of each coefficient plus word length (large for zero entries)."""
        c = coeffs.copy()
        c[0] = (c[0] - 1) % self.modulus
        v = np.full(c.shape, 10 ** 6, dtype=np.int64)
        nz = c != 0
        low = c[nz] & -c[nz]
        v[nz] = np.log2(low).round().astype(np.int64) + self.lengths[nz]
        return v


_RINGS: dict[tuple, TruncatedRing] = {}


def truncated_ring(K: FlagComplex, D: int, kind: str = "Z") -> TruncatedRing:
    key = (K, D, kind)
    ring = _RINGS.get(key)
    if ring is None:
        if len(_RINGS) > 256:
            _RINGS.clear()
        ring = _RINGS[key] = TruncatedRing(K, D, kind)
    return ring


def magnus_eval(w: Sequence[int], K: FlagComplex, D: int) -> AlgElem:
    """Image of w under g_i -> 1 + u_i in B, truncated above degree D."""
    ring = truncated_ring(K, D, "B")
    coeffs = ring.eval(w)
    support = frozenset(ring.words[n] for n in np.flatnonzero(coeffs))
    return AlgElem(algebra_b(K), support, D)


def group_ring_eval(w: Sequence[int], K: FlagComplex, D: int) -> np.ndarray:
    """Coefficients of w in the u-monomial basis of Z[RC_K], modulo 2^(D+1) and length > D."""
    return truncated_ring(K, D, "Z").eval(w)


def leading_term(w: Sequence[int], K: FlagComplex, D: int) -> tuple[int | None, AlgElem]:
    """(p, class of w - 1 in J^p / J^(p+1)) with p the filtration degree, as an element of
    the square_t algebra. p is None (and the class 0) when w - 1 lies in J^(D+1)."""
    ring = truncated_ring(K, D, "Z")
    return _leading(ring, ring.eval(w))


def _leading(ring: TruncatedRing, coeffs: np.ndarray) -> tuple[int | None, AlgElem]:
    T = algebra_t(ring.K)
    wts = ring.weights(coeffs)
    p = int(wts.min())
    if p > ring.D:
        return None, T.zero()
    out = []
    for n in np.flatnonzero(wts == p):
        a = p - int(ring.lengths[n])
        out.append((0,) * a + ring.words[n])
    return p, AlgElem(T, frozenset(out))


def class_in_degree(w: Sequence[int], K: FlagComplex, k: int) -> AlgElem:
    """Image of w - 1 in J^k / J^(k+1); raises if w - 1 is not in J^k."""
    ring = truncated_ring(K, k, "Z")
    p, lead = _leading(ring, ring.eval(w))
    if p is None or p > k:
        return algebra_t(K).zero()
    if p < k:
        raise InputError(f"word lies only in filtration degree {p} < {k}")
    return lead


def magnus_degree(w: Sequence[int], K: FlagComplex, D: int) -> int | None:
    """Least degree of a nonconstant term of magnus_eval(w), or None if none up to D."""
    e = magnus_eval(w, K, D)
    return min((len(x) for x in e.support if x), default=None)


# ---------------------------------------------------------------------------
# lower bounds and the conjecture report
# ---------------------------------------------------------------------------


def _rank_of(elems: Sequence[AlgElem], cap: int, keep: bool = False):
    cols: dict = {}
    for e in elems:
        for w in e.support:
            if w not in cols:
                cols[w] = len(cols)
    if len(cols) > cap:
        raise ResourceCapExceeded(f"rank computation needs {len(cols)} columns (cap {cap})")
    ech = EchelonBasis(max(len(cols), 1))
    kept = []
    for e in elems:
        if e and ech.add(pack([cols[w] for w in e.support], max(len(cols), 1))):
            kept.append(e)
    return (ech.rank, kept) if keep else ech.rank


_CLOSURE: dict[FlagComplex, list[list[AlgElem]]] = {}


def lie_closure_basis(K: FlagComplex, k: int, cap: int = DEFAULT_COLUMN_CAP, threads: int = 1) -> list[AlgElem]:
    """Basis of the degree-k part of the Lie subalgebra generated by u_1..u_m in square_t."""
    T = algebra_t(K)
    levels = _CLOSURE.setdefault(K, [[], [T.gen(i) for i in K.vertices]])
    while len(levels) <= k:
        prev = levels[-1]
        cands = _map(lambda iv: commutator(T.gen(iv[0]), iv[1]), [(i, v) for i in K.vertices for v in prev], threads)
        _, kept = _rank_of([c for c in cands if c], cap, keep=True)
        levels.append(kept)
    return levels[k]


def _nested_tuples(K: FlagComplex, k: int):
    """Index sequences (i_1..i_{k-1}, j) whose nested commutator is not trivially zero."""
    for j in K.vertices:
        for i in K.vertices:
            if i == j or K.commute(i, j):
                continue
            for rest in itertools.product(K.vertices, repeat=k - 2):
                yield rest + (i,), j


def lower_bound_dim(
    K: FlagComplex,
    k: int,
    D: int | None = None,
    method: str = "closure",
    cap: int = DEFAULT_TUPLE_CAP,
    threads: int = 1,
) -> int:
    """Lower bound for dim L_k(RC_K).

    ``closure`` (default) ranks the degree-k Lie closure of the u_i in the
    associated graded of Z[RC_K]. ``words`` ranks the leading classes of all
    length-k nested commutator words directly (same value, slower; a
    cross-check). ``square_zero`` ranks their degree-k components in B; this is
    also a valid bound but already falls short for K2 at k = 3.
    """
    if k < 2:
        raise InputError("lower_bound_dim needs k >= 2")
    if D is not None and D < k:
        raise InputError("truncation degree must be at least k")
    if method == "closure":
        return len(lie_closure_basis(K, k, threads=threads))
    if method not in ("words", "square_zero"):
        raise InputError(f"unknown method {method!r}")
    n_tuples = (K.m ** (k - 2)) * 2 * len(K.non_edges())
    if n_tuples > cap:
        raise ResourceCapExceeded(f"{n_tuples} nested commutators of length {k} exceed cap {cap}")
    truncated_ring(K, k, "Z" if method == "words" else "B")  # build once before fanning out

    def image(t):
        w = nested_word(t[0], t[1], K)
        if method == "words":
            return class_in_degree(w, K, k)
        return magnus_eval(w, K, k).degree_part(k)

    elems = _map(image, list(_nested_tuples(K, k)), threads)
    return _rank_of(elems, DEFAULT_COLUMN_CAP)


def _map(fn, items, threads: int):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def low_degree_prediction(K: FlagComplex) -> dict[int, int]:
    """Known values of dim L_2 and dim L_3 from the full-subcomplex counts."""
    c = subcomplex_type_counts(K)
    return {2: c["non_edge"], 3: c["non_edge"] + 2 * c["three_discrete"] + c["edge_point"]}


@dataclass
class ConjectureReport:
    complex: dict
    max_degree: int
    method: str
    lower: dict[int, int] = field(default_factory=dict)
    upper: dict[int, int] = field(default_factory=dict)

    def verdict(self, k: int) -> str:
        return "verified" if self.lower[k] == self.upper[k] else "inconclusive"

    @property
    def degrees(self) -> list[int]:
        return sorted(self.lower)

    @property
    def all_verified(self) -> bool:
        return all(self.verdict(k) == "verified" for k in self.degrees)

    def to_json(self) -> dict:
        return {
            "complex": self.complex,
            "max_degree": self.max_degree,
            "method": self.method,
            "degrees": [
                {"k": k, "lower_bound": self.lower[k], "upper_bound": self.upper[k], "verdict": self.verdict(k)}
                for k in self.degrees
            ],
            "all_verified": self.all_verified,
        }

    def table(self) -> str:
        lines = [f"{'k':>3} {'lower':>7} {'upper':>7}  verdict"]
        for k in self.degrees:
            lines.append(f"{k:>3} {self.lower[k]:>7} {self.upper[k]:>7}  {self.verdict(k)}")
        return "\n".join(lines)


def conjecture_status(K: FlagComplex, D: int | None = None, method: str = "closure", threads: int = 1) -> ConjectureReport:
    """Compare the lower bound with m_k = n_2 + ... + n_k for k = 2..D."""
    D = default_degree(K) if D is None else D
    if D < 2:
        raise InputError("conjecture_status needs D >= 2")
    n = nk_series(K, D).by_degree()
    rep = ConjectureReport(K.summary(), D, method)
    running = 0
    for k in range(2, D + 1):
        running += n.get(k, 0)
        lo = lower_bound_dim(K, k, D, method=method, threads=threads)
        if lo > running:
            raise InternalInconsistency(f"lower bound {lo} exceeds upper bound {running} at degree {k}")
        rep.lower[k] = lo
        rep.upper[k] = running
        if k <= 3 and lo != running:
            raise InternalInconsistency(f"degree {k} must verify but got {lo} < {running}")
    return rep
