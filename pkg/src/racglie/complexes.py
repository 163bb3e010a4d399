"""Flag complexes on the vertex set [m] = {1, ..., m}.

A flag complex is stored through its 1-skeleton only; simplices are the
cliques of the graph and are always derived. Vertex sets are handled both as
ascending tuples (public API) and as bitmasks with bit ``i`` for vertex ``i``
(internal).
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InputError, NotFlagError
from .gf2 import GF2Matrix

MAX_VERTICES = 16

VertexSet = tuple[int, ...]


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> VertexSet:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(frozen=True)
class FlagComplex:
    m: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InputError(f"vertex count must be a positive integer, got {self.m!r}")
        if self.m > MAX_VERTICES:
            raise InputError(f"at most {MAX_VERTICES} vertices supported, got {self.m}")
        canon = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise InputError(f"loop edge {{{i},{i}}} is not allowed")
            if not (1 <= i <= self.m and 1 <= j <= self.m):
                raise InputError(f"edge {{{i},{j}}} outside vertex range [1, {self.m}]")
            canon.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def from_edges(cls, m: int, edges) -> FlagComplex:
        return cls(m, frozenset(tuple(e) for e in edges))

    @cached_property
    def adj(self) -> tuple[int, ...]:
        """adj[i] is the neighbour bitmask of vertex i (index 0 unused)."""
        a = [0] * (self.m + 1)
        for i, j in self.edges:
            a[i] |= 1 << j
            a[j] |= 1 << i
        return tuple(a)

    @property
    def full_mask(self) -> int:
        return ((1 << (self.m + 1)) - 1) ^ 1

    @property
    def vertices(self) -> VertexSet:
        return tuple(range(1, self.m + 1))

    def commute(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def non_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in itertools.combinations(self.vertices, 2) if not self.commute(i, j)]

    def _check(self, J) -> int:
        mask = 0
        for v in J:
            if not isinstance(v, (int, np.integer)) or not 1 <= v <= self.m:
                raise InputError(f"vertex {v!r} outside [1, {self.m}]")
            mask |= 1 << int(v)
        return mask

    def cliques(self, J=None) -> list[VertexSet]:
        """All cliques (simplices) of the full subcomplex on J, including the empty one."""
        pmask = self.full_mask if J is None else self._check(J)
        out: list[VertexSet] = []

        def rec(clique, cand):
            out.append(clique)
            while cand:
                low = cand & -cand
                v = low.bit_length() - 1
                cand ^= low
                rec(clique + (v,), cand & self.adj[v])

        rec((), pmask)
        return out

    def summary(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in sorted(self.edges)]}

    def to_json(self) -> str:
        return json.dumps(self.summary())

    @classmethod
    def from_dict(cls, data: dict, flag_complete: bool = False) -> FlagComplex:
        if not isinstance(data, dict) or "m" not in data:
            raise InputError('complex description needs an "m" field')
        m = data["m"]
        if not isinstance(m, int) or isinstance(m, bool):
            raise InputError(f'"m" must be an integer, got {m!r}')
        edges = data.get("edges", [])
        faces = data.get("faces")
        pairs = []
        for e in edges:
            if not isinstance(e, (list, tuple)) or len(e) != 2:
                raise InputError(f"edge must be a pair of vertices, got {e!r}")
            pairs.append(tuple(e))
        if faces is not None:
            for f in faces:
                pairs.extend(itertools.combinations(sorted(set(f)), 2))
        K = cls.from_edges(m, pairs)
        if faces is not None and not flag_complete:
            given = set()
            for f in faces:
                fs = tuple(sorted(set(f)))
                K._check(fs)
                for r in range(len(fs) + 1):
                    given.update(itertools.combinations(fs, r))
            missing = [c for c in K.cliques() if c not in given]
            if missing:
                raise NotFlagError(
                    f"faces are not the clique complex of their 1-skeleton (e.g. missing {list(missing[0])}); "
                    "pass flag_complete=True to take the flag completion"
                )
        return K

    @classmethod
    def load(cls, path, flag_complete: bool = False) -> FlagComplex:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data, flag_complete=flag_complete)


# ---------------------------------------------------------------------------
# combinatorics of full subcomplexes
# ---------------------------------------------------------------------------


def _components_mask(K: FlagComplex, mask: int) -> list[int]:
    comps = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            v = f.bit_length() - 1
            new = K.adj[v] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def components(K: FlagComplex, J) -> list[VertexSet]:
    """Connected components of K_J, each ascending, ordered by least vertex."""
    return [vertices_of(c) for c in _components_mask(K, K._check(J))]


def _theta_mask(K: FlagComplex, mask: int) -> int:
    top = 1 << (mask.bit_length() - 1)
    out = 0
    for comp in _components_mask(K, mask):
        if not comp & top:
            out |= comp & -comp
    return out


def theta(K: FlagComplex, J) -> VertexSet:
    """Vertices of J that are least in their component of K_J and not in the component of max(J)."""
    mask = K._check(J)
    if not mask:
        raise InputError("theta needs a nonempty vertex set")
    return vertices_of(_theta_mask(K, mask))


def euler_term(K: FlagComplex, J) -> int:
    """1 - chi(K_J), i.e. the signed count of all cliques in J including the empty one."""

    def rec(cand: int) -> int:
        total = 1
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            total -= rec(cand & K.adj[v])
        return total

    return rec(K._check(J))


def h0_reduced(K: FlagComplex, J) -> int:
    mask = K._check(J)
    return len(_components_mask(K, mask)) - 1 if mask else 0


def h1_dim_gf2(K: FlagComplex, J) -> int:
    """dim H_1(K_J; Z_2) from the vertex/edge/triangle boundary ranks."""
    mask = K._check(J)
    verts = vertices_of(mask)
    edges = [(i, j) for i, j in itertools.combinations(verts, 2) if K.commute(i, j)]
    if not edges:
        return 0
    eidx = {e: n for n, e in enumerate(edges)}
    tris = [t for t in itertools.combinations(verts, 3) if K.commute(t[0], t[1]) and K.commute(t[0], t[2]) and K.commute(t[1], t[2])]
    rank_d1 = len(verts) - len(_components_mask(K, mask))
    rank_d2 = 0
    if tris:
        rows = [[eidx[(a, b)], eidx[(a, c)], eidx[(b, c)]] for a, b, c in tris]
        rank_d2 = GF2Matrix.from_rows(rows, len(edges)).rank()
    return len(edges) - rank_d1 - rank_d2


def is_chordal(K: FlagComplex) -> bool:
    """Maximum cardinality search, then verify the reversed order is a perfect elimination ordering."""
    m = K.m
    weight = [0] * (m + 1)
    numbered = [False] * (m + 1)
    order = []
    for _ in range(m):
        v = max((u for u in range(1, m + 1) if not numbered[u]), key=lambda u: (weight[u], -u))
        numbered[v] = True
        order.append(v)
        for u in vertices_of(K.adj[v]):
            if not numbered[u]:
                weight[u] += 1
    # order is the reverse of a PEO candidate: each vertex's earlier neighbours must form a clique
    pos = {v: n for n, v in enumerate(order)}
    for v in order:
        earlier = [u for u in vertices_of(K.adj[v]) if pos[u] < pos[v]]
        if not earlier:
            continue
        parent = max(earlier, key=pos.__getitem__)
        need = mask_of(u for u in earlier if u != parent)
        if need & ~K.adj[parent]:
            return False
    return True


@dataclass(frozen=True)
class GptwEntry:
    J: VertexSet
    j: int

    @property
    def outer(self) -> VertexSet:
        """The ascending letters I = J minus j of the commutator c(I, j)."""
        return tuple(v for v in self.J if v != self.j)

    @property
    def degree(self) -> int:
        return len(self.J)

    @property
    def name(self) -> str:
        return f"c({','.join(map(str, self.J))}|{self.j})"

    def nested_form(self) -> str:
        s = f"g{self.j}"
        for v in reversed(self.outer):
            s = f"[g{v},{s}]"
        return s


def gptw_index(K: FlagComplex) -> list[GptwEntry]:
    """All GPTW pairs (J, j), ordered by |J|, then J, then j."""
    out = []
    for size in range(2, K.m + 1):
        for J in itertools.combinations(K.vertices, size):
            for j in vertices_of(_theta_mask(K, mask_of(J))):
                out.append(GptwEntry(J, j))
    return out


SUBCOMPLEX_TYPES = ("edge", "non_edge", "three_discrete", "edge_point", "path", "triangle")


def subcomplex_type_counts(K: FlagComplex) -> dict[str, int]:
    """Number of full subcomplexes of each isomorphism type on 2 and 3 vertices."""
    counts = dict.fromkeys(SUBCOMPLEX_TYPES, 0)
    for i, j in itertools.combinations(K.vertices, 2):
        counts["edge" if K.commute(i, j) else "non_edge"] += 1
    by_edges = {0: "three_discrete", 1: "edge_point", 2: "path", 3: "triangle"}
    for a, b, c in itertools.combinations(K.vertices, 3):
        n = K.commute(a, b) + K.commute(a, c) + K.commute(b, c)
        counts[by_edges[n]] += 1
    return counts


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def simplex(m: int) -> FlagComplex:
    return FlagComplex.from_edges(m, itertools.combinations(range(1, m + 1), 2))


def cycle(m: int) -> FlagComplex:
    return FlagComplex.from_edges(m, [(i, i % m + 1) for i in range(1, m + 1)])


def path(m: int) -> FlagComplex:
    return FlagComplex.from_edges(m, [(i, i + 1) for i in range(1, m)])


CATALOG = {
    "k2": lambda: FlagComplex(2),
    "k3": lambda: FlagComplex.from_edges(3, [(1, 3)]),
    "pentagon": lambda: cycle(5),
    "path4": lambda: path(4),
    "cycle4": lambda: cycle(4),
}


def catalog(name: str) -> FlagComplex:
    """Built-in complex by name: k2, k3, pentagon, path4, cycle4, simplex<m>."""
    key = name.strip().lower()
    if key in CATALOG:
        return CATALOG[key]()
    mt = re.fullmatch(r"simplex[:(]?(\d+)\)?", key)
    if mt:
        return simplex(int(mt.group(1)))
    raise InputError(f"unknown catalog complex {name!r}")


def catalog_names() -> list[str]:
    return [*CATALOG, "simplex3"]


def random_flag_complex(m: int, p: float, rng: np.random.Generator) -> FlagComplex:
    edges = [e for e in itertools.combinations(range(1, m + 1), 2) if rng.random() < p]
    return FlagComplex.from_edges(m, edges)
