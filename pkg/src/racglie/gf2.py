"""Dense GF(2) linear algebra on rows packed into 64-bit words."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from . import _kernels
from ._kernels import n_words


def pack(bits: Iterable[int], ncols: int) -> np.ndarray:
    """Pack a collection of set column indices into a uint64 row."""
    v = np.zeros(n_words(ncols), dtype=np.uint64)
    for c in bits:
        if not 0 <= c < ncols:
            raise IndexError(f"column {c} out of range for {ncols} columns")
        v[c >> 6] ^= np.uint64(1) << np.uint64(c & 63)
    return v


def unpack(v: np.ndarray, ncols: int | None = None) -> list[int]:
    out = []
    for w, x in enumerate(v.tolist()):
        while x:
            low = x & -x
            out.append(w * 64 + low.bit_length() - 1)
            x ^= low
    if ncols is not None:
        out = [c for c in out if c < ncols]
    return out


class GF2Matrix:
    """A dense matrix over GF(2); each row is a packed uint64 vector."""

    def __init__(self, data: np.ndarray, ncols: int):
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.ndim != 2 or data.shape[1] != n_words(ncols):
            raise ValueError("row length inconsistent with column count")
        self.data = data
        self.ncols = ncols

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], ncols: int) -> GF2Matrix:
        data = np.zeros((len(rows), n_words(ncols)), dtype=np.uint64)
        for r, bits in enumerate(rows):
            data[r] = pack(bits, ncols)
        return cls(data, ncols)

    @classmethod
    def from_dense(cls, arr) -> GF2Matrix:
        arr = np.asarray(arr, dtype=np.uint8) & 1
        nrows, ncols = arr.shape
        return cls.from_rows([np.flatnonzero(row).tolist() for row in arr], ncols)

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for r in range(self.nrows):
            out[r, unpack(self.data[r], self.ncols)] = 1
        return out

    def rank(self) -> int:
        if self.nrows == 0:
            return 0
        return int(_kernels.rank_packed(self.data.copy()))

    def solve(self, target: Iterable[int]) -> list[int] | None:
        """Return row indices whose XOR equals ``target``, or None."""
        basis = EchelonBasis(self.ncols, provenance=self.nrows)
        for r in range(self.nrows):
            basis.add(self.data[r], tag=r)
        return basis.express(pack(target, self.ncols))


def rank(rows: Sequence[Iterable[int]], ncols: int) -> int:
    return GF2Matrix.from_rows(rows, ncols).rank()


class EchelonBasis:
    """Incrementally built echelon basis of a subspace of GF(2)^ncols.

    With ``provenance`` set to the maximum number of input vectors, every stored
    row remembers which inputs it is the XOR of, so that ``express`` can write a
    target as a combination of the accepted inputs.
    """

    def __init__(self, ncols: int, provenance: int = 0, capacity: int = 16):
        self.ncols = ncols
        self._nw = n_words(ncols)
        self._pw = n_words(max(provenance, 1))
        self._track = provenance > 0
        self._rows = np.zeros((capacity, self._nw), dtype=np.uint64)
        self._prov = np.zeros((capacity, self._pw), dtype=np.uint64)
        self._pivots = np.zeros(capacity, dtype=np.int64)
        self.tags: list[object] = []  # tags of accepted inputs, in order
        self._n_inputs = 0
        self.rank = 0

    def _grow(self):
        cap = 2 * self._rows.shape[0]
        for name in ("_rows", "_prov"):
            old = getattr(self, name)
            new = np.zeros((cap, old.shape[1]), dtype=np.uint64)
            new[: old.shape[0]] = old
            setattr(self, name, new)
        piv = np.zeros(cap, dtype=np.int64)
        piv[: self._pivots.shape[0]] = self._pivots
        self._pivots = piv

    def reduce(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
        v = np.array(v, dtype=np.uint64, copy=True)
        vp = np.zeros(self._pw, dtype=np.uint64)
        low = _kernels.reduce_vector(self._rows, self._prov, self._pivots, self.rank, v, vp)
        return v, vp, int(low)

    def contains(self, v: np.ndarray) -> bool:
        return self.reduce(v)[2] < 0

    def add(self, v: np.ndarray, tag: object = None) -> bool:
        """Insert ``v``; return True when it was independent of the basis."""
        v, vp, low = self.reduce(v)
        if low < 0:
            return False
        if self._track:
            idx = self._n_inputs
            if idx >= self._pw * 64:
                raise ValueError("provenance capacity exceeded")
            vp[idx >> 6] ^= np.uint64(1) << np.uint64(idx & 63)
        if self.rank == self._rows.shape[0]:
            self._grow()
        self._rows[self.rank] = v
        self._prov[self.rank] = vp
        self._pivots[self.rank] = low
        self.rank += 1
        self._n_inputs += 1
        self.tags.append(tag)
        return True

    def express(self, v: np.ndarray) -> list[int] | None:
        """Indices (into ``tags``) of accepted inputs summing to ``v``."""
        if not self._track:
            raise ValueError("basis built without provenance tracking")
        rem, vp, low = self.reduce(v)
        if low >= 0:
            return None
        return unpack(vp)

    def express_tags(self, v: np.ndarray) -> list[object] | None:
        idx = self.express(v)
        return None if idx is None else [self.tags[i] for i in idx]
