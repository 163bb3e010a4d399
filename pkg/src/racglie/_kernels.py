"""Hot inner loops: GF(2) elimination on packed rows and truncated group-ring
word application.

Each kernel exists twice, as a numba ``@njit`` function and as a pure numpy
function with identical semantics. The numba path is used when numba imports
and ``RACGLIE_DISABLE_NUMBA`` is unset (or ``0``); set it to ``1`` to force the
numpy path, e.g. for debugging or benchmarking.
"""

from __future__ import annotations

import os

import numpy as np

WORD_BITS = 64

_disabled = os.environ.get("RACGLIE_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by RACGLIE_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def n_words(ncols: int) -> int:
    return max(1, (ncols + WORD_BITS - 1) // WORD_BITS)


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------


def _np_get_bit(v, col):
    return (int(v[col >> 6]) >> (col & 63)) & 1


def _np_lowest_bit(v):
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return -1
    w = int(nz[0])
    x = int(v[w])
    return w * WORD_BITS + ((x & -x).bit_length() - 1)


def np_reduce(rows, prov, pivots, nrows, v, vprov):
    """Reduce ``v`` (and its provenance ``vprov``) in place against the
    first ``nrows`` echelon rows. Returns the lowest set column of the
    remainder, or -1 if ``v`` reduced to zero."""
    for r in range(nrows):
        if _np_get_bit(v, pivots[r]):
            v ^= rows[r]
            vprov ^= prov[r]
    return _np_lowest_bit(v)


def np_rank(mat):
    """Rank over GF(2) of a packed matrix; ``mat`` is overwritten."""
    nrows, nw = mat.shape
    rank = 0
    for w in range(nw):
        for b in range(WORD_BITS):
            if rank == nrows:
                return rank
            bit = np.uint64(1) << np.uint64(b)
            col = (mat[rank:, w] & bit) != 0
            hits = np.flatnonzero(col)
            if hits.size == 0:
                continue
            p = rank + int(hits[0])
            if p != rank:
                mat[[rank, p]] = mat[[p, rank]]
            below = rank + 1 + np.flatnonzero((mat[rank + 1:, w] & bit) != 0)
            mat[below] ^= mat[rank]
            rank += 1
    return rank


def np_apply_word(coeffs, word, nxt, absorb, factor, modulus):
    """Right-multiply a truncated group-ring element by ``prod (1 + u_i)``.

    ``coeffs[w]`` is the coefficient of basis word ``w``; ``nxt[w, i]`` is the
    index of ``w * u_i`` when it is a longer basis word (-1 when it falls
    beyond the truncation), and ``absorb[w, i]`` flags ``w * u_i = factor * w``.
    """
    out = coeffs.copy()
    for letter in word:
        i = int(letter)
        add = np.zeros_like(out)
        ab = absorb[:, i]
        add[ab] = (out[ab] * factor) % modulus
        tgt = nxt[:, i]
        ok = (~ab) & (tgt >= 0)
        np.add.at(add, tgt[ok], out[ok])
        out = (out + add) % modulus
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_lowest_bit(v):
        for w in range(v.shape[0]):
            x = v[w]
            if x != 0:
                b = 0
                while (x >> np.uint64(b)) & np.uint64(1) == 0:
                    b += 1
                return w * 64 + b
        return -1

    @njit(cache=True, nogil=True)
    def nb_reduce(rows, prov, pivots, nrows, v, vprov):
        for r in range(nrows):
            p = pivots[r]
            if (v[p >> 6] >> np.uint64(p & 63)) & np.uint64(1):
                for w in range(v.shape[0]):
                    v[w] ^= rows[r, w]
                for w in range(vprov.shape[0]):
                    vprov[w] ^= prov[r, w]
        return _nb_lowest_bit(v)

    @njit(cache=True, nogil=True)
    def nb_rank(mat):
        nrows, nw = mat.shape
        rank = 0
        for w in range(nw):
            for b in range(64):
                if rank == nrows:
                    return rank
                bit = np.uint64(1) << np.uint64(b)
                p = -1
                for r in range(rank, nrows):
                    if mat[r, w] & bit:
                        p = r
                        break
                if p < 0:
                    continue
                if p != rank:
                    for k in range(nw):
                        tmp = mat[p, k]
                        mat[p, k] = mat[rank, k]
                        mat[rank, k] = tmp
                for r in range(rank + 1, nrows):
                    if mat[r, w] & bit:
                        for k in range(w, nw):
                            mat[r, k] ^= mat[rank, k]
                rank += 1
        return rank

    @njit(cache=True, nogil=True)
    def nb_apply_word(coeffs, word, nxt, absorb, factor, modulus):
        out = coeffs.copy()
        add = np.zeros_like(out)
        n = out.shape[0]
        for t in range(word.shape[0]):
            i = word[t]
            for w in range(n):
                add[w] = 0
            for w in range(n):
                c = out[w]
                if c == 0:
                    continue
                if absorb[w, i]:
                    add[w] = (add[w] + c * factor) % modulus
                else:
                    j = nxt[w, i]
                    if j >= 0:
                        add[j] = (add[j] + c) % modulus
            for w in range(n):
                out[w] = (out[w] + add[w]) % modulus
        return out

    reduce_vector = nb_reduce
    rank_packed = nb_rank
    apply_word = nb_apply_word
else:  # pragma: no cover - exercised with RACGLIE_DISABLE_NUMBA=1
    reduce_vector = np_reduce
    rank_packed = np_rank
    apply_word = np_apply_word

BACKEND = "numba" if HAS_NUMBA else "numpy"
