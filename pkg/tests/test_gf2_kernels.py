from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racglie import _kernels
from racglie.gf2 import EchelonBasis, GF2Matrix, pack, rank, unpack


def dense_rank(a: np.ndarray) -> int:
    a = a.copy() % 2
    r = 0
    rows, cols = a.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def test_pack_roundtrip():
    bits = [0, 5, 63, 64, 130]
    assert unpack(pack(bits, 131), 131) == bits


def test_pack_rejects_out_of_range():
    with pytest.raises(IndexError):
        pack([10], 10)


@settings(max_examples=200)
@given(st.integers(1, 12), st.integers(1, 150), st.integers(0, 2**32 - 1))
def test_rank_matches_dense_oracle(nrows, ncols, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8)
    assert GF2Matrix.from_dense(a).rank() == dense_rank(a)


def test_rank_helper_and_identity():
    assert rank([[0], [1], [0, 1]], 2) == 2
    assert GF2Matrix.from_dense(np.eye(70, dtype=np.uint8)).rank() == 70


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_echelon_express_reconstructs(seed):
    rng = np.random.default_rng(seed)
    ncols = int(rng.integers(1, 90))
    ech = EchelonBasis(ncols, provenance=40)
    vecs = []
    for _ in range(int(rng.integers(1, 40))):
        bits = [int(i) for i in np.flatnonzero(rng.integers(0, 2, ncols))]
        v = pack(bits, ncols)
        if ech.add(v, tag=len(vecs)):
            vecs.append(v)
    assert ech.rank == len(vecs)
    coeffs = rng.integers(0, 2, len(vecs))
    target = np.zeros_like(vecs[0]) if vecs else pack([], ncols)
    for c, v in zip(coeffs, vecs):
        if c:
            target = target ^ v
    idx = ech.express(target)
    assert sorted(idx) == [i for i, c in enumerate(coeffs) if c]
    assert ech.express_tags(target) == [ech.tags[i] for i in idx]


def test_solve_none_when_outside_span():
    m = GF2Matrix.from_rows([[0], [1]], 3)
    assert m.solve([2]) is None
    assert sorted(m.solve([0, 1])) == [0, 1]


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not importable")
@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_numba_and_numpy_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, 2**63, size=(int(rng.integers(1, 30)), int(rng.integers(1, 4))), dtype=np.uint64)
    assert _kernels.np_rank(mat.copy()) == _kernels.nb_rank(mat.copy())
    n, m = int(rng.integers(1, 40)), 3
    nxt = rng.integers(-1, n, size=(n, m + 1)).astype(np.int64)
    absorb = rng.integers(0, 2, size=(n, m + 1)).astype(np.bool_)
    coeffs = rng.integers(0, 16, size=n).astype(np.int64)
    word = rng.integers(1, m + 1, size=7).astype(np.int64)
    a = _kernels.np_apply_word(coeffs, word, nxt, absorb, 14, 16)
    b = _kernels.nb_apply_word(coeffs, word, nxt, absorb, 14, 16)
    assert np.array_equal(a, b)


def test_numpy_fallback_selected_by_env():
    code = (
        "from racglie import _kernels; assert _kernels.BACKEND == 'numpy';"
        "from racglie.coxeter import conjecture_status; from racglie.complexes import catalog;"
        "r = conjecture_status(catalog('k3'), 4, method='words'); assert r.all_verified, r.to_json()"
    )
    env = dict(os.environ, RACGLIE_DISABLE_NUMBA="1")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
