from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racglie.complexes import catalog, gptw_index, simplex
from racglie.errors import InputError
from racglie.nk import (
    LiePoly,
    NK,
    Nested,
    c_qv,
    eval_lie,
    expand_c,
    express_in_gptw,
    format_lie,
    nested_poly,
    nk_dims,
    order_nested,
)
from racglie.pcalg import algebra_a, commutator
from racglie.series import extract_exponents, pbw_series, rhs_poly, DimTable

from .conftest import flag_complexes

mu = LiePoly.mu


def test_eval_examples():
    A3 = algebra_a(catalog("k3"))
    assert eval_lie(mu(2), A3) == A3.gen(2)
    assert eval_lie(mu(1).bracket(mu(3)), A3).is_zero()
    A2 = algebra_a(catalog("k2"))
    assert eval_lie(mu(2).bracket(mu(1)), A2) == A2.element([(2, 1), (1, 2)])


def test_bracket_alternation_is_formal():
    x = mu(1).bracket(mu(2))
    assert not x.bracket(x)
    assert x + x == LiePoly()


def test_expand_c_small_cases():
    q = {i: mu(i) for i in range(1, 5)}
    V = (3, 4)
    x, y = mu(1), mu(2)
    assert expand_c([], x, y, q, V) == x.bracket(y)
    assert len(expand_c([1], x, y, q, V)) == 2
    assert len(expand_c([1, 2], x, y, q, V)) == 4
    with pytest.raises(InputError):
        expand_c([3], x, y, q, V)


@settings(max_examples=200)
@given(flag_complexes(max_m=5), st.data())
def test_expand_c_matches_evaluation(K, data):
    A = algebra_a(K)
    q = {i: mu(i) for i in K.vertices}
    V = tuple(data.draw(st.lists(st.integers(1, K.m), min_size=1, max_size=3)))
    I = data.draw(st.sets(st.integers(1, len(V)), max_size=2))
    x = mu(data.draw(st.integers(1, K.m)))
    y = nested_poly((data.draw(st.integers(1, K.m)),), data.draw(st.integers(1, K.m)))
    lhs = eval_lie(c_qv(I, x.bracket(y), q, V), A)
    assert eval_lie(expand_c(I, x, y, q, V), A) == lhs


def test_order_nested_examples():
    assert order_nested(((1,), 2)) == LiePoly.leaf((2,), 1)
    assert order_nested(((1, 3), 2)) == LiePoly.leaf((1, 3), 2)
    with pytest.raises(InputError):
        order_nested(((1, 2), 1))


@settings(max_examples=300)
@given(st.integers(2, 6), st.data())
def test_order_nested_preserves_value(m, data):
    K = data.draw(flag_complexes(min_m=m, max_m=m))
    k = data.draw(st.integers(2, min(5, m)))
    letters = data.draw(st.permutations(range(1, m + 1)))[:k]
    seq, base = tuple(letters[:-1]), letters[-1]
    out = order_nested((seq, base))
    for t in out.terms:
        if isinstance(t, Nested):
            assert list(t.outer) == sorted(t.outer) and t.outer and t.outer[-1] > t.base
    A = algebra_a(K)
    assert eval_lie(out, A) == eval_lie(nested_poly(seq, base), A)


def test_express_in_gptw_examples():
    K3 = catalog("k3")
    c = LiePoly.leaf((1, 3), 2)
    assert express_in_gptw(c, K3) == c
    target = nested_poly((3, 2), 1)
    g = express_in_gptw(target, K3)
    A = algebra_a(K3)
    assert eval_lie(g, A) == eval_lie(target, A)
    assert express_in_gptw(nested_poly((1, 2), 3), simplex(3)) == LiePoly()


def test_nk_dims_examples():
    assert nk_dims(catalog("k2"), 6) == {(1, 1): 1}
    assert nk_dims(simplex(4), 6) == {}
    pent = nk_dims(catalog("pentagon"), 4)
    by = {d: sum(v for a, v in pent.items() if sum(a) == d) for d in (2, 3, 4)}
    assert by == {2: 5, 3: 5, 4: 10}
    with pytest.raises(InputError):
        nk_dims(catalog("k2"), 1)


def test_nk_dims_threads_agree():
    K = catalog("pentagon")
    assert nk_dims(K, 5, threads=3) == nk_dims(K, 5)


@settings(max_examples=25)
@given(flag_complexes(max_m=5))
def test_pbw_enveloping_dims(K):
    D = 5
    nk = NK(K)
    dims = nk.dims(D)
    pbw = pbw_series(DimTable(K.m, D, dims), D)
    env = nk.enveloping_dims(D)
    expected = {a: c for a, c in pbw.coeffs.items() if sum(a) >= 1}
    assert env == expected


@settings(max_examples=200)
@given(flag_complexes(max_m=5), st.data())
def test_eval_images_alternating_and_jacobi(K, data):
    A = algebra_a(K)
    gens = [LiePoly.leaf(e.outer, e.j) for e in gptw_index(K)] + [mu(i) for i in K.vertices]
    x, y, z = (eval_lie(data.draw(st.sampled_from(gens)), A) for _ in range(3))
    assert commutator(x, x).is_zero()
    jac = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y))
    assert jac.is_zero()


def test_format():
    p = LiePoly.leaf((1, 3), 2) + LiePoly.leaf((2,), 1).bracket(LiePoly.leaf((3,), 2))
    assert format_lie(p) == "c(1,2,3|2) + [c(1,2|1),c(2,3|2)]"
    assert format_lie(LiePoly()) == "0"
