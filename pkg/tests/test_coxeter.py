from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from racglie.complexes import FlagComplex, catalog, simplex
from racglie.coxeter import (
    class_in_degree,
    conjecture_status,
    group_commutator,
    group_ring_eval,
    leading_term,
    low_degree_prediction,
    lower_bound_dim,
    magnus_degree,
    magnus_eval,
    nested_word,
    racg_normal_form,
    truncated_ring,
)
from racglie.errors import InputError
from racglie.pcalg import algebra_b, algebra_t

from .conftest import complex_and_word, flag_complexes


def test_normal_form_examples():
    K3 = catalog("k3")
    assert racg_normal_form((2, 2), K3) == ()
    assert racg_normal_form((1, 3, 1), K3) == (3,)
    assert racg_normal_form((1, 2, 1, 2), catalog("k2")) == (1, 2, 1, 2)
    assert racg_normal_form((3, 1), K3) == (1, 3)


def _bruteforce_reduce(w, K):
    """Breadth-first search over commuting swaps and cancellations; returns a shortest word, shortlex-least."""
    seen = {tuple(w)}
    frontier = [tuple(w)]
    best = tuple(w)
    while frontier:
        nxt = []
        for u in frontier:
            if (len(u), u) < (len(best), best):
                best = u
            for i in range(len(u) - 1):
                if u[i] == u[i + 1]:
                    v = u[:i] + u[i + 2:]
                elif K.commute(u[i], u[i + 1]):
                    v = u[:i] + (u[i + 1], u[i]) + u[i + 2:]
                else:
                    continue
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return best


@settings(max_examples=300)
@given(complex_and_word(max_m=4, max_len=7))
def test_normal_form_is_shortlex_least(kw):
    K, w = kw
    assert racg_normal_form(w, K) == _bruteforce_reduce(w, K)


@settings(max_examples=300)
@given(complex_and_word(max_m=5, max_len=12))
def test_normal_form_idempotent_and_same_element(kw):
    K, w = kw
    nf = racg_normal_form(w, K)
    assert racg_normal_form(nf, K) == nf
    assert racg_normal_form(tuple(reversed(nf)) + w, K) == ()


def test_commutator_examples():
    K2 = catalog("k2")
    assert nested_word((1,), 2) == (1, 2, 1, 2)
    assert group_commutator((1, 2), (1, 2), K2) == ()
    assert nested_word((1,), 3, catalog("k3")) == ()


def test_magnus_examples():
    K2 = catalog("k2")
    B = algebra_b(K2)
    assert magnus_eval((), K2, 4) == B.one()
    assert magnus_eval((1,), K2, 4) == B.one() + B.gen(1)
    assert magnus_eval((1, 2, 1, 2), K2, 4).degree_part(2) == B.element([(1, 2), (2, 1)])


@settings(max_examples=300)
@given(complex_and_word(max_m=5, max_len=10), st.data())
def test_magnus_multiplicative_and_normal_form(kw, data):
    K, u = kw
    v = tuple(data.draw(st.lists(st.integers(1, K.m), max_size=6)))
    D = 5
    assert magnus_eval(u + v, K, D) == magnus_eval(u, K, D) * magnus_eval(v, K, D)
    assert magnus_eval(u, K, D) == magnus_eval(racg_normal_form(u, K), K, D)
    assert np.array_equal(group_ring_eval(u, K, D), group_ring_eval(racg_normal_form(u, K), K, D))


def test_group_ring_relations():
    K2 = catalog("k2")
    ring = truncated_ring(K2, 4, "Z")
    # g1 - 1 = u1 and g1^2 = 1
    assert np.array_equal(ring.eval((1, 1)), ring.one())
    p, lead = leading_term((1,), K2, 4)
    assert p == 1 and lead == algebra_t(K2).gen(1)
    p, lead = leading_term(nested_word((1, 1), 2), K2, 4)
    assert p == 3 and lead == algebra_t(K2).element([(0, 1, 2), (0, 2, 1)])


def _random_commutator(K, data, depth):
    if depth == 0:
        return (data.draw(st.integers(1, K.m)),), 1
    a, p = _random_commutator(K, data, data.draw(st.integers(0, depth - 1)))
    b, q = _random_commutator(K, data, data.draw(st.integers(0, depth - 1)))
    return group_commutator(a, b, K), p + q


@settings(max_examples=300)
@given(flag_complexes(max_m=4), st.data())
def test_commutator_filtration(K, data):
    w, k = _random_commutator(K, data, 3)
    D = 6
    deg = magnus_degree(w, K, D)
    assert deg is None or deg >= k
    p, _ = leading_term(w, K, D)
    assert p is None or p >= k


@settings(max_examples=300)
@given(flag_complexes(max_m=4), st.data())
def test_squaring_raises_degree(K, data):
    w, k = _random_commutator(K, data, 2)
    if k < 2:
        return
    D = 6
    deg = magnus_degree(w, K, D)
    if deg is not None and deg >= k:
        sq = magnus_degree(w + w, K, D)
        assert sq is None or sq >= deg + 1
    p, _ = leading_term(w, K, D)
    if p is not None and p >= 2:
        q, lead2 = leading_term(w + w, K, D)
        assert q is None or q >= p + 1


@settings(max_examples=200)
@given(flag_complexes(max_m=4), st.data())
def test_h_compatibility_shadow(K, data):
    a, p = _random_commutator(K, data, 1)
    b, q = _random_commutator(K, data, 1)
    if q < 2:
        return
    d = p + q + 1
    lhs = group_commutator(a, b + b, K)
    ab = group_commutator(a, b, K)
    rhs = ab + ab
    assert magnus_eval(lhs, K, d).degree_part(d) == magnus_eval(rhs, K, d).degree_part(d)
    assert class_in_degree(lhs, K, d) == class_in_degree(rhs, K, d)


def test_lower_bound_examples():
    assert lower_bound_dim(catalog("k2"), 2) == 1
    for name in ["k2", "k3", "pentagon", "path4", "cycle4"]:
        K = catalog(name)
        assert lower_bound_dim(K, 2) == len(K.non_edges())
    assert lower_bound_dim(simplex(4), 3) == 0
    with pytest.raises(InputError):
        lower_bound_dim(catalog("k2"), 1)


@pytest.mark.parametrize("name", ["k2", "k3", "pentagon"])
def test_lower_bound_methods_agree(name):
    K = catalog(name)
    for k in (2, 3, 4):
        assert lower_bound_dim(K, k, method="words") == lower_bound_dim(K, k)


def test_square_zero_bound_is_weaker():
    K2 = catalog("k2")
    assert lower_bound_dim(K2, 3, method="square_zero") == 0
    assert lower_bound_dim(K2, 3) == 1


def test_conjecture_examples():
    rep = conjecture_status(catalog("k2"), 8)
    assert rep.all_verified and all(rep.lower[k] == rep.upper[k] == 1 for k in range(2, 9))
    rep = conjecture_status(catalog("pentagon"), 3)
    assert (rep.lower[2], rep.lower[3]) == (5, 10) and rep.all_verified
    js = rep.to_json()
    assert js["degrees"][0] == {"k": 2, "lower_bound": 5, "upper_bound": 5, "verdict": "verified"}


@settings(max_examples=40)
@given(flag_complexes(max_m=5))
def test_bounds_pair_up(K):
    rep = conjecture_status(K, 4)
    for k in rep.degrees:
        assert rep.lower[k] <= rep.upper[k]
    pred = low_degree_prediction(K)
    assert rep.lower[2] == pred[2] and rep.lower[3] == pred[3]


def test_threads_flag():
    K = catalog("pentagon")
    assert lower_bound_dim(K, 4, method="words", threads=2) == lower_bound_dim(K, 4)
