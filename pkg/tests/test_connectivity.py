from __future__ import annotations

import itertools

import pytest

from binmatroid.connectivity import (
    SearchBudget,
    SearchIndeterminate,
    find_4fans,
    find_43_violator,
    find_separation,
    is_internally_4_connected,
    is_k_separation,
    is_n_connected,
    is_sequential,
    lambda_,
)
from binmatroid.constructions import catalog
from binmatroid.gf2core import BitMatrix
from binmatroid.matroid import BinaryMatroid, dual, restrict

from helpers import random_matroid

EXH = SearchBudget(strategy="exhaustive")


def test_lambda_formulas_agree(rng):
    for _ in range(30):
        M = random_matroid(rng, 4, 9)
        X = rng.sample(M.labels, rng.randint(0, 9))
        assert lambda_(M, X, verify=True) == lambda_(M, set(M.labels) - set(X))
        assert lambda_(M, X) == lambda_(dual(M), X)


def test_known_connectivity():
    assert is_n_connected(catalog("f7"), 3)
    assert is_n_connected(catalog("mk5"), 3)
    assert not is_n_connected(catalog("mk5"), 4)
    assert is_n_connected(catalog("wheel", n=4), 3)
    ok, w = is_internally_4_connected(catalog("wheel", n=4))
    assert not ok and w.revalidate(catalog("wheel", n=4))
    assert is_internally_4_connected(catalog("mk33"))[0]
    assert is_internally_4_connected(catalog("pg"))[0]


def test_bnb_matches_exhaustive_on_small_matroids(rng):
    for _ in range(60):
        M = random_matroid(rng, rng.randint(2, 5), rng.randint(5, 10))
        for bound, side in itertools.product((0, 1, 2), (1, 2, 3)):
            a = find_separation(M, bound, side, side)
            b = find_separation(M, bound, side, side, EXH)
            assert (a is None) == (b is None)
            if a is not None:
                assert a.lam == b.lam
                assert a.revalidate(M) and b.revalidate(M)
                assert is_k_separation(M, a.side_x, a.lam + 1) or min(a.sizes) < a.lam + 1


def test_exhaustive_returns_lexicographically_least():
    M = catalog("wheel", n=4)
    w = find_separation(M, 2, 4, 4, EXH)
    assert w is not None and w.lam == 2
    assert M.sorted_labels(w.side_x)[0] == M.labels[0]


def test_threads_do_not_change_witness():
    M = restrict(catalog("pg", r=4), [f"e{i}" for i in range(0, 31, 2)])
    base = find_separation(M, 2, 4, 4)
    for t in (2, 4, 8):
        w = find_separation(M, 2, 4, 4, SearchBudget(threads=t))
        assert w == base


def test_budget_exhaustion_is_indeterminate():
    M = catalog("section6-g")
    with pytest.raises(SearchIndeterminate):
        find_separation(M, 2, 4, 4, SearchBudget(node_limit=50))


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(strategy="greedy")
    with pytest.raises(ValueError):
        SearchBudget(threads=0)
    with pytest.raises(ValueError):
        find_separation(catalog("f7"), 1, 0, 1)


def test_violator_on_wheel_is_a_fan_or_sequential():
    W = catalog("wheel", n=5)
    w = find_43_violator(W)
    assert w is not None and w.revalidate(W)
    ok, order = is_sequential(W, w.side_x)
    assert ok and len(order) in (w.sizes[0], w.sizes[1])


def test_fans_in_wheel():
    W = catalog("wheel", n=4)
    fans = find_4fans(W)
    assert len(fans) == 8
    for tri, triad in fans:
        assert len(tri & triad) == 2
        assert lambda_(W, tri | triad) <= 2
    assert find_4fans(catalog("f7")) == []


def test_non_sequential_separation():
    # direct sum of two Fano planes: each copy is closed and coclosed
    F = catalog("f7").matrix
    rows = [r for r in F.data] + [r << 7 for r in F.data]
    M = BinaryMatroid.from_matrix(BitMatrix(6, 14, tuple(rows)))
    X = M.labels[:7]
    assert lambda_(M, X) == 0
    assert is_sequential(M, X) == (False, None)
