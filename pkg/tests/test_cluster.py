from __future__ import annotations

import itertools
import random

import pytest

from clustercat.cluster import (
    ClusterTiltingSet,
    arrange_exceptional_sequence,
    c_vectors,
    c_vectors_by_mutation,
    canonical,
    cluster_objects,
    compatible,
    condition_star_check,
    enumerate_clusters,
    exchange_matrix,
    from_signed,
    initial_cluster,
    mutate,
    obj,
    speyer_thomas_check,
)
from clustercat.errors import QuiverError, UnsupportedError
from clustercat.wide import whole_category

from conftest import algebra


def test_signed_round_trip():
    o = from_signed((0, -1, -1))
    assert o == obj((0, 1, 1), True)
    assert o.signed == (0, -1, -1)
    assert str(o) == "[0, 1, 1][1]"
    with pytest.raises(QuiverError):
        from_signed((1, -1, 0))


def test_shift_compatibility(a3):
    p2, s1 = obj((1, 1, 0)), obj((1, 0, 0))
    assert compatible(a3, p2, obj((1, 0, 0), True)) is False  # Hom(P1, P2) != 0
    assert compatible(a3, s1, obj((0, 1, 0), True))
    assert compatible(a3, p2, s1)


@pytest.mark.parametrize("name, count", [("A2", 5), ("A3", 14), ("A4", 42), ("D4", 50)])
def test_cluster_counts_are_order_independent(name, count):
    alg = algebra(name)
    w = whole_category(alg)
    forward = enumerate_clusters(alg, w)
    order = list(cluster_objects(alg, w))
    random.Random(7).shuffle(order)
    assert len(forward) == count
    assert [c.objects for c in forward] == [c.objects for c in enumerate_clusters(alg, w, order=order)]


def test_tame_enumeration_refused():
    alg = algebra("K")
    with pytest.raises(UnsupportedError):
        enumerate_clusters(alg, whole_category(alg))


def test_initial_cluster_c_vectors_are_unit(a3):
    t = initial_cluster(a3, whole_category(a3))
    assert all(o.shifted for o in t.objects)
    assert sorted(c_vectors(a3, t)) == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_mutation_is_involutive(a3):
    w = whole_category(a3)
    for t in enumerate_clusters(a3, w):
        for k in range(3):
            mu = mutate(a3, t, k)
            assert mu.added not in t.objects
            assert mu.sign in (1, -1)
            back = mutate(a3, mu.cluster, mu.added)
            assert back.cluster.objects == t.objects
            assert back.sign == -mu.sign


def test_exchange_matrix_skew(a3):
    b = exchange_matrix(a3, whole_category(a3))
    assert all(b[i][j] == -b[j][i] for i in range(3) for j in range(3))


@pytest.mark.parametrize("name", ["A2", "A3", "A4", "D4"])
def test_c_vectors_two_ways(name):
    alg = algebra(name)
    w = whole_category(alg)
    tracked = c_vectors_by_mutation(alg, w)
    clusters = enumerate_clusters(alg, w)
    assert len(tracked) == len(clusters)
    for t in clusters:
        assert tracked[t.objects] == c_vectors(alg, t)
        assert speyer_thomas_check(alg, c_vectors(alg, t)).ok


def test_speyer_thomas_sets_come_from_unique_clusters(a3):
    w = whole_category(a3)
    by_set: dict[frozenset, int] = {}
    for t in enumerate_clusters(a3, w):
        key = frozenset(c_vectors(a3, t))
        by_set[key] = by_set.get(key, 0) + 1
    signed = [r for r in a3.exceptional_roots()] + [tuple(-x for x in r) for r in a3.exceptional_roots()]
    accepted = [frozenset(s) for s in itertools.combinations(signed, 3) if speyer_thomas_check(a3, s).ok]
    assert set(accepted) == set(by_set)
    assert all(v == 1 for v in by_set.values())


def test_speyer_thomas_rejections(a3):
    assert not speyer_thomas_check(a3, [(1, 0, -1), (0, 1, 0), (0, 0, 1)]).ok
    assert not speyer_thomas_check(a3, [(1, 0, 1), (0, 1, 0), (0, 0, 1)]).ok
    assert not speyer_thomas_check(a3, [(1, 0, 0), (1, 0, 0), (0, 0, 1)]).ok


def test_arrangement_of_exceptional_sequence(a3):
    arr = arrange_exceptional_sequence(a3, [(1, 0, 0), (0, 1, 0)])
    assert arr.ok
    # Ext(S2, S1) != 0, so S1 must come after S2
    assert arr.order == ((0, 1, 0), (1, 0, 0))


@pytest.mark.parametrize("name", ["A2", "A3", "A4", "D4", "K", "A22"])
def test_condition_star_holds(name):
    assert condition_star_check(algebra(name)).ok


def test_condition_star_fails_for_a31():
    res = condition_star_check(algebra("A31"))
    assert not res.ok
    assert res.witness == ((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1))
    assert res.cycle is not None and len(res.cycle) == 3


def test_cluster_set_equality_ignores_input_order(a3):
    objs = [obj((1, 1, 1)), obj((1, 0, 0)), obj((1, 1, 0))]
    assert ClusterTiltingSet(whole_category(a3), canonical(objs)).objects == canonical(reversed(objs))
