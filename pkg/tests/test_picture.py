from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustercat.cluster import obj
from clustercat.cmc import build_category, morphism
from clustercat.errors import UnsupportedError
from clustercat.picture import (
    GroupWord,
    exchange_graph,
    faithfulness_check,
    gamma_bar,
    gamma_of_morphism,
    relations,
    validate_relation,
    verify_functoriality,
    verify_polygon_relations,
    verify_retraction_chain,
    word,
    word_equal,
)
from clustercat.wide import exceptional_objects_in, perpendicular, whole_category

from conftest import algebra

S1, S2, S3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
P2, P3 = (1, 1, 0), (1, 1, 1)


def test_gamma_golden(a3):
    w = whole_category(a3)
    f = morphism(a3, w, [obj(P2)])
    assert str(gamma_of_morphism(a3, f)) == "x(0,1,0) x(1,1,0)"
    g = morphism(a3, f.target, [obj(S3)])
    assert gamma_of_morphism(a3, g) == word(S3)
    fg = morphism(a3, w, [obj(P2), obj(P3)])
    assert gamma_of_morphism(a3, fg) == word(S2, P2, S3)


def test_word_printing():
    assert str(GroupWord(())) == "e"
    assert str(word((1, 0)).inverse()) == "x(1,0)^-1"
    assert (word((1, 0)) * word((1, 0)).inverse()) == GroupWord(())


def test_a2_relations():
    alg = algebra("A2")
    rels = relations(alg, whole_category(alg))
    assert len(rels) == 1
    (r,) = rels
    assert str(r.lhs) == "x(1,0) x(0,1)"
    assert str(r.rhs) == "x(0,1) x(1,1) x(1,0)"
    assert validate_relation(r, alg.exceptional_roots())


def test_a3_polygons():
    alg = algebra("A3")
    rep = verify_polygon_relations(alg, whole_category(alg))
    assert rep.ok
    sizes = rep.details["polygon_sizes"]
    assert sorted(sizes.items()) == [(4, 3), (5, 6)]


def test_exchange_graph_a2():
    alg = algebra("A2")
    g = exchange_graph(alg, whole_category(alg))
    assert len(g.clusters) == 5
    assert len([e for e in g.edges if e[3] == 1]) == 5


def test_initial_cluster_has_trivial_word(a3):
    g = exchange_graph(a3, whole_category(a3))
    words = [gamma_bar(a3, t) for t in g.clusters]
    assert sum(1 for w in words if w == GroupWord(())) == 1
    assert len(set(words)) == len(words)


def test_word_equal_uses_relations():
    alg = algebra("A2")
    rels = relations(alg, whole_category(alg))
    res = word_equal(word(S1[:2], S2[:2]), word((0, 1), (1, 1), (1, 0)), rels)
    assert res.equal is True
    unknown = word_equal(word((1, 0)), word((0, 1)), rels, budget=50)
    assert unknown.equal is None


@pytest.mark.parametrize("name, count", [("A2", 5), ("A3", 14)])
def test_retraction_certificate(name, count):
    alg = algebra(name)
    cert = verify_retraction_chain(alg, whole_category(alg))
    assert cert.certified, cert.failures
    assert cert.clusters == count


@pytest.mark.parametrize("name", ["A2", "A3"])
def test_functoriality_and_faithfulness(name):
    alg = algebra(name)
    cat = build_category(alg)
    assert verify_functoriality(alg, cat).ok
    assert faithfulness_check(alg, cat).ok


def test_relations_in_perpendicular(a3):
    w = perpendicular(a3, whole_category(a3), [S2])
    members = exceptional_objects_in(a3, w)
    for r in relations(a3, w):
        assert validate_relation(r, members)


def test_kronecker_relations_unsupported():
    alg = algebra("K")
    with pytest.raises(UnsupportedError):
        relations(alg, whole_category(alg))


letters = st.sampled_from([(1, 0), (0, 1), (1, 1)])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(letters, st.sampled_from([1, -1])), max_size=8))
def test_word_times_inverse_is_trivial(letters_and_signs):
    w = GroupWord(tuple(letters_and_signs))
    assert w * w.inverse() == GroupWord(())
    assert w.inverse().inverse() == w
