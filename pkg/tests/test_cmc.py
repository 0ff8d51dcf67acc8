from __future__ import annotations

import math

import pytest

from clustercat.cluster import obj
from clustercat.cmc import (
    build_category,
    check_associativity,
    compose,
    factorization_chains,
    factorizations,
    identity,
    last_factors,
    morphism,
    recover_first_factors,
    sigma,
    sigma_inverse,
    sigma_table,
    verify_cubical_axioms,
)
from clustercat.errors import QuiverError
from clustercat.wide import make_wide, whole_category

from conftest import algebra

S1, S2, S3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
P2, P3 = (1, 1, 0), (1, 1, 1)


def test_sigma_golden_values(a3):
    w = whole_category(a3)
    s = [obj(P2)]
    expected = {
        obj(S1): obj(S1),
        obj(S3): obj(P3),
        obj(S1, True): obj(S2),
        obj(S3, True): obj(P3, True),
    }
    for t, u in expected.items():
        assert sigma(a3, w, s, t) == u
        assert sigma_inverse(a3, w, s, u) == t
    table = sigma_table(a3, w, s)
    assert len(set(table.values())) == len(table) == 4


def test_composition_golden(a3):
    w = whole_category(a3)
    f = morphism(a3, w, [obj(P2)])
    g = morphism(a3, f.target, [obj(S3)])
    h = compose(a3, f, g)
    assert set(h.cluster) == {obj(P2), obj(P3)}
    assert h.target == make_wide([S1])


def test_identity_is_neutral(a3):
    w = whole_category(a3)
    f = morphism(a3, w, [obj(P2)])
    assert compose(a3, identity(w), f) == f
    assert compose(a3, f, identity(f.target)) == f


def test_morphism_rejects_incompatible(a3):
    with pytest.raises(QuiverError):
        morphism(a3, whole_category(a3), [obj(S1), obj(S2)])  # Ext(S2, S1) != 0
    with pytest.raises(QuiverError):
        morphism(a3, make_wide([S1, S3]), [obj(S2)])


def test_fac_of_p2_p3_is_a_square(a3):
    f = morphism(a3, whole_category(a3), [obj(P2), obj(P3)])
    facs = factorizations(a3, f)
    assert len(facs) == 4
    assert len({fac.middle for fac in facs}) == 4
    assert len(factorization_chains(a3, f)) == 2


@pytest.mark.parametrize("name, objects, morphisms", [("A2", 5, 21), ("A3", 14, 126), ("A4", 42, 818), ("D4", 50, 1002)])
def test_category_sizes_and_cubes(name, objects, morphisms):
    alg = algebra(name)
    cat = build_category(alg)
    assert len(cat.objects) == objects
    assert len(cat.all_morphisms()) == morphisms
    rep = verify_cubical_axioms(alg, cat)
    assert rep.ok, rep.violations
    for f in cat.all_morphisms():
        if f.rank >= 2:
            assert len(factorizations(alg, f)) == 2**f.rank
            assert len(set(factorization_chains(alg, f))) == math.factorial(f.rank)


@pytest.mark.parametrize("name", ["A2", "A3"])
def test_associativity(name):
    alg = algebra(name)
    assert check_associativity(alg, build_category(alg)) == []


def test_last_factors_determine_first_factors():
    alg = algebra("A3")
    for f in build_category(alg).all_morphisms():
        if f.rank == 0:
            continue
        lasts = last_factors(alg, f)
        assert recover_first_factors(alg, lasts, f.target, f.source) == list(f.cluster)


def test_tame_slice_is_truncated():
    alg = algebra("K")
    cat = build_category(alg)
    assert cat.truncated
    assert all(f.rank <= 1 for f in cat.all_morphisms() if f.source.rank == 2)
    assert verify_cubical_axioms(alg, cat).ok
