from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustercat.errors import QuiverError
from clustercat.quiver import (
    Quiver,
    ReprTag,
    apply_matrix,
    classify_type,
    coxeter_transform,
    enumerate_positive_real_roots,
    euler_form,
    injective_dims,
    parse_quiver,
    projective_dims,
    reflect,
    root_key,
    tits_form,
)

from conftest import QUIVERS


def test_parse_linear_a3():
    q = parse_quiver('{"vertices":3,"arrows":[[2,1],[3,2]]}')
    assert q.n == 3
    assert q.arrows == ((2, 1), (3, 2))
    assert parse_quiver(q.to_json()) == q


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"arrows": []}',
        '{"vertices": 2, "arrows": [[1, 1]]}',
        '{"vertices": 2, "arrows": [[1, 2], [2, 1]]}',
        '{"vertices": 2, "arrows": [[1, 3]]}',
        '{"vertices": 0, "arrows": []}',
        '{"vertices": 2, "arrows": [[1, true]]}',
    ],
)
def test_parse_rejects_bad_input(text):
    with pytest.raises(QuiverError):
        parse_quiver(text)


def test_wild_still_parses():
    q = parse_quiver('{"vertices":2,"arrows":[[1,2],[1,2],[1,2]]}')
    assert classify_type(q).tag is ReprTag.WILD


def test_a3_projectives_injectives_coxeter():
    q = QUIVERS["A3"]
    assert projective_dims(q) == [(1, 0, 0), (1, 1, 0), (1, 1, 1)]
    assert injective_dims(q) == [(1, 1, 1), (0, 1, 1), (0, 0, 1)]
    phi = coxeter_transform(q)
    for p, i in zip(projective_dims(q), injective_dims(q)):
        assert apply_matrix(phi, p) == tuple(-x for x in i)


def test_euler_form_convention():
    q = QUIVERS["A3"]
    # arrow 2 -> 1 contributes -x_2 y_1
    assert euler_form(q, (0, 1, 0), (1, 0, 0)) == -1
    assert euler_form(q, (1, 0, 0), (0, 1, 0)) == 0
    assert tits_form(q, (1, 1, 1)) == 1


@pytest.mark.parametrize(
    "name, tag, null",
    [
        ("A3", ReprTag.FINITE, None),
        ("D4", ReprTag.FINITE, None),
        ("K", ReprTag.TAME, (1, 1)),
        ("A22", ReprTag.TAME, (1, 1, 1, 1)),
        ("A31", ReprTag.TAME, (1, 1, 1, 1)),
        ("K3", ReprTag.WILD, None),
    ],
)
def test_classification(name, tag, null):
    rt = classify_type(QUIVERS[name])
    assert rt.tag is tag
    assert rt.null_root == null


@pytest.mark.parametrize("name, count", [("A2", 3), ("A3", 6), ("A4", 10), ("D4", 12)])
def test_finite_root_counts(name, count):
    assert len(enumerate_positive_real_roots(QUIVERS[name])) == count


def test_kronecker_real_roots_bounded():
    roots = enumerate_positive_real_roots(QUIVERS["K"], bound=4)
    assert roots == sorted(roots, key=root_key)
    assert set(roots) == {(a, b) for a in range(5) for b in range(5) if abs(a - b) == 1}


def test_affine_a31_root_count():
    assert len(enumerate_positive_real_roots(QUIVERS["A31"], bound=8)) == 96


def test_reflection_is_involution():
    q = QUIVERS["A3"]
    for v in range(1, 4):
        for x in [(1, 0, 0), (1, 1, 0), (0, 1, 1), (2, 1, 3)]:
            assert reflect(q, reflect(q, x, v), v) == x


@st.composite
def acyclic_quivers(draw):
    """Connected acyclic quivers: a random tree plus extra arrows, all oriented along a random order."""
    n = draw(st.integers(2, 4))
    order = draw(st.permutations(range(1, n + 1)))
    pairs = [(draw(st.integers(0, k - 1)), k) for k in range(1, n)]
    pairs += draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda a: a[0] < a[1]), max_size=2))
    return Quiver(n, tuple((order[i], order[j]) for i, j in pairs))


@settings(max_examples=60, deadline=None)
@given(acyclic_quivers(), st.data())
def test_sink_reflection_preserves_euler_form(q, data):
    sinks = [v for v in range(1, q.n + 1) if q.is_sink(v)]
    v = data.draw(st.sampled_from(sinks))
    vec = st.lists(st.integers(-3, 3), min_size=q.n, max_size=q.n)
    x, y = data.draw(vec), data.draw(vec)
    assert euler_form(q.reflected(v), reflect(q, x, v), reflect(q, y, v)) == euler_form(q, x, y)


@settings(max_examples=60, deadline=None)
@given(acyclic_quivers())
def test_json_round_trip(q):
    assert parse_quiver(q.to_json()) == q


@settings(max_examples=40, deadline=None)
@given(acyclic_quivers())
def test_coxeter_matrix_sends_projectives_to_negative_injectives(q):
    phi = coxeter_transform(q)
    assert np.array_equal(np.asarray(phi).shape, (q.n, q.n))
    for p, i in zip(projective_dims(q), injective_dims(q)):
        assert apply_matrix(phi, p) == tuple(-x for x in i)
