from __future__ import annotations

import pytest

from clustercat.cmc import build_category
from clustercat.verdict import (
    Status,
    check_condition_one,
    check_condition_two,
    realize_last_factors,
    verdict,
    verify_witness,
)

from conftest import algebra

A31_WITNESS = ((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1))


@pytest.mark.parametrize(
    "name, status, scope",
    [
        ("A2", Status.CAT0, "full"),
        ("A3", Status.CAT0, "full"),
        ("K", Status.CAT0, "truncated-slice"),
        ("A31", Status.NOT_CAT0, "full"),
        ("K3", Status.UNSUPPORTED, "none"),
    ],
)
def test_verdicts(name, status, scope):
    v = verdict(algebra(name))
    assert v.status is status
    assert v.scope == scope
    assert v.exit_code == {"CAT0": 0, "NotCAT0": 1, "Unsupported": 2}[status.value]


def test_a31_witness_and_json():
    v = verdict(algebra("A31"))
    assert v.witness == A31_WITNESS
    assert v.to_json()["witness"] == [list(r) for r in A31_WITNESS]


def test_witness_reverification():
    check = verify_witness(algebra("A31"), A31_WITNESS)
    assert check["ok"]
    assert all(p["hom_orthogonal"] and p["exceptional_pair"] for p in check["pairwise"])
    assert check["arrangement"] == "fails"
    assert len(check["cycle"]) == 3


def test_witness_is_not_realizable_as_last_factors():
    res = realize_last_factors(algebra("A31"), list(A31_WITNESS))
    assert not res["ok"]


def test_conditions_in_a3():
    alg = algebra("A3")
    cat = build_category(alg)
    one = check_condition_one(alg, cat)
    two = check_condition_two(alg, cat)
    assert one.ok and one.checked > 0
    assert two.ok and two.checked > 0
    assert two.details["outside_slice"] == 0


def test_realizing_a_cluster_of_last_factors():
    alg = algebra("A3")
    res = realize_last_factors(alg, [(1, 0, 0), (0, 0, 1)])
    assert res["ok"]
