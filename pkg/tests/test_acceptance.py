"""Acceptance battery: one pass/fail line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from clustercat.cluster import (  # noqa: E402
    c_vectors,
    c_vectors_by_mutation,
    cluster_objects,
    condition_star_check,
    enumerate_clusters,
    obj,
    speyer_thomas_check,
)
from clustercat.cmc import (  # noqa: E402
    build_category,
    compose,
    factorization_chains,
    factorizations,
    morphism,
    sigma,
    verify_cubical_axioms,
)
from clustercat.picture import (  # noqa: E402
    faithfulness_check,
    gamma_of_morphism,
    verify_functoriality,
    verify_polygon_relations,
    verify_retraction_chain,
    word,
)
from clustercat.quiver import Quiver  # noqa: E402
from clustercat.reps import Algebra  # noqa: E402
from clustercat.verdict import Status, verdict, verify_witness  # noqa: E402
from clustercat.wide import make_wide, whole_category  # noqa: E402

from conftest import QUIVER_DIR, QUIVERS  # noqa: E402


RESULTS: dict[int, tuple[bool, str]] = {}

S1, S2, S3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
P2, P3 = (1, 1, 0), (1, 1, 1)
A31_WITNESS = ((0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 0, 1))


def fresh(name: str, bound: int = 8) -> Algebra:
    return Algebra(QUIVERS[name], bound=bound)


def record(number: int, ok: bool, note: str) -> None:
    RESULTS[number] = (ok, note)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {note}")
    assert ok, note


def test_criterion_1_golden_a3():
    alg = fresh("A3")
    w = whole_category(alg)
    s = [obj(P2)]
    table = {obj(S1): obj(S1), obj(S3): obj(P3), obj(S1, True): obj(S2), obj(S3, True): obj(P3, True)}
    sig = all(sigma(alg, w, s, t) == u for t, u in table.items())
    f = morphism(alg, w, s)
    g = morphism(alg, f.target, [obj(S3)])
    fg = morphism(alg, w, [obj(P2), obj(P3)])
    checks = {
        "sigma": sig,
        "gamma(P2)": gamma_of_morphism(alg, f) == word(S2, P2),
        "gamma_W(S3)": gamma_of_morphism(alg, g) == word(S3),
        "gamma(P2,P3)": gamma_of_morphism(alg, fg) == word(S2, P2, S3),
        "composition": compose(alg, f, g) == fg and fg.target == make_wide([S1]),
    }
    record(1, all(checks.values()), " ".join(f"{k}={'ok' if v else 'bad'}" for k, v in checks.items()))


def test_criterion_2_cubical():
    t0 = time.perf_counter()
    notes, ok = [], True
    for name in ("A2", "A3", "A4", "D4"):
        alg = fresh(name)
        cat = build_category(alg)
        rep = verify_cubical_axioms(alg, cat)
        shape = all(
            len(factorizations(alg, f)) == 2**f.rank and len(set(factorization_chains(alg, f))) == math.factorial(f.rank)
            for f in cat.all_morphisms()
        )
        ok &= rep.ok and shape
        notes.append(f"{name}:{len(rep.violations)}v")
    dt = time.perf_counter() - t0
    record(2, ok and dt < 30, f"{' '.join(notes)} {dt:.1f}s")


def test_criterion_3_hom_ext_euler():
    bad, pairs = 0, 0
    for name in ("A3", "A31"):
        alg = fresh(name, 8)
        roots = alg.exceptional_roots()
        for a, b in itertools.product(roots, repeat=2):
            h, e = alg.hom_ext(a, b)
            pairs += 1
            bad += h - e != alg.euler(a, b)
    record(3, bad == 0, f"{pairs} ordered pairs, {bad} mismatches")


def test_criterion_4_cluster_counts():
    notes, ok = [], True
    for name, want in (("A2", 5), ("A3", 14), ("A4", 42)):
        alg = fresh(name)
        w = whole_category(alg)
        order = list(cluster_objects(alg, w))
        random.Random(2024).shuffle(order)
        a = [c.objects for c in enumerate_clusters(alg, w)]
        b = [c.objects for c in enumerate_clusters(alg, w, order=list(reversed(order)))]
        ok &= len(a) == want and a == b
        notes.append(f"{name}={len(a)}")
    record(4, ok, " ".join(notes))


def test_criterion_5_speyer_thomas():
    alg = fresh("A3")
    w = whole_category(alg)
    clusters = enumerate_clusters(alg, w)
    tracked = c_vectors_by_mutation(alg, w)
    agree = all(tracked[t.objects] == c_vectors(alg, t) for t in clusters)
    accepted_each = all(speyer_thomas_check(alg, c_vectors(alg, t)).ok for t in clusters)
    owners: dict[frozenset, int] = {}
    for t in clusters:
        key = frozenset(c_vectors(alg, t))
        owners[key] = owners.get(key, 0) + 1
    roots = alg.exceptional_roots()
    signed = list(roots) + [tuple(-x for x in r) for r in roots]
    accepted = {frozenset(s) for s in itertools.combinations(signed, 3) if speyer_thomas_check(alg, s).ok}
    unique = accepted == set(owners) and all(v == 1 for v in owners.values())
    record(5, agree and accepted_each and unique and len(clusters) == 14,
           f"clusters={len(clusters)} agree={agree} accepted={accepted_each} unique={unique} st_sets={len(accepted)}")


def test_criterion_6_condition_star():
    t0 = time.perf_counter()
    passing = {name: condition_star_check(fresh(name, 6 if name == "K" else 8)).ok for name in ("A2", "A3", "A4", "D4", "K", "A22")}
    alg = fresh("A31")
    res = condition_star_check(alg)
    wit_ok = res.witness is not None and set(res.witness) == set(A31_WITNESS)
    check = verify_witness(alg, tuple(sorted(A31_WITNESS))) if wit_ok else {"ok": False}
    cyc = res.cycle is not None and len(res.cycle) == 3
    dt = time.perf_counter() - t0
    ok = all(passing.values()) and not res.ok and wit_ok and check["ok"] and cyc and dt < 60
    record(6, ok, f"pass={sorted(k for k, v in passing.items() if v)} A31 fails={not res.ok} witness={wit_ok} 3-cycle={cyc} {dt:.1f}s")


def test_criterion_7_picture_group():
    t0 = time.perf_counter()
    notes, ok = [], True
    for name, count in (("A2", 5), ("A3", 14)):
        alg = fresh(name)
        w = whole_category(alg)
        cat = build_category(alg)
        poly = verify_polygon_relations(alg, w)
        func = verify_functoriality(alg, cat, 10**5)
        cert = verify_retraction_chain(alg, w, 10**5)
        faith = faithfulness_check(alg, cat, 10**5)
        good = poly.ok and func.ok and not func.unknown and cert.certified and cert.clusters == count and faith.ok
        ok &= good
        notes.append(f"{name}:poly={poly.ok} func={func.checked} cert={cert.clusters} faithful={faith.ok}")
    dt = time.perf_counter() - t0
    record(7, ok and dt < 300, f"{' '.join(notes)} {dt:.1f}s")


def test_criterion_8_verdicts():
    expected = {
        "A2": (Status.CAT0, "full", 0),
        "A3": (Status.CAT0, "full", 0),
        "A4": (Status.CAT0, "full", 0),
        "D4": (Status.CAT0, "full", 0),
        "K": (Status.CAT0, "truncated-slice", 0),
        "A22": (Status.CAT0, "truncated-slice", 0),
        "A31": (Status.NOT_CAT0, "full", 1),
        "K3": (Status.UNSUPPORTED, "none", 2),
    }
    got, ok = [], True
    for name, want in expected.items():
        v = verdict(fresh(name, 6 if name == "K" else 8))
        ok &= (v.status, v.scope, v.exit_code) == want
        if name == "A31":
            ok &= v.witness is not None and set(v.witness) == set(A31_WITNESS)
        got.append(f"{name}={v.status.value}")
    record(8, ok, " ".join(got))


def _cli(*args: str, numba: str = "1") -> tuple[int, bytes]:
    env = dict(os.environ, CLUSTERCAT_NUMBA=numba, PYTHONHASHSEED="random")
    proc = subprocess.run([sys.executable, "-m", "clustercat.cli", *args], capture_output=True, env=env, check=False)
    return proc.returncode, proc.stdout


def test_criterion_9_determinism():
    runs = [
        ("check-cat0", str(QUIVER_DIR / "affine_a31.json")),
        ("check-cat0", str(QUIVER_DIR / "a3.json")),
        ("category", str(QUIVER_DIR / "a3.json")),
        ("export", str(QUIVER_DIR / "a2.json"), "--what", "exchange-graph", "--format", "dot"),
        ("picture-group", str(QUIVER_DIR / "a3.json")),
    ]
    same = 0
    for args in runs:
        a = _cli(*args)
        b = _cli(*args)
        c = _cli(*args, numba="0")
        same += a == b == c and bool(a[1])
    record(9, same == len(runs), f"{same}/{len(runs)} commands byte-identical across runs and kernel paths")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failures += 1
        except Exception as exc:  # report and keep going
            failures += 1
            print(f"{name}: ERROR {type(exc).__name__}: {exc}")
    sys.exit(1 if failures else 0)

