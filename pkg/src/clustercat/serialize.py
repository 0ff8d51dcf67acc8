"""JSON and DOT encodings of categories, exchange graphs, cubes and verdicts."""

from __future__ import annotations

import json
import re
from typing import Sequence

from .cluster import ExceptionalObject, canonical, obj
from .cmc import Category, ClusterMorphism, factorizations, morphism
from .errors import InconsistencyError, QuiverError
from .picture import ExchangeGraph
from .quiver import Quiver, Root, injective_dims, projective_dims, root_key
from .reps import Algebra
from .wide import WideSubcategory, make_wide


def dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def root_str(r: Sequence[int]) -> str:
    return "(" + ",".join(map(str, r)) + ")"


def object_str(o: ExceptionalObject) -> str:
    return root_str(o.root) + ("[1]" if o.shifted else "")


def wide_str(w: WideSubcategory) -> str:
    return "{" + " ".join(root_str(s) for s in w.simples) + "}"


# -- names on input --------------------------------------------------------------------


def aliases(q: Quiver) -> dict[str, Root]:
    """``S_i``, ``P_i`` and ``I_i`` names for the simple, projective and injective modules."""
    names: dict[str, Root] = {}
    for i, p in enumerate(projective_dims(q)):
        names[f"P{i + 1}"] = p
    for i, inj in enumerate(injective_dims(q)):
        names[f"I{i + 1}"] = inj
    for i in range(q.n):
        names[f"S{i + 1}"] = tuple(int(i == j) for j in range(q.n))
    return names


_TUPLE = re.compile(r"^\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)?$")


def parse_object(text: str, q: Quiver) -> ExceptionalObject:
    """``S1``, ``P2[1]``, ``(1,1,0)`` or ``1,1,0[1]``."""
    t = text.strip()
    shifted = t.endswith("[1]")
    if shifted:
        t = t[:-3].strip()
    names = aliases(q)
    if t in names:
        return obj(names[t], shifted)
    m = _TUPLE.match(t)
    if not m:
        raise QuiverError(f"cannot read object {text!r}")
    vec = tuple(int(x) for x in m.group(1).split(","))
    if len(vec) != q.n or min(vec) < 0:
        raise QuiverError(f"{text!r} is not a dimension vector of length {q.n}")
    return obj(vec, shifted)


def parse_objects(text: str, q: Quiver) -> list[ExceptionalObject]:
    """Objects separated by ``;`` or by commas between names."""
    text = text.strip()
    if not text:
        return []
    parts = [p for p in re.split(r";|,(?![^()]*\))(?=\s*[A-Za-z(])", text) if p.strip()]
    return [parse_object(p, q) for p in parts]


# -- category --------------------------------------------------------------------------


def category_to_json(cat: Category) -> dict:
    return {
        "truncated": cat.truncated,
        "objects": [[list(s) for s in w.simples] for w in cat.objects],
        "morphisms": [
            {
                "source": [list(s) for s in f.source.simples],
                "cluster": [o.to_json() for o in f.cluster],
                "target": [list(s) for s in f.target.simples],
            }
            for f in cat.all_morphisms()
        ],
    }


def category_from_json(alg: Algebra, data: dict) -> Category:
    """Rebuild a category; targets are recomputed and must match the stored ones."""
    try:
        objects = [make_wide(o) for o in data["objects"]]
        morphisms: dict[tuple, list[ClusterMorphism]] = {}
        for m in data["morphisms"]:
            src = make_wide(m["source"])
            objs = [obj(o["root"], o["shifted"]) for o in m["cluster"]]
            f = morphism(alg, src, objs)
            if f.target != make_wide(m["target"]):
                raise InconsistencyError("stored target differs from the derived one")
            morphisms.setdefault(src.key, []).append(f)
    except (KeyError, TypeError) as exc:
        raise QuiverError(f"malformed category JSON: {exc}") from None
    return Category(objects, morphisms, bool(data.get("truncated", False)))


def _node_ids(items) -> dict:
    return {item: f"n{i}" for i, item in enumerate(items)}


def category_to_dot(cat: Category) -> str:
    ids = _node_ids(w.key for w in cat.objects)
    lines = ["digraph category {"]
    for w in cat.objects:
        lines.append(f'  {ids[w.key]} [label="{wide_str(w)}"];')
    for f in cat.all_morphisms():
        if f.rank == 0:
            continue
        label = " ".join(object_str(o) for o in f.cluster)
        lines.append(f'  {ids[f.source.key]} -> {ids[f.target.key]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- exchange graph --------------------------------------------------------------------


def exchange_graph_to_json(graph: ExchangeGraph) -> dict:
    return {
        "subcategory": [list(s) for s in graph.wide.simples],
        "clusters": [
            {"objects": [o.to_json() for o in c.objects], "word": graph.words[c.objects].to_json()}
            for c in graph.clusters
        ],
        "edges": [
            {"from": i, "to": j, "wall": list(wall), "sign": sign}
            for i, j, wall, sign in graph.edges
            if sign == 1
        ],
    }


def exchange_graph_to_dot(graph: ExchangeGraph) -> str:
    """Undirected mutations drawn once, oriented along the green direction."""
    lines = ["digraph exchange {"]
    for i, c in enumerate(graph.clusters):
        label = " ".join(object_str(o) for o in c.objects)
        lines.append(f'  n{i} [label="{label}"];')
    for i, j, wall, sign in graph.edges:
        if sign == 1:
            lines.append(f'  n{i} -> n{j} [label="{root_str(wall)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- factorization cube ----------------------------------------------------------------


def cube_to_json(alg: Algebra, f: ClusterMorphism) -> dict:
    facs = factorizations(alg, f)
    return {
        "morphism": f.to_json(),
        "vertices": [
            {
                "subset": [o.to_json() for o in fac.subset],
                "middle": [list(s) for s in fac.middle.simples],
                "second": [o.to_json() for o in fac.second.cluster],
            }
            for fac in facs
        ],
    }


def cube_to_dot(alg: Algebra, f: ClusterMorphism) -> str:
    facs = factorizations(alg, f)
    lines = ["digraph cube {"]
    for i, fac in enumerate(facs):
        label = wide_str(fac.middle)
        lines.append(f'  n{i} [label="{label}"];')
    for i, a in enumerate(facs):
        for j, b in enumerate(facs):
            if set(a.subset) < set(b.subset) and len(b.subset) == len(a.subset) + 1:
                (extra,) = [o for o in b.subset if o not in a.subset]
                lines.append(f'  n{i} -> n{j} [label="{object_str(extra)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cluster_line(objs: Sequence[ExceptionalObject]) -> str:
    return " ".join(object_str(o) for o in canonical(objs))


def roots_sorted(roots) -> list[Root]:
    return sorted(roots, key=root_key)
