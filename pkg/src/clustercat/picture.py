"""Picture groups, the word-valued functor on morphisms, and its verification sweeps."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .cluster import (
    ClusterTiltingSet,
    ExceptionalObject,
    canonical,
    enumerate_clusters,
    initial_cluster,
    mutate,
)
from .cmc import Category, ClusterMorphism, compose, sigma_table
from .errors import InconsistencyError, UnsupportedError
from .quiver import Root, root_key
from .reps import Algebra
from .wide import WideSubcategory, exceptional_objects_in, relative_projectives

DEFAULT_BUDGET = 100_000

Letter = tuple[Root, int]


@dataclass(frozen=True)
class GroupWord:
    letters: tuple[Letter, ...] = ()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(_reduce(self.letters + other.letters))

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((r, -e) for r, e in reversed(self.letters)))

    def roots(self) -> set[Root]:
        return {r for r, _ in self.letters}

    def delete(self, keep: set[Root]) -> "GroupWord":
        return GroupWord(_reduce(tuple(l for l in self.letters if l[0] in keep)))

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(
            f"x({','.join(map(str, r))})" + ("" if e == 1 else "^-1") for r, e in self.letters
        )

    def to_json(self) -> list:
        return [{"root": list(r), "exponent": e} for r, e in self.letters]


def word(*roots: Sequence[int], exponent: int = 1) -> GroupWord:
    return GroupWord(tuple((tuple(r), exponent) for r in roots))


def _reduce(letters: Sequence) -> tuple:
    out: list = []
    for l in letters:
        if out and out[-1][0] == l[0] and out[-1][1] == -l[1]:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


@dataclass(frozen=True)
class Relation:
    """``x_a x_b = x_b x_{gamma_1} ... x_{gamma_r} x_a``, i.e. ``[x_a, x_b] = x_{gamma_1} ... x_{gamma_r}``."""

    a: Root
    b: Root
    gammas: tuple[Root, ...]

    @property
    def lhs(self) -> GroupWord:
        return word(self.a, self.b)

    @property
    def rhs(self) -> GroupWord:
        return word(self.b, *self.gammas, self.a)

    def restrict(self, keep: set[Root]) -> "Relation":
        return Relation(self.a, self.b, tuple(g for g in self.gammas if g in keep))

    def to_json(self) -> dict:
        return {"lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}


def _ordered_extensions(a: Root, b: Root, members: Iterable[Root]) -> tuple[Root, ...]:
    """Members ``p a + q b`` with ``p, q >= 1``, in increasing order of ``p / q``."""
    basis = linalg.transpose([list(a), list(b)])
    found = []
    for g in members:
        c = linalg.solve(basis, list(g))
        if c is None or any(x.denominator != 1 or x <= 0 for x in c):
            continue
        found.append((c[0] / c[1], root_key(g), g))
    found.sort()
    return tuple(g for _, _, g in found)


def relations(alg: Algebra, w: WideSubcategory) -> list[Relation]:
    """Defining relations of the picture group of ``w``.

    One relation per ordered Hom-orthogonal pair ``(a, b)`` of exceptional
    roots with ``ext(a, b) = 0``; the right side lists the exceptional
    objects of the rank-two subcategory they generate.  Pairs with no
    extension either way give a single commutation relation.
    """
    cache = alg.cache.setdefault("relations", {})
    if w.key in cache:
        return list(cache[w.key])
    members = exceptional_objects_in(alg, w)
    rels = []
    for a, b in itertools.permutations(members, 2):
        if alg.hom(a, b) or alg.hom(b, a) or alg.ext(a, b):
            continue
        if alg.ext(b, a) == 0 and root_key(a) > root_key(b):
            continue  # commuting pair already emitted in the other order
        if alg.ext(b, a) >= 2:
            raise UnsupportedError(f"pair {a}, {b} generates a subcategory with infinitely many exceptional objects")
        rels.append(Relation(a, b, _ordered_extensions(a, b, members)))
    cache[w.key] = rels
    return list(rels)


def validate_relation(rel: Relation, members: Iterable[Root]) -> bool:
    """A relation is well formed when its right side lists exactly the N-combinations of ``a``, ``b``
    among ``members`` in increasing slope order."""
    return rel.gammas == _ordered_extensions(rel.a, rel.b, members)


# -- word problem search -------------------------------------------------------------


class _Rewriter:
    def __init__(self, rels: Sequence[Relation]) -> None:
        self.gens: dict[Root, int] = {}
        rules = []
        for r in rels:
            lhs = self.encode(r.lhs)
            rhs = self.encode(r.rhs)
            for left, right in ((lhs, rhs), (rhs, lhs)):
                rules.append((left, right))
                rules.append((_inv(left), _inv(right)))
        self.by_first: dict[int, list[tuple[tuple, tuple]]] = {}
        for left, right in rules:
            if left:
                self.by_first.setdefault(left[0], []).append((left, right))

    def encode(self, w: GroupWord) -> tuple[int, ...]:
        out = []
        for r, e in w.letters:
            idx = self.gens.setdefault(r, len(self.gens) + 1)
            out.append(idx * e)
        return _free(tuple(out))

    def decode(self, t: tuple[int, ...]) -> GroupWord:
        back = {v: k for k, v in self.gens.items()}
        return GroupWord(tuple((back[abs(x)], 1 if x > 0 else -1) for x in t))

    def neighbours(self, t: tuple[int, ...]):
        n = len(t)
        for i in range(n):
            for left, right in self.by_first.get(t[i], ()):
                k = len(left)
                if t[i : i + k] == left:
                    yield _free(t[:i] + right + t[i + k :])


def _inv(t: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(t))


def _free(t: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for x in t:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class WordComparison:
    equal: bool | None  # True = Equal, None = Unknown
    derivation: tuple[GroupWord, ...] = ()
    states: int = 0

    @property
    def verdict(self) -> str:
        return "Equal" if self.equal else "Unknown"


def word_equal(u: GroupWord, v: GroupWord, rels: Sequence[Relation], budget: int = DEFAULT_BUDGET) -> WordComparison:
    """Bidirectional breadth-first search for a chain of relation rewrites from ``u`` to ``v``.

    Never reports inequality: exhausting the budget gives ``Unknown``.
    """
    rw = _Rewriter(rels)
    a, b = rw.encode(u), rw.encode(v)
    if a == b:
        return WordComparison(True, (rw.decode(a),), 1)
    parents = [{a: None}, {b: None}]
    frontiers = [deque([a]), deque([b])]
    states = 2
    side = 0
    while frontiers[0] or frontiers[1]:
        if not frontiers[side]:
            side ^= 1
        # expand one full layer on the current side
        layer = len(frontiers[side])
        for _ in range(layer):
            cur = frontiers[side].popleft()
            for nxt in rw.neighbours(cur):
                if nxt in parents[side]:
                    continue
                parents[side][nxt] = cur
                states += 1
                if nxt in parents[side ^ 1]:
                    return WordComparison(True, _trace(rw, parents, side, nxt), states)
                if states >= budget:
                    return WordComparison(None, (), states)
                frontiers[side].append(nxt)
        side ^= 1
    return WordComparison(None, (), states)


def _trace(rw: _Rewriter, parents, side: int, meet) -> tuple[GroupWord, ...]:
    def walk(p, node):
        out = []
        while node is not None:
            out.append(node)
            node = p[node]
        return out

    here = walk(parents[side], meet)
    there = walk(parents[side ^ 1], meet)
    path = list(reversed(here)) + there[1:] if side == 0 else list(reversed(there)) + here[1:]
    return tuple(rw.decode(t) for t in path)


# -- the word attached to clusters and morphisms -------------------------------------


@dataclass
class ExchangeGraph:
    wide: WideSubcategory
    clusters: list[ClusterTiltingSet]
    edges: list[tuple[int, int, Root, int]]  # (from, to, wall, sign) for each mutation
    words: dict[tuple[ExceptionalObject, ...], GroupWord] = field(default_factory=dict)

    def index(self) -> dict[tuple[ExceptionalObject, ...], int]:
        return {c.objects: i for i, c in enumerate(self.clusters)}


def exchange_graph(alg: Algebra, w: WideSubcategory) -> ExchangeGraph:
    """Clusters of ``w`` with every mutation, and the canonical word of each cluster.

    The canonical path is the breadth-first tree of green mutations out of
    the cluster of shifted projectives, children ordered by (wall, sign).
    """
    cache = alg.cache.setdefault("exchange", {})
    if w.key in cache:
        return cache[w.key]
    clusters = enumerate_clusters(alg, w)
    idx = {c.objects: i for i, c in enumerate(clusters)}
    edges = []
    out: dict[int, list[tuple[Root, int, int]]] = {i: [] for i in range(len(clusters))}
    for i, c in enumerate(clusters):
        for o in c.objects:
            mu = mutate(alg, c, o)
            j = idx.get(mu.cluster.objects)
            if j is None:
                raise InconsistencyError("mutation left the enumerated clusters")
            edges.append((i, j, mu.wall, mu.sign))
            out[i].append((mu.wall, mu.sign, j))
    start = idx[initial_cluster(alg, w).objects]
    words = {clusters[start].objects: GroupWord()}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for wall, sign, j in sorted(out[i], key=lambda t: (root_key(t[0]), -t[1])):
            if sign != 1 or clusters[j].objects in words:
                continue
            words[clusters[j].objects] = words[clusters[i].objects] * word(wall)
            queue.append(j)
    if len(words) != len(clusters):
        raise InconsistencyError("some clusters are not reachable by green mutations")
    graph = ExchangeGraph(w, clusters, edges, words)
    cache[w.key] = graph
    return graph


def gamma_bar(alg: Algebra, t: ClusterTiltingSet) -> GroupWord:
    graph = exchange_graph(alg, t.wide)
    key = canonical(t.objects)
    if key not in graph.words:
        raise InconsistencyError("cluster not found in the exchange graph")
    return graph.words[key]


def completion(alg: Algebra, f: ClusterMorphism) -> ClusterTiltingSet:
    """``f.cluster`` together with the sigma-images of the shifted projectives of the target."""
    table = sigma_table(alg, f.source, f.cluster)
    extra = [table[ExceptionalObject(p, True)] for p in relative_projectives(alg, f.target)]
    return ClusterTiltingSet(f.source, canonical(list(f.cluster) + extra))


def gamma_of_morphism(alg: Algebra, f: ClusterMorphism) -> GroupWord:
    return gamma_bar(alg, completion(alg, f))


# -- verification sweeps -------------------------------------------------------------


@dataclass
class SweepReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    unknown: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.unknown

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "failures": list(self.failures),
            "unknown": list(self.unknown),
        }


def verify_polygon_relations(alg: Algebra, w: WideSubcategory, budget: int = DEFAULT_BUDGET) -> SweepReport:
    """Both ways around every exchange polygon give equal words."""
    graph = exchange_graph(alg, w)
    rels = relations(alg, w)
    rep = SweepReport()
    faces: dict[tuple, list[int]] = {}
    for i, c in enumerate(graph.clusters):
        for pair in itertools.combinations(c.objects, 2):
            face = tuple(o for o in c.objects if o not in pair)
            faces.setdefault(face, []).append(i)
    shapes: dict[int, int] = {}
    for face, members in sorted(faces.items(), key=lambda kv: [o.sort_key() for o in kv[0]]):
        mset = set(members)
        green = {}
        for i, j, wall, sign in graph.edges:
            if i in mset and j in mset and sign == 1:
                green.setdefault(i, []).append((j, wall))
        indeg = {i: 0 for i in members}
        for i, outs in green.items():
            for j, _ in outs:
                indeg[j] += 1
        sources = [i for i in members if indeg[i] == 0]
        sinks = [i for i in members if not green.get(i)]
        tag = "{" + ", ".join(map(str, face)) + "}"
        if len(sources) != 1 or len(sinks) != 1 or len(green.get(sources[0], [])) != 2:
            rep.failures.append(f"face {tag}: polygon is not a two-path orientation")
            continue
        paths = []
        for j, wall in sorted(green[sources[0]], key=lambda t: root_key(t[1])):
            wd = word(wall)
            cur = j
            while cur != sinks[0]:
                (nxt, wl), = green[cur]
                wd = wd * word(wl)
                cur = nxt
            paths.append(wd)
        shapes[len(members)] = shapes.get(len(members), 0) + 1
        rep.checked += 1
        res = word_equal(paths[0], paths[1], rels, budget)
        if not res.equal:
            rep.unknown.append(f"face {tag}: {paths[0]} vs {paths[1]}")
    rep.details["polygon_sizes"] = dict(sorted(shapes.items()))
    return rep


def _components(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(n)]


@dataclass
class RetractionCertificate:
    wide: WideSubcategory
    roots: list[Root]
    certified: bool
    clusters: int
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "clusters": self.clusters,
            "roots": [list(r) for r in self.roots],
            "failures": list(self.failures),
        }


def verify_retraction_chain(alg: Algebra, w: WideSubcategory, budget: int = DEFAULT_BUDGET) -> RetractionCertificate:
    """Inductive distinctness certificate for the words of all clusters of ``w``.

    Roots are added one at a time in canonical order.  At stage ``k`` the
    clusters are grouped by the walls among the first ``k`` roots, words are
    read with every other letter deleted, and the checks are: deleting the
    new generator maps relations to consequences of the old ones, words in a
    group agree, and each group splits in at most two whose words differ by
    the new generator.
    """
    cache = alg.cache.setdefault("retraction", {})
    if (w.key, budget) in cache:
        return cache[(w.key, budget)]
    graph = exchange_graph(alg, w)
    roots = sorted(exceptional_objects_in(alg, w), key=root_key)
    all_rels = relations(alg, w)
    n = len(graph.clusters)
    words = [graph.words[c.objects] for c in graph.clusters]
    failures: list[str] = []
    prev_comp = [0] * n
    for k in range(len(roots) + 1):
        keep = set(roots[:k])
        rels_k = [r.restrict(keep) for r in all_rels if r.a in keep and r.b in keep]
        if k > 0:
            new = roots[k - 1]
            old = keep - {new}
            rels_old = [r.restrict(old) for r in all_rels if r.a in old and r.b in old]
            for r in rels_k:
                lhs, rhs = r.lhs.delete(old), r.rhs.delete(old)
                if not word_equal(lhs, rhs, rels_old, budget).equal:
                    failures.append(f"stage {k}: deleting {new} does not map {r.lhs} = {r.rhs} to a consequence")
        comp = _components(n, [(i, j) for i, j, wall, _ in graph.edges if wall not in keep])
        deleted = [wd.delete(keep) for wd in words]
        classes: dict[int, list[int]] = {}
        for i, c in enumerate(comp):
            classes.setdefault(c, []).append(i)
        for members in classes.values():
            rep = deleted[members[0]]
            for i in members[1:]:
                if deleted[i] != rep and not word_equal(deleted[i], rep, rels_k, budget).equal:
                    failures.append(f"stage {k}: words in one class are not shown equal")
        if k > 0:
            new = roots[k - 1]
            split: dict[int, set[int]] = {}
            for i in range(n):
                split.setdefault(prev_comp[i], set()).add(comp[i])
            for parent, kids in split.items():
                if len(kids) > 2:
                    failures.append(f"stage {k}: a class splits into {len(kids)} pieces")
                elif len(kids) == 2:
                    crossing = [
                        (i, j)
                        for i, j, wall, sign in graph.edges
                        if wall == new and sign == 1 and prev_comp[i] == parent
                    ]
                    if not crossing:
                        failures.append(f"stage {k}: split without a green crossing of {new}")
                        continue
                    i, j = crossing[0]
                    target = deleted[i] * word(new)
                    if deleted[j] != target and not word_equal(deleted[j], target, rels_k, budget).equal:
                        failures.append(f"stage {k}: sides of {new} do not differ by its generator")
        prev_comp = comp
    if len(set(prev_comp)) != n:
        failures.append("final stage does not separate all clusters")
    cert = RetractionCertificate(w, roots, not failures, n, failures)
    cache[(w.key, budget)] = cert
    return cert


def verify_functoriality(alg: Algebra, cat: Category, budget: int = DEFAULT_BUDGET) -> SweepReport:
    """``gamma(g o f) = gamma(f) gamma(g)`` for every composable pair, letterwise embedding."""
    rep = SweepReport()
    literal = 0
    for w in cat.objects:
        rels = relations(alg, w)
        for f in cat.out_of(w):
            gf_word = gamma_of_morphism(alg, f)
            for g in cat.out_of(f.target):
                rep.checked += 1
                lhs = gamma_of_morphism(alg, compose(alg, f, g))
                rhs = gf_word * gamma_of_morphism(alg, g)
                if lhs == rhs:
                    literal += 1
                    continue
                res = word_equal(lhs, rhs, rels, budget)
                if not res.equal:
                    rep.unknown.append(f"{[str(o) for o in f.cluster]} then {[str(o) for o in g.cluster]}: {lhs} vs {rhs}")
    rep.details["literal"] = literal
    return rep


def faithfulness_check(alg: Algebra, cat: Category, budget: int = DEFAULT_BUDGET) -> SweepReport:
    """Distinct parallel morphisms have distinct words.

    Two distinct morphisms ``W -> W'`` have distinct completed clusters, and
    the retraction certificate of ``W`` makes the words of distinct clusters
    distinct.  Without a certificate the pair is reported Unknown.
    """
    rep = SweepReport()
    pairs = 0
    for w in cat.objects:
        outs = cat.out_of(w)
        by_target: dict[tuple, list[ClusterMorphism]] = {}
        for f in outs:
            by_target.setdefault(f.target.key, []).append(f)
        groups = [g for g in by_target.values() if len(g) > 1]
        if not groups:
            continue
        cert = verify_retraction_chain(alg, w, budget)
        for group in groups:
            completions = [completion(alg, f).objects for f in group]
            for a, b in itertools.combinations(range(len(group)), 2):
                pairs += 1
                rep.checked += 1
                tag = f"{[str(o) for o in group[a].cluster]} vs {[str(o) for o in group[b].cluster]}"
                if completions[a] == completions[b]:
                    rep.failures.append(f"{tag}: same completed cluster")
                elif not cert.certified:
                    rep.unknown.append(f"{tag}: no distinctness certificate")
    rep.details["pairs"] = pairs
    return rep
