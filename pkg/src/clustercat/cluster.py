"""Cluster-tilting sets in a wide subcategory, mutation, c-vectors and arrangement checks."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .errors import InconsistencyError, QuiverError, UnsupportedError
from .quiver import Root, root_key
from .reps import Algebra
from .wide import (
    WideSubcategory,
    coordinates,
    euler_matrix_of,
    exceptional_objects_in,
    from_coordinates,
    is_finite_type,
    perpendicular,
    relative_projectives,
)


@dataclass(frozen=True)
class ExceptionalObject:
    root: Root
    shifted: bool = False

    @property
    def signed(self) -> Root:
        return tuple(-x for x in self.root) if self.shifted else self.root

    def sort_key(self) -> tuple:
        return (self.shifted, root_key(self.root))

    def __lt__(self, other: "ExceptionalObject") -> bool:
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        return {"root": list(self.root), "shifted": self.shifted}

    def __str__(self) -> str:
        return f"{list(self.root)}{'[1]' if self.shifted else ''}"


def obj(root: Sequence[int], shifted: bool = False) -> ExceptionalObject:
    return ExceptionalObject(tuple(int(x) for x in root), bool(shifted))


def from_signed(vec: Sequence[int]) -> ExceptionalObject:
    """Object with the given signed dimension vector (all entries one sign)."""
    if all(x >= 0 for x in vec):
        return obj(vec)
    if all(x <= 0 for x in vec):
        return obj([-x for x in vec], True)
    raise QuiverError(f"{tuple(vec)} has mixed signs")


def canonical(objs: Iterable[ExceptionalObject]) -> tuple[ExceptionalObject, ...]:
    return tuple(sorted(set(objs), key=ExceptionalObject.sort_key))


@dataclass(frozen=True)
class ClusterTiltingSet:
    wide: WideSubcategory
    objects: tuple[ExceptionalObject, ...]

    @property
    def complete(self) -> bool:
        return len(self.objects) == self.wide.rank

    def to_json(self) -> dict:
        return {"objects": [o.to_json() for o in self.objects]}


def cluster_objects(alg: Algebra, w: WideSubcategory) -> list[ExceptionalObject]:
    """``C_W``: exceptional objects of ``w`` followed by its shifted projectives."""
    cache = alg.cache.setdefault("cw", {})
    hit = cache.get(w.key)
    if hit is None:
        hit = [obj(r) for r in exceptional_objects_in(alg, w)]
        hit += [obj(p, True) for p in sorted(relative_projectives(alg, w), key=root_key)]
        cache[w.key] = hit
    return list(hit)


def compatible(alg: Algebra, x: ExceptionalObject, y: ExceptionalObject) -> bool:
    if x.shifted and y.shifted:
        return True
    if x.shifted:
        x, y = y, x
    if y.shifted:
        return alg.hom(y.root, x.root) == 0
    return alg.ext(x.root, y.root) == 0 and alg.ext(y.root, x.root) == 0


def is_partial_cluster(alg: Algebra, objs: Sequence[ExceptionalObject]) -> bool:
    if len({o.root for o in objs}) != len(objs):
        return False
    return all(compatible(alg, a, b) for a, b in itertools.combinations(objs, 2))


def _require_finite(alg: Algebra, w: WideSubcategory) -> None:
    alg.require_supported()
    if not is_finite_type(alg, w):
        raise UnsupportedError(
            "the subcategory has infinitely many exceptional objects; explore it with bounded mutation instead"
        )


def enumerate_clusters(
    alg: Algebra, w: WideSubcategory, order: Sequence[ExceptionalObject] | None = None, size: int | None = None
) -> list[ClusterTiltingSet]:
    """All cluster-tilting sets of ``w`` of the given size (default: complete) by backtracking.

    ``order`` permutes the candidate list; the result is canonically sorted
    either way so runs with different orders can be compared.
    """
    _require_finite(alg, w)
    cands = list(order) if order is not None else cluster_objects(alg, w)
    target = w.rank if size is None else size
    m = len(cands)
    ok = [[compatible(alg, cands[i], cands[j]) and cands[i].root != cands[j].root for j in range(m)] for i in range(m)]
    found: list[tuple[ExceptionalObject, ...]] = []

    def extend(chosen: list[int], start: int) -> None:
        if len(chosen) == target:
            found.append(canonical(cands[i] for i in chosen))
            return
        for j in range(start, m):
            if all(ok[i][j] for i in chosen):
                chosen.append(j)
                extend(chosen, j + 1)
                chosen.pop()

    extend([], 0)
    found.sort(key=lambda c: [o.sort_key() for o in c])
    return [ClusterTiltingSet(w, c) for c in found]


def completions(alg: Algebra, w: WideSubcategory, partial: Sequence[ExceptionalObject]) -> list[ExceptionalObject]:
    """Objects of ``C_W`` that can be added to ``partial`` keeping it a partial cluster."""
    roots = {o.root for o in partial}
    return [
        c
        for c in cluster_objects(alg, w)
        if c.root not in roots and all(compatible(alg, c, o) for o in partial)
    ]


@dataclass(frozen=True)
class Mutation:
    cluster: ClusterTiltingSet
    removed: ExceptionalObject
    added: ExceptionalObject
    wall: Root
    sign: int


def mutate(alg: Algebra, t: ClusterTiltingSet, k: int | ExceptionalObject) -> Mutation:
    """Exchange one object of a complete cluster for the unique other completion."""
    if not t.complete:
        raise QuiverError("mutation needs a complete cluster")
    old = t.objects[k] if isinstance(k, int) else k
    if old not in t.objects:
        raise QuiverError(f"{old} is not in the cluster")
    rest = [o for o in t.objects if o != old]
    cands = [c for c in completions(alg, t.wide, rest) if c != old]
    if len(cands) != 1:
        raise InconsistencyError(f"expected a unique exchange partner for {old}, found {len(cands)}")
    new = cands[0]
    line = perpendicular(alg, t.wide, [o.root for o in rest])
    if line.rank != 1:
        raise InconsistencyError("perpendicular of an almost complete cluster is not rank one")
    beta = line.simples[0]
    sign = 1 if not new.shifted and alg.hom(new.root, beta) != 0 else -1
    return Mutation(ClusterTiltingSet(t.wide, canonical(rest + [new])), old, new, beta, sign)


def initial_cluster(alg: Algebra, w: WideSubcategory) -> ClusterTiltingSet:
    """The cluster of shifted relative projectives."""
    return ClusterTiltingSet(w, canonical(obj(p, True) for p in relative_projectives(alg, w)))


def last_factor_vectors(alg: Algebra, w: WideSubcategory, objs: Sequence[ExceptionalObject]) -> list[Root]:
    """Signed vectors ``x_j`` in the span of ``w`` with ``<R_i, x_j> = delta_ij``.

    Works in the coordinates of the relative simples: with ``R = A S`` and
    ``x = B S`` the conditions read ``A E_W B^T = I``.
    """
    if len(objs) != w.rank:
        raise QuiverError("need rank(W) objects")
    if w.rank == 0:
        return []
    a = []
    for o in objs:
        c = coordinates(w, o.signed)
        if c is None:
            raise QuiverError(f"{o} is not in the subcategory")
        a.append(c)
    e = euler_matrix_of(alg, w)
    try:
        bt = linalg.matmul(linalg.inverse(e), linalg.inverse(a))
    except ZeroDivisionError:
        raise QuiverError("singular system: the objects do not form a cluster") from None
    return [from_coordinates(w, [bt[i][j] for i in range(w.rank)]) for j in range(w.rank)]


def c_vectors(alg: Algebra, t: ClusterTiltingSet) -> list[Root]:
    """c-vectors of a complete cluster, aligned with ``t.objects``.

    These are the negatives of the last-factor vectors, so the cluster of
    shifted projectives has c-vectors ``+dim S_j``.
    """
    return [tuple(-v for v in x) for x in last_factor_vectors(alg, t.wide, list(t.objects))]


def exchange_matrix(alg: Algebra, w: WideSubcategory) -> list[list[int]]:
    """Skew-symmetric ``b_ij = ext(s_i, s_j) - ext(s_j, s_i)`` on the relative simples."""
    s = w.simples
    return [[alg.ext(a, b) - alg.ext(b, a) for b in s] for a in s]


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def c_vectors_by_mutation(alg: Algebra, w: WideSubcategory) -> dict[tuple[ExceptionalObject, ...], list[Root]]:
    """c-vectors of every cluster of ``w`` by tracking the c-matrix along mutations.

    Matrix mutation of the extended exchange matrix starts from ``C = I`` at
    the cluster of shifted projectives.  Returns vectors aligned with the
    canonical object order of each cluster.
    """
    _require_finite(alg, w)
    r = w.rank
    start = initial_cluster(alg, w)
    projs = relative_projectives(alg, w)
    # slot j of the seed holds P_j[1]; c-vector columns in simple coordinates
    slots = [obj(p, True) for p in projs]
    b0 = exchange_matrix(alg, w)
    cmat0 = [[int(i == j) for j in range(r)] for i in range(r)]
    out: dict[tuple[ExceptionalObject, ...], list[Root]] = {}
    queue = deque([(slots, b0, cmat0)])
    seen = {start.objects}

    def record(slots, cmat):
        t = canonical(slots)
        vecs = {s: from_coordinates(w, [cmat[i][j] for i in range(r)]) for j, s in enumerate(slots)}
        out[t] = [vecs[o] for o in t]

    record(slots, cmat0)
    while queue:
        slots, b, cmat = queue.popleft()
        t = ClusterTiltingSet(w, canonical(slots))
        for k in range(r):
            mu = mutate(alg, t, slots[k])
            nslots = list(slots)
            nslots[k] = mu.added
            nb = [
                [
                    -b[i][j] if k in (i, j) else b[i][j] + _sgn(b[i][k]) * max(b[i][k] * b[k][j], 0)
                    for j in range(r)
                ]
                for i in range(r)
            ]
            nc = [
                [
                    -cmat[i][j] if j == k else cmat[i][j] + _sgn(cmat[i][k]) * max(cmat[i][k] * b[k][j], 0)
                    for j in range(r)
                ]
                for i in range(r)
            ]
            key = canonical(nslots)
            if key in seen:
                continue
            seen.add(key)
            record(nslots, nc)
            queue.append((nslots, nb, nc))
    return out


@dataclass(frozen=True)
class Arrangement:
    order: tuple[Root, ...] | None
    cycle: tuple[Root, ...] | None = None
    bad_pair: tuple[Root, Root] | None = None

    @property
    def ok(self) -> bool:
        return self.order is not None


def arrange_exceptional_sequence(alg: Algebra, modules: Sequence[Root]) -> Arrangement:
    """Order ``modules`` into an exceptional sequence, or certify that none exists.

    Edge ``a -> b`` when ``(a, b)`` is an exceptional pair and ``(b, a)`` is
    not; an order exists iff this digraph is acyclic.  Ties are broken by the
    canonical root order.
    """
    mods = sorted({tuple(m) for m in modules}, key=root_key)
    if len(mods) != len(modules):
        return Arrangement(None, bad_pair=(tuple(modules[0]), tuple(modules[0])))
    succ: dict[Root, list[Root]] = {m: [] for m in mods}
    indeg = {m: 0 for m in mods}
    for a, b in itertools.combinations(mods, 2):
        ab = alg.is_exceptional_pair(a, b)
        ba = alg.is_exceptional_pair(b, a)
        if not ab and not ba:
            return Arrangement(None, bad_pair=(a, b))
        if ab and not ba:
            succ[a].append(b)
            indeg[b] += 1
        elif ba and not ab:
            succ[b].append(a)
            indeg[a] += 1
    order = []
    ready = [m for m in mods if indeg[m] == 0]
    while ready:
        ready.sort(key=root_key)
        m = ready.pop(0)
        order.append(m)
        for nxt in succ[m]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if len(order) == len(mods):
        return Arrangement(tuple(order))
    return Arrangement(None, cycle=_shortest_cycle([m for m in mods if m not in order], succ))


def _shortest_cycle(nodes: list[Root], succ: dict[Root, list[Root]]) -> tuple[Root, ...]:
    best: tuple[Root, ...] | None = None
    allowed = set(nodes)
    for s in nodes:
        prev = {s: None}
        q = deque([s])
        found = None
        while q and found is None:
            u = q.popleft()
            for v in sorted(succ[u], key=root_key):
                if v not in allowed:
                    continue
                if v == s:
                    found = u
                    break
                if v not in prev:
                    prev[v] = u
                    q.append(v)
        if found is None:
            continue
        path = [found]
        while path[-1] != s:
            path.append(prev[path[-1]])
        cyc = tuple(reversed(path))
        if best is None or len(cyc) < len(best):
            best = cyc
    if best is None:
        raise InconsistencyError("topological sort failed without a cycle")
    return best


@dataclass(frozen=True)
class STResult:
    ok: bool
    reason: str = ""
    order: tuple[ExceptionalObject, ...] | None = None


def speyer_thomas_check(alg: Algebra, vectors: Sequence[Sequence[int]]) -> STResult:
    """Whether signed vectors satisfy the Hom-orthogonality and exceptional-sequence test.

    Conditions: objects of equal sign are Hom-orthogonal, and the underlying
    modules form an exceptional sequence with the negative ones to the right
    of the positive ones.
    """
    try:
        objs = [from_signed(v) for v in vectors]
    except QuiverError as exc:
        return STResult(False, str(exc))
    for o in objs:
        if not alg.is_exceptional(o.root):
            return STResult(False, f"{o} is not exceptional")
    if len({o.root for o in objs}) != len(objs):
        return STResult(False, "a module occurs twice")
    pos = [o.root for o in objs if not o.shifted]
    neg = [o.root for o in objs if o.shifted]
    for group in (pos, neg):
        for a, b in itertools.combinations(group, 2):
            if alg.hom(a, b) or alg.hom(b, a):
                return STResult(False, f"same-sign objects {a} and {b} are not Hom-orthogonal")
    for a in pos:
        for b in neg:
            if not alg.is_exceptional_pair(a, b):
                return STResult(False, f"({a}, {b}) is not an exceptional pair")
    left = arrange_exceptional_sequence(alg, pos) if pos else Arrangement(())
    right = arrange_exceptional_sequence(alg, neg) if neg else Arrangement(())
    if not left.ok:
        return STResult(False, f"positive modules cannot be arranged: {left.cycle or left.bad_pair}")
    if not right.ok:
        return STResult(False, f"negative modules cannot be arranged: {right.cycle or right.bad_pair}")
    seq = tuple(obj(r) for r in left.order) + tuple(obj(r, True) for r in right.order)
    return STResult(True, "", seq)


@dataclass(frozen=True)
class StarResult:
    ok: bool
    witness: tuple[Root, ...] | None = None
    cycle: tuple[Root, ...] | None = None
    checked: int = 0
    pair_checks: dict = field(default_factory=dict, compare=False)


def condition_star_check(alg: Algebra, max_size: int | None = None) -> StarResult:
    """Every Hom-orthogonal collection of pairwise exceptional modules is arrangeable.

    Collections are enumerated by size, then in canonical index order; the
    first one without an arrangement is returned with its cycle.
    """
    alg.require_supported()
    roots = alg.exceptional_roots()
    m = len(roots)
    adj = [[False] * m for _ in range(m)]
    for i, j in itertools.combinations(range(m), 2):
        a, b = roots[i], roots[j]
        good = alg.hom(a, b) == 0 and alg.hom(b, a) == 0
        good = good and (alg.is_exceptional_pair(a, b) or alg.is_exceptional_pair(b, a))
        adj[i][j] = adj[j][i] = good
    limit = max_size if max_size is not None else alg.n + 1
    level = [(i,) for i in range(m)]
    checked = 0
    size = 1
    while level and size < limit:
        nxt = []
        for clique in level:
            for j in range(clique[-1] + 1, m):
                if all(adj[i][j] for i in clique):
                    nxt.append(clique + (j,))
        size += 1
        for clique in nxt:
            checked += 1
            mods = [roots[i] for i in clique]
            arr = arrange_exceptional_sequence(alg, mods)
            if not arr.ok:
                pairs = {
                    (a, b): (alg.is_exceptional_pair(a, b), alg.is_exceptional_pair(b, a))
                    for a, b in itertools.combinations(mods, 2)
                }
                return StarResult(False, tuple(mods), arr.cycle, checked, pairs)
        level = nxt
    return StarResult(True, None, None, checked)
