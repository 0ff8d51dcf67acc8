"""The cluster morphism category: morphisms, sigma maps, composition and factorization cubes."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import factorial
from typing import Iterable, Sequence

from . import linalg
from .cluster import (
    ExceptionalObject,
    canonical,
    cluster_objects,
    compatible,
    from_signed,
    is_partial_cluster,
)
from .errors import InconsistencyError, QuiverError, TruncationError, UnsupportedError
from .quiver import root_key
from .reps import Algebra
from .wide import (
    WideSubcategory,
    coordinates,
    from_coordinates,
    is_finite_type,
    make_wide,
    perpendicular,
    relative_projectives,
    simples_of,
    whole_category,
)


@dataclass(frozen=True)
class ClusterMorphism:
    """``[T]: W -> T^perp inside W``; the target is always derived from the cluster."""

    source: WideSubcategory
    cluster: tuple[ExceptionalObject, ...]
    target: WideSubcategory

    @property
    def rank(self) -> int:
        return len(self.cluster)

    @property
    def is_identity(self) -> bool:
        return not self.cluster

    def key(self) -> tuple:
        return (self.source.key, tuple(o.sort_key() for o in self.cluster))

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json()["simples"],
            "cluster": [o.to_json() for o in self.cluster],
            "target": self.target.to_json()["simples"],
        }


def morphism(alg: Algebra, source: WideSubcategory, objs: Iterable[ExceptionalObject]) -> ClusterMorphism:
    objs = canonical(objs)
    cw = set(cluster_objects(alg, source))
    for o in objs:
        if o not in cw:
            raise QuiverError(f"{o} is not an object of C_W")
    if not is_partial_cluster(alg, list(objs)):
        raise QuiverError("objects are not pairwise compatible")
    target = perpendicular(alg, source, [o.root for o in objs])
    return ClusterMorphism(source, objs, target)


def identity(w: WideSubcategory) -> ClusterMorphism:
    return ClusterMorphism(w, (), w)


def sigma_table(alg: Algebra, w: WideSubcategory, s: Sequence[ExceptionalObject]) -> dict[ExceptionalObject, ExceptionalObject]:
    """``sigma_S`` as a dictionary ``C_{W''} -> C_W`` where ``W'' = S^perp inside W``.

    Each image is found by scanning ``C_W`` for the objects compatible with
    ``S`` whose signed dimension differs from that of ``t`` by an integer
    combination of ``dim S`` and whose joint perpendicular matches; a unique
    candidate is required and the result must be a bijection onto the
    ``S``-compatible objects.
    """
    s = canonical(s)
    cache = alg.cache.setdefault("sigma", {})
    key = (w.key, s)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not s:
        table = {t: t for t in cluster_objects(alg, w)}
        cache[key] = table
        return table
    mods = [o.root for o in s]
    inner = perpendicular(alg, w, mods)
    roots = set(mods)
    cands = [c for c in cluster_objects(alg, w) if c.root not in roots and all(compatible(alg, c, o) for o in s)]
    lattice = linalg.hermite_rows(mods)

    def in_lattice(v) -> bool:
        return linalg.in_integer_span(v, lattice) if lattice else not any(v)

    table: dict[ExceptionalObject, ExceptionalObject] = {}
    for t in cluster_objects(alg, inner):
        goal = perpendicular(alg, inner, [t.root])
        found = []
        for u in cands:
            diff = [a - b for a, b in zip(u.signed, t.signed)]
            if not in_lattice(diff):
                continue
            if perpendicular(alg, w, mods + [u.root]) == goal:
                found.append(u)
        if not found and not alg.is_finite:
            raise TruncationError(f"sigma of {t} lies outside the root bound {alg.bound}")
        if len(found) != 1:
            raise InconsistencyError(f"sigma of {t} has {len(found)} candidates")
        table[t] = found[0]
    images = list(table.values())
    if len(set(images)) != len(images):
        raise InconsistencyError("sigma is not injective")
    if alg.is_finite and set(images) != set(cands):
        raise InconsistencyError("sigma is not onto the compatible objects")
    cache[key] = table
    return table


def sigma(alg: Algebra, w: WideSubcategory, s: Sequence[ExceptionalObject], t: ExceptionalObject) -> ExceptionalObject:
    table = sigma_table(alg, w, s)
    if t not in table:
        raise QuiverError(f"{t} is not an object of the perpendicular category")
    return table[t]


def sigma_inverse(alg: Algebra, w: WideSubcategory, s: Sequence[ExceptionalObject], u: ExceptionalObject) -> ExceptionalObject:
    for t, image in sigma_table(alg, w, s).items():
        if image == u:
            return t
    raise InconsistencyError(f"{u} is not in the image of sigma")


def compose(alg: Algebra, f: ClusterMorphism, g: ClusterMorphism) -> ClusterMorphism:
    """``g o f`` for ``f: W -> W''`` and ``g: W'' -> W'``."""
    if f.target != g.source:
        raise QuiverError("morphisms are not composable")
    table = sigma_table(alg, f.source, f.cluster)
    objs = list(f.cluster) + [table[t] for t in g.cluster]
    result = ClusterMorphism(f.source, canonical(objs), g.target)
    if len(result.cluster) != f.rank + g.rank:
        raise InconsistencyError("composition lost an object")
    if perpendicular(alg, f.source, [o.root for o in result.cluster]) != g.target:
        raise InconsistencyError("composite has the wrong target")
    return result


@dataclass(frozen=True)
class Factorization:
    subset: tuple[ExceptionalObject, ...]
    first: ClusterMorphism
    second: ClusterMorphism

    @property
    def middle(self) -> WideSubcategory:
        return self.first.target


def _split(alg: Algebra, f: ClusterMorphism, subset: Sequence[ExceptionalObject]) -> Factorization:
    subset = canonical(subset)
    first = ClusterMorphism(f.source, subset, perpendicular(alg, f.source, [o.root for o in subset]))
    rest = [o for o in f.cluster if o not in subset]
    second_objs = canonical(sigma_inverse(alg, f.source, subset, u) for u in rest)
    second = ClusterMorphism(first.target, second_objs, perpendicular(alg, first.target, [o.root for o in second_objs]))
    return Factorization(subset, first, second)


def factorizations(alg: Algebra, f: ClusterMorphism) -> list[Factorization]:
    """All ``2^rank`` factorizations, one per subset of the cluster.

    Checks that each composes back to ``f``, that the middle objects are
    distinct, and that inclusions of subsets give the cube morphisms.
    """
    facs = []
    for k in range(f.rank + 1):
        for sub in itertools.combinations(f.cluster, k):
            fac = _split(alg, f, sub)
            if compose(alg, fac.first, fac.second) != f:
                raise InconsistencyError(f"factorization through {sub} does not recompose")
            facs.append(fac)
    middles = [fac.middle for fac in facs]
    if len(set(middles)) != len(middles):
        raise InconsistencyError("two factorizations share a middle object")
    return facs


def cube_morphism(alg: Algebra, f: ClusterMorphism, small: Factorization, big: Factorization) -> ClusterMorphism:
    """The morphism between middles for ``small.subset`` contained in ``big.subset``."""
    extra = [o for o in big.subset if o not in small.subset]
    objs = canonical(sigma_inverse(alg, f.source, small.subset, u) for u in extra)
    return ClusterMorphism(small.middle, objs, perpendicular(alg, small.middle, [o.root for o in objs]))


def check_cube(alg: Algebra, f: ClusterMorphism, facs: Sequence[Factorization] | None = None) -> list[str]:
    """Violations of ``Fac(f)`` being the subset-lattice cube."""
    facs = facs if facs is not None else factorizations(alg, f)
    bad = []
    if len(facs) != 2**f.rank:
        bad.append(f"{len(facs)} factorizations, expected {2 ** f.rank}")
    for a in facs:
        for b in facs:
            if a is b or not set(a.subset) < set(b.subset):
                continue
            h = cube_morphism(alg, f, a, b)
            if h.target != b.middle:
                bad.append(f"cube edge {a.subset}->{b.subset} lands in the wrong object")
                continue
            if compose(alg, a.first, h) != b.first:
                bad.append(f"cube edge {a.subset}->{b.subset} does not commute with first factors")
            if compose(alg, h, b.second) != a.second:
                bad.append(f"cube edge {a.subset}->{b.subset} does not commute with second factors")
    return bad


def factorization_chains(alg: Algebra, f: ClusterMorphism) -> list[tuple[ExceptionalObject, ...]]:
    """Maximal chains of rank-one morphisms factoring ``f``, as signed exceptional sequences."""
    chains = []
    for perm in itertools.permutations(f.cluster):
        seq = []
        for i, o in enumerate(perm):
            seq.append(sigma_inverse(alg, f.source, perm[:i], o))
        chains.append(tuple(seq))
    return chains


@dataclass(frozen=True)
class LastFactor:
    source: WideSubcategory
    obj: ExceptionalObject


def last_factors(alg: Algebra, f: ClusterMorphism) -> list[LastFactor]:
    """Rank-one morphisms ``[L_i]: W_i -> W'`` ending ``f``, aligned with ``f.cluster``."""
    out = []
    for o in f.cluster:
        rest = [x for x in f.cluster if x != o]
        mid = perpendicular(alg, f.source, [x.root for x in rest])
        out.append(LastFactor(mid, sigma_inverse(alg, f.source, rest, o)))
    return out


def generated_subcategory(alg: Algebra, spans: Iterable[WideSubcategory]) -> WideSubcategory:
    """Wide subcategory whose exceptional objects are those in the span of the given ones."""
    gens = [list(s) for w in spans for s in w.simples]
    dim = linalg.rank(gens) if gens else 0
    if dim == 0:
        return make_wide([])
    members = [r for r in alg.exceptional_roots() if linalg.rank(gens + [list(r)]) == dim]
    w = make_wide(simples_of(alg, members))
    if w.rank != dim:
        raise InconsistencyError("generated subcategory has the wrong rank")
    return w


def recover_first_factors(
    alg: Algebra,
    lasts: Sequence[LastFactor],
    target: WideSubcategory,
    source: WideSubcategory | None = None,
) -> list[ExceptionalObject]:
    """First factors from last factors by solving the Euler-form system.

    Unknown ``R_i`` in the span of ``W`` must satisfy ``<R_i, L_j> = delta_ij``
    and ``<R_i, T_m> = 0`` for the shifted projectives ``T`` of ``W'``.
    """
    w = source or generated_subcategory(alg, [lf.source for lf in lasts])
    tcl = [[-x for x in p] for p in relative_projectives(alg, target)]
    cols = [list(lf.obj.signed) for lf in lasts] + tcl
    if len(cols) != w.rank:
        raise InconsistencyError("last factors and target do not fill the source rank")
    if w.rank == 0:
        return []
    # <R, y> = R_W^T E_W y_W in simple coordinates
    ew = [[alg.euler(a, b) for b in w.simples] for a in w.simples]
    ycoords = []
    for c in cols:
        yc = coordinates(w, c)
        if yc is None:
            raise InconsistencyError("last factor outside the source span")
        ycoords.append(yc)
    m = linalg.matmul(ew, linalg.transpose(ycoords))  # column j is E_W y_j
    mt = linalg.transpose(m)
    out = []
    for i in range(len(lasts)):
        rhs = [int(j == i) for j in range(len(cols))]
        sol = linalg.solve(mt, rhs)
        if sol is None:
            raise InconsistencyError("first-factor system is inconsistent")
        vec = from_coordinates(w, sol)
        o = from_signed(vec)
        if o not in set(cluster_objects(alg, w)):
            raise InconsistencyError(f"recovered vector {vec} is not an object of C_W")
        out.append(o)
    return out


@dataclass
class Category:
    objects: list[WideSubcategory]
    morphisms: dict[tuple, list[ClusterMorphism]]  # keyed by source key
    truncated: bool = False
    notes: list[str] = field(default_factory=list)

    def all_morphisms(self) -> list[ClusterMorphism]:
        return [m for w in self.objects for m in self.morphisms.get(w.key, [])]

    def out_of(self, w: WideSubcategory) -> list[ClusterMorphism]:
        return list(self.morphisms.get(w.key, []))

    def between(self, a: WideSubcategory, b: WideSubcategory) -> list[ClusterMorphism]:
        return [m for m in self.morphisms.get(a.key, []) if m.target == b]

    def to_json(self) -> dict:
        return {
            "objects": [w.to_json()["simples"] for w in self.objects],
            "morphisms": [m.to_json() for m in self.all_morphisms()],
            "truncated": self.truncated,
        }


def _partial_clusters(alg: Algebra, w: WideSubcategory, max_size: int) -> list[tuple[ExceptionalObject, ...]]:
    cands = cluster_objects(alg, w)
    m = len(cands)
    ok = [[compatible(alg, cands[i], cands[j]) and cands[i].root != cands[j].root for j in range(m)] for i in range(m)]
    out: list[tuple[ExceptionalObject, ...]] = [()]

    def extend(chosen, start):
        for j in range(start, m):
            if all(ok[i][j] for i in chosen):
                chosen.append(j)
                out.append(canonical(cands[i] for i in chosen))
                if len(chosen) < max_size:
                    extend(chosen, j + 1)
                chosen.pop()

    if max_size > 0:
        extend([], 0)
    out.sort(key=lambda c: (len(c), [o.sort_key() for o in c]))
    return out


def build_category(alg: Algebra) -> Category:
    """Objects reachable from ``mod-Lambda`` and every morphism between them.

    In tame type the result is a slice: morphisms out of subcategories with
    infinitely many exceptional objects are restricted to rank at most one
    and to roots within the bound, and the category is flagged truncated.
    """
    alg.require_supported()
    top = whole_category(alg)
    objects = [top]
    seen = {top.key}
    morphisms: dict[tuple, list[ClusterMorphism]] = {}
    queue = deque([top])
    truncated = False
    notes = []
    while queue:
        w = queue.popleft()
        finite = is_finite_type(alg, w)
        if not finite:
            truncated = True
        outs = []
        for objs in _partial_clusters(alg, w, w.rank if finite else 1):
            try:
                target = perpendicular(alg, w, [o.root for o in objs])
                if not finite:
                    sigma_table(alg, w, objs)
            except TruncationError as exc:
                notes.append(f"skipped {[str(o) for o in objs]} from {list(w.simples)}: {exc}")
                continue
            outs.append(ClusterMorphism(w, objs, target))
            if target.key not in seen:
                seen.add(target.key)
                objects.append(target)
                queue.append(target)
        morphisms[w.key] = outs
    objects.sort(key=lambda w: (-w.rank, [root_key(s) for s in w.simples]))
    return Category(objects, morphisms, truncated, notes)


@dataclass
class CubicalReport:
    morphisms_checked: int = 0
    cubes_checked: int = 0
    violations: list[str] = field(default_factory=list)
    scope: str = "full"

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "scope": self.scope,
            "morphisms_checked": self.morphisms_checked,
            "cubes_checked": self.cubes_checked,
            "violations": list(self.violations),
        }


def verify_cubical_axioms(alg: Algebra, cat: Category) -> CubicalReport:
    """Check the cubical-category axioms on every materialized morphism.

    Rank is nonnegative and zero exactly on identities; each ``Fac(f)`` is a
    ``2^rank`` cube with ``rank!`` maximal chains; first factors determine a
    morphism given its source, and last factors determine it given its
    target (and recover the first factors).
    """
    rep = CubicalReport(scope="truncated-slice" if cat.truncated else "full")
    by_target: dict[tuple, list[tuple[frozenset, ClusterMorphism]]] = {}
    for w in cat.objects:
        firsts: dict[frozenset, ClusterMorphism] = {}
        for f in cat.out_of(w):
            rep.morphisms_checked += 1
            tag = f"{[str(o) for o in f.cluster]} from {list(w.simples)}"
            if f.rank < 0 or (f.rank == 0) != (f.source == f.target):
                rep.violations.append(f"rank/identity mismatch for {tag}")
            if f.target.rank != f.source.rank - f.rank:
                rep.violations.append(f"rank not additive for {tag}")
            try:
                facs = factorizations(alg, f)
                rep.violations.extend(f"{tag}: {v}" for v in check_cube(alg, f, facs))
                chains = factorization_chains(alg, f)
                if len(chains) != factorial(f.rank) or len(set(chains)) != len(chains):
                    rep.violations.append(f"{tag}: {len(chains)} chains, expected {factorial(f.rank)}")
                rep.cubes_checked += 1
                fkey = frozenset(f.cluster)
                if fkey in firsts:
                    rep.violations.append(f"{tag}: first factors shared with another morphism")
                firsts[fkey] = f
                lasts = last_factors(alg, f)
                lkey = frozenset((lf.source, lf.obj) for lf in lasts)
                by_target.setdefault(f.target.key, []).append((lkey, f))
                if f.rank and canonical(recover_first_factors(alg, lasts, f.target, f.source)) != f.cluster:
                    rep.violations.append(f"{tag}: last factors do not recover the first factors")
            except (InconsistencyError, QuiverError, UnsupportedError) as exc:
                rep.violations.append(f"{tag}: {exc}")
    for group in by_target.values():
        seen: dict[frozenset, ClusterMorphism] = {}
        for lkey, f in group:
            if f.rank == 0:
                continue
            if lkey in seen and seen[lkey] != f:
                rep.violations.append(f"two morphisms into {list(f.target.simples)} share last factors")
            seen[lkey] = f
    return rep


def check_associativity(alg: Algebra, cat: Category) -> list[str]:
    """Violations of associativity and rank additivity over composable triples."""
    bad = []
    for w in cat.objects:
        for f in cat.out_of(w):
            for g in cat.out_of(f.target):
                gf = compose(alg, f, g)
                if gf.rank != f.rank + g.rank:
                    bad.append("rank not additive")
                for h in cat.out_of(g.target):
                    if compose(alg, gf, h) != compose(alg, f, compose(alg, g, h)):
                        bad.append(f"associativity fails for {f.cluster}, {g.cluster}, {h.cluster}")
    return bad
