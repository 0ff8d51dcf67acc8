"""Finitely generated wide subcategories, perpendicular categories and tubes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import InconsistencyError, QuiverError, TruncationError, UnsupportedError
from .quiver import ReprTag, Root, apply_matrix, coxeter_transform, root_key
from .reps import Algebra


@dataclass(frozen=True, order=True)
class WideSubcategory:
    """A wide subcategory, identified by its sorted relative simples."""

    simples: tuple[Root, ...]

    @property
    def rank(self) -> int:
        return len(self.simples)

    @property
    def key(self) -> tuple[Root, ...]:
        return self.simples

    def to_json(self) -> dict:
        return {"simples": [list(s) for s in self.simples]}


def make_wide(simples: Iterable[Sequence[int]]) -> WideSubcategory:
    return WideSubcategory(tuple(sorted((tuple(int(x) for x in s) for s in simples), key=root_key)))


def whole_category(alg: Algebra) -> WideSubcategory:
    return make_wide(tuple(int(i == j) for j in range(alg.n)) for i in range(alg.n))


def zero_category() -> WideSubcategory:
    return WideSubcategory(())


def coordinates(w: WideSubcategory, beta: Sequence[int]) -> list[Fraction] | None:
    """Coefficients of ``beta`` in the basis of relative simples, or None if outside their span."""
    if w.rank == 0:
        return [] if not any(beta) else None
    a = linalg.transpose([list(s) for s in w.simples])
    return linalg.solve(a, list(beta))


def from_coordinates(w: WideSubcategory, coords: Sequence) -> Root:
    n = len(w.simples[0]) if w.simples else 0
    out = [Fraction(0)] * n
    for c, s in zip(coords, w.simples):
        for i, x in enumerate(s):
            out[i] += c * x
    vec = linalg.as_int_vector(out)
    if vec is None:
        raise InconsistencyError("non-integral dimension vector")
    return vec


def _n_span(w: WideSubcategory, beta: Sequence[int]) -> bool:
    c = coordinates(w, beta)
    return c is not None and all(x.denominator == 1 and x >= 0 for x in c)


def _cache(alg: Algebra, name: str) -> dict:
    return alg.cache.setdefault(name, {})


def _dynkin_roots(cartan: list[list[int]]) -> list[tuple[int, ...]]:
    """Positive roots of a positive definite symmetric Cartan matrix, by reflection closure."""
    r = len(cartan)
    seen = {tuple(int(i == j) for j in range(r)) for i in range(r)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for v in range(r):
                c = sum(x[j] * cartan[j][v] for j in range(r))
                y = list(x)
                y[v] -= c
                y = tuple(y)
                if min(y) >= 0 and any(y) and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def exceptional_objects_in(alg: Algebra, w: WideSubcategory) -> list[Root]:
    """Exceptional roots of ``w``, sorted canonically.

    A finite-type ``w`` is handled through its own root system, which is
    complete whatever the ambient bound; otherwise the bounded ambient list
    is filtered by membership in the N-span of the relative simples.
    """
    cache = _cache(alg, "members")
    hit = cache.get(w.key)
    if hit is None:
        if alg.is_finite or (w.rank < alg.n and is_finite_type(alg, w)):
            cartan = [[alg.euler(a, b) + alg.euler(b, a) for b in w.simples] for a in w.simples]
            hit = sorted((from_coordinates(w, c) for c in _dynkin_roots(cartan)), key=root_key)
        else:
            hit = [r for r in alg.exceptional_roots() if _n_span(w, r)]
        cache[w.key] = hit
    return list(hit)


def _within_bound(alg: Algebra, r: Root) -> bool:
    return alg.is_finite or max(r) <= alg.bound


def simples_of(alg: Algebra, members: Sequence[Root]) -> list[Root]:
    """Relative simples of the wide subcategory whose exceptional roots are ``members``."""
    simples: list[Root] = []
    for beta in sorted(members, key=root_key):
        if not simples:
            simples.append(beta)
            continue
        c = coordinates(make_wide(simples), beta)
        if c is None:
            simples.append(beta)
        elif not all(x.denominator == 1 and x >= 0 for x in c):
            raise InconsistencyError(f"{beta} is not a nonnegative combination of the relative simples")
    for i, a in enumerate(simples):
        for b in simples[i + 1 :]:
            if alg.hom(a, b) or alg.hom(b, a):
                raise InconsistencyError(f"relative simples {a} and {b} are not Hom-orthogonal")
    return sorted(simples, key=root_key)


def perpendicular(alg: Algebra, w: WideSubcategory, modules: Iterable[Sequence[int]]) -> WideSubcategory:
    """``|T|^perp`` inside ``w``, for the underlying modules of a partial cluster in ``w``."""
    mods = sorted({tuple(m) for m in modules}, key=root_key)
    cache = _cache(alg, "perp")
    key = (w.key, tuple(mods))
    hit = cache.get(key)
    if hit is not None:
        return hit
    members = exceptional_objects_in(alg, w)
    for m in mods:
        if m not in members:
            raise QuiverError(f"{m} is not an exceptional object of the subcategory")
    inside = [b for b in members if all(alg.hom_ext(m, b) == (0, 0) for m in mods)]
    simples = simples_of(alg, inside)
    result = make_wide(simples)
    if result.rank != w.rank - len(mods):
        msg = f"perpendicular has rank {result.rank}, expected {w.rank - len(mods)}"
        if alg.is_tame:
            raise TruncationError(msg + f" (root bound {alg.bound} too small)")
        raise InconsistencyError(msg)
    # the N-span description of the result must reproduce the filtered list
    if [r for r in exceptional_objects_in(alg, result) if _within_bound(alg, r)] != [
        r for r in inside if _within_bound(alg, r)
    ]:
        raise InconsistencyError("perpendicular category is not the N-span of its simples")
    cache[key] = result
    return result


def euler_matrix_of(alg: Algebra, w: WideSubcategory) -> list[list[int]]:
    """``E_W[i][j] = <s_i, s_j>`` on the relative simples."""
    return [[alg.euler(a, b) for b in w.simples] for a in w.simples]


def relative_projectives(alg: Algebra, w: WideSubcategory) -> list[Root]:
    """Projective objects of ``w`` in the order of its relative simples.

    ``P^W_i`` has ``w``-coordinates ``E_W^{-T} e_i``.  In finite type each is
    checked to be Ext-projective among the exceptional objects of ``w``.
    """
    cache = _cache(alg, "proj")
    hit = cache.get(w.key)
    if hit is not None:
        return list(hit)
    if w.rank == 0:
        return []
    e = euler_matrix_of(alg, w)
    inv_t = linalg.inverse(linalg.transpose(e))
    members = exceptional_objects_in(alg, w)
    projs = []
    for i in range(w.rank):
        p = from_coordinates(w, [inv_t[j][i] for j in range(w.rank)])
        if p not in members:
            if alg.is_tame:
                raise TruncationError(f"relative projective {p} lies outside the root bound {alg.bound}")
            raise InconsistencyError(f"relative projective {p} is not exceptional")
        projs.append(p)
    if alg.is_finite:
        for p in projs:
            if any(alg.ext(p, y) for y in members):
                raise InconsistencyError(f"{p} is not Ext-projective in the subcategory")
    cache[w.key] = projs
    return list(projs)


def relative_injectives(alg: Algebra, w: WideSubcategory) -> list[Root]:
    if w.rank == 0:
        return []
    e = euler_matrix_of(alg, w)
    inv = linalg.inverse(e)
    return [from_coordinates(w, [inv[j][i] for j in range(w.rank)]) for i in range(w.rank)]


def is_finite_type(alg: Algebra, w: WideSubcategory) -> bool:
    """Whether ``w`` has finitely many indecomposables (its Ext-quiver is Dynkin)."""
    if w.rank == 0:
        return True
    c = [[alg.euler(a, b) + alg.euler(b, a) for b in w.simples] for a in w.simples]
    return all(linalg.det([row[:k] for row in c[:k]]) > 0 for k in range(1, w.rank + 1))


@dataclass(frozen=True)
class TubeReport:
    ranks: tuple[int, ...]
    witnesses: tuple[tuple[Root, ...], ...]  # quasi-simples of each tube of rank >= 2

    @property
    def max_rank(self) -> int:
        return max(self.ranks, default=1)

    def to_json(self) -> dict:
        return {"ranks": list(self.ranks), "witnesses": [[list(r) for r in t] for t in self.witnesses]}


def tube_ranks(alg: Algebra) -> TubeReport:
    """Ranks of the exceptional tubes with their mouths.

    The quasi-simples of a tube of rank ``r >= 2`` are the regular
    exceptional roots below ``delta`` that are not sums of two others; the
    Coxeter transform permutes them cyclically.  Homogeneous tubes are
    padded in as rank 1 so that there are always at least two entries.
    """
    if alg.rtype.tag is ReprTag.WILD:
        raise UnsupportedError("wild representation type is not supported")
    if alg.is_finite:
        return TubeReport((), ())
    delta = alg.rtype.null_root
    regular = [
        r
        for r in alg.exceptional_roots()
        if alg.euler(delta, r) == 0 and all(x <= d for x, d in zip(r, delta)) and r != delta
    ]
    rset = set(regular)
    mouth = [
        r
        for r in regular
        if not any(tuple(a - b for a, b in zip(r, s)) in rset for s in regular if s != r)
    ]
    phi = coxeter_transform(alg.quiver)
    seen: set[Root] = set()
    tubes = []
    for r in sorted(mouth, key=root_key):
        if r in seen:
            continue
        orbit = [r]
        cur = apply_matrix(phi, r)
        while cur != r:
            if cur not in mouth or len(orbit) > len(mouth):
                raise InconsistencyError(f"Coxeter orbit of {r} leaves the mouth")
            orbit.append(cur)
            cur = apply_matrix(phi, cur)
        seen.update(orbit)
        tubes.append(tuple(sorted(orbit, key=root_key)))
    tubes.sort(key=lambda t: (-len(t), [root_key(x) for x in t]))
    for t in tubes:
        total = tuple(sum(col) for col in zip(*t))
        if total != delta:
            raise InconsistencyError(f"quasi-simples {t} do not sum to the null root")
    ranks = [len(t) for t in tubes]
    ranks += [1] * max(0, 2 - len(ranks))
    return TubeReport(tuple(ranks), tuple(tubes))
