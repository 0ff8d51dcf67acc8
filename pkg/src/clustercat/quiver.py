"""Quiver combinatorics: Euler form, Coxeter transform, roots, representation type.

Convention used everywhere in the package: an arrow ``i -> j`` carries a
linear map ``M_i -> M_j`` and the Euler matrix is ``E = I - A`` where
``A[i][j]`` counts arrows ``i -> j``.  Vertices are 1-based in the public
surface and 0-based in every vector.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from . import _kernels, linalg
from .errors import QuiverError, UnsupportedError

Root = tuple[int, ...]


def root_key(v: Sequence[int]) -> tuple:
    """Canonical sort key: total dimension, then lexicographic."""
    return (sum(v), tuple(v))


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = ()
    _euler: np.ndarray = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not isinstance(self.vertex_count, int) or self.vertex_count < 1:
            raise QuiverError("vertex count must be a positive integer")
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        n = self.vertex_count
        for s, t in arrows:
            if not (1 <= s <= n and 1 <= t <= n):
                raise QuiverError(f"arrow {s}->{t} has a vertex out of range 1..{n}")
            if s == t:
                raise QuiverError(f"loop at vertex {s}")
        if self.topological_order() is None:
            raise QuiverError("quiver has an oriented cycle")
        if not self.is_connected():
            raise QuiverError("quiver is disconnected")
        e = np.eye(n, dtype=np.int64)
        for s, t in arrows:
            e[s - 1, t - 1] -= 1
        e.setflags(write=False)
        object.__setattr__(self, "_euler", e)

    @property
    def n(self) -> int:
        return self.vertex_count

    def topological_order(self) -> list[int] | None:
        indeg = [0] * (self.n + 1)
        for _, t in self.arrows:
            indeg[t] += 1
        ready = [v for v in range(1, self.n + 1) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        return order if len(order) == self.n else None

    def is_connected(self) -> bool:
        seen = {1}
        stack = [1]
        while stack:
            v = stack.pop()
            for s, t in self.arrows:
                for a, b in ((s, t), (t, s)):
                    if a == v and b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == self.n

    def is_sink(self, v: int) -> bool:
        return all(s != v for s, _ in self.arrows)

    def is_source(self, v: int) -> bool:
        return all(t != v for _, t in self.arrows)

    def reflected(self, v: int) -> "Quiver":
        """Same arrow list with every arrow incident to ``v`` reversed."""
        return Quiver(self.n, tuple((t, s) if v in (s, t) else (s, t) for s, t in self.arrows))

    def euler_matrix(self) -> np.ndarray:
        return self._euler

    def to_json(self) -> str:
        return json.dumps({"vertices": self.n, "arrows": [list(a) for a in self.arrows]})


def parse_quiver(text: str | dict) -> Quiver:
    """Parse ``{"vertices": n, "arrows": [[s, t], ...]}``."""
    try:
        data = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise QuiverError(f"malformed quiver JSON: {exc}") from None
    if not isinstance(data, dict) or "vertices" not in data:
        raise QuiverError("quiver JSON must be an object with a 'vertices' field")
    n = data["vertices"]
    arrows = data.get("arrows", [])
    if isinstance(n, bool) or not isinstance(n, int):
        raise QuiverError("'vertices' must be an integer")
    if not isinstance(arrows, list) or not all(
        isinstance(a, list) and len(a) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in a)
        for a in arrows
    ):
        raise QuiverError("'arrows' must be a list of [source, target] integer pairs")
    return Quiver(n, tuple(tuple(a) for a in arrows))


def _check_len(q: Quiver, *vs: Sequence[int]) -> None:
    for v in vs:
        if len(v) != q.n:
            raise QuiverError(f"vector {tuple(v)} does not have length {q.n}")


def euler_form(q: Quiver, x: Sequence[int], y: Sequence[int]) -> int:
    """``sum_i x_i y_i - sum_{a: s->t} x_s y_t``."""
    _check_len(q, x, y)
    val = sum(int(a) * int(b) for a, b in zip(x, y))
    for s, t in q.arrows:
        val -= int(x[s - 1]) * int(y[t - 1])
    return val


def tits_form(q: Quiver, x: Sequence[int]) -> int:
    return euler_form(q, x, x)


def symmetric_form(q: Quiver, x: Sequence[int], y: Sequence[int]) -> int:
    return euler_form(q, x, y) + euler_form(q, y, x)


def reflect(q: Quiver, x: Sequence[int], v: int) -> Root:
    """Simple reflection at vertex ``v`` (1-based)."""
    e = [0] * q.n
    e[v - 1] = 1
    c = symmetric_form(q, x, e)
    out = list(x)
    out[v - 1] -= c
    return tuple(out)


def _int_matrix(m: linalg.Matrix) -> np.ndarray:
    out = np.zeros((len(m), len(m[0]) if m else 0), dtype=np.int64)
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            if Fraction(x).denominator != 1:
                raise ArithmeticError("expected an integer matrix")
            out[i, j] = int(x)
    return out


def projective_dims(q: Quiver) -> list[Root]:
    """``dim P_i``: number of paths starting at ``i`` and ending at each vertex."""
    e = q.euler_matrix().tolist()
    inv_t = linalg.inverse(linalg.transpose(e))
    return [tuple(int(inv_t[j][i]) for j in range(q.n)) for i in range(q.n)]


def injective_dims(q: Quiver) -> list[Root]:
    """``dim I_i``: number of paths ending at ``i`` from each vertex."""
    inv = linalg.inverse(q.euler_matrix().tolist())
    return [tuple(int(inv[j][i]) for j in range(q.n)) for i in range(q.n)]


def coxeter_transform(q: Quiver) -> np.ndarray:
    """Integer matrix sending ``dim M`` to ``dim tau M`` for non-projective indecomposables.

    ``Phi = -E^{-1} E^T``, so that ``Phi dim P_i = -dim I_i``.
    """
    e = q.euler_matrix().tolist()
    phi = linalg.matmul(linalg.inverse(e), linalg.transpose(e))
    return -_int_matrix(phi)


def apply_matrix(m: np.ndarray, v: Sequence[int]) -> Root:
    return tuple(int(x) for x in np.asarray(m, dtype=np.int64) @ np.asarray(v, dtype=np.int64))


class ReprTag(enum.Enum):
    FINITE = "Finite"
    TAME = "Tame"
    WILD = "Wild"


@dataclass(frozen=True)
class ReprType:
    tag: ReprTag
    null_root: Root | None = None


def classify_type(q: Quiver) -> ReprType:
    """Finite / tame / wild via definiteness of the symmetrized Tits form."""
    n = q.n
    e = q.euler_matrix()
    c = (e + e.T).tolist()
    leading = [linalg.det([row[:k] for row in c[:k]]) for k in range(1, n + 1)]
    if all(d > 0 for d in leading):
        return ReprType(ReprTag.FINITE)
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            if linalg.det([[c[i][j] for j in idx] for i in idx]) < 0:
                return ReprType(ReprTag.WILD)
    rad = linalg.nullspace(c, n)
    if len(rad) != 1:
        return ReprType(ReprTag.WILD)
    v = rad[0]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        return ReprType(ReprTag.WILD)
    return ReprType(ReprTag.TAME, tuple(ints))


def unit(n: int, i: int) -> Root:
    return tuple(int(j == i) for j in range(n))


def _finite_roots(q: Quiver) -> list[Root]:
    seen = {unit(q.n, i) for i in range(q.n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for v in range(1, q.n + 1):
                y = reflect(q, x, v)
                if all(c >= 0 for c in y) and any(y) and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=root_key)


def enumerate_positive_real_roots(q: Quiver, bound: int = 8, rtype: ReprType | None = None) -> list[Root]:
    """Positive real roots sorted by (total dimension, lex).

    Finite type returns every positive root and ignores ``bound``; tame type
    returns the real roots with every entry at most ``bound``.
    """
    rtype = rtype or classify_type(q)
    if rtype.tag is ReprTag.WILD:
        raise UnsupportedError("wild quiver: real roots are not enumerated")
    if rtype.tag is ReprTag.FINITE:
        return _finite_roots(q)
    if bound < 1:
        raise ValueError("bound must be at least 1")
    vecs = _kernels.tits_unit_vectors(q.euler_matrix(), bound)
    roots = [tuple(int(x) for x in row) for row in vecs if row.any()]
    return sorted(roots, key=root_key)
