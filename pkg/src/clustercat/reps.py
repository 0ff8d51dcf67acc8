"""Explicit models of exceptional modules and their Hom/Ext dimensions.

Indecomposables are built with BGP reflection functors starting from a
simple representation.  ``Hom`` and ``Ext^1`` are the kernel and cokernel of
the map ``(f_i) -> (f_t M_a - N_a f_s)_a`` from the standard projective
resolution, so ``hom - ext`` equals the Euler form by rank-nullity; the
tests use this as a tripwire against convention drift.
"""

from __future__ import annotations

import heapq
import os
import threading
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint
import numpy as np

from . import _kernels, linalg
from .errors import InconsistencyError, QuiverError, UnsupportedError
from .quiver import (
    Quiver,
    ReprTag,
    Root,
    classify_type,
    enumerate_positive_real_roots,
    euler_form,
    symmetric_form,
    unit,
)

Mat = tuple[tuple[Fraction, ...], ...]

DEFAULT_BOUND = 8


def default_field() -> str:
    return os.environ.get("CLUSTERCAT_FIELD", "Q")


@dataclass(frozen=True)
class QuiverRepresentation:
    quiver: Quiver
    dims: Root
    maps: tuple[Mat, ...]  # maps[a] has shape dims[t(a)] x dims[s(a)]

    def __post_init__(self) -> None:
        if len(self.dims) != self.quiver.n or len(self.maps) != len(self.quiver.arrows):
            raise QuiverError("representation does not match its quiver")
        for (s, t), m in zip(self.quiver.arrows, self.maps):
            rows, cols = self.dims[t - 1], self.dims[s - 1]
            if len(m) != rows or any(len(r) != cols for r in m):
                raise QuiverError(f"map on arrow {s}->{t} has the wrong shape")


def simple_representation(q: Quiver, i: int) -> QuiverRepresentation:
    dims = unit(q.n, i)
    maps = tuple(tuple(tuple() for _ in range(dims[t - 1])) for s, t in q.arrows)
    return QuiverRepresentation(q, dims, maps)


def _freeze(m: Sequence[Sequence]) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def _empty(rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * cols for _ in range(rows)]


def reflect_at_sink(rep: QuiverRepresentation, v: int) -> QuiverRepresentation:
    """``S_v^+``: replace ``M_v`` by the kernel of the sum of incoming maps."""
    q = rep.quiver
    if not q.is_sink(v):
        raise QuiverError(f"vertex {v} is not a sink")
    incoming = [a for a, (s, t) in enumerate(q.arrows) if t == v]
    offsets = []
    width = 0
    for a in incoming:
        offsets.append(width)
        width += rep.dims[q.arrows[a][0] - 1]
    h = _empty(rep.dims[v - 1], width)
    for a, off in zip(incoming, offsets):
        for r, row in enumerate(rep.maps[a]):
            for c, x in enumerate(row):
                h[r][off + c] = x
    kernel = linalg.nullspace(h, width) if rep.dims[v - 1] else [
        [Fraction(int(i == j)) for i in range(width)] for j in range(width)
    ]
    new_dim = len(kernel)
    dims = list(rep.dims)
    dims[v - 1] = new_dim
    maps = list(rep.maps)
    for a, off in zip(incoming, offsets):
        src = q.arrows[a][0]
        size = rep.dims[src - 1]
        maps[a] = _freeze([[kernel[k][off + r] for k in range(new_dim)] for r in range(size)])
    return QuiverRepresentation(q.reflected(v), tuple(dims), tuple(maps))


def reflect_at_source(rep: QuiverRepresentation, v: int) -> QuiverRepresentation:
    """``S_v^-``: replace ``M_v`` by the cokernel of the sum of outgoing maps."""
    q = rep.quiver
    if not q.is_source(v):
        raise QuiverError(f"vertex {v} is not a source")
    outgoing = [a for a, (s, t) in enumerate(q.arrows) if s == v]
    offsets = []
    height = 0
    for a in outgoing:
        offsets.append(height)
        height += rep.dims[q.arrows[a][1] - 1]
    h = _empty(height, rep.dims[v - 1])
    for a, off in zip(outgoing, offsets):
        for r, row in enumerate(rep.maps[a]):
            for c, x in enumerate(row):
                h[off + r][c] = x
    # rows of the quotient map span the left kernel of h
    coker = linalg.nullspace(linalg.transpose(h), height) if rep.dims[v - 1] else [
        [Fraction(int(i == j)) for i in range(height)] for j in range(height)
    ]
    new_dim = len(coker)
    dims = list(rep.dims)
    dims[v - 1] = new_dim
    maps = list(rep.maps)
    for a, off in zip(outgoing, offsets):
        tgt = q.arrows[a][1]
        size = rep.dims[tgt - 1]
        maps[a] = _freeze([[coker[k][off + c] for c in range(size)] for k in range(new_dim)])
    return QuiverRepresentation(q.reflected(v), tuple(dims), tuple(maps))


@dataclass(frozen=True)
class ReflectionStep:
    kind: str  # "sink" or "source", applied to the quiver *before* the step
    vertex: int


def reflection_sequence(q: Quiver, beta: Root, prefer: str = "sink") -> tuple[list[ReflectionStep], int]:
    """Admissible sink/source reflections taking ``beta`` to a simple root.

    Best-first search on (total dimension, path length).  Returns the steps
    and the 0-based index of the simple root reached.
    """
    if any(x < 0 for x in beta) or not any(beta):
        raise UnsupportedError(f"{beta} is not a positive vector")
    order = ("sink", "source") if prefer == "sink" else ("source", "sink")
    cap = 2 * sum(beta) + 2 * q.n
    counter = 0
    heap = [(sum(beta), 0, counter, q, tuple(beta), ())]
    seen = {(q.arrows, tuple(beta))}
    while heap:
        _, depth, _, cur, vec, path = heapq.heappop(heap)
        if sum(vec) == 1:
            return [ReflectionStep(k, v) for k, v in path], vec.index(1)
        for kind in order:
            for v in range(1, cur.n + 1):
                ok = cur.is_sink(v) if kind == "sink" else cur.is_source(v)
                if not ok or vec == unit(cur.n, v - 1):
                    continue
                e = unit(cur.n, v - 1)
                new = list(vec)
                new[v - 1] -= symmetric_form(cur, vec, e)
                new = tuple(new)
                if min(new) < 0 or sum(new) > cap:
                    continue
                nq = cur.reflected(v)
                key = (nq.arrows, new)
                if key in seen:
                    continue
                seen.add(key)
                counter += 1
                heapq.heappush(heap, (sum(new), depth + 1, counter, nq, new, path + ((kind, v),)))
    raise UnsupportedError(f"no admissible reflection sequence reduces {beta} to a simple root")


def generic_representation(q: Quiver, beta: Root, attempt: int = 0) -> QuiverRepresentation:
    """Representation with small pseudo-random integer matrices, seeded by ``beta``.

    For a real Schur root the exceptional module has a dense orbit, so a
    generic choice is isomorphic to it; callers verify ``End = k``.
    """
    seed = [attempt, *beta]
    rng = np.random.default_rng(seed)
    maps = []
    for s, t in q.arrows:
        m = rng.integers(-2, 3, size=(beta[t - 1], beta[s - 1]))
        maps.append(_freeze(m.tolist()))
    return QuiverRepresentation(q, tuple(beta), tuple(maps))


def _is_regular(q: Quiver, beta: Root) -> bool:
    rt = classify_type(q)
    return rt.tag is ReprTag.TAME and euler_form(q, rt.null_root, beta) == 0


GENERIC_ATTEMPTS = 4


def build_indecomposable(
    q: Quiver, beta: Root, prefer: str = "sink", field: str | None = None
) -> QuiverRepresentation:
    """Exceptional representation with dimension vector ``beta`` (a positive real root).

    Preprojective and preinjective modules come from reflection functors
    applied to a simple; regular ones in tame type come from a verified
    generic representation.  Raises ``UnsupportedError`` if ``beta`` is not
    the dimension vector of an exceptional module.
    """
    beta = tuple(int(x) for x in beta)
    if len(beta) != q.n:
        raise QuiverError(f"vector {beta} does not have length {q.n}")
    if euler_form(q, beta, beta) != 1:
        raise UnsupportedError(f"{beta} is not a real root")
    if _is_regular(q, beta):
        for attempt in range(GENERIC_ATTEMPTS):
            rep = generic_representation(q, beta, attempt)
            if hom_ext(rep, rep, field)[0] == 1:
                return rep
        raise UnsupportedError(f"{beta} is not the dimension vector of an exceptional module")
    steps, j = reflection_sequence(q, beta, prefer)
    quivers = [q]
    for st in steps:
        quivers.append(quivers[-1].reflected(st.vertex))
    rep = simple_representation(quivers[-1], j)
    for st, before in zip(reversed(steps), reversed(quivers[:-1])):
        # undo a sink reflection with a source reflection and vice versa
        rep = reflect_at_source(rep, st.vertex) if st.kind == "sink" else reflect_at_sink(rep, st.vertex)
        if rep.quiver.arrows != before.arrows:
            raise InconsistencyError("reflection did not restore the orientation")
    if rep.dims != beta:
        raise InconsistencyError(f"reflection functors produced {rep.dims}, expected {beta}")
    return rep


def _integer_map(m: Mat, rows: int, cols: int) -> tuple[np.ndarray, int]:
    den = 1
    for row in m:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    arr = np.zeros((rows, cols), dtype=object)
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            arr[i, j] = int(x * den)
    return arr, den


def _integer_maps(rep: QuiverRepresentation) -> list[tuple[np.ndarray, int]]:
    cached = rep.__dict__.get("_int_maps")
    if cached is None:
        cached = [
            _integer_map(m, rep.dims[t - 1], rep.dims[s - 1]) for (s, t), m in zip(rep.quiver.arrows, rep.maps)
        ]
        object.__setattr__(rep, "_int_maps", cached)
    return cached


def _intertwiner_system(m: QuiverRepresentation, n: QuiverRepresentation) -> np.ndarray:
    """Integer matrix of ``(f_i) -> (f_t M_a - N_a f_s)_a`` on row-major ``vec(f_i)``.

    The rows of each arrow are scaled by the denominators of ``M_a`` and
    ``N_a``, which leaves the rank unchanged.
    """
    q = m.quiver
    if q.arrows != n.quiver.arrows or q.n != n.quiver.n:
        raise QuiverError("representations live on different quivers")
    col_off = [0]
    for i in range(q.n):
        col_off.append(col_off[-1] + n.dims[i] * m.dims[i])
    ncols = col_off[-1]
    blocks = []
    for (s, t), (ma, dm), (na, dn) in zip(q.arrows, _integer_maps(m), _integer_maps(n)):
        s0, t0 = s - 1, t - 1
        block = np.zeros((n.dims[t0] * m.dims[s0], ncols), dtype=object)
        if block.shape[0]:
            # vec(f_t M) = (I kron M^T) vec(f_t);  vec(N f_s) = (N kron I) vec(f_s)
            block[:, col_off[t0] : col_off[t0 + 1]] += dn * np.kron(np.eye(n.dims[t0], dtype=np.int64), ma.T)
            block[:, col_off[s0] : col_off[s0 + 1]] -= dm * np.kron(na, np.eye(m.dims[s0], dtype=np.int64))
        blocks.append(block)
    if not blocks:
        return np.zeros((0, ncols), dtype=object)
    return np.concatenate(blocks, axis=0)


def _rank(system: np.ndarray, field: str) -> int:
    if system.size == 0:
        return 0
    if field == "Q":
        return int(flint.fmpz_mat(system.tolist()).rank())
    p = parse_field(field)
    return _kernels.rank_mod_p(np.asarray(system % p, dtype=np.int64), p)


def parse_field(field: str) -> int:
    """Prime of a ``GF(p)`` field name."""
    inner = field[3:-1] if field.startswith("GF(") and field.endswith(")") else ""
    if inner.isdigit():
        p = int(inner)
        if p > 1 and all(p % d for d in range(2, int(p**0.5) + 1)):
            return p
    raise QuiverError(f"unknown field {field!r}; use 'Q' or 'GF(p)' with p prime")


def hom_ext(m: QuiverRepresentation, n: QuiverRepresentation, field: str | None = None) -> tuple[int, int]:
    system = _intertwiner_system(m, n)
    r = _rank(system, field or default_field())
    return system.shape[1] - r, system.shape[0] - r


def hom_dim(m: QuiverRepresentation, n: QuiverRepresentation, field: str | None = None) -> int:
    return hom_ext(m, n, field)[0]


def ext_dim(m: QuiverRepresentation, n: QuiverRepresentation, field: str | None = None) -> int:
    h, e = hom_ext(m, n, field)
    if h - e != euler_form(m.quiver, m.dims, n.dims):
        raise InconsistencyError("hom - ext disagrees with the Euler form")
    if e < 0:
        raise InconsistencyError("negative Ext dimension")
    return e


class Algebra:
    """A path algebra together with memo tables for modules and Hom/Ext.

    Lookups are guarded by a lock so one instance can be shared by threads.
    """

    def __init__(self, quiver: Quiver, bound: int = DEFAULT_BOUND, field: str | None = None) -> None:
        if bound < 1:
            raise ValueError("bound must be at least 1")
        self.quiver = quiver
        self.n = quiver.n
        self.bound = bound
        self.field = field or default_field()
        if self.field != "Q":
            parse_field(self.field)
        self.rtype = classify_type(quiver)
        self._lock = threading.RLock()
        self._modules: dict[Root, QuiverRepresentation] = {}
        self._homext: dict[tuple[Root, Root], tuple[int, int]] = {}
        self._exceptional: list[Root] | None = None
        self.cache: dict = {}  # scratch space for downstream modules

    @property
    def is_finite(self) -> bool:
        return self.rtype.tag is ReprTag.FINITE

    @property
    def is_tame(self) -> bool:
        return self.rtype.tag is ReprTag.TAME

    def require_supported(self) -> None:
        if self.rtype.tag is ReprTag.WILD:
            raise UnsupportedError("wild representation type is not supported")

    def euler(self, x: Sequence[int], y: Sequence[int]) -> int:
        return euler_form(self.quiver, x, y)

    def module(self, beta: Root) -> QuiverRepresentation:
        beta = tuple(beta)
        with self._lock:
            rep = self._modules.get(beta)
        if rep is None:
            rep = build_indecomposable(self.quiver, beta, field=self.field)
            with self._lock:
                self._modules.setdefault(beta, rep)
        return rep

    def hom_ext(self, a: Root, b: Root) -> tuple[int, int]:
        key = (tuple(a), tuple(b))
        with self._lock:
            hit = self._homext.get(key)
        if hit is not None:
            return hit
        h, e = hom_ext(self.module(a), self.module(b), self.field)
        if h - e != self.euler(a, b) or e < 0 or h < 0:
            raise InconsistencyError(f"hom/ext of {a}, {b} inconsistent with the Euler form")
        with self._lock:
            self._homext[key] = (h, e)
        return h, e

    def hom(self, a: Root, b: Root) -> int:
        return self.hom_ext(a, b)[0]

    def ext(self, a: Root, b: Root) -> int:
        return self.hom_ext(a, b)[1]

    def end_dim(self, beta: Root) -> int:
        return self.hom(beta, beta)

    def is_exceptional(self, beta: Root) -> bool:
        beta = tuple(beta)
        if self.euler(beta, beta) != 1 or min(beta) < 0 or not any(beta):
            return False
        try:
            return self.end_dim(beta) == 1
        except UnsupportedError:
            return False

    def positive_real_roots(self) -> list[Root]:
        self.require_supported()
        return enumerate_positive_real_roots(self.quiver, self.bound, self.rtype)

    def exceptional_roots(self) -> list[Root]:
        """Dimension vectors of exceptional modules (bounded in tame type)."""
        if self._exceptional is None:
            roots = self.positive_real_roots()
            if not self.is_finite:
                roots = [r for r in roots if self.is_exceptional(r)]
            self._exceptional = roots
        return list(self._exceptional)

    def is_exceptional_pair(self, a: Root, b: Root) -> bool:
        """``(a, b)`` is an exceptional pair: ``Hom(b, a) = 0 = Ext(b, a)``."""
        return self.hom_ext(b, a) == (0, 0)


def is_exceptional(q: Quiver | Algebra, beta: Root) -> bool:
    alg = q if isinstance(q, Algebra) else Algebra(q)
    return alg.is_exceptional(tuple(beta))
