"""Integer kernels with a numba path and a pure-numpy fallback.

Set ``CLUSTERCAT_NUMBA=0`` in the environment to force the numpy path.
Both paths return identical results; ``tests/test_kernels.py`` checks this.
"""

from __future__ import annotations

import os

import numpy as np

PRIME = 32003

_WANT_NUMBA = os.environ.get("CLUSTERCAT_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        below = m[r + 1 :, c].copy()
        hit = np.nonzero(below)[0]
        if hit.size:
            idx = r + 1 + hit
            m[idx] = (m[idx] - np.outer(below[hit], m[r])) % p
        r += 1
    return r


def _tits_unit_vectors_numpy(e: np.ndarray, bound: int) -> np.ndarray:
    n = e.shape[0]
    side = bound + 1
    total = side**n
    out = []
    chunk = 1 << 16
    sym = e + e.T
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        vecs = np.empty((idx.size, n), dtype=np.int64)
        rem = idx.copy()
        for i in range(n - 1, -1, -1):
            vecs[:, i] = rem % side
            rem //= side
        q2 = np.einsum("ki,ij,kj->k", vecs, sym, vecs)
        out.append(vecs[(q2 == 2)])
    return np.concatenate(out) if out else np.empty((0, n), dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _rank_mod_p_numba(a, p):
        m = a.copy()
        rows, cols = m.shape
        for i in range(rows):
            for j in range(cols):
                m[i, j] %= p
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if m[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = m[r, j]
                    m[r, j] = m[piv, j]
                    m[piv, j] = t
            # modular inverse by Fermat
            base = m[r, c]
            inv = 1
            ex = p - 2
            while ex > 0:
                if ex & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                ex >>= 1
            for j in range(cols):
                m[r, j] = (m[r, j] * inv) % p
            for i in range(r + 1, rows):
                f = m[i, c]
                if f != 0:
                    for j in range(c, cols):
                        m[i, j] = (m[i, j] - f * m[r, j]) % p
            r += 1
        return r

    @njit(cache=True)
    def _tits_unit_vectors_numba(e, bound):
        n = e.shape[0]
        side = bound + 1
        total = 1
        for _ in range(n):
            total *= side
        hits = np.empty((0, n), dtype=np.int64)
        buf = np.empty((1024, n), dtype=np.int64)
        count = 0
        v = np.zeros(n, dtype=np.int64)
        for _ in range(total):
            q = 0
            for i in range(n):
                if v[i] != 0:
                    for j in range(n):
                        q += v[i] * e[i, j] * v[j]
            if q == 1:
                if count == buf.shape[0]:
                    hits = np.concatenate((hits, buf))
                    count = 0
                buf[count, :] = v
                count += 1
            k = n - 1
            while k >= 0:
                v[k] += 1
                if v[k] <= bound:
                    break
                v[k] = 0
                k -= 1
        return np.concatenate((hits, buf[:count]))


def rank_mod_p(a: np.ndarray, p: int = PRIME, *, use_numba: bool | None = None) -> int:
    """Rank of an integer matrix over GF(p)."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return int(_rank_mod_p_numba(a, p))
    return _rank_mod_p_numpy(a, p)


def tits_unit_vectors(e: np.ndarray, bound: int, *, use_numba: bool | None = None) -> np.ndarray:
    """All ``x`` in ``[0, bound]^n`` with ``x^T e x == 1``, in odometer order."""
    e = np.asarray(e, dtype=np.int64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _tits_unit_vectors_numba(e, bound)
    return _tits_unit_vectors_numpy(e, bound)
