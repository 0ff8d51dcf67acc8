from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustercat import _kernels
from clustercat.quiver import Quiver, enumerate_positive_real_roots

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba disabled or missing")


def test_rank_mod_p_known():
    assert _kernels.rank_mod_p(np.array([[1, 2], [2, 4]]), use_numba=False) == 1
    assert _kernels.rank_mod_p(np.array([[3, 0], [0, 5]]), 3, use_numba=False) == 1
    assert _kernels.rank_mod_p(np.zeros((0, 3), dtype=np.int64)) == 0


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_rank_paths_agree(rows, cols, seed):
    a = np.random.default_rng(seed).integers(-4, 5, size=(rows, cols))
    assert _kernels.rank_mod_p(a, use_numba=True) == _kernels.rank_mod_p(a, use_numba=False)


@needs_numba
@pytest.mark.parametrize("arrows, n", [(((2, 1), (3, 2)), 3), (((1, 2), (2, 3), (3, 4), (1, 4)), 4)])
def test_tits_paths_agree(arrows, n):
    e = np.array(Quiver(n, arrows).euler_matrix(), dtype=np.int64)
    a = _kernels.tits_unit_vectors(e, 5, use_numba=True)
    b = _kernels.tits_unit_vectors(e, 5, use_numba=False)
    assert np.array_equal(a, b)


def test_root_enumeration_matches_kernel_scan():
    q = Quiver(2, ((1, 2), (1, 2)))
    e = np.array(q.euler_matrix(), dtype=np.int64)
    scan = {tuple(int(x) for x in v) for v in _kernels.tits_unit_vectors(e, 5, use_numba=False) if any(v)}
    assert scan == set(enumerate_positive_real_roots(q, bound=5))
