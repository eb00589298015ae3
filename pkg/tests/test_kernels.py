"""Lane agreement for the array kernels: numpy and numba must be twins."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hofix import kernels
from hofix.lattice import boolean, flat, powerset


def lanes():
    return sorted(kernels.LANES)


def random_poset(rng, n):
    """A random reflexive-transitive order matrix on n points."""
    cover = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                cover[i, j] = True
    return kernels._np_transitive_closure(cover)


def test_both_lanes_available_here():
    # numba is installed in this environment, so the dual-lane contract
    # is actually exercised rather than vacuously skipped
    assert "numpy" in kernels.LANES
    assert "numba" in kernels.LANES
    assert kernels.ACTIVE_LANE in kernels.LANES


def test_warmup_runs_every_lane():
    for lane in lanes():
        kernels.warmup(lane)


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="single-lane build")
def test_transitive_closure_agrees():
    rng = np.random.RandomState(0)
    for n in (1, 2, 5, 9):
        for _ in range(5):
            cover = rng.rand(n, n) < 0.3
            a = kernels.LANES["numpy"]["transitive_closure"](cover.copy())
            b = kernels.LANES["numba"]["transitive_closure"](cover.copy())
            assert (a == b).all()


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="single-lane build")
def test_bounds_and_witness_agree_on_lattices():
    import random

    rng = random.Random(3)
    mats = [boolean().leq_matrix, flat(4).leq_matrix, powerset(list("abc")).leq_matrix]
    mats += [random_poset(rng, n) for n in (3, 4, 6)]
    for leq in mats:
        for upper in (True, False):
            ta, ia, ja = kernels.LANES["numpy"]["bounds_table"](leq, upper)
            tb, ib, jb = kernels.LANES["numba"]["bounds_table"](leq, upper)
            assert (ia >= 0) == (ib >= 0)
            if ia < 0:
                assert (ta == tb).all()
        wa = kernels.LANES["numpy"]["antisymmetry_witness"](leq)
        wb = kernels.LANES["numba"]["antisymmetry_witness"](leq)
        assert (wa[0] >= 0) == (wb[0] >= 0)


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="single-lane build")
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**16 - 1), st.integers(2, 4))
def test_monotone_mask_agrees(seed, m):
    rng = np.random.RandomState(seed)
    leq = flat(m - 2).leq_matrix if m > 2 else boolean().leq_matrix
    n = leq.shape[0]
    assignments = rng.randint(0, n, size=(12, 5)).astype(np.int64)
    pairs = rng.randint(0, 5, size=(6, 2)).astype(np.int64)
    a = kernels.LANES["numpy"]["monotone_mask"](assignments, pairs, leq)
    b = kernels.LANES["numba"]["monotone_mask"](assignments, pairs, leq)
    assert (a == b).all()


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="single-lane build")
def test_compose_cat_leq_agree():
    rng = np.random.RandomState(7)
    for _ in range(10):
        m = int(rng.randint(2, 7))
        f = rng.randint(0, m, size=m).astype(np.int64)
        g = rng.randint(0, m, size=m).astype(np.int64)
        assert (
            kernels.LANES["numpy"]["compose_gather"](f, g)
            == kernels.LANES["numba"]["compose_gather"](f, g)
        ).all()
        fb = rng.randint(0, 2, size=(m, m)).astype(np.int64)
        gb = rng.randint(0, 2, size=(m, m)).astype(np.int64)
        mids = np.arange(m, dtype=np.int64)
        a = kernels.LANES["numpy"]["cat_tables"](fb, gb, mids, 1, 0)
        b = kernels.LANES["numba"]["cat_tables"](fb, gb, mids, 1, 0)
        assert (a == b).all()
        leq = boolean().leq_matrix
        xs = rng.randint(0, 2, size=m).astype(np.int64)
        ys = rng.randint(0, 2, size=m).astype(np.int64)
        assert kernels.LANES["numpy"]["leq_pointwise"](xs, ys, leq) == kernels.LANES[
            "numba"
        ]["leq_pointwise"](xs, ys, leq)


def test_monotone_mask_empty_pairs():
    rows = np.zeros((3, 2), dtype=np.int64)
    empty = np.zeros((0, 2), dtype=np.int64)
    leq = boolean().leq_matrix
    for lane in lanes():
        assert kernels.LANES[lane]["monotone_mask"](rows, empty, leq).all()


def test_lane_selection_env(monkeypatch):
    monkeypatch.setenv("HOFIX_KERNELS", "numpy")
    assert kernels._pick_lane() == "numpy"
    monkeypatch.setenv("HOFIX_KERNELS", "nonsense")
    with pytest.raises(RuntimeError):
        kernels._pick_lane()
    monkeypatch.delenv("HOFIX_KERNELS")
    assert kernels._pick_lane() in kernels.LANES
