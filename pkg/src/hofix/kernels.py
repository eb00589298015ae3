"""Array kernels behind the lattice and table machinery.

Two interchangeable lanes compute the same results:

  * "numba"  - loop kernels compiled with @njit (default when numba imports)
  * "numpy"  - vectorised pure-numpy equivalents

Select a lane with the HOFIX_KERNELS environment variable ("numba" or
"numpy").  scripts/benchmark_kernels.py times one lane against the other and
checks they agree.  Everything here works on dense integer element indices
and boolean order matrices; no lattice objects cross this boundary.
"""

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install-time choice
    HAS_NUMBA = False


# ---------------------------------------------------------------------------
# numpy lane


def _np_transitive_closure(cover):
    """Reflexive-transitive closure of a covering relation (n x n bool)."""
    n = cover.shape[0]
    reach = cover | np.eye(n, dtype=bool)
    while True:
        step = (reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0
        if (step == reach).all():
            return reach
        reach = step


def _np_antisymmetry_witness(leq):
    """Return (i, j) with i != j, i <= j and j <= i, or (-1, -1)."""
    n = leq.shape[0]
    bad = leq & leq.T & ~np.eye(n, dtype=bool)
    hits = np.argwhere(bad)
    if len(hits):
        return int(hits[0][0]), int(hits[0][1])
    return -1, -1


def _np_bounds_table(leq, upper):
    """Least-upper-bound (upper=True) or greatest-lower-bound table.

    Returns (table, ok_i, ok_j): table[a, b] is the bound's index; when some
    pair has no unique bound, (ok_i, ok_j) names the witness pair and the
    table contents are unspecified, otherwise ok_i == ok_j == -1.
    """
    n = leq.shape[0]
    rel = leq if upper else leq.T  # rel[x, c]: c bounds x on the chosen side
    # rel doubles as the tightness test: the least upper bound u must
    # satisfy rel[u, c] for every candidate c (dually for glb)
    not_rel_u8 = (~rel).astype(np.uint8)
    table = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        cand = rel[a][None, :] & rel  # cand[b, c]: c bounds both a and b
        # violates[b, u]: some candidate c of (a, b) that u does not precede
        violates = (cand.astype(np.uint8) @ not_rel_u8.T) > 0
        ok = cand & ~violates
        counts = ok.sum(axis=1)
        missing = np.argwhere(counts == 0)
        if len(missing):
            return table, a, int(missing[0][0])
        table[a] = np.argmax(ok, axis=1)
    return table, -1, -1


def _np_monotone_mask(assignments, pairs, leq_result):
    """Keep assignment rows whose values respect every constrained key pair.

    assignments: (T, K) result-element indices per candidate table.
    pairs: (P, 2) key indices with key[p,0] <= key[p,1] in the adjusted
    argument order; a table passes iff its values are ordered accordingly.
    """
    if len(pairs) == 0:
        return np.ones(len(assignments), dtype=bool)
    lo = assignments[:, pairs[:, 0]]
    hi = assignments[:, pairs[:, 1]]
    return leq_result[lo, hi].all(axis=1)


def _np_compose_gather(f, g):
    """Pointwise composition of unary tables: out[x] = f[g[x]]."""
    return f[g]


def _np_cat_tables(f, g, mids, top, bot):
    """Relational concatenation of two binary tables.

    out[i, j] = top when f[i, h] == top and g[h, j] == top for some h in
    mids, else bot.  Tables are (m, m) element-index matrices.
    """
    fa = (f[:, mids] == top).astype(np.uint8)
    ga = (g[mids, :] == top).astype(np.uint8)
    hit = (fa @ ga) > 0
    return np.where(hit, np.int64(top), np.int64(bot))


def _np_leq_pointwise(xs, ys, leq):
    """True when leq[xs[k], ys[k]] holds for every position k."""
    if len(xs) == 0:
        return True
    return bool(leq[xs, ys].all())


# ---------------------------------------------------------------------------
# numba lane (same contracts, loop form)

if HAS_NUMBA:

    @njit(cache=True)
    def _nb_transitive_closure(cover):
        n = cover.shape[0]
        reach = cover.copy()
        for i in range(n):
            reach[i, i] = True
        for k in range(n):
            for i in range(n):
                if reach[i, k]:
                    for j in range(n):
                        if reach[k, j]:
                            reach[i, j] = True
        return reach

    @njit(cache=True)
    def _nb_antisymmetry_witness(leq):
        n = leq.shape[0]
        for i in range(n):
            for j in range(n):
                if i != j and leq[i, j] and leq[j, i]:
                    return i, j
        return -1, -1

    @njit(cache=True)
    def _nb_bounds_table(leq, upper):
        n = leq.shape[0]
        table = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                found = -1
                for u in range(n):
                    cand_u = (leq[a, u] and leq[b, u]) if upper else (leq[u, a] and leq[u, b])
                    if not cand_u:
                        continue
                    is_bound = True
                    for c in range(n):
                        cand_c = (leq[a, c] and leq[b, c]) if upper else (leq[c, a] and leq[c, b])
                        if cand_c:
                            ordered = leq[u, c] if upper else leq[c, u]
                            if not ordered:
                                is_bound = False
                                break
                    if is_bound:
                        found = u
                        break
                if found < 0:
                    return table, a, b
                table[a, b] = found
        return table, -1, -1

    @njit(cache=True)
    def _nb_monotone_mask(assignments, pairs, leq_result):
        t = assignments.shape[0]
        p = pairs.shape[0]
        mask = np.ones(t, dtype=np.bool_)
        for row in range(t):
            for q in range(p):
                lo = assignments[row, pairs[q, 0]]
                hi = assignments[row, pairs[q, 1]]
                if not leq_result[lo, hi]:
                    mask[row] = False
                    break
        return mask

    @njit(cache=True)
    def _nb_compose_gather(f, g):
        out = np.empty(g.shape[0], dtype=np.int64)
        for x in range(g.shape[0]):
            out[x] = f[g[x]]
        return out

    @njit(cache=True)
    def _nb_cat_tables(f, g, mids, top, bot):
        m = f.shape[0]
        out = np.full((m, m), bot, dtype=np.int64)
        for i in range(m):
            for j in range(m):
                for t in range(mids.shape[0]):
                    h = mids[t]
                    if f[i, h] == top and g[h, j] == top:
                        out[i, j] = top
                        break
        return out

    @njit(cache=True)
    def _nb_leq_pointwise(xs, ys, leq):
        for k in range(xs.shape[0]):
            if not leq[xs[k], ys[k]]:
                return False
        return True


_KERNEL_NAMES = (
    "transitive_closure",
    "antisymmetry_witness",
    "bounds_table",
    "monotone_mask",
    "compose_gather",
    "cat_tables",
    "leq_pointwise",
)

LANES = {"numpy": {name: globals()["_np_" + name] for name in _KERNEL_NAMES}}
if HAS_NUMBA:
    LANES["numba"] = {name: globals()["_nb_" + name] for name in _KERNEL_NAMES}


def _pick_lane():
    wanted = os.environ.get("HOFIX_KERNELS", "").strip().lower()
    if wanted:
        if wanted not in LANES:
            raise RuntimeError(
                "HOFIX_KERNELS=%r not available (choices: %s)" % (wanted, sorted(LANES))
            )
        return wanted
    return "numba" if "numba" in LANES else "numpy"


ACTIVE_LANE = _pick_lane()
_active = LANES[ACTIVE_LANE]

transitive_closure = _active["transitive_closure"]
antisymmetry_witness = _active["antisymmetry_witness"]
bounds_table = _active["bounds_table"]
monotone_mask = _active["monotone_mask"]
compose_gather = _active["compose_gather"]
cat_tables = _active["cat_tables"]
leq_pointwise = _active["leq_pointwise"]


def warmup(lane=None):
    """Run every kernel once on toy inputs.

    With the numba lane this forces JIT compilation up front so timing-
    sensitive callers do not pay it mid-measurement.
    """
    fns = LANES[lane] if lane else _active
    cover = np.zeros((2, 2), dtype=bool)
    cover[0, 1] = True
    leq = fns["transitive_closure"](cover)
    fns["antisymmetry_witness"](leq)
    fns["bounds_table"](leq, True)
    fns["bounds_table"](leq, False)
    fns["monotone_mask"](
        np.array([[0, 1], [1, 0]], dtype=np.int64),
        np.array([[0, 1]], dtype=np.int64),
        leq,
    )
    fns["compose_gather"](np.array([1, 0], dtype=np.int64), np.array([0, 1], dtype=np.int64))
    fns["cat_tables"](
        np.zeros((2, 2), dtype=np.int64),
        np.zeros((2, 2), dtype=np.int64),
        np.array([0], dtype=np.int64),
        1,
        0,
    )
    fns["leq_pointwise"](np.array([0], dtype=np.int64), np.array([1], dtype=np.int64), leq)
