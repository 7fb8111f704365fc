"""Pure-numpy fallback kernels, signature-compatible with `_kernels_numba`.

Selected via ``CSPATH_BACKEND=numpy`` (or automatically when numba is not
importable).  Hashing and Dijkstra row relaxation are vectorized; the
Pareto label-setting loop is plain Python around a heapq and is the slow
path — fine for correctness work and small graphs, not for n in the
thousands.  Both backends must produce bit-identical weights and label
sets; the test suite cross-checks them.
"""

import heapq
import math

import numpy as np

_ADD = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)

NUMBA_BACKEND = False


def _mix64(z):
    # z: uint64 ndarray; wrapping mod 2**64 is numpy's native behaviour
    z = z + _ADD
    z = (z ^ (z >> np.uint64(30))) * _MUL1
    z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


def _edge_u01(seed, us, vs, channel):
    key = (us.astype(np.uint64) << np.uint64(32)) | vs.astype(np.uint64)
    h = _mix64(_mix64(_mix64(np.full_like(key, seed)) ^ key) ^ np.uint64(channel))
    return ((h >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0**-53


def _transform(u01, kind, param, thr):
    # transcendentals go through scalar libm: numpy's SIMD pow/log are off
    # by 1 ulp from libm on a small fraction of inputs, and this backend
    # must match the numba kernels bit for bit
    if kind == 0:
        return u01
    if kind == 1:
        if param == 1.0:
            return u01
        return np.array([math.pow(x, param) for x in u01.tolist()])
    xs = [-math.log(x) for x in u01.tolist()]
    if kind == 2:
        return np.array([math.pow(x, param) for x in xs])
    return np.array([math.pow(x, param) if x <= thr else math.inf for x in xs])


def _tri_rows(n, u, vs):
    us = np.minimum(u, vs)
    vv = np.maximum(u, vs)
    return us * (2 * n - us - 1) // 2 + (vv - us - 1)


def _row_weights(n, mode, arr, seed, kind, param, thr, u, vs, channel):
    """Weights of edges {u, t} for an array of targets vs."""
    if mode == 1:
        return arr[_tri_rows(n, u, vs)]
    us = np.minimum(u, vs).astype(np.uint64)
    vv = np.maximum(u, vs).astype(np.uint64)
    return _transform(_edge_u01(np.uint64(seed), us, vv, channel), kind, param, thr)


def batch_uniforms(seed, us, vs, channel):
    return _edge_u01(np.uint64(seed), us.astype(np.uint64), vs.astype(np.uint64), channel)


def materialize(n, seed, lkind, lparam, lthr, ckind, cparam, cthr):
    us, vs = np.triu_indices(n, k=1)
    us = us.astype(np.uint64)
    vs = vs.astype(np.uint64)
    seed = np.uint64(seed)
    w = _transform(_edge_u01(seed, us, vs, 0), lkind, lparam, lthr)
    c = _transform(_edge_u01(seed, us, vs, 1), ckind, cparam, cthr)
    return w, c


def dijkstra(n, source, target, lam, mode, warr, carr, seed,
             lkind, lparam, lthr, ckind, cparam, cthr):
    dist = np.full(n, np.inf)
    hops = np.full(n, -1, np.int64)
    parent = np.full(n, -1, np.int64)
    done = np.zeros(n, np.bool_)
    dist[source] = 0.0
    hops[source] = 0
    use_cost = lam != 0.0
    ts = np.arange(n)
    for _ in range(n):
        masked = np.where(done, np.inf, dist)
        u = int(np.argmin(masked))
        if masked[u] == np.inf:
            break
        done[u] = True
        if u == target:
            break
        w = _row_weights(n, mode, warr, seed, lkind, lparam, lthr, u, ts, 0)
        if use_cost:
            cw = _row_weights(n, mode, carr, seed, ckind, cparam, cthr, u, ts, 1)
            w = w + lam * cw
        nd = dist[u] + w
        hu1 = hops[u] + 1
        relax = ~done & (ts != u) & np.isfinite(nd)
        better = relax & (nd < dist)
        tie = relax & (nd == dist) & (hu1 < hops)
        dist[better] = nd[better]
        upd = better | tie
        parent[upd] = u
        hops[upd] = hu1
    return dist, parent, hops


def pareto_labels(n, source, mode, warr, carr, seed,
                  lkind, lparam, lthr, ckind, cparam, cthr, label_cap):
    """Same contract as the numba kernel; see its docstring."""
    last_cost = np.full(n, np.inf)
    plen, pcost, pnode, ppar, phop = [], [], [], [], []
    heap = [(0.0, 0.0, source, -1)]
    ts = np.arange(n)
    status = 0
    over_node = -1

    while heap:
        top_l, top_c, v, par = heapq.heappop(heap)
        if last_cost[v] <= top_c:
            continue
        plen.append(top_l)
        pcost.append(top_c)
        pnode.append(v)
        ppar.append(par)
        phop.append(0 if par < 0 else phop[par] + 1)
        last_cost[v] = top_c
        perm_idx = len(plen) - 1
        if len(plen) > label_cap:
            status = 1
            over_node = v
            break

        cand = ts[(ts != v) & (ts != source) & (top_c < last_cost)]
        if cand.size == 0:
            continue
        cw = _row_weights(n, mode, carr, seed, ckind, cparam, cthr, v, cand, 1)
        nc = top_c + cw
        keep = nc < last_cost[cand]
        cand = cand[keep]
        if cand.size == 0:
            continue
        nc = nc[keep]
        lw = _row_weights(n, mode, warr, seed, lkind, lparam, lthr, v, cand, 0)
        keep = np.isfinite(lw)
        for t, c_t, l_t in zip(cand[keep], nc[keep], top_l + lw[keep]):
            heapq.heappush(heap, (float(l_t), float(c_t), int(t), perm_idx))
        if len(heap) + len(plen) > label_cap:
            status = 1
            over_node = int(cand[0]) if cand.size else v
            break

    return (np.asarray(plen, np.float64), np.asarray(pcost, np.float64),
            np.asarray(pnode, np.int32), np.asarray(ppar, np.int32),
            np.asarray(phop, np.int32), len(plen), status, over_node)
