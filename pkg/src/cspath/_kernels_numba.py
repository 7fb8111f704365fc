"""Numba kernels: per-edge hashing, dense Dijkstra, Pareto label setting.

Same call signatures as `_kernels_numpy`; the backend module picks one.
All kernels release the GIL so experiment trials can run in threads.

Edge access is uniform across the two storage modes: ``mode == 0`` hashes
(seed, u, v, channel) on the fly, ``mode == 1`` reads the materialized
triangular arrays ``warr``/``carr``.
"""

import numpy as np
from numba import njit

_ADD = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S32 = np.uint64(32)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO_M53 = 2.0**-53

NUMBA_BACKEND = True


@njit(inline="always")
def _mix64(z):
    z = z + _ADD
    z = (z ^ (z >> _S30)) * _MUL1
    z = (z ^ (z >> _S27)) * _MUL2
    return z ^ (z >> _S31)


@njit(inline="always")
def _edge_u01(seed, u, v, channel):
    key = (np.uint64(u) << _S32) | np.uint64(v)
    h = _mix64(_mix64(_mix64(seed) ^ key) ^ np.uint64(channel))
    return np.float64((h >> _S11) + _ONE) * _TWO_M53


@njit(inline="always")
def _edge_u01p(seedmix, u, v, channel):
    # seedmix = _mix64(seed), hoisted out of the hot loops
    key = (np.uint64(u) << _S32) | np.uint64(v)
    h = _mix64(_mix64(seedmix ^ key) ^ np.uint64(channel))
    return np.float64((h >> _S11) + _ONE) * _TWO_M53


@njit(inline="always")
def _transform(u01, kind, param, thr):
    if kind == 0:
        return u01
    if kind == 1:
        if param == 1.0:
            return u01
        return u01**param
    x = -np.log(u01)
    if kind == 2:
        return x**param
    if x <= thr:
        return x**param
    return np.inf


@njit(inline="always")
def _tri(n, u, v):
    # index of edge {u, v}, u < v, in lexicographic (u, v) order
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


@njit(inline="always")
def _edge_w(n, mode, arr, seedmix, kind, param, thr, u, v, channel):
    if mode == 1:
        return arr[_tri(n, u, v)]
    return _transform(_edge_u01p(seedmix, u, v, channel), kind, param, thr)


@njit(cache=True, nogil=True)
def batch_uniforms(seed, us, vs, channel):
    """Uniform draws for edge arrays (us[i] < vs[i])."""
    out = np.empty(us.shape[0])
    for i in range(us.shape[0]):
        out[i] = _edge_u01(seed, us[i], vs[i], channel)
    return out


@njit(cache=True, nogil=True)
def materialize(n, seed, lkind, lparam, lthr, ckind, cparam, cthr):
    """Edge tables (w, c) for all {u, v}, u < v, in lexicographic order."""
    m = n * (n - 1) // 2
    seedmix = _mix64(seed)
    w = np.empty(m)
    c = np.empty(m)
    i = 0
    for u in range(n - 1):
        for v in range(u + 1, n):
            w[i] = _transform(_edge_u01p(seedmix, u, v, 0), lkind, lparam, lthr)
            c[i] = _transform(_edge_u01p(seedmix, u, v, 1), ckind, cparam, cthr)
            i += 1
    return w, c


@njit(cache=True, nogil=True)
def dijkstra(n, source, target, lam, mode, warr, carr, seed,
             lkind, lparam, lthr, ckind, cparam, cthr):
    """Dense single-criterion Dijkstra under edge weight w + lam*c.

    O(n^2); right shape for complete graphs.  ``lam == 0`` never touches the
    cost channel (so an infinite truncated cost cannot poison a pure length
    query).  Settles nodes smallest-distance first, ids break ties; equal
    tentative distances prefer fewer hops.  Stops once ``target`` is settled
    (``target < 0`` settles everything).
    """
    seedmix = _mix64(seed)
    dist = np.full(n, np.inf)
    hops = np.full(n, -1, np.int64)
    parent = np.full(n, -1, np.int64)
    done = np.zeros(n, np.bool_)
    dist[source] = 0.0
    hops[source] = 0
    use_cost = lam != 0.0
    for _ in range(n):
        u = -1
        best = np.inf
        for i in range(n):
            if not done[i] and dist[i] < best:
                best = dist[i]
                u = i
        if u < 0:
            break
        done[u] = True
        if u == target:
            break
        du = dist[u]
        hu1 = hops[u] + 1
        for t in range(n):
            if done[t] or t == u:
                continue
            if u < t:
                a, b = u, t
            else:
                a, b = t, u
            w = _edge_w(n, mode, warr, seedmix, lkind, lparam, lthr, a, b, 0)
            if w == np.inf:
                continue
            if use_cost:
                cw = _edge_w(n, mode, carr, seedmix, ckind, cparam, cthr, a, b, 1)
                if cw == np.inf:
                    continue
                w = w + lam * cw
            nd = du + w
            if nd < dist[t]:
                dist[t] = nd
                parent[t] = u
                hops[t] = hu1
            elif nd == dist[t] and hu1 < hops[t]:
                parent[t] = u
                hops[t] = hu1
    return dist, parent, hops


@njit(inline="always")
def _heap_less(hl, hc, hn, i, j):
    if hl[i] != hl[j]:
        return hl[i] < hl[j]
    if hc[i] != hc[j]:
        return hc[i] < hc[j]
    return hn[i] < hn[j]


@njit(inline="always")
def _heap_swap(hl, hc, hn, npos, i, j):
    hl[i], hl[j] = hl[j], hl[i]
    hc[i], hc[j] = hc[j], hc[i]
    ni = hn[i]
    nj = hn[j]
    hn[i] = nj
    hn[j] = ni
    npos[nj] = i
    npos[ni] = j


@njit(inline="always")
def _sift_up(hl, hc, hn, npos, pos):
    while pos > 0:
        up = (pos - 1) >> 1
        if _heap_less(hl, hc, hn, pos, up):
            _heap_swap(hl, hc, hn, npos, pos, up)
            pos = up
        else:
            break


@njit(inline="always")
def _sift_down(hl, hc, hn, npos, size, pos):
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        right = child + 1
        if right < size and _heap_less(hl, hc, hn, right, child):
            child = right
        if _heap_less(hl, hc, hn, child, pos):
            _heap_swap(hl, hc, hn, npos, pos, child)
            pos = child
        else:
            break


@njit(cache=True, nogil=True)
def pareto_labels(n, source, mode, warr, carr, seed,
                  lkind, lparam, lthr, ckind, cparam, cthr, label_cap):
    """Bicriteria label setting over the complete graph.

    Conceptually: pop (length, cost, node) lexicographically across all
    pending labels; a popped label is installed unless weakly dominated by
    an installed label at its node, then extended to every node except the
    source and its own.  Because installs at a node happen in lexicographic
    order, the dominance test is one compare against the node's cheapest
    installed cost.

    The pending set is organized the way multiobjective Dijkstra codes do
    it: each node keeps its own pending labels as a Pareto set (a sorted
    row of a ring-buffered matrix), and a node-indexed binary heap ranks
    only the per-node lexicographic minima.  Extensions whose cost already
    loses to the target's cheapest installed or pending-row cost are pruned
    on arrival (so the cost channel is hashed before the length channel),
    which keeps the pending set near the size of the final frontier instead
    of the raw push count.

    Returns (lengths, costs, nodes, parents, hops, count, status,
    overflow_node): the installed labels in pop order, which per node is
    exactly the Pareto frontier sorted by increasing length / decreasing
    cost.  status 1 means ``label_cap`` was exceeded (installed plus
    pending) and identifies the offending node.
    """
    seedmix = _mix64(seed)
    last_cost = np.full(n, np.inf)

    pcap = 1024
    plen = np.empty(pcap)
    pcost = np.empty(pcap)
    pnode = np.empty(pcap, np.int32)
    ppar = np.empty(pcap, np.int32)
    phop = np.empty(pcap, np.int32)
    nperm = 0

    # pending pools: one ring-offset sorted row per node; the tail entry
    # (max length, min cost) is mirrored in flat arrays so the hot filter
    # never touches the matrix
    qcap = 8
    qlen = np.empty((n, qcap))
    qcost = np.empty((n, qcap))
    qpar = np.empty((n, qcap), np.int32)
    qoff = np.zeros(n, np.int64)
    qsz = np.zeros(n, np.int64)
    tail_len = np.empty(n)
    tail_cost = np.empty(n)
    pending = 0

    # node-indexed heap over pool heads
    hl = np.empty(n)
    hc = np.empty(n)
    hn = np.empty(n, np.int64)
    npos = np.full(n, -1, np.int64)
    hsize = 0

    status = 0
    over_node = -1

    # root label: the empty path at the source
    qlen[source, 0] = 0.0
    qcost[source, 0] = 0.0
    qpar[source, 0] = -1
    qsz[source] = 1
    tail_len[source] = 0.0
    tail_cost[source] = 0.0
    pending = 1
    hl[0] = 0.0
    hc[0] = 0.0
    hn[0] = source
    npos[source] = 0
    hsize = 1

    while hsize > 0:
        v = hn[0]
        off = qoff[v]
        top_l = qlen[v, off]
        top_c = qcost[v, off]
        par = np.int64(qpar[v, off])
        qoff[v] = off + 1
        qsz[v] -= 1
        pending -= 1

        # install (pool entries are maintained nondominated, so no check)
        if nperm == pcap:
            pcap *= 2
            nplen = np.empty(pcap)
            npcost = np.empty(pcap)
            npnode = np.empty(pcap, np.int32)
            nppar = np.empty(pcap, np.int32)
            nphop = np.empty(pcap, np.int32)
            nplen[:nperm] = plen[:nperm]
            npcost[:nperm] = pcost[:nperm]
            npnode[:nperm] = pnode[:nperm]
            nppar[:nperm] = ppar[:nperm]
            nphop[:nperm] = phop[:nperm]
            plen, pcost, pnode, ppar, phop = nplen, npcost, npnode, nppar, nphop
        plen[nperm] = top_l
        pcost[nperm] = top_c
        pnode[nperm] = np.int32(v)
        ppar[nperm] = np.int32(par)
        phop[nperm] = 0 if par < 0 else phop[par] + 1
        last_cost[v] = top_c
        perm_idx = nperm
        nperm += 1
        if nperm + pending > label_cap:
            status = 1
            over_node = v
            break

        # drop pending labels at v that the install now dominates; the row
        # is sorted with decreasing cost, so they sit at the head
        off = qoff[v]
        while qsz[v] > 0 and qcost[v, off] >= top_c:
            off += 1
            qsz[v] -= 1
            pending -= 1
        qoff[v] = off

        # re-key v's heap slot with the new pool head, or drop it
        pos = npos[v]
        if qsz[v] > 0:
            hl[pos] = qlen[v, off]
            hc[pos] = qcost[v, off]
            _sift_down(hl, hc, hn, npos, hsize, pos)
        else:
            hsize -= 1
            if pos != hsize:
                hl[pos] = hl[hsize]
                hc[pos] = hc[hsize]
                moved = hn[hsize]
                hn[pos] = moved
                npos[moved] = pos
                _sift_up(hl, hc, hn, npos, pos)
                _sift_down(hl, hc, hn, npos, hsize, pos)
            npos[v] = -1

        # extend
        for t in range(n):
            if t == v or t == source:
                continue
            if top_c >= last_cost[t]:
                continue
            if v < t:
                a, b = v, t
            else:
                a, b = t, v
            cw = _edge_w(n, mode, carr, seedmix, ckind, cparam, cthr, a, b, 1)
            nc = top_c + cw
            if last_cost[t] <= nc:
                continue
            sz = qsz[t]
            # the pool tail dominates anything at least as long and costly;
            # top_l under-approximates the newcomer's length, so this fires
            # before the length channel is hashed
            if sz > 0 and tail_cost[t] <= nc and tail_len[t] <= top_l:
                continue
            lw = _edge_w(n, mode, warr, seedmix, lkind, lparam, lthr, a, b, 0)
            if lw == np.inf:
                continue
            nl = top_l + lw

            toff = qoff[t]
            append = False
            if sz == 0:
                append = True
            elif nl > tail_len[t]:
                if tail_cost[t] <= nc:
                    continue
                append = True
            if append:
                # common case: candidates trend longer than the pool tail
                if toff + sz == qcap:
                    if toff > 0:
                        for i in range(sz):
                            qlen[t, i] = qlen[t, toff + i]
                            qcost[t, i] = qcost[t, toff + i]
                            qpar[t, i] = qpar[t, toff + i]
                        qoff[t] = 0
                        toff = 0
                    else:
                        qcap2 = qcap * 2
                        nqlen = np.empty((n, qcap2))
                        nqcost = np.empty((n, qcap2))
                        nqpar = np.empty((n, qcap2), np.int32)
                        nqlen[:, :qcap] = qlen
                        nqcost[:, :qcap] = qcost
                        nqpar[:, :qcap] = qpar
                        qlen, qcost, qpar = nqlen, nqcost, nqpar
                        qcap = qcap2
                end = toff + sz
                qlen[t, end] = nl
                qcost[t, end] = nc
                qpar[t, end] = np.int32(perm_idx)
                qsz[t] = sz + 1
                tail_len[t] = nl
                tail_cost[t] = nc
                pending += 1
                if sz == 0:
                    # only an append into an empty pool changes the head
                    pos = npos[t]
                    if pos < 0:
                        hl[hsize] = nl
                        hc[hsize] = nc
                        hn[hsize] = t
                        npos[t] = hsize
                        _sift_up(hl, hc, hn, npos, hsize)
                        hsize += 1
                    else:
                        hl[pos] = nl
                        hc[pos] = nc
                        _sift_up(hl, hc, hn, npos, pos)
                continue

            # slow path: the newcomer lands inside the sorted row
            if toff + sz == qcap:
                if toff > 0:
                    for i in range(sz):
                        qlen[t, i] = qlen[t, toff + i]
                        qcost[t, i] = qcost[t, toff + i]
                        qpar[t, i] = qpar[t, toff + i]
                    qoff[t] = 0
                    toff = 0
                else:
                    qcap2 = qcap * 2
                    nqlen = np.empty((n, qcap2))
                    nqcost = np.empty((n, qcap2))
                    nqpar = np.empty((n, qcap2), np.int32)
                    nqlen[:, :qcap] = qlen
                    nqcost[:, :qcap] = qcost
                    nqpar[:, :qcap] = qpar
                    qlen, qcost, qpar = nqlen, nqcost, nqpar
                    qcap = qcap2

            # locate insertion point: first row slot with length >= nl
            lo = toff
            hi_ = toff + sz
            while lo < hi_:
                mid = (lo + hi_) >> 1
                if qlen[t, mid] < nl:
                    lo = mid + 1
                else:
                    hi_ = mid
            # dominated by the preceding (shorter, maybe cheaper) entry?
            if lo > toff and qcost[t, lo - 1] <= nc:
                continue
            # equal length, no more expensive: keep the incumbent
            if lo < toff + sz and qlen[t, lo] == nl and qcost[t, lo] <= nc:
                continue
            # evict pending entries the newcomer dominates
            j = lo
            end = toff + sz
            while j < end and qcost[t, j] >= nc:
                j += 1
            if j > lo:
                k = lo
                for i in range(j, end):
                    qlen[t, k] = qlen[t, i]
                    qcost[t, k] = qcost[t, i]
                    qpar[t, k] = qpar[t, i]
                    k += 1
                sz -= j - lo
                pending -= j - lo
                end = toff + sz
            # shift the tail right and insert
            i = end
            while i > lo:
                qlen[t, i] = qlen[t, i - 1]
                qcost[t, i] = qcost[t, i - 1]
                qpar[t, i] = qpar[t, i - 1]
                i -= 1
            qlen[t, lo] = nl
            qcost[t, lo] = nc
            qpar[t, lo] = np.int32(perm_idx)
            qsz[t] = sz + 1
            pending += 1
            end = toff + qsz[t]
            tail_len[t] = qlen[t, end - 1]
            tail_cost[t] = qcost[t, end - 1]

            if lo == toff:
                # new pool head: refresh t's heap entry
                pos = npos[t]
                if pos < 0:
                    hl[hsize] = nl
                    hc[hsize] = nc
                    hn[hsize] = t
                    npos[t] = hsize
                    _sift_up(hl, hc, hn, npos, hsize)
                    hsize += 1
                else:
                    hl[pos] = nl
                    hc[pos] = nc
                    _sift_up(hl, hc, hn, npos, pos)
        # cap check once per install: the extension pass adds at most n-2
        # pending labels, immaterial against the 1e8-scale default cap
        if nperm + pending > label_cap:
            status = 1
            over_node = v
            break

    return (plen[:nperm].copy(), pcost[:nperm].copy(), pnode[:nperm].copy(),
            ppar[:nperm].copy(), phop[:nperm].copy(), nperm, status, over_node)
