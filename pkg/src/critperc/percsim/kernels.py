"""numba kernels: union-find labelling and per-configuration observables."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def union(parent, rank, a, b):
    ra = find(parent, a)
    rb = find(parent, b)
    if ra == rb:
        return
    if rank[ra] < rank[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    if rank[ra] == rank[rb]:
        rank[ra] += 1


@njit(cache=True)
def label(site_open, edges, edge_open):
    """Root of every open site's cluster; -1 for closed sites."""
    n = site_open.shape[0]
    parent = np.arange(n)
    rank = np.zeros(n, np.int32)
    for e in range(edges.shape[0]):
        a = edges[e, 0]
        b = edges[e, 1]
        if edge_open[e] and site_open[a] and site_open[b]:
            union(parent, rank, a, b)
    roots = np.empty(n, np.int64)
    for k in range(n):
        roots[k] = find(parent, k) if site_open[k] else -1
    return roots


@njit(cache=True)
def four_arc(roots, seg_sites, seg_bits):
    """(horizontal crossing, all four arcs joined, number of crossing clusters).

    Bits 0 and 2 are the crossing pair; 1 and 3 are the other two arcs.
    """
    flags = np.zeros(roots.shape[0], np.uint8)
    for k in range(seg_sites.shape[0]):
        r = roots[seg_sites[k]]
        if r >= 0:
            flags[r] |= np.uint8(1 << seg_bits[k])
    crossing = 0
    full = False
    for r in range(flags.shape[0]):
        f = flags[r]
        if (f & 5) == 5:
            crossing += 1
            if f == 15:
                full = True
    return crossing > 0, full, crossing


@njit(cache=True)
def surrounded(roots, indptr, indices, wired, free, apex):
    """Whether the cluster of the wired segment separates apex from the free segment.

    True when apex is in that cluster, or when no path of sites outside the
    cluster leads from apex to a free-segment site.
    """
    hull = roots[wired[0]]
    if roots[apex] == hull:
        return True
    n = roots.shape[0]
    target = np.zeros(n, np.bool_)
    for k in range(free.shape[0]):
        target[free[k]] = True
    seen = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    top = 0
    stack[top] = apex
    top += 1
    seen[apex] = True
    while top > 0:
        top -= 1
        s = stack[top]
        if target[s]:
            return False
        for q in range(indptr[s], indptr[s + 1]):
            nb = indices[q]
            if not seen[nb] and roots[nb] != hull:
                seen[nb] = True
                stack[top] = nb
                top += 1
    return True
