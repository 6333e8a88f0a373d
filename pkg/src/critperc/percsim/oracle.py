"""Plain breadth-first flood fill, used to cross-check the union-find kernels."""

from __future__ import annotations

from collections import deque

import numpy as np


def flood_labels(n_sites, edges, site_open, edge_open=None) -> np.ndarray:
    """Cluster label per site (smallest site index in the cluster); -1 if closed."""
    adj = [[] for _ in range(n_sites)]
    for e, (a, b) in enumerate(edges):
        if edge_open is None or edge_open[e]:
            adj[a].append(b)
            adj[b].append(a)
    lab = np.full(n_sites, -1, dtype=np.int64)
    for s in range(n_sites):
        if not site_open[s] or lab[s] >= 0:
            continue
        lab[s] = s
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if site_open[y] and lab[y] < 0:
                    lab[y] = s
                    queue.append(y)
    return lab


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    """Whether two labelings describe the same clusters (and the same closed sites)."""
    if a.shape != b.shape or not np.array_equal(a < 0, b < 0):
        return False
    fwd: dict = {}
    back: dict = {}
    for x, y in zip(a.tolist(), b.tolist()):
        if x < 0:
            continue
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def four_arc_oracle(labels, segments) -> tuple[bool, bool, int]:
    """Same observables as kernels.four_arc, with Python sets."""
    touched = [set(int(labels[s]) for s in seg if labels[s] >= 0) for seg in segments]
    crossing = touched[0] & touched[2]
    full = crossing & touched[1] & touched[3]
    return bool(crossing), bool(full), len(crossing)
