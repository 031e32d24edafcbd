"""Minimal tree length ``tau`` of a set of lattice sites.

``tau`` is measured in the nearest-neighbour lattice graph: the smallest
number of unit edges of a connected subgraph containing all terminals.
Steiner points may be any lattice site of the host graph, which is the
closure of a :class:`~treedecay.lattice.Box` when one is given and the
bounding box of the terminals otherwise (on a grid the bounding box always
contains an optimal tree).
"""
from collections import deque
from itertools import combinations, product

import numpy as np

from .errors import DomainError, ResourceError
from .lattice import lattice_neighbors

MAX_TERMINALS = 8
MAX_VERTICES = 4096


def host_sites(terminals, box=None):
    """Vertices of the host graph, in canonical order."""
    if box is not None:
        sites = list(box.sites) + list(box.boundary_sites())
        for t in terminals:
            if not box.is_interior(t):
                raise DomainError(f"terminal {t} is not an interior site of {box!r}")
        return sorted(sites)
    arr = np.array(terminals)
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    return sorted(product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def _graph(sites):
    index = {s: k for k, s in enumerate(sites)}
    adj = [[index[t] for t in lattice_neighbors(s) if t in index] for s in sites]
    return index, adj


def _bfs(adj, src):
    dist = [-1] * len(adj)
    pred = [-1] * len(adj)
    dist[src] = 0
    q = deque([src])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                pred[w] = v
                q.append(w)
    return dist, pred


def _prepare(terminals, box):
    terms = sorted({tuple(int(x) for x in t) for t in terminals})
    if not terms:
        raise DomainError("need at least one terminal")
    if len({len(t) for t in terms}) != 1:
        raise DomainError("terminals of mixed dimension")
    if len(terms) > MAX_TERMINALS:
        raise ResourceError(f"{len(terms)} terminals, limit is {MAX_TERMINALS}",
                            required=len(terms), cap=MAX_TERMINALS)
    sites = host_sites(terms, box)
    if len(sites) > MAX_VERTICES:
        raise ResourceError(f"host graph has {len(sites)} vertices, limit is {MAX_VERTICES}",
                            required=len(sites), cap=MAX_VERTICES)
    return terms, sites


def steiner_tree(terminals, box=None):
    """Dreyfus-Wagner dynamic programme over terminal subsets.

    Returns ``(tau, edges)`` with one optimal tree as a sorted list of site
    pairs.
    """
    terms, sites = _prepare(terminals, box)
    if len(terms) == 1:
        return 0, []
    index, adj = _graph(sites)
    V = len(sites)
    bfs = [_bfs(adj, v) for v in range(V)]
    dist = np.array([d for d, _ in bfs], dtype=np.int64)
    if (dist < 0).any():
        raise DomainError("host graph is disconnected")
    t_idx = [index[t] for t in terms]
    # the last terminal is the final root; DP over subsets of the others
    k = len(terms) - 1
    full = (1 << k) - 1
    INF = np.iinfo(np.int64).max // 4
    dp = np.full((full + 1, V), INF, dtype=np.int64)
    via = np.full((full + 1, V), -1, dtype=np.int64)
    split = np.zeros((full + 1, V), dtype=np.int64)
    for i in range(k):
        dp[1 << i] = dist[t_idx[i]]
    for S in range(1, full + 1):
        if S & (S - 1) == 0:
            continue
        g = np.full(V, INF, dtype=np.int64)
        gsplit = np.zeros(V, dtype=np.int64)
        low = S & -S
        rest = S ^ low
        R = rest
        # S1 = low | R over proper subsets R of rest, so each split is seen once
        while True:
            R = (R - 1) & rest
            S1 = low | R
            cand = dp[S1] + dp[S ^ S1]
            better = cand < g
            g = np.where(better, cand, g)
            gsplit = np.where(better, S1, gsplit)
            if R == 0:
                break
        tot = g[:, None] + dist
        arg = np.argmin(tot, axis=0)
        dp[S] = tot[arg, np.arange(V)]
        via[S] = arg
        split[S] = gsplit[arg]
    root = t_idx[-1]
    tau = int(dp[full, root])

    def path(a, b):
        pred = bfs[a][1]
        out = []
        while b != a:
            out.append((pred[b], b))
            b = pred[b]
        return out

    edges = set()

    def build(S, v):
        if S & (S - 1) == 0:
            i = S.bit_length() - 1
            edges.update(path(t_idx[i], v))
            return
        u = int(via[S, v])
        edges.update(path(u, v))
        S1 = int(split[S, v])
        build(S1, u)
        build(S ^ S1, u)

    build(full, root)
    out = sorted(tuple(sorted((sites[a], sites[b]))) for a, b in edges)
    if len(out) != tau:
        raise AssertionError("reconstructed tree does not match the optimum")
    return tau, out


def tau(terminals, box=None):
    """Length of the minimal lattice tree connecting the terminals."""
    return steiner_tree(terminals, box)[0]


def tau_bruteforce(terminals, box=None):
    """Exhaustive oracle for :func:`tau`, for up to 4 terminals on small boxes.

    An optimal tree has at most ``n - 2`` branch points besides the
    terminals, so it suffices to try every set of at most ``n - 2`` extra
    vertices and take the minimum spanning tree of terminals plus extras
    under graph distance.
    """
    terms, sites = _prepare(terminals, box)
    if len(terms) > 4:
        raise ResourceError("brute force limited to 4 terminals", required=len(terms), cap=4)
    if len(sites) > 64:
        raise ResourceError("brute force limited to 64 host vertices", required=len(sites), cap=64)
    if len(terms) == 1:
        return 0
    index, adj = _graph(sites)
    dist = [_bfs(adj, v)[0] for v in range(len(sites))]
    t_idx = [index[t] for t in terms]
    others = [v for v in range(len(sites)) if v not in set(t_idx)]

    def mst(nodes):
        total = 0
        best = {v: dist[nodes[0]][v] for v in nodes[1:]}
        while best:
            v = min(best, key=best.get)
            total += best.pop(v)
            for w in best:
                if dist[v][w] < best[w]:
                    best[w] = dist[v][w]
        return total

    out = mst(t_idx)
    for m in range(1, len(terms) - 1):
        for extra in combinations(others, m):
            out = min(out, mst(t_idx + list(extra)))
    return out


def manhattan(a, b):
    return sum(abs(x - y) for x, y in zip(a, b))
