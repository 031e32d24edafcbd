"""Census of connected lattice surfaces through a fixed face.

A surface is a finite set of (d-1)-faces of the cubic lattice; two faces are
adjacent when they share a (d-2)-cube. ``N(r)`` counts connected surfaces
with exactly ``r`` faces that contain the fixed root face ``S0``; no
translation or rotation is quotiented out.

Faces are handled here by their doubled centre coordinates (see
:mod:`treedecay.lattice`), which makes neighbour generation a few integer
additions.
"""
import csv
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from numba import njit

from .errors import DomainError, ResourceError
from .lattice import Face, face_from_center2, face_neighbors2

MAX_R = {2: 10, 3: 7}


def root_face(d):
    """``S0``: the face between the origin and ``e_0``."""
    return Face(0, (0,) * d)


def _root2(d):
    return root_face(d).center2()


def _check_range(d, r):
    if d not in MAX_R:
        raise DomainError(f"census is available for d in {sorted(MAX_R)}, got {d}")
    if r < 1:
        raise DomainError("r must be positive")
    if r > MAX_R[d]:
        raise ResourceError(f"r={r} exceeds the census limit {MAX_R[d]} for d={d}",
                            required=r, cap=MAX_R[d])


def iter_surfaces(d, r_max, root=None):
    """Yield every connected surface containing the root with at most
    ``r_max`` faces, each exactly once, as a tuple of doubled centres.

    Redelmeier's method: a face is only ever offered once along a branch of
    the search, so no deduplication is needed.
    """
    root = _root2(d) if root is None else root
    current = [root]
    seen = {root}

    def rec(untried):
        while untried:
            f = untried.pop()
            current.append(f)
            yield tuple(current)
            if len(current) < r_max:
                fresh = [g for g in face_neighbors2(f) if g not in seen]
                seen.update(fresh)
                yield from rec(untried + fresh)
                seen.difference_update(fresh)
            current.pop()

    yield (root,)
    if r_max > 1:
        start = list(face_neighbors2(root))
        seen.update(start)
        yield from rec(start)


def _face_window(d, radius):
    """Faces within ``radius`` adjacency steps of the root, with a neighbour
    table (-1 marks a neighbour outside the window)."""
    root = _root2(d)
    ids = {root: 0}
    frontier = [root]
    for _ in range(radius):
        nxt = []
        for f in frontier:
            for g in face_neighbors2(f):
                if g not in ids:
                    ids[g] = len(ids)
                    nxt.append(g)
        frontier = nxt
    deg = 6 * (d - 1)
    table = np.full((len(ids), deg), -1, dtype=np.int64)
    for f, k in ids.items():
        for j, g in enumerate(sorted(face_neighbors2(f))):
            table[k, j] = ids.get(g, -1)
    return table


@njit(cache=True)
def _redelmeier(nbr, r_max, check_trees):
    """Counts per size and the number of surfaces whose depth-first covering
    tree failed to reach every face (always 0 for a correct enumeration)."""
    nfaces, deg = nbr.shape
    counts = np.zeros(r_max + 1, dtype=np.int64)
    failures = 0
    seen = np.zeros(nfaces, dtype=np.bool_)
    stamp = np.zeros(nfaces, dtype=np.int64)
    covered = np.zeros(nfaces, dtype=np.int64)
    current = np.empty(r_max, dtype=np.int64)
    maxlen = deg * r_max + 1
    untried = np.empty((r_max + 1, maxlen), dtype=np.int64)
    ulen = np.zeros(r_max + 1, dtype=np.int64)
    fresh = np.empty((r_max + 1, deg), dtype=np.int64)
    flen = np.zeros(r_max + 1, dtype=np.int64)
    branch = np.empty(r_max, dtype=np.int64)
    tick = 0

    current[0] = 0
    seen[0] = True
    counts[1] = 1
    if r_max == 1:
        return counts, failures
    for j in range(deg):
        g = nbr[0, j]
        if g >= 0 and not seen[g]:
            seen[g] = True
            untried[1, ulen[1]] = g
            ulen[1] += 1
    depth = 1
    while True:
        if ulen[depth] == 0:
            if depth == 1:
                break
            for j in range(flen[depth]):
                seen[fresh[depth, j]] = False
            depth -= 1
            continue
        ulen[depth] -= 1
        f = untried[depth, ulen[depth]]
        current[depth] = f
        size = depth + 1
        counts[size] += 1
        if check_trees:
            tick += 1
            for j in range(size):
                stamp[current[j]] = tick
            # depth-first covering tree from the root
            covered[0] = tick
            ncov = 1
            top = 0
            branch[0] = 0
            while top >= 0:
                tip = branch[top]
                nxt = -1
                for j in range(deg):
                    g = nbr[tip, j]
                    if g >= 0 and stamp[g] == tick and covered[g] != tick:
                        nxt = g
                        break
                if nxt < 0:
                    top -= 1
                else:
                    covered[nxt] = tick
                    ncov += 1
                    top += 1
                    branch[top] = nxt
            if ncov != size:
                failures += 1
        if size < r_max:
            n = ulen[depth]
            for j in range(n):
                untried[depth + 1, j] = untried[depth, j]
            flen[depth + 1] = 0
            for j in range(deg):
                g = nbr[f, j]
                if g >= 0 and not seen[g]:
                    seen[g] = True
                    untried[depth + 1, n] = g
                    n += 1
                    fresh[depth + 1, flen[depth + 1]] = g
                    flen[depth + 1] += 1
            ulen[depth + 1] = n
            depth += 1
    return counts, failures


def surface_census(d, r_max, check_trees=False):
    """Counts ``[N(1), ..., N(r_max)]`` and, optionally, the number of
    surfaces whose covering tree does not span (expected 0)."""
    _check_range(d, r_max)
    table = _face_window(d, r_max - 1)
    counts, failures = _redelmeier(table, r_max, check_trees)
    return [int(c) for c in counts[1:]], int(failures)


def count_surfaces_upto(d, r_max):
    """``[N(1), ..., N(r_max)]`` in a single search."""
    return surface_census(d, r_max)[0]


def count_surfaces(d, r):
    """Exact ``N(r)``: connected surfaces with ``r`` faces containing ``S0``."""
    return count_surfaces_upto(d, r)[r - 1]


def count_surfaces_bfs(d, r):
    """``N(r)`` by growing face sets one face at a time with set deduplication.

    Memory grows like ``N(r)``; this is the cross-check for the main count.
    """
    _check_range(d, r)
    level = {frozenset([_root2(d)])}
    for _ in range(r - 1):
        nxt = set()
        for s in level:
            for f in s:
                for g in face_neighbors2(f):
                    if g not in s:
                        nxt.add(s | {g})
        level = nxt
    return len(level)


def catalan(m):
    """``C_m = binom(2m, m) / (m + 1)``."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m > 1000:
        raise ResourceError("catalan index limited to 1000", required=m, cap=1000)
    return math.comb(2 * m, m) // (m + 1)


def surface_constant(d):
    """``k_d = 3 e 2^d``: per face, ``2^(d-1)`` sides times 3 angles, times ``2e``
    from the Catalan bound."""
    return 3 * mpmath.e * 2 ** d


def entropy_bound(d, r):
    """``k_d ** r`` as an mpmath number."""
    if d < 2 or r < 1:
        raise DomainError("need d >= 2 and r >= 1")
    return surface_constant(d) ** r


def binomial_bound_holds(v, w):
    """``binom(v, w) <= (e v / w)^w``."""
    if w == 0:
        return True
    return math.comb(v, w) <= (mpmath.e * v / w) ** w


def power_bound_holds(r, d):
    """``r^d <= d! e^r``."""
    return r ** d <= math.factorial(d) * mpmath.e ** r


@dataclass
class CoveringTree:
    """Rooted tree on face centres; ``parent[root]`` is None."""

    root: tuple
    parent: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    @property
    def edges(self):
        return [(p, c) for c, p in self.parent.items() if p is not None]

    def __len__(self):
        return len(self.order)


def _as_centers(surface):
    out = []
    for f in surface:
        out.append(f.center2() if isinstance(f, Face) else tuple(f))
    return out


def covering_tree(surface, root=None):
    """Depth-first covering tree of a connected surface.

    A branch is extended to an uncovered adjacent face as long as possible;
    when stuck, it is retraced face by face to the nearest face that still
    has an uncovered neighbour, and a new branch starts there.
    """
    faces = _as_centers(surface)
    if not faces:
        raise DomainError("empty surface")
    members = set(faces)
    if root is None:
        root = faces[0]
    root = root.center2() if isinstance(root, Face) else tuple(root)
    if root not in members:
        raise DomainError("root face is not in the surface")
    tree = CoveringTree(root, {root: None}, [root])
    branch = [root]
    while branch:
        tip = branch[-1]
        nxt = next((g for g in sorted(face_neighbors2(tip))
                    if g in members and g not in tree.parent), None)
        if nxt is None:
            branch.pop()
            continue
        tree.parent[nxt] = tip
        tree.order.append(nxt)
        branch.append(nxt)
    if len(tree.order) != len(members):
        raise DomainError("surface is not connected")
    return tree


def tree_is_covering(surface, tree):
    members = set(_as_centers(surface))
    if set(tree.order) != members or len(tree.edges) != len(members) - 1:
        return False
    return all(c in face_neighbors2(p) for p, c in tree.edges)


def census_rows(d, max_r):
    """Rows ``(d, r, N(r), k_d^r, N(r) / k_d^r)``."""
    counts = count_surfaces_upto(d, max_r)
    rows = []
    for r, n in enumerate(counts, start=1):
        bound = entropy_bound(d, r)
        rows.append({"d": d, "r": r, "N": n, "bound": float(bound),
                     "ratio": float(n / bound)})
    return rows


def write_census_csv(rows, fh):
    w = csv.DictWriter(fh, fieldnames=["d", "r", "N", "bound", "ratio"])
    w.writeheader()
    for row in rows:
        w.writerow(row)


def surface_faces(centers):
    """Doubled centres back to :class:`Face` objects."""
    return sorted(face_from_center2(c) for c in centers)
