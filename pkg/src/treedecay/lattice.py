"""Hypercubic lattice geometry in a finite box.

Sites are integer tuples. A site ``i`` is identified with the closed unit
cube centred at ``i``; a :class:`Face` is a (d-1)-cube shared by two such
cubes. Faces are encoded by the normal axis and the coordinates of the
lower of the two cubes, which makes the encoding unique per geometric face.

Internally faces are often handled through *doubled* coordinates: the
centre of a face with normal ``a`` and base ``c`` is ``2c + e_a``. A
(d-2)-cube ("ridge") then has odd doubled coordinates along exactly two
axes, and two faces are adjacent iff they share a ridge.
"""
from collections import deque
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import DomainError

Site = tuple


class Face(NamedTuple):
    """A (d-1)-face between the cubes at ``base`` and ``base + e_axis``."""

    axis: int
    base: tuple

    @property
    def dim(self):
        return len(self.base)

    def center2(self):
        """Doubled coordinates of the face centre."""
        c = [2 * x for x in self.base]
        c[self.axis] += 1
        return tuple(c)

    def sites(self):
        """The two lattice sites whose cubes share this face."""
        hi = list(self.base)
        hi[self.axis] += 1
        return self.base, tuple(hi)

    def ridges(self):
        """Doubled centres of the 2(d-1) ridges bounding this face."""
        c = self.center2()
        out = []
        for j in range(len(c)):
            if j == self.axis:
                continue
            for s in (-1, 1):
                r = list(c)
                r[j] += s
                out.append(tuple(r))
        return out


def face_between(i, j):
    """The face shared by the cubes of nearest neighbours ``i`` and ``j``."""
    diff = [b - a for a, b in zip(i, j)]
    if sorted(map(abs, diff)) != [0] * (len(diff) - 1) + [1]:
        raise DomainError(f"sites {i} and {j} are not nearest neighbours")
    axis = next(k for k, v in enumerate(diff) if v != 0)
    return Face(axis, tuple(i) if diff[axis] == 1 else tuple(j))


def face_from_center2(c):
    """Inverse of :meth:`Face.center2`."""
    odd = [k for k, x in enumerate(c) if x % 2]
    if len(odd) != 1:
        raise DomainError(f"{c} is not a doubled face centre")
    a = odd[0]
    base = [x // 2 for x in c]
    return Face(a, tuple(base))


class Box:
    """Interior sites ``0 <= x_k < extent[k]`` plus a frozen boundary ring.

    The boundary consists of the sites outside the interior that are nearest
    neighbours of some interior site. Interior sites are indexed in
    lexicographic order; that index is the bit position used by the spin
    enumeration code.
    """

    def __init__(self, extent):
        extent = tuple(int(e) for e in extent)
        if len(extent) < 2:
            raise DomainError("dimension must be at least 2")
        if any(e < 0 for e in extent):
            raise DomainError("extents must be nonnegative")
        self.extent = extent
        if any(e == 0 for e in extent):
            self.sites = ()
        else:
            self.sites = tuple(product(*(range(e) for e in extent)))
        self.index = {s: k for k, s in enumerate(self.sites)}

    @classmethod
    def parse(cls, text):
        """Build a box from ``"3x3"`` or ``"2x2x2"``."""
        try:
            return cls(int(t) for t in text.lower().split("x"))
        except ValueError:
            raise DomainError(f"cannot parse box extent {text!r}") from None

    @property
    def dim(self):
        return len(self.extent)

    @property
    def size(self):
        return len(self.sites)

    def __repr__(self):
        return f"Box({'x'.join(map(str, self.extent))})"

    def __eq__(self, other):
        return isinstance(other, Box) and self.extent == other.extent

    def __hash__(self):
        return hash(self.extent)

    def is_interior(self, site):
        return len(site) == self.dim and all(0 <= x < e for x, e in zip(site, self.extent))

    def is_boundary(self, site):
        if len(site) != self.dim or self.size == 0:
            return False
        out = [k for k, (x, e) in enumerate(zip(site, self.extent)) if not 0 <= x < e]
        if len(out) != 1:
            return False
        x, e = site[out[0]], self.extent[out[0]]
        return x == -1 or x == e

    def contains(self, site):
        return self.is_interior(site) or self.is_boundary(site)

    def boundary_sites(self):
        """The frozen ring, in canonical order."""
        ring = set()
        for s in self.sites:
            for t in lattice_neighbors(s):
                if not self.is_interior(t):
                    ring.add(t)
        return sorted(ring)

    def bonds(self):
        """All nearest-neighbour pairs touching the interior.

        Returns a list of ``(i, j)`` with ``i`` interior and ``j`` either an
        interior site later in canonical order or a boundary site.
        """
        out = []
        for s in self.sites:
            for t in lattice_neighbors(s):
                if self.is_interior(t):
                    if self.index[t] > self.index[s]:
                        out.append((s, t))
                else:
                    out.append((s, t))
        return out

    def format_site(self, site):
        return "(" + ",".join(str(x) for x in site) + ")"


def lattice_neighbors(site):
    """The 2d nearest neighbours of ``site`` in Z^d."""
    out = []
    for k in range(len(site)):
        for s in (-1, 1):
            t = list(site)
            t[k] += s
            out.append(tuple(t))
    return out


def neighbors(site, box):
    """Nearest neighbours of ``site`` inside the closure of ``box``."""
    site = tuple(site)
    if not box.contains(site):
        raise DomainError(f"site {site} is outside {box!r}")
    return sorted(t for t in lattice_neighbors(site) if box.contains(t))


def connected_components(xs):
    """Split a set of sites into nearest-neighbour connected components.

    Sites touching only at a corner are in different components. Components
    come back as sorted lists, ordered by their smallest site.
    """
    remaining = set(map(tuple, xs))
    comps = []
    while remaining:
        seed = min(remaining)
        remaining.discard(seed)
        comp = [seed]
        queue = deque([seed])
        while queue:
            s = queue.popleft()
            for t in lattice_neighbors(s):
                if t in remaining:
                    remaining.discard(t)
                    comp.append(t)
                    queue.append(t)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def boundary_faces(xs):
    """Faces separating a cube of ``xs`` from a cube outside ``xs``.

    ``len(boundary_faces(xs))`` is the (d-1)-area of the boundary.
    """
    xs = set(map(tuple, xs))
    out = set()
    for s in xs:
        for t in lattice_neighbors(s):
            if t not in xs:
                out.add(face_between(s, t))
    return sorted(out)


def boundary_faces_by_edges(xs):
    """Same result as :func:`boundary_faces`, by scanning every lattice edge
    of the padded bounding box and keeping those with one endpoint in ``xs``.
    """
    xs = set(map(tuple, xs))
    if not xs:
        return []
    d = len(next(iter(xs)))
    arr = np.array(sorted(xs))
    lo = arr.min(axis=0) - 1
    hi = arr.max(axis=0) + 1
    out = []
    for a in range(d):
        ranges = [range(lo[k], hi[k] + (0 if k == a else 1)) for k in range(d)]
        for base in product(*ranges):
            up = list(base)
            up[a] += 1
            if (base in xs) != (tuple(up) in xs):
                out.append(Face(a, tuple(int(x) for x in base)))
    return sorted(out)


def boundary_sites(xs):
    """Sites of ``xs`` whose cube has at least one face on the boundary."""
    xs = set(map(tuple, xs))
    return sorted(s for s in xs if any(t not in xs for t in lattice_neighbors(s)))


def faces_adjacent(f1, f2):
    """True iff two distinct faces share a (d-2)-cube."""
    if f1.dim != f2.dim:
        raise DomainError("faces live in different dimensions")
    if f1 == f2:
        return False
    return not set(f1.ridges()).isdisjoint(f2.ridges())


def face_neighbors2(c):
    """Doubled centres of all faces adjacent to the face with doubled centre ``c``.

    Each of the 2(d-1) ridges of a face is shared with three other faces,
    so a face has 6(d-1) neighbours.
    """
    a = next(k for k, x in enumerate(c) if x % 2)
    out = []
    for j in range(len(c)):
        if j == a:
            continue
        for s in (-1, 1):
            # coplanar neighbour across the ridge
            t = list(c)
            t[j] += 2 * s
            out.append(tuple(t))
            # the two perpendicular faces through the ridge, normal j
            for e in (-1, 1):
                t = list(c)
                t[j] += s
                t[a] += e
                out.append(tuple(t))
    return out


def face_components(faces):
    """Split a face set into components under ridge adjacency."""
    by_center = {f.center2(): f for f in faces}
    remaining = set(by_center)
    comps = []
    while remaining:
        seed = min(remaining)
        remaining.discard(seed)
        comp = [seed]
        queue = deque([seed])
        while queue:
            c = queue.popleft()
            for t in face_neighbors2(c):
                if t in remaining:
                    remaining.discard(t)
                    comp.append(t)
                    queue.append(t)
        comps.append(sorted(by_center[c] for c in comp))
    comps.sort(key=lambda c: c[0])
    return comps
