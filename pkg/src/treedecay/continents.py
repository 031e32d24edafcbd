"""Sea/continent decomposition, replica continent contours and contour removal.

The sea is the part of ``{i : sigma_vec_i = (+1, ..., +1)}`` connected to
the frozen boundary; continents are the connected components of its
complement. Because the frozen ring surrounds the whole box, every
all-plus component that touches the box edge is counted as sea. An all-plus
pocket enclosed by a continent is not sea and is absorbed into that
continent.

Contours of a single copy are the ridge-connected components of its domain
walls (faces between unequal spins, frozen ring included). The contour of
a continent K in copy ``a`` is the union of the copy-``a`` contours that
share at least one face with the boundary of K.
"""
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, ResourceError
from .lattice import boundary_faces, connected_components, face_between, face_components, lattice_neighbors
from .polynomial import GibbsPolynomial
from .replica import ReplicaConfig, apply_cyclic, CyclicAction, replica_energy, transform_matrix
from .spin import SpinConfig, bond_counts, check_beta, enumeration_cap, partition_function


@dataclass(frozen=True)
class ContinentDecomposition:
    sea: tuple
    continents: tuple

    def continent_of(self, site):
        site = tuple(site)
        for K in self.continents:
            if site in K:
                return K
        return None


@dataclass(frozen=True)
class ReplicaContour:
    """Per-copy face sets ``C^(a)``; ``len`` is the total area."""

    faces: tuple

    def __len__(self):
        return sum(len(c) for c in self.faces)

    @property
    def n(self):
        return len(self.faces)

    def as_lists(self):
        return [sorted(c) for c in self.faces]


def _edge_sites(box):
    """Interior sites with at least one neighbour in the frozen ring."""
    return {s for s in box.sites if any(not box.is_interior(t) for t in lattice_neighbors(s))}


@lru_cache(maxsize=None)
def _decompose_mask(box, nonplus):
    plus = [s for k, s in enumerate(box.sites) if not nonplus >> k & 1]
    edge = _edge_sites(box)
    sea = set()
    for comp in connected_components(plus):
        if any(s in edge for s in comp):
            sea.update(comp)
    rest = [s for s in box.sites if s not in sea]
    continents = tuple(tuple(c) for c in connected_components(rest))
    return ContinentDecomposition(tuple(sorted(sea)), continents)


def decompose(rc):
    """Sea and continents of a replica configuration."""
    return _decompose_mask(rc.box, rc.nonplus_mask())


def decompose_mask(box, nonplus):
    """Decomposition from the bitmask of sites where some copy is -1."""
    return _decompose_mask(box, nonplus)


def walls(cfg):
    """Faces between unequal spins of one copy, boundary ring included."""
    out = []
    for i, j in cfg.box.bonds():
        if cfg[i] != cfg[j]:
            out.append(face_between(i, j))
    return out


@lru_cache(maxsize=None)
def _copy_contours(box, bits):
    cfg = SpinConfig(box, bits)
    return tuple(frozenset(c) for c in face_components(walls(cfg)))


def copy_contours(cfg):
    """Contours of one copy as a tuple of frozensets of faces."""
    return _copy_contours(cfg.box, cfg.bits)


def _check_continent(rc, K):
    K = tuple(sorted(tuple(s) for s in K))
    if K not in decompose(rc).continents:
        raise DomainError("region is not a continent of this configuration")
    return K


def _contour_of(box, bits, K):
    dK = set(boundary_faces(K))
    sel = [c for c in _copy_contours(box, bits) if not dK.isdisjoint(c)]
    return frozenset().union(*sel) if sel else frozenset()


def continent_contour(rc, K):
    """Replica continent contour of the continent ``K``."""
    K = _check_continent(rc, K)
    return ReplicaContour(tuple(_contour_of(rc.box, b, K) for b in rc.bits))


def flip_region(box, faces):
    """Interior sites enclosed by a closed face set, by crossing parity.

    Walking from the frozen ring, the parity flips at every face of the set.
    For a union of whole contours this is consistent and yields the unique
    finite region whose boundary is exactly that set.
    """
    faces = set(faces)
    parity = {}
    queue = deque()
    for s in box.boundary_sites():
        parity[s] = 0
        queue.append(s)
    while queue:
        s = queue.popleft()
        for t in lattice_neighbors(s):
            if t in parity or not box.is_interior(t):
                continue
            parity[t] = parity[s] ^ (face_between(s, t) in faces)
            queue.append(t)
    region = [s for s in box.sites if parity.get(s)]
    # consistency: every bond's parity change matches membership in the set
    for i, j in box.bonds():
        if (parity.get(i, 0) ^ parity.get(j, 0)) != (face_between(i, j) in faces):
            raise DomainError("face set is not a union of closed contours")
    return region


def remove_contour(rc, K):
    """Flip each copy inside its part of the continent contour of ``K``."""
    C = continent_contour(rc, K)
    bits = []
    for b, faces in zip(rc.bits, C.faces):
        mask = 0
        for s in flip_region(rc.box, faces):
            mask |= 1 << rc.box.index[s]
        bits.append(b ^ mask)
    return ReplicaConfig(rc.box, tuple(bits))


def local_symmetry_holds(rc):
    """Every power of the cyclic action on every continent keeps the energy
    and the decomposition."""
    dec = decompose(rc)
    e = replica_energy(rc)
    for K in dec.continents:
        for k in range(1, rc.n):
            other = apply_cyclic(rc, CyclicAction(k, K))
            if replica_energy(other) != e or decompose(other) != dec:
                return False
    return True


def _joint_arrays(box, n, cap):
    cap = enumeration_cap(cap)
    k = box.size
    if 2 ** (n * k) > cap:
        raise ResourceError(f"joint space 2**{n * k} exceeds cap {cap}",
                            required=2 ** (n * k), cap=cap)
    b = bond_counts(box, cap).astype(np.int64)
    J = np.arange(2 ** (n * k), dtype=np.int64)
    full = (1 << k) - 1
    cfg = [(J >> (a * k)) & full for a in range(n)]
    return cfg, sum(b[c] for c in cfg)


def condensation_check(box, beta, n, sites, cap=None):
    """Split ``sum_sigma s^(1)_{i_1} ... s^(1)_{i_n} exp(-beta H)`` by condensation.

    Part (a) collects configurations whose sites all lie in one continent,
    part (b) everything else. For ``n = 2`` both parts are also accumulated
    exactly, as integer polynomials in ``u`` (the factor ``2^{-n/2}`` is
    left out), and ``scattered_exact_zero`` records whether (b) vanishes
    identically.
    """
    sites = [tuple(s) for s in sites]
    if len(sites) != n:
        raise DomainError("the tuple length must equal the number of copies")
    check_beta(beta)
    cfg, H = _joint_arrays(box, n, cap)
    k = box.size
    pos = [box.index[s] for s in sites]
    # continent label of each tuple position, per nonplus mask
    labels = np.full((2 ** k, n), -1, dtype=np.int64)
    for m in range(2 ** k):
        dec = _decompose_mask(box, m)
        for p, s in enumerate(sites):
            for c, K in enumerate(dec.continents):
                if s in K:
                    labels[m, p] = c
                    break
    mask = np.zeros_like(cfg[0])
    for c in cfg:
        mask |= c
    lab = labels[mask]
    in_sea = (lab < 0).any(axis=1)
    condensed = ~in_sea & (lab == lab[:, :1]).all(axis=1)

    U = transform_matrix(n)
    s_prod = np.ones(len(H), dtype=complex)
    int_prod = np.ones(len(H), dtype=np.int64)
    for i in pos:
        sig = [1 - 2 * ((c >> i) & 1) for c in cfg]
        s_prod *= sum(U[0, a] * sig[a] for a in range(n))
        if n == 2:
            int_prod *= sig[0] - sig[1]
    w = np.exp(-2.0 * beta * H)
    zz = float(partition_function(box, cap=cap)(np.exp(-2.0 * beta))) ** n
    terms = s_prod * w
    part_a = complex(terms[condensed].sum())
    part_b = complex(terms[~condensed].sum())
    mass = float(np.abs(terms).sum())
    report = {
        "n": n,
        "beta": beta,
        "sites": [box.format_site(s) for s in sites],
        "condensed_sum": part_a / zz,
        "scattered_sum": part_b / zz,
        "total": (part_a + part_b) / zz,
        "mass": mass / zz,
        "scattered_relative": abs(part_b) / mass if mass else 0.0,
        "sea_terms_nonzero": int(np.count_nonzero(np.abs(s_prod[in_sea]) > 1e-12)),
    }
    if n == 2:
        pb = GibbsPolynomial.from_counts(H[~condensed], int_prod[~condensed])
        pa = GibbsPolynomial.from_counts(H[condensed], int_prod[condensed])
        report["scattered_exact_zero"] = pb.is_zero()
        report["condensed_polynomial"] = pa
    return report


def contour_census(box, n, cap=None):
    """Group joint configurations by realizable ``(K, C)`` pairs.

    Returns a dict ``(K, ReplicaContour) -> GibbsPolynomial`` holding the
    summed weights ``u**(broken bonds)`` of the configurations in which K is
    a continent with that contour.
    """
    cfg, H = _joint_arrays(box, n, cap)
    acc = defaultdict(lambda: defaultdict(int))
    for idx in range(len(H)):
        rc = ReplicaConfig(box, tuple(int(c[idx]) for c in cfg))
        for K in decompose(rc).continents:
            C = ReplicaContour(tuple(_contour_of(box, b, K) for b in rc.bits))
            acc[(K, C)][int(H[idx])] += 1
    out = {}
    for key, hist in acc.items():
        coeffs = [0] * (max(hist) + 1)
        for e, c in hist.items():
            coeffs[e] = c
        out[key] = GibbsPolynomial(coeffs)
    return out


def contour_probability(box, beta, n, K, C, cap=None, census=None):
    """``Pr(r)`` for a fixed continent ``K`` and contour ``C``, with the check
    ``Pr <= exp(-beta r)``."""
    check_beta(beta)
    if census is None:
        census = contour_census(box, n, cap)
    K = tuple(sorted(tuple(s) for s in K))
    poly = census.get((K, C), GibbsPolynomial([0]))
    z = partition_function(box, cap=cap)
    r = len(C)
    with mpmath.workdps(50):
        u = mpmath.exp(-2 * mpmath.mpf(beta))
        pr = poly(u) / z(u) ** n
        bound = mpmath.exp(-mpmath.mpf(beta) * r)
        ok = bool(pr <= bound)
        return {"r": r, "pr": float(pr), "bound": float(bound), "satisfied": ok}


def energy_bound_sweep(box, n, betas, cap=None):
    """``Pr(r) <= exp(-beta r)`` for every realizable ``(K, C)`` and every beta."""
    census = contour_census(box, n, cap)
    records = []
    for beta in betas:
        for (K, C) in census:
            rec = contour_probability(box, beta, n, K, C, cap=cap, census=census)
            rec["beta"] = beta
            rec["continent"] = [box.format_site(s) for s in K]
            records.append(rec)
    return records
