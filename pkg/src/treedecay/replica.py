"""n-copy replica system, the replica Fourier transform and cyclic actions.

Copies are labelled ``alpha = 1..n`` in formulas and stored 0-based. The
transform is ``s^(a) = n^{-1/2} sum_{a'} w^{a (a'-1)} sigma^(a')`` with
``w = exp(2 pi i / n)``; with +1 boundary spins in every copy the boundary
s-vector is ``(0, ..., 0, sqrt(n))``.

Replica expectations are products of single-copy expectations because the
copies are independent, so ``<<s^(g)_{i_1} ... s^(g)_{i_k}>>`` expands into
a sum over copy assignments of products of ordinary moments. A joint
enumeration of all ``2**(n k)`` replica configurations is kept as a
verification mode.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import gcd

import mpmath
import numpy as np

from .correlations import subset_moments, truncated
from .errors import DomainError, ResourceError
from .lattice import Box, boundary_faces
from .spin import SpinConfig, bond_counts, check_beta, energy, enumeration_cap

ALL = None


def omega(n):
    return np.exp(2j * np.pi / n)


def transform_matrix(n):
    """The unitary ``U`` with ``U[a-1, a'-1] = n^{-1/2} w^{a (a'-1)}``."""
    a = np.arange(1, n + 1)[:, None]
    ap = np.arange(1, n + 1)[None, :]
    # reduce the exponent mod n before exponentiating to keep phases exact-ish
    return np.exp(2j * np.pi * ((a * (ap - 1)) % n) / n) / np.sqrt(n)


def phase_matrix(n):
    """Diagonal ``D = diag(w^1, ..., w^n)``."""
    return np.diag(np.exp(2j * np.pi * (np.arange(1, n + 1) % n) / n))


@dataclass(frozen=True)
class ReplicaConfig:
    """``n`` spin configurations of the same box, stored as bitmasks."""

    box: Box
    bits: tuple

    @classmethod
    def from_configs(cls, configs):
        configs = list(configs)
        if not configs:
            raise DomainError("need at least one copy")
        box = configs[0].box
        if any(c.box != box for c in configs):
            raise DomainError("all copies must share the box")
        return cls(box, tuple(c.bits for c in configs))

    @classmethod
    def ground(cls, box, n):
        return cls(box, (0,) * n)

    @property
    def n(self):
        return len(self.bits)

    @property
    def copies(self):
        return [SpinConfig(self.box, b) for b in self.bits]

    def vector(self, site):
        """``sigma_vec_i`` as a tuple of +-1, boundary sites included."""
        return tuple(c[site] for c in self.copies)

    def spin_array(self):
        """Interior spins, shape ``(sites, n)``."""
        return np.array([[-1 if b >> k & 1 else 1 for b in self.bits]
                         for k in range(self.box.size)], dtype=int).reshape(self.box.size, self.n)

    def nonplus_mask(self):
        """Bitmask of interior sites where some copy is -1."""
        m = 0
        for b in self.bits:
            m |= b
        return m


class SVariableField:
    """s-variables on the interior of a box; boundary sites read ``(0,..,0,sqrt n)``."""

    def __init__(self, box, values):
        self.box = box
        self.values = np.asarray(values, dtype=complex)
        self.n = self.values.shape[1]

    def __getitem__(self, site):
        site = tuple(site)
        k = self.box.index.get(site)
        if k is not None:
            return self.values[k]
        if self.box.is_boundary(site):
            return boundary_s_vector(self.n)
        raise DomainError(f"{site} is outside {self.box!r}")


def boundary_s_vector(n):
    v = np.zeros(n, dtype=complex)
    v[-1] = np.sqrt(n)
    return v


def to_s_variables(rc):
    U = transform_matrix(rc.n)
    return SVariableField(rc.box, rc.spin_array() @ U.T)


def from_s_variables(sf, tol=1e-9):
    """Invert the transform; raises if the result is not a +-1 field."""
    U = transform_matrix(sf.n)
    sigma = sf.values @ U.conj()
    real = np.rint(sigma.real)
    if np.any(np.abs(sigma - real) > tol) or np.any(np.abs(real) != 1):
        raise DomainError("s-field does not come from a +-1 replica configuration")
    bits = []
    for a in range(sf.n):
        b = 0
        for k, v in enumerate(real[:, a]):
            if v < 0:
                b |= 1 << k
        bits.append(b)
    return ReplicaConfig(sf.box, tuple(bits))


@dataclass(frozen=True)
class CyclicAction:
    """``k``-th power of the cyclic generator, on ``region`` or everywhere (``ALL``)."""

    power: int = 1
    region: object = ALL


def apply_cyclic(rc, action):
    """Cyclic shift of copies, ``sigma^(a) -> sigma^(a-k)``, inside the region."""
    n = rc.n
    k = action.power % n
    if action.region is ALL:
        mask = (1 << rc.box.size) - 1
    else:
        mask = 0
        for s in action.region:
            s = tuple(s)
            if s not in rc.box.index:
                raise DomainError(f"region site {s} is not interior")
            mask |= 1 << rc.box.index[s]
    if k == 0:
        return rc
    new = []
    for a in range(n):
        src = rc.bits[(a - k) % n]
        new.append((rc.bits[a] & ~mask) | (src & mask))
    return ReplicaConfig(rc.box, tuple(new))


def apply_permutation(rc, perm):
    """Global permutation ``(pi sigma)^(a) = sigma^(pi^{-1}(a))``; ``perm`` is 0-based."""
    inv = [0] * rc.n
    for a, p in enumerate(perm):
        inv[p] = a
    return ReplicaConfig(rc.box, tuple(rc.bits[inv[a]] for a in range(rc.n)))


def replica_energy(rc):
    """Sum of the copy energies."""
    return sum(energy(c) for c in rc.copies)


def replica_energy_from_s(sf):
    """``1/2 sum_nn sum_a |s_i^(a) - s_j^(a)|^2``, boundary bonds included."""
    total = 0.0
    for i, j in sf.box.bonds():
        total += np.sum(np.abs(sf[i] - sf[j]) ** 2)
    return 0.5 * total


def _assignment_sum(n, gamma, M, k, exact):
    """``sum_{a in [n]^k} w^{gamma sum a_j} prod_a M[positions with copy a]``."""
    total = 0
    for assign in product(range(n), repeat=k):
        masks = [0] * n
        for pos, a in enumerate(assign):
            masks[a] |= 1 << pos
        term = 1
        for m in masks:
            if m:
                term = term * M[m]
        e = (gamma * sum(assign)) % n
        if exact:
            # n <= 2: the phase is +-1
            total = total + (term if e == 0 else -term)
        else:
            total = total + term * mpmath.expjpi(mpmath.mpf(2 * e) / n)
    return total


def s_moment(box, beta, gamma, sites, n, method="auto", cap=None):
    """``<<s^(gamma)_{i_1} ... s^(gamma)_{i_k}>>`` by factorising over copies.

    ``beta=None`` gives an exact value for ``n <= 2`` as a ratio times
    ``n^{-k/2}``: the returned pair is ``(ratio, n**k)`` so that the moment
    equals ``ratio / sqrt(n**k)``. Otherwise a Python complex is returned.
    """
    if not 1 <= gamma <= n:
        raise DomainError("gamma must lie in 1..n")
    k = len(sites)
    if beta is None:
        if n > 2:
            raise DomainError("exact replica moments are available for n <= 2 only")
        M = subset_moments(box, None, sites, method, cap)
        M[0] = 1
        return _assignment_sum(n, gamma, M, k, exact=True), n ** k
    check_beta(beta)
    with mpmath.workdps(40):
        M = subset_moments(box, beta, sites, method, cap)
        total = _assignment_sum(n, gamma, M, k, exact=False)
        return complex(total / mpmath.sqrt(n) ** k)


def s_moment_joint(box, beta, gamma, sites, n, cap=None):
    """Same expectation as :func:`s_moment`, by enumerating all replica configurations."""
    cap = enumeration_cap(cap)
    k = box.size
    if 2 ** (n * k) > cap:
        raise ResourceError(f"joint space 2**{n * k} exceeds cap {cap}",
                            required=2 ** (n * k), cap=cap)
    check_beta(beta)
    b = bond_counts(box, cap).astype(np.int64)
    J = np.arange(2 ** (n * k), dtype=np.int64)
    full = (1 << k) - 1
    cfg = [(J >> (a * k)) & full for a in range(n)]
    H = sum(b[c] for c in cfg)
    w = np.exp(-2.0 * beta * (H - H.min()))
    U = transform_matrix(n)
    prod_s = np.ones(len(J), dtype=complex)
    for s in sites:
        i = box.index[tuple(s)]
        s_val = np.zeros(len(J), dtype=complex)
        for a in range(n):
            sigma = 1 - 2 * ((cfg[a] >> i) & 1)
            s_val += U[gamma - 1, a] * sigma
        prod_s *= s_val
    return complex(np.sum(prod_s * w) / np.sum(w))


def verify_representation(box, beta, n, sites, gamma=1, method="auto", cap=None):
    """Compare ``<s...s>^T`` with ``n^{(n-2)/2} <<s^(gamma) ... s^(gamma)>>``.

    ``sites`` must have length ``n``. For ``n <= 2`` the comparison is also
    done exactly, as polynomial identities; ``exact_equal`` records it.
    """
    sites = [tuple(s) for s in sites]
    if len(sites) != n:
        raise DomainError("the tuple length must equal the number of copies")
    if gcd(n, gamma) != 1:
        raise DomainError(f"gcd({n}, {gamma}) != 1")
    exact_equal = None
    if n <= 2:
        lhs_exact = truncated(box, None, sites, method, cap)
        total, _ = s_moment(box, None, gamma, sites, n, method, cap)
        # n^{(n-2)/2} n^{-n/2} = 1/n
        rhs_exact = total * Fraction(1, n)
        exact_equal = bool(lhs_exact == rhs_exact)
    lhs = truncated(box, beta, sites, method, cap)
    rhs = n ** ((n - 2) / 2) * s_moment(box, beta, gamma, sites, n, method, cap)
    return {
        "lhs": lhs,
        "rhs": rhs.real,
        "rhs_imag": rhs.imag,
        "abs_diff": abs(lhs - rhs),
        "n": n,
        "gamma": gamma,
        "beta": beta,
        "sites": [box.format_site(s) for s in sites],
        "exact_equal": exact_equal,
    }


def truncated_s_moment(box, beta, gamma, sites, n, method="auto", cap=None):
    """``<<s^(gamma) ...>>^T`` by the partition recursion on s-moments."""
    from .correlations import cumulants_from_subset_moments

    k = len(sites)
    M = [1.0]
    for mask in range(1, 2 ** k):
        sub = [sites[j] for j in range(k) if mask >> j & 1]
        M.append(s_moment(box, beta, gamma, sub, n, method, cap))
    return cumulants_from_subset_moments(k, M)[-1]


def global_invariance_holds(rc):
    """Replica energy is unchanged by every permutation of the copies."""
    e = replica_energy(rc)
    return all(replica_energy(apply_permutation(rc, p)) == e
               for p in permutations(range(rc.n)))


def local_symmetry_counterexample(size=1):
    """Nested-squares configuration where a local copy swap lowers the energy.

    Copy 1 is +1 on a central ``size x size`` square K and -1 on the ring
    around it; copy 2 is the reverse. Swapping the copies on K removes both
    walls along the boundary of K, a drop of ``4 |boundary of K|``.
    """
    L = size + 2
    box = Box((L, L))
    ring = [s for s in box.sites if not (1 <= s[0] <= size and 1 <= s[1] <= size)]
    K = [s for s in box.sites if 1 <= s[0] <= size and 1 <= s[1] <= size]
    c1 = SpinConfig.from_minus(box, ring)
    c2 = SpinConfig.from_minus(box, K)
    rc = ReplicaConfig.from_configs([c1, c2])
    flipped = apply_cyclic(rc, CyclicAction(1, K))
    before = replica_energy(rc)
    after = replica_energy(flipped)
    area = len(boundary_faces(K))
    twice = apply_cyclic(flipped, CyclicAction(1, K))
    return {
        "size": size,
        "boundary_area": area,
        "energy_before": before,
        "energy_after": after,
        "drop": before - after,
        "expected_drop": 4 * area,
        "holds": before - after == 4 * area,
        "involution": twice == rc,
        "config": rc,
        "region": K,
    }
