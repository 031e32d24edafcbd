"""Single-copy Ising model in a box with frozen +1 boundary.

Configurations are stored as bitmasks over the interior sites (bit ``k``
set means the ``k``-th interior site, in the box's canonical order, carries
spin -1). The energy is ``H = sum_nn (1 - s_i s_j)``, i.e. twice the number
of broken bonds, including bonds to the frozen ring.

Two exact engines produce the weighted sums ``sum_s prod_{i in S} s_i u**b(s)``:

* exhaustive enumeration of all ``2**k`` interior configurations, vectorised
  over bitmask indices;
* a transfer matrix along the longest axis, with polynomial-valued entries.

They are independent routes to the same polynomials and are checked against
each other in the test suite.
"""
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceError
from .lattice import Box
from .polynomial import GibbsPolynomial, GibbsRatio

DEFAULT_CAP = 2 ** 24


def enumeration_cap(cap=None):
    """Resolve the enumeration cap: explicit value, then ``REPLICA_CAP``, then 2**24."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("REPLICA_CAP")
    return int(env) if env else DEFAULT_CAP


def check_beta(beta):
    if beta < 0:
        raise DomainError(f"inverse temperature must be nonnegative, got {beta}")
    return beta


@dataclass(frozen=True)
class SpinConfig:
    """Interior spins of a box; boundary spins are implicitly +1."""

    box: Box
    bits: int = 0

    @classmethod
    def from_spins(cls, box, spins):
        """Build from a mapping ``site -> +-1`` or a sequence in site order."""
        if isinstance(spins, dict):
            items = spins.items()
        else:
            spins = list(spins)
            if len(spins) != box.size:
                raise DomainError("need one spin per interior site")
            items = zip(box.sites, spins)
        bits = 0
        for site, v in items:
            site = tuple(site)
            if site not in box.index:
                raise DomainError(f"{site} is not an interior site of {box!r}")
            if v not in (1, -1):
                raise DomainError(f"spin values must be +-1, got {v}")
            if v == -1:
                bits |= 1 << box.index[site]
        return cls(box, bits)

    @classmethod
    def from_minus(cls, box, sites):
        return cls.from_spins(box, {s: -1 for s in sites})

    def __getitem__(self, site):
        site = tuple(site)
        k = self.box.index.get(site)
        if k is None:
            if self.box.is_boundary(site):
                return 1
            raise DomainError(f"{site} is outside {self.box!r}")
        return -1 if self.bits >> k & 1 else 1

    @property
    def spins(self):
        return tuple(-1 if self.bits >> k & 1 else 1 for k in range(self.box.size))

    def minus_sites(self):
        return [s for k, s in enumerate(self.box.sites) if self.bits >> k & 1]

    def flipped(self, sites):
        mask = 0
        for s in sites:
            mask |= 1 << self.box.index[tuple(s)]
        return SpinConfig(self.box, self.bits ^ mask)


def broken_bonds(cfg):
    return sum(cfg[i] != cfg[j] for i, j in cfg.box.bonds())


def energy(cfg):
    """``sum_nn (1 - s_i s_j)``; twice the contour length."""
    return 2 * broken_bonds(cfg)


def _check_cap(box, cap):
    cap = enumeration_cap(cap)
    if 2 ** box.size > cap:
        raise ResourceError(
            f"{box!r} has 2**{box.size} configurations, cap is {cap}",
            required=2 ** box.size,
            cap=cap,
        )


def _neighbor_table(box):
    """Per interior site, indices of interior neighbours and the number of
    boundary neighbours."""
    inner = [[] for _ in range(box.size)]
    outer = [0] * box.size
    for i, j in box.bonds():
        a = box.index[i]
        if j in box.index:
            b = box.index[j]
            inner[a].append(b)
            inner[b].append(a)
        else:
            outer[a] += 1
    return inner, outer


def enumerate_configs(box, cap=None):
    """Yield all interior configurations once, in reflected Gray-code order."""
    _check_cap(box, cap)
    for k in range(2 ** box.size):
        yield SpinConfig(box, k ^ (k >> 1))


def enumerate_with_bonds(box, cap=None):
    """Gray-code walk yielding ``(config, broken_bonds)``.

    Each step flips one spin, and the bond count is updated from its 2d
    neighbours only.
    """
    _check_cap(box, cap)
    inner, outer = _neighbor_table(box)
    bits = 0
    b = 0
    yield SpinConfig(box, 0), 0
    for k in range(1, 2 ** box.size):
        site = (k & -k).bit_length() - 1
        s = bits >> site & 1
        # bonds to neighbours with equal spin break, unequal ones heal
        delta = 0
        for j in inner[site]:
            delta += 1 if (bits >> j & 1) == s else -1
        delta += outer[site] if s == 0 else -outer[site]
        bits ^= 1 << site
        b += delta
        yield SpinConfig(box, bits), b


def bond_counts(box, cap=None):
    """Broken-bond count of every configuration, indexed by bitmask."""
    _check_cap(box, cap)
    idx = np.arange(2 ** box.size, dtype=np.uint32 if box.size < 32 else np.uint64)
    b = np.zeros(idx.shape, dtype=np.int16)
    one = idx.dtype.type(1)
    for i, j in box.bonds():
        a = box.index[i]
        if j in box.index:
            c = box.index[j]
            b += (((idx >> a) ^ (idx >> c)) & one).astype(np.int16)
        else:
            b += ((idx >> a) & one).astype(np.int16)
    return b


class _TransferMatrix:
    """Column transfer matrix with polynomial entries, slicing along axis 0."""

    def __init__(self, box):
        self.box = box
        self.length = box.extent[0]
        cross = box.extent[1:]
        self.width = math.prod(cross)
        m = self.width
        self.nstates = 2 ** m
        states = np.arange(self.nstates, dtype=np.int64)
        self.popcount = np.bitwise_count(states).astype(np.int64)
        xor = states[:, None] ^ states[None, :]
        ham = np.bitwise_count(xor)
        self.hamming = [(ham == h).astype(np.int64) for h in range(m + 1)]
        csites = list(np.ndindex(*cross))
        cindex = {s: k for k, s in enumerate(csites)}
        intra = np.zeros(self.nstates, dtype=np.int64)
        for s, k in cindex.items():
            for ax in range(len(cross)):
                t = list(s)
                t[ax] += 1
                t = tuple(t)
                if t in cindex:
                    intra += ((states >> k) ^ (states >> cindex[t])) & 1
                walls = (s[ax] == 0) + (s[ax] == cross[ax] - 1)
                intra += walls * ((states >> k) & 1)
        self.intra = intra
        self.degree = len(box.bonds())
        self.dtype = np.int64 if box.size <= 62 else object

    def _shift_rows(self, v, shifts):
        out = np.zeros_like(v)
        D = v.shape[1]
        for t in np.unique(shifts):
            rows = shifts == t
            if t < D:
                out[rows, t:] = v[rows, : D - t]
        return out

    def _signs(self, mask, x):
        m = self.width
        sub = (mask >> (x * m)) & ((1 << m) - 1)
        states = np.arange(self.nstates, dtype=np.int64)
        return 1 - 2 * (np.bitwise_count(states & sub) & 1).astype(np.int64)

    def polynomial(self, mask):
        D = self.degree + 1
        v = np.zeros((self.nstates, D), dtype=self.dtype)
        v[:, 0] = self._signs(mask, 0)
        v = self._shift_rows(v, self.popcount + self.intra)
        for x in range(1, self.length):
            new = np.zeros_like(v)
            for h, mat in enumerate(self.hamming):
                if h >= D:
                    break
                new[:, h:] += (mat @ v)[:, : D - h]
            new = self._shift_rows(new, self.intra)
            v = new * self._signs(mask, x)[:, None]
        v = self._shift_rows(v, self.popcount)
        return GibbsPolynomial([int(c) for c in v.sum(axis=0)])


class MomentEngine:
    """Exact weighted sums ``N_S(u) = sum_s prod_{i in S} s_i u**b(s)`` for one box.

    ``S`` is given as a collection of interior sites; repeated sites cancel
    in pairs because ``s_i**2 = 1``. Results are cached per reduced site set,
    so ``N`` of the empty set, the partition polynomial, is computed once.

    ``method`` is ``"enumerate"`` (all ``2**k`` configurations),
    ``"transfer"`` (slice transfer matrix, ``2**width`` states), or
    ``"auto"`` (transfer matrix when it fits under the cap).
    """

    def __init__(self, box, method="auto", cap=None):
        self.box = box
        self.cap = enumeration_cap(cap)
        if method == "auto":
            method = "transfer" if box.size > 0 and self._transfer_states() <= self.cap else "enumerate"
        if method not in ("enumerate", "transfer"):
            raise DomainError(f"unknown method {method!r}")
        self.method = method
        self._cache = {}
        if method == "enumerate":
            self._bonds = bond_counts(box, self.cap)
            self._idx = np.arange(len(self._bonds), dtype=np.int64)
        else:
            if self._transfer_states() > self.cap:
                raise ResourceError(
                    f"transfer matrix for {box!r} needs {self._transfer_states()} states",
                    required=self._transfer_states(), cap=self.cap)
            self._perm = self._axis_order()
            pbox = Box(box.extent[a] for a in self._perm)
            self._pbox = pbox
            self._tm = _TransferMatrix(pbox)

    def _axis_order(self):
        first = int(np.argmax(self.box.extent))
        return [first] + [a for a in range(self.box.dim) if a != first]

    def _transfer_states(self):
        if self.box.size == 0:
            return 1
        return 2 ** (self.box.size // max(self.box.extent))

    def mask(self, sites):
        m = 0
        for s in sites:
            s = tuple(s)
            if s not in self.box.index:
                raise DomainError(f"{s} is not an interior site of {self.box!r}")
            m ^= 1 << self.box.index[s]
        return m

    def polynomial(self, sites=()):
        m = self.mask(sites)
        if m not in self._cache:
            self._cache[m] = self._compute(m)
        return self._cache[m]

    @property
    def z(self):
        return self.polynomial(())

    def _compute(self, m):
        if self.box.size == 0:
            return GibbsPolynomial([1])
        if self.method == "enumerate":
            sign = 1 - 2 * (np.bitwise_count(self._idx & m) & 1).astype(np.int64)
            return GibbsPolynomial.from_counts(self._bonds, sign)
        # translate the mask into the permuted box
        pm = 0
        for k, s in enumerate(self.box.sites):
            if m >> k & 1:
                ps = tuple(s[a] for a in self._perm)
                pm |= 1 << self._pbox.index[ps]
        return self._tm.polynomial(pm)

    def moment(self, sites):
        """Exact ``<prod s_i>`` as a :class:`GibbsRatio` over ``Z``."""
        return GibbsRatio(self.polynomial(sites), self.z, 1)


_ENGINES = {}


def engine(box, method="auto", cap=None):
    """Shared :class:`MomentEngine` per ``(box, method, cap)``."""
    key = (box.extent, method, enumeration_cap(cap))
    if key not in _ENGINES:
        _ENGINES[key] = MomentEngine(box, method=method, cap=cap)
    return _ENGINES[key]


def partition_function(box, method="auto", cap=None):
    """Exact ``Z`` as a polynomial in ``u = exp(-2 beta)``.

    >>> partition_function(Box((1, 1)))
    GibbsPolynomial(1 + 1*u^4)
    """
    return engine(box, method, cap).z


def expectation(box, beta, f, exact=False, cap=None):
    """Gibbs expectation of an observable ``f(SpinConfig)``.

    With ``exact=True`` the observable must be integer or Fraction valued and
    the result is a :class:`GibbsRatio` (``beta`` is then ignored and may be
    None). Otherwise the sum is done in double precision at ``beta``.
    """
    if exact:
        acc = {}
        for cfg, b in enumerate_with_bonds(box, cap):
            v = f(cfg)
            if not isinstance(v, (int, Fraction)):
                raise DomainError("exact expectation needs integer or Fraction values")
            acc[b] = acc.get(b, 0) + v
        coeffs = [0] * (max(acc) + 1)
        for k, v in acc.items():
            coeffs[k] = v
        return GibbsRatio(GibbsPolynomial(coeffs), partition_function(box, cap=cap), 1)
    check_beta(beta)
    num = 0.0
    den = 0.0
    for cfg, b in enumerate_with_bonds(box, cap):
        w = math.exp(-2.0 * beta * b)
        num += f(cfg) * w
        den += w
    return num / den
