"""Moments and truncated (connected) correlations of spin products.

Site tuples are handled as labelled positions, so repeated sites are allowed
and behave as distinct arguments of a multilinear function.

Every function takes ``beta``; passing ``beta=None`` selects exact
arithmetic and returns :class:`~treedecay.polynomial.GibbsRatio` values,
otherwise results are floats.
"""
from fractions import Fraction
from itertools import product
from math import comb, factorial

import mpmath

from .errors import DomainError, ResourceError
from .spin import check_beta, engine

MAX_PARTITION_N = 12
# working precision for the float path; results are rounded to double at the end
_DPS = 60


def enumerate_partitions(n):
    """Yield every set partition of ``range(n)`` as a tuple of blocks.

    Uses restricted growth strings, so each of the Bell(n) partitions
    appears exactly once.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > MAX_PARTITION_N:
        raise ResourceError(f"Bell({n}) partitions requested, limit is n={MAX_PARTITION_N}",
                            required=n, cap=MAX_PARTITION_N)
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(k, top):
        if k == n:
            blocks = [[] for _ in range(top + 1)]
            for pos, b in enumerate(a):
                blocks[b].append(pos)
            yield tuple(tuple(b) for b in blocks)
            return
        for b in range(top + 2):
            a[k] = b
            yield from rec(k + 1, max(top, b))

    a[0] = 0
    yield from rec(1, 0)


def _validate(box, sites):
    sites = [tuple(s) for s in sites]
    for s in sites:
        if not box.is_interior(s):
            raise DomainError(f"{s} is not an interior site of {box!r}")
    return sites


def subset_moments(box, beta, sites, method="auto", cap=None):
    """``M[mask] = <prod_{k in mask} s_{i_k}>`` for every subset of positions.

    Exact ratios when ``beta`` is None, otherwise mpmath numbers; call under
    ``mpmath.workdps`` to keep the extra precision in later arithmetic.
    """
    sites = _validate(box, sites)
    eng = engine(box, method, cap)
    n = len(sites)
    out = []
    for mask in range(2 ** n):
        sub = [sites[k] for k in range(n) if mask >> k & 1]
        r = eng.moment(sub)
        out.append(r if beta is None else r.at_beta(check_beta(beta)))
    return out


def moment(box, beta, sites, method="auto", cap=None):
    """``<s_{i_1} ... s_{i_n}>``."""
    sites = _validate(box, sites)
    r = engine(box, method, cap).moment(sites)
    return r if beta is None else r.value(check_beta(beta))


def cumulants_from_subset_moments(n, M):
    """Truncated function of every subset of ``n`` positions.

    ``M`` is indexed by bitmask. Solves ``M(S) = sum_P prod_{B in P} T(B)``
    bottom-up by splitting off the block that holds the lowest position:
    ``T(S) = M(S) - sum_{B < S, min S in B} T(B) M(S \\ B)``.
    """
    T = [None] * (2 ** n)
    for S in range(1, 2 ** n):
        low = S & -S
        rest = S ^ low
        acc = M[S]
        # proper sub-blocks B = low | R with R a proper subset of rest
        R = (rest - 1) & rest
        while True:
            if R != rest:
                B = low | R
                acc = acc - T[B] * M[S ^ B]
            if R == 0:
                break
            R = (R - 1) & rest
        T[S] = acc
    return T


def truncated(box, beta, sites, method="auto", cap=None):
    """Truncated correlation ``<s_{i_1} ... s_{i_n}>^T`` by partition inversion."""
    n = len(sites)
    if n == 0:
        raise DomainError("truncated correlation needs at least one site")
    if beta is None:
        M = subset_moments(box, beta, sites, method, cap)
        M[0] = 1
        return cumulants_from_subset_moments(n, M)[-1]
    with mpmath.workdps(_DPS):
        M = subset_moments(box, beta, sites, method, cap)
        return float(cumulants_from_subset_moments(n, M)[-1])


def truncated_all(box, beta, sites, method="auto", cap=None):
    """Truncated correlations of every sub-tuple, indexed by position bitmask."""
    n = len(sites)
    if beta is None:
        M = subset_moments(box, beta, sites, method, cap)
        M[0] = 1
        return cumulants_from_subset_moments(n, M)
    with mpmath.workdps(_DPS):
        M = subset_moments(box, beta, sites, method, cap)
        return [float(t) if t is not None else None
                for t in cumulants_from_subset_moments(n, M)]


def reconstruct_moment(n, T):
    """``sum_P prod_{B in P} T(B)`` over all set partitions of ``n`` positions."""
    total = 0
    for part in enumerate_partitions(n):
        term = 1
        for block in part:
            mask = sum(1 << k for k in block)
            term = term * T[mask]
        total = total + term
    return total


def _scalar_cumulant(mu, n):
    """n-th cumulant of a scalar variable from raw moments ``mu[0..n]``."""
    kappa = [0] * (n + 1)
    for m in range(1, n + 1):
        acc = mu[m]
        for j in range(1, m):
            acc = acc - comb(m - 1, j - 1) * kappa[j] * mu[m - j]
        kappa[m] = acc
    return kappa[n]


def truncated_via_polarization(box, beta, sites, method="auto", cap=None):
    """Truncated correlation recovered from cumulants of signed sums.

    For each sign vector ``eps`` the scalar ``X = sum_k eps_k s_{i_k}`` has
    an n-th cumulant; the signed average of these over all ``eps`` isolates
    the fully mixed term. The joint law of the n spins is rebuilt from their
    subset moments, and the scalar cumulants come from the one-variable
    moment recursion, so no set partitions are involved.
    """
    sites = _validate(box, sites)
    n = len(sites)
    if n == 0:
        raise DomainError("truncated correlation needs at least one site")
    if beta is None:
        M = subset_moments(box, beta, sites, method, cap)
        M[0] = 1
        return _polarized(n, M, Fraction(1, 2 ** n))
    with mpmath.workdps(_DPS):
        M = subset_moments(box, beta, sites, method, cap)
        return float(_polarized(n, M, mpmath.mpf(1) / 2 ** n))


def _polarized(n, M, inv2n):
    # joint law p(s) = 2^-n sum_A prod_{k in A} s_k M(A)
    probs = {}
    for s in product((1, -1), repeat=n):
        acc = 0
        for A in range(2 ** n):
            sign = 1
            for k in range(n):
                if A >> k & 1:
                    sign *= s[k]
            acc = acc + sign * M[A]
        probs[s] = acc * inv2n
    total = 0
    for eps in product((1, -1), repeat=n):
        mu = [1] + [0] * n
        for s, p in probs.items():
            x = sum(e * v for e, v in zip(eps, s))
            if x:
                for m in range(1, n + 1):
                    mu[m] = mu[m] + p * x ** m
        sign = 1
        for e in eps:
            sign *= e
        total = total + sign * _scalar_cumulant(mu, n)
    return total * (inv2n / factorial(n))

