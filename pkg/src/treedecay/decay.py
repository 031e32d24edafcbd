"""Constants of the tree-decay bound and its end-to-end check on small boxes.

The bound reads ``|<s_i1 ... s_in>^T| <= a n^n exp(-delta_n tau)`` with
``delta_n = beta - b ln n``. All comparisons are done on logarithms, so
``beta`` up to 50 is fine even though the values themselves underflow.
"""
import csv
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass

import mpmath

from .continents import _contour_of, decompose_mask
from .correlations import truncated
from .errors import DomainError
from .lattice import Box
from .spin import check_beta
from .steiner import tau as steiner_tau
from .surfaces import surface_constant

_DPS = 50


@dataclass(frozen=True)
class BoundConstants:
    d: int
    n: int
    beta: float
    A: int
    k_d: float
    B: float
    b: float
    delta_n: float
    a: float
    a_max: float
    applicable: bool

    def log_bound(self, tau):
        """``log(a n^n exp(-delta_n tau))``; None when the bound does not apply."""
        if not self.applicable:
            return None
        return math.log(self.a) + self.n * math.log(self.n) - self.delta_n * tau


def bound_constants(d, n, beta):
    if d < 2 or n < 2:
        raise DomainError("need d >= 2 and n >= 2")
    check_beta(beta)
    if beta <= 0:
        raise DomainError("beta must be positive")
    A = d * math.factorial(d)
    k = float(surface_constant(d))
    B = 2 * math.e ** 2 * k ** 2
    b = math.log(B)
    delta = beta - b * math.log(n)
    a = A / -math.expm1(-delta) if delta > 0 else math.inf
    return BoundConstants(d, n, float(beta), A, k, B, b, delta, a,
                          A * math.e / (math.e - 1), delta >= 1)


def entropy_factor_bound(d, n, r):
    """``log(A B^r n^r)``."""
    if r < 1:
        raise DomainError("r must be positive")
    c = bound_constants(d, n, 1.0)
    return math.log(c.A) + r * (c.b + math.log(n))


def tail_rate(d, n, beta):
    """Exponential rate of ``A B^r n^r exp(-beta r)`` in ``r``: ``beta - ln B - ln n``."""
    c = bound_constants(d, n, beta)
    return beta - c.b - math.log(n)


def tail_sum(d, n, beta, tau, tol=1e-30):
    """``log sum_{r >= tau} A B^r n^r exp(-beta r)`` by direct summation."""
    rate = tail_rate(d, n, beta)
    if rate <= 0:
        return math.inf
    c = bound_constants(d, n, beta)
    with mpmath.workdps(_DPS):
        q = mpmath.exp(-mpmath.mpf(rate))
        term = c.A * q ** tau
        total = mpmath.mpf(0)
        while term > tol * total or total == 0:
            total += term
            term *= q
        return float(mpmath.log(total))


def tail_closed_form(d, n, beta, tau, rate=None):
    """``log(A exp(-rate tau) / (1 - exp(-rate)))``; the rate defaults to
    :func:`tail_rate`."""
    c = bound_constants(d, n, beta)
    rate = tail_rate(d, n, beta) if rate is None else rate
    if rate <= 0:
        return math.inf
    return math.log(c.A) - rate * tau - math.log(-math.expm1(-rate))


@dataclass
class DecayRecord:
    sites: tuple
    n: int
    beta: float
    tau: int
    abs_T: float
    log_abs_T: float
    bound: float
    log_bound: float
    delta_n: float
    satisfied: object

    def row(self, box=None):
        fmt = box.format_site if box is not None else (lambda s: "(" + ",".join(map(str, s)) + ")")
        return {
            "n": self.n,
            "beta": self.beta,
            "sites": ";".join(fmt(s) for s in self.sites),
            "tau": self.tau,
            "abs_T": self.abs_T,
            "bound": self.bound,
            "delta_n": self.delta_n,
            "satisfied": "n/a" if self.satisfied is None else self.satisfied,
        }


def decay_record(box, beta, sites, method="auto", cap=None):
    sites = tuple(tuple(s) for s in sites)
    n = len(sites)
    c = bound_constants(box.dim, n, beta)
    T = truncated(box, None, sites, method, cap)
    log_T = T.log_abs(beta)
    t = steiner_tau(sites, box)
    log_b = c.log_bound(t)
    if log_b is None:
        bound, ok = math.nan, None
    else:
        bound, ok = math.exp(log_b) if log_b > -745 else 0.0, bool(log_T <= log_b)
    abs_T = math.exp(log_T) if log_T > -745 else 0.0
    return DecayRecord(sites, n, float(beta), t, abs_T, log_T, bound,
                       math.nan if log_b is None else log_b, c.delta_n, ok)


def verify_decay(box, beta, n, tuples, method="auto", cap=None):
    """One :class:`DecayRecord` per tuple, in input order."""
    out = []
    for sites in tuples:
        if len(sites) != n:
            raise DomainError(f"tuple {sites} does not have {n} sites")
        out.append(decay_record(box, beta, sites, method, cap))
    return out


def all_satisfied(records):
    """False if any applicable record fails; inapplicable ones are skipped."""
    return all(r.satisfied is not False for r in records)


def row_decay(box, beta, start, steps, axis=0, method="auto", cap=None):
    """``(tau, -log|T|)`` for the pairs ``(start, start + k e_axis)``, ``k = 1..steps``."""
    start = tuple(start)
    out = []
    for k in range(1, steps + 1):
        other = list(start)
        other[axis] += k
        rec = decay_record(box, beta, [start, tuple(other)], method, cap)
        out.append((rec.tau, -rec.log_abs_T))
    return out


def is_monotone(pairs):
    """``-log|T|`` nondecreasing in ``tau``."""
    pairs = sorted(pairs)
    return all(a[1] <= b[1] for a, b in zip(pairs, pairs[1:]))


def continent_contour_census(box, site, n=2, r_max=None):
    """Number of distinct realizable ``(K, C)`` with ``site`` in ``K``, by ``|C|``.

    The continents depend only on the mask of sites where some copy is -1,
    and each copy's contour of ``K`` only on that copy's own bits, so the
    census loops over masks and over the copy bit patterns inside each mask.
    """
    if n != 2:
        raise DomainError("the (K, C) census is implemented for n = 2")
    site = tuple(site)
    k = box.size
    seen = set()
    for m in range(1, 2 ** k):
        dec = decompose_mask(box, m)
        K = dec.continent_of(site)
        if K is None:
            continue
        sub = [b for b in _submasks(m)]
        cont = {b: _contour_of(box, b, K) for b in sub}
        for b1 in sub:
            # b2 must cover what b1 leaves of m
            need = m ^ b1
            for b2 in sub:
                if b2 & need == need:
                    seen.add((K, cont[b1], cont[b2]))
    counts = Counter(len(c1) + len(c2) for _, c1, c2 in seen)
    if r_max is not None:
        counts = Counter({r: v for r, v in counts.items() if r <= r_max})
    return dict(sorted(counts.items()))


def _submasks(m):
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


RECORD_FIELDS = ["n", "beta", "sites", "tau", "abs_T", "bound", "delta_n", "satisfied"]


def write_records_csv(records, fh, box=None):
    w = csv.DictWriter(fh, fieldnames=RECORD_FIELDS)
    w.writeheader()
    for r in records:
        w.writerow(r.row(box))


def write_records_json(records, fh, box=None):
    json.dump([r.row(box) for r in records], fh, indent=2)
    fh.write("\n")


def load_config(path):
    """Experiment manifest: JSON with keys dim, interior, beta_grid, n, tuples,
    caps, output. Missing keys come back as None."""
    with open(path) as fh:
        cfg = json.load(fh)
    keys = ("dim", "interior", "beta_grid", "n", "tuples", "caps", "output")
    unknown = set(cfg) - set(keys)
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    return {k: cfg.get(k) for k in keys}


def parse_interior(text, dim=None):
    box = Box.parse(text) if isinstance(text, str) else Box(tuple(text))
    if dim is not None and box.dim != dim:
        raise DomainError(f"interior {text} is not {dim}-dimensional")
    return box


def record_dict(rec):
    return asdict(rec)
