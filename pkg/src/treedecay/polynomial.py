"""Exact Gibbs weights as integer polynomials in ``u = exp(-2 beta)``.

Every Ising energy on the hypercubic lattice is an even integer ``H``, so
the Gibbs factor ``exp(-beta H)`` equals ``u**(H/2)``: the number of
broken bonds is the exponent. Sums of Gibbs factors are therefore
polynomials in ``u`` with integer coefficients, and normalised
expectations are quotients by powers of the partition function.
"""
from fractions import Fraction

import mpmath
import numpy as np

_DPS = 80


def _trim(c):
    c = np.asarray(c, dtype=object)
    if c.ndim == 0:
        c = c.reshape(1)
    n = len(c)
    while n > 1 and c[n - 1] == 0:
        n -= 1
    if n == 0:
        return np.array([0], dtype=object)
    return c[:n].copy()


def _normalize_coeff(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


class GibbsPolynomial:
    """Polynomial ``sum_k c_k u**k`` with exact (int or Fraction) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = _trim(coeffs)
        self.coeffs = np.array([_normalize_coeff(x) for x in c], dtype=object)

    @classmethod
    def constant(cls, value):
        return cls([value])

    @classmethod
    def from_counts(cls, exponents, weights=None):
        """Histogram of broken-bond counts, optionally signed."""
        exponents = np.asarray(exponents, dtype=np.int64)
        if exponents.size == 0:
            return cls([0])
        if weights is None:
            counts = np.bincount(exponents)
            return cls([int(x) for x in counts])
        weights = np.asarray(weights, dtype=np.int64)
        n = int(exponents.max()) + 1
        pos = np.bincount(exponents[weights > 0], weights[weights > 0], minlength=n)
        neg = np.bincount(exponents[weights < 0], -weights[weights < 0], minlength=n)
        return cls([int(round(p)) - int(round(q)) for p, q in zip(pos, neg)])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def as_dict(self):
        return {k: c for k, c in enumerate(self.coeffs) if c != 0}

    def is_zero(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def __call__(self, u):
        hp = isinstance(u, (mpmath.mpf, mpmath.mpc))
        acc = 0
        for c in self.coeffs[::-1]:
            if isinstance(c, Fraction):
                c = mpmath.mpf(c.numerator) / c.denominator if hp else c.numerator / c.denominator
            acc = acc * u + c
        return acc

    def at_beta(self, beta):
        """High-precision value at ``u = exp(-2 beta)`` (an mpmath number)."""
        with mpmath.workdps(_DPS):
            return self(mpmath.exp(-2 * mpmath.mpf(beta)))

    def _coerce(self, other):
        if isinstance(other, GibbsPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return GibbsPolynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=object)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return GibbsPolynomial(a)

    __radd__ = __add__

    def __neg__(self):
        return GibbsPolynomial(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GibbsPolynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = GibbsPolynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        terms = [f"{c}*u^{k}" if k else f"{c}" for k, c in self.as_dict().items()]
        return "GibbsPolynomial(" + (" + ".join(terms) or "0") + ")"


class GibbsRatio:
    """Exact value ``numerator / Z**zpow`` for a fixed partition polynomial ``Z``.

    All normalised expectations of a finite box live in this form, so sums
    and products never need a general polynomial gcd.
    """

    __slots__ = ("num", "zpow", "z")

    def __init__(self, num, z, zpow=1):
        self.num = num if isinstance(num, GibbsPolynomial) else GibbsPolynomial([num])
        self.z = z
        self.zpow = zpow

    @classmethod
    def scalar(cls, value, z):
        return cls(GibbsPolynomial([value]), z, 0)

    def _align(self, other):
        if isinstance(other, (int, Fraction)):
            other = GibbsRatio.scalar(other, self.z)
        if not isinstance(other, GibbsRatio):
            return None, None, None
        if other.z is not self.z and other.z != self.z:
            raise ValueError("ratios over different partition functions")
        k = max(self.zpow, other.zpow)
        a = self.num * self.z ** (k - self.zpow)
        b = other.num * self.z ** (k - other.zpow)
        return a, b, k

    def __add__(self, other):
        a, b, k = self._align(other)
        if a is None:
            return NotImplemented
        return GibbsRatio(a + b, self.z, k)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, k = self._align(other)
        if a is None:
            return NotImplemented
        return GibbsRatio(a - b, self.z, k)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return GibbsRatio(-self.num, self.z, self.zpow)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GibbsRatio(self.num * other, self.z, self.zpow)
        if not isinstance(other, GibbsRatio):
            return NotImplemented
        return GibbsRatio(self.num * other.num, self.z, self.zpow + other.zpow)

    __rmul__ = __mul__

    def __eq__(self, other):
        a, b, _ = self._align(other)
        if a is None:
            return False
        return a == b

    __hash__ = None

    def is_zero(self):
        return self.num.is_zero()

    def at_beta(self, beta):
        """High-precision value at inverse temperature ``beta``."""
        with mpmath.workdps(_DPS):
            u = mpmath.exp(-2 * mpmath.mpf(beta))
            return self.num(u) / self.z(u) ** self.zpow

    def __float__(self):
        raise TypeError("evaluate with at_beta(beta) first")

    def value(self, beta):
        """Double-precision value (may underflow to 0 at very low temperature)."""
        return float(self.at_beta(beta))

    def log_abs(self, beta):
        """``log|value|`` at ``beta``; ``-inf`` for an exact zero."""
        if self.is_zero():
            return float("-inf")
        with mpmath.workdps(_DPS):
            return float(mpmath.log(abs(self.at_beta(beta))))

    def limit_zero_temperature(self):
        """Value at ``u = 0`` (beta -> infinity), exact."""
        z0 = self.z.coeffs[0]
        return Fraction(self.num.coeffs[0]) / Fraction(z0) ** self.zpow

    def __repr__(self):
        return f"GibbsRatio({self.num!r} / Z^{self.zpow})"

