"""Truncated correlations from one replica moment.

For n sites, the truncated correlation equals n^((n-2)/2) times the
n-copy expectation of a product of transformed spins s^(gamma). For n = 2
the two sides are compared as exact polynomials; for n = 3, 4 in high
precision floating point.
"""
from treedecay.correlations import truncated, truncated_via_polarization
from treedecay.lattice import Box
from treedecay.replica import s_moment, verify_representation

box = Box((3, 3))
pair = [(0, 0), (2, 1)]
print("n=2 exact:", verify_representation(box, 0.5, 2, pair)["exact_equal"])
print("T as a ratio of polynomials:", truncated(box, None, pair))

small = Box((2, 2))
for n, gamma in [(3, 1), (3, 2), (4, 1), (4, 3)]:
    sites = small.sites[:n]
    for beta in (0.2, 1.0):
        r = verify_representation(small, beta, n, sites, gamma)
        print(f"n={n} gamma={gamma} beta={beta}: T = {r['lhs']:+.3e}, |diff| = {r['abs_diff']:.1e}")

# the same truncated value from cumulants of signed sums
quad = [(0, 0), (1, 1), (2, 0), (2, 2)]
print("partition inversion vs polarization:", truncated(box, 0.5, quad), truncated_via_polarization(box, 0.5, quad))

# moments whose phase does not cancel vanish
print("<<s^(1)>> for n=3:", abs(s_moment(small, 0.7, 1, [(0, 0)], 3)))
