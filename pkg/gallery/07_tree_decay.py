"""Exact truncated correlations against the tree-decay bound.

The bound needs delta_n = beta - ln(B) ln(n) >= 1, which puts beta above
7.7 for two sites and 11.6 for three in d = 2. At such temperatures the
exact correlations are smaller than the bound by a factor of exp(90) or
more. Below the threshold the records are kept with the bound marked n/a.
"""
import math
import sys

from treedecay.decay import bound_constants, is_monotone, row_decay, verify_decay, write_records_csv
from treedecay.lattice import Box

for n in (2, 3):
    c = bound_constants(2, n, 1.0)
    print(f"n={n}: A={c.A}, B={c.B:.1f}, b={c.b:.3f}, applicable from beta={c.b * math.log(n) + 1:.2f}")

box = Box((5, 5))
records = verify_decay(box, 12.0, 2, [[(1, 1), (4, 4)], [(0, 0), (0, 1)]])
records += verify_decay(box, 15.0, 3, [[(0, 0), (4, 4), (0, 4)]])
records += verify_decay(box, 1.0, 2, [[(0, 0), (0, 1)]])
write_records_csv(records, sys.stdout, box)

for beta in (1.0, 2.0):
    pairs = row_decay(Box((6, 6)), beta, (0, 2), 4)
    print(f"6x6 row, beta={beta}: -log|T| by tau", [(t, round(v, 2)) for t, v in pairs], "monotone:", is_monotone(pairs))
