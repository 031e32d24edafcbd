"""Condensation: replica sums only see configurations where all observed
sites share one continent.

On a 3x3 interior with two copies the joint sum of s^(1) products splits
into terms with every site in a single continent and the rest; the rest
cancels exactly.
"""
from treedecay.continents import condensation_check, decompose
from treedecay.lattice import Box
from treedecay.replica import ReplicaConfig
from treedecay.spin import SpinConfig

box = Box((3, 3))
for sites in ([(0, 0), (2, 2)], [(0, 0), (0, 1)], [(1, 1), (1, 1)]):
    r = condensation_check(box, 1.0, 2, sites)
    print(f"{r['sites']}: condensed {r['condensed_sum'].real:+.3e}, scattered {abs(r['scattered_sum']):.1e},"
          f" exactly zero: {r['scattered_exact_zero']}")

# an all-plus pocket enclosed by a continent belongs to that continent
five = Box((5, 5))
ring = [(x, y) for x in range(1, 4) for y in range(1, 4) if (x, y) != (2, 2)]
rc = ReplicaConfig.from_configs([SpinConfig.from_minus(five, ring)] * 2)
dec = decompose(rc)
print("continents:", [len(K) for K in dec.continents], "pocket (2,2) in continent:", (2, 2) in dec.continents[0])
