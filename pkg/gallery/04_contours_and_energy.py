"""Continent contours, their removal, and the energy factor Pr(r) <= exp(-beta r)."""
from itertools import product

from treedecay.continents import continent_contour, decompose, energy_bound_sweep, remove_contour
from treedecay.lattice import Box
from treedecay.replica import ReplicaConfig, local_symmetry_counterexample, replica_energy

box = Box((2, 2))
drops = []
for bits in product(range(16), repeat=2):
    rc = ReplicaConfig(box, bits)
    for K in decompose(rc).continents:
        C = continent_contour(rc, K)
        drops.append(replica_energy(rc) - replica_energy(remove_contour(rc, K)) == 2 * len(C))
print(f"energy drop equals twice the contour length on {sum(drops)}/{len(drops)} continents")

cx = local_symmetry_counterexample()
print(f"local copy swap on the centre square of nested squares: energy {cx['energy_before']} -> {cx['energy_after']}")

recs = energy_bound_sweep(box, 2, [0.5, 1.0, 2.0])
worst = max(recs, key=lambda r: r["pr"] / r["bound"])
print(f"{len(recs)} (K, C, beta) cells, all satisfied: {all(r['satisfied'] for r in recs)}")
print(f"tightest: r={worst['r']} beta={worst['beta']} Pr={worst['pr']:.3e} bound={worst['bound']:.3e}")
