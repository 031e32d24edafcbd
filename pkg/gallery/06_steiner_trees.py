"""Minimal lattice trees by Dreyfus-Wagner, with an exhaustive oracle."""
import random

from treedecay.lattice import Box
from treedecay.steiner import steiner_tree, tau, tau_bruteforce

t, edges = steiner_tree([(0, 0), (2, 0), (1, 2)])
print("tau((0,0),(2,0),(1,2)) =", t, "via", edges)
print("tau((0,0),(3,4)) =", tau([(0, 0), (3, 4)]))

rng = random.Random(7)
box = Box((5, 5))
agree = 0
for _ in range(50):
    T = rng.sample(box.sites, rng.randint(2, 4))
    agree += tau(T, box) == tau_bruteforce(T, box)
print(f"agreement with brute force: {agree}/50")
print("8 terminals:", tau([(0, 0), (7, 1), (3, 6), (5, 5), (1, 7), (6, 3), (2, 2), (4, 0)]))
