#!/usr/bin/env python3
"""Standalone check of the 3-leaf Z2xZ2 values: builds the 16 vertices from
the leaf assignments, forms every pair sum, and counts the distinct ones.
Prints the counts; exits nonzero if they differ from the values frozen in the
C++ unit tests."""
import itertools
import sys

G = [(a, b) for a in range(2) for b in range(2)]


def add(x, y):
    return ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)


def vertex(g1, g2):
    # root 3; edges e{1}, e{2}, e{1,2}
    v = [0] * 12
    v[G.index(g1)] = 1
    v[4 + G.index(g2)] = 1
    v[8 + G.index(add(g1, g2))] = 1
    return tuple(v)


verts = [vertex(a, b) for a in G for b in G]
assert len(set(verts)) == 16
pairs = list(itertools.combinations_with_replacement(verts, 2))
sums = {tuple(a + b for a, b in zip(x, y)) for x, y in pairs}
triples = {tuple(map(sum, zip(*t))) for t in itertools.combinations_with_replacement(verts, 3)}
print(f"pairs={len(pairs)} distinct_pair_sums={len(sums)} distinct_triple_sums={len(triples)}")
sys.exit(0 if (len(pairs), len(sums), len(triples)) == (136, 136, 800) else 1)
