"""Walk through the two-star density of one 4-vertex graph.

The graph has edges AB, AD, BC, BD.  Out of the 4^3 = 64 vertex maps of the
two-star (a path on three vertices), 18 are edge-preserving, so t = 18/64.
The same number is recovered by summing exact densities d(H, X) over the edge
subsets X of the graph: each single edge carries 2/64, each adjacent edge pair
carries 2/64, and every other subset carries zero.
"""

from fractions import Fraction
from itertools import chain, combinations

from ergm_cluster import (
    BUILTIN_MOTIFS,
    exact_density,
    hom_count,
    hom_density,
    make_graph,
    pinned_density,
)

NAMES = "ABCD"


def label(edge):
    return NAMES[edge[0]] + NAMES[edge[1]]


def main():
    H = BUILTIN_MOTIFS["two-star"]
    G = make_graph(4, [(0, 1), (0, 3), (1, 2), (1, 3)])
    edges = sorted(G.edges)

    den = G.n ** H.m
    print("graph edges:", " ".join(label(e) for e in edges))
    print(f"hom count: {hom_count(H, G)} of {den} maps")
    print(f"t(two-star, G) = {hom_count(H, G)}/{den} = {hom_density(H, G)}")
    print()

    print("exact densities over edge subsets (zeros skipped):")
    total = Fraction(0)
    subsets = chain.from_iterable(
        combinations(edges, r) for r in range(len(edges) + 1))
    for X in subsets:
        d = exact_density(H, X, G.n)
        total += d
        if d:
            print(f"  {{{', '.join(label(e) for e in X)}}}: {d * den}/{den}")
    print(f"sum of exact densities = {total * den}/{den}")
    assert total == hom_density(H, G)
    print()

    # pinned density at a site: the part of t attached to that one pair,
    # bounded by m(m-1)/n^2 independent of the graph
    cap = Fraction(H.m * (H.m - 1), G.n ** 2)
    print(f"pinned densities (cap {cap}):")
    for e in edges:
        print(f"  t_{label(e)} = {pinned_density(H, G, e)}")


if __name__ == "__main__":
    main()
