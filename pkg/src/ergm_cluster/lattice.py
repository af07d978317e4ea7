"""Edge-subset densities and the induced finite-body lattice-gas interaction.

A motif H contributes to an edge subset X through maps whose edge image lands
inside X and covers all of it; d(H, X) is that count over n^m.  Summing d over
the subsets of E(G) recovers the homomorphism density t(H, G), which is what
lets a motif family act as a lattice gas on the C(n,2) edge sites with a
finite-body interaction K(X) = n^2 * sum_i beta_i d(H_i, X).

All structural densities are exact rationals; K values are floats with a
single documented rounding point in build_interaction.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .graphs import (
    Motif,
    SimpleGraph,
    all_edge_sites,
    canonical_edge,
    check_alignment,
    edge_index,
    hom_density,
    _bits,
    _traversal_order,
)

EdgeSubset = tuple[tuple[int, int], ...]


def freeze_sites(sites: Iterable[Sequence[int]], n: int) -> EdgeSubset:
    """Canonicalize a collection of vertex pairs into a sorted site tuple."""
    out = set()
    for pair in sites:
        u, v = pair
        out.add(canonical_edge(u, v, n))
    return tuple(sorted(out))


def _support_vertices(X: EdgeSubset) -> tuple[int, ...]:
    verts: set[int] = set()
    for u, v in X:
        verts.add(u)
        verts.add(v)
    return tuple(sorted(verts))


def exact_hom_count(H: Motif, X: EdgeSubset, n: int) -> int:
    """Number of maps V(H) -> V_n whose edge image lies inside X and covers X.

    Non-isolated motif vertices can only land on support vertices of X (their
    incident edges must map into X), so backtracking runs over the support;
    isolated vertices contribute a free factor n each.  Short-circuits to 0
    when |X| exceeds the motif edge count: p edges cannot cover more sites.
    """
    X = tuple(sorted(X))
    if not X or len(X) > H.p:
        return 0
    verts = _support_vertices(X)
    if verts[-1] >= n:
        raise ValueError(f"subset {X} does not fit inside n={n}")
    site_bit = {e: 1 << k for k, e in enumerate(X)}
    # Adjacency restricted to X, plus the bit of the site each pair realizes.
    xadj: dict[int, int] = {v: 0 for v in verts}
    for u, v in X:
        xadj[u] |= 1 << v
        xadj[v] |= 1 << u
    order, isolated = _traversal_order(H)
    hadj = H.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[u] for u in _bits(hadj[v]) if u in pos and pos[u] < i]
               for i, v in enumerate(order)]
    support_mask = 0
    for v in verts:
        support_mask |= 1 << v
    full_cover = (1 << len(X)) - 1
    images = [0] * len(order)
    count = 0

    def place(i: int, covered: int) -> None:
        nonlocal count
        if i == len(order):
            if covered == full_cover:
                count += 1
            return
        cand = support_mask
        for j in earlier[i]:
            cand &= xadj[images[j]]
            if not cand:
                return
        while cand:
            bit = cand & -cand
            cand ^= bit
            w = bit.bit_length() - 1
            add = 0
            for j in earlier[i]:
                a, b = images[j], w
                add |= site_bit[(a, b) if a < b else (b, a)]
            images[i] = w
            place(i + 1, covered | add)

    place(0, 0)
    return count * n ** isolated


def exact_density(H: Motif, X: EdgeSubset, n: int) -> Fraction:
    """d(H, X): exact homomorphism density of H on the edge subset X."""
    if n < 1:
        raise ValueError("need at least one vertex")
    return Fraction(exact_hom_count(H, X, n), n ** H.m)


@lru_cache(maxsize=None)
def support_families(H: Motif, n: int) -> dict[EdgeSubset, Fraction]:
    """All X with d(H, X) != 0, found by enumerating homomorphic edge images.

    Walks every map of the non-isolated motif vertices into V_n that sends no
    motif edge to a loop, and buckets the maps by their edge image; scanning
    the 2^C(n,2) subsets never happens.  Keys are canonical site tuples in
    sorted order, values exact rationals.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    order, isolated = _traversal_order(H)
    hadj = H.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[u] for u in _bits(hadj[v]) if u in pos and pos[u] < i]
               for i, v in enumerate(order)]
    full = (1 << n) - 1
    images = [0] * len(order)
    counts: dict[EdgeSubset, int] = defaultdict(int)

    def place(i: int) -> None:
        if i == len(order):
            image = set()
            for v, iv in pos.items():
                a = images[iv]
                nbrs = hadj[v]
                while nbrs:
                    bit = nbrs & -nbrs
                    nbrs ^= bit
                    u = bit.bit_length() - 1
                    if u in pos:
                        b = images[pos[u]]
                        image.add((a, b) if a < b else (b, a))
            counts[tuple(sorted(image))] += 1
            return
        cand = full
        for j in earlier[i]:
            cand &= full ^ (1 << images[j])  # no motif edge may collapse to a loop
            if not cand:
                return
        while cand:
            bit = cand & -cand
            cand ^= bit
            images[i] = bit.bit_length() - 1
            place(i + 1)

    place(0)
    denom = n ** H.m
    scale = n ** isolated
    return {X: Fraction(c * scale, denom) for X, c in sorted(counts.items())}


def representation_check(H: Motif, G: SimpleGraph) -> bool:
    """Exact identity t(H, G) == sum of d(H, X) over subsets X of E(G)."""
    fam = support_families(H, G.n)
    total = Fraction(0)
    for X, d in fam.items():
        if all(e in G.edges for e in X):
            total += d
    return total == hom_density(H, G)


def pinned_density(H: Motif, G: SimpleGraph, e: Sequence[int]) -> Fraction:
    """Sum of d(H, X) over subsets X of E(G) that contain the site e.

    Bounded by m(m-1)/n^2 regardless of G: pinning one motif edge to e fixes
    an ordered vertex pair (m(m-1) ways) and frees the remaining m-2 images.
    """
    site = canonical_edge(e[0], e[1], G.n)
    fam = support_families(H, G.n)
    total = Fraction(0)
    for X, d in fam.items():
        if site in X and all(x in G.edges for x in X):
            total += d
    return total


@dataclass(frozen=True)
class Interaction:
    """Sparse finite-body interaction on the edge sites of K_n.

    k_map sends canonical site tuples X to real values K(X); exact zeros are
    never stored, and no stored X has more than p_max sites.
    """

    n: int
    k_map: Mapping[EdgeSubset, float]
    p_max: int

    def __post_init__(self) -> None:
        idx = edge_index(self.n)
        for X, v in self.k_map.items():
            if not X:
                raise ValueError("empty subsets cannot carry interaction")
            if len(X) > self.p_max:
                raise ValueError(f"{X} has more than p_max={self.p_max} sites")
            for e in X:
                if e not in idx:
                    raise ValueError(f"site {e} outside the edge set of K_{self.n}")
            if v == 0:
                raise ValueError(f"exact zero stored at {X}")

    def links(self) -> list[EdgeSubset]:
        """Stored subsets in canonical sorted order."""
        return sorted(self.k_map)

    def __len__(self) -> int:
        return len(self.k_map)


def build_interaction(motifs: Sequence[Motif], betas: Sequence[float], n: int) -> Interaction:
    """K(X) = n^2 * sum_i beta_i d(H_i, X), assembled exactly and rounded once.

    The support families are exact rationals and each beta enters as the exact
    binary rational behind the float, so cancellations are decided exactly;
    the single rounding point is the final float() per stored subset.
    """
    check_alignment(motifs, betas)
    acc: dict[EdgeSubset, Fraction] = defaultdict(Fraction)
    for H, b in zip(motifs, betas):
        fb = Fraction(b)
        if fb == 0:
            continue
        for X, d in support_families(H, n).items():
            acc[X] += fb * d
    n2 = n * n
    k_map = {X: float(n2 * v) for X, v in sorted(acc.items()) if v != 0}
    return Interaction(n=n, k_map=k_map, p_max=max(H.p for H in motifs))


def pinned_abs_sum(K: Interaction, e: Sequence[int]) -> float:
    """Sum of |K(X)| over stored subsets X containing the site e."""
    site = canonical_edge(e[0], e[1], K.n)
    return sum(abs(v) for X, v in sorted(K.k_map.items()) if site in X)


def banach_norm(K: Interaction) -> float:
    """sup over edge sites e of sum_{X contains e} |K(X)|; 0 when K is empty.

    Bounded above by m(m-1) * sum_i |beta_i| for an interaction built from
    motifs on at most m vertices.
    """
    per_site: dict[tuple[int, int], float] = defaultdict(float)
    for X, v in sorted(K.k_map.items()):
        a = abs(v)
        for e in X:
            per_site[e] += a
    if not per_site:
        return 0.0
    return max(per_site[e] for e in sorted(per_site))


def hamiltonian(K: Interaction, G: SimpleGraph) -> float:
    """H(sigma_G) = -sum over stored X inside E(G) of K(X).

    sigma_G is the edge-indicator configuration of G, so the product of
    occupation numbers over X is 1 exactly when X is a subset of E(G).
    Equals -n^2 * weighted_density for the motif family that built K.
    """
    if G.n != K.n:
        raise ValueError(f"graph on {G.n} vertices against interaction on {K.n}")
    total = 0.0
    for X, v in sorted(K.k_map.items()):
        if all(e in G.edges for e in X):
            total += v
    return -total


def interaction_dump(K: Interaction) -> list[dict]:
    """Dump format: a JSON-ready list of {sites, value}, canonically sorted."""
    return [{"sites": [list(e) for e in X], "value": K.k_map[X]} for X in K.links()]


def interaction_from_dump(n: int, p_max: int, terms: Iterable[dict]) -> Interaction:
    """Rebuild an Interaction from its dump plus the (n, p_max) envelope."""
    k_map: dict[EdgeSubset, float] = {}
    for term in terms:
        X = freeze_sites(term["sites"], n)
        if X in k_map:
            raise ValueError(f"duplicate subset {X} in dump")
        k_map[X] = float(term["value"])
    return Interaction(n=n, k_map=k_map, p_max=p_max)
