"""Labeled simple graphs, motif patterns, and exact homomorphism counting.

Vertices are integers 0..n-1.  An edge site is a pair (i, j) with i < j; the
site set over n vertices is ordered lexicographically, and exhaustive graph
enumeration walks edge-subset bitmasks in increasing order with bit k standing
for the k-th site.  That order is part of the contract: two runs of any
enumeration in this package produce identical sequences.

Homomorphism counts are plain integers from backtracking, densities are exact
rationals; floats only appear once a beta vector is folded in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

# Exhaustive sweeps over all 2^C(n,2) graphs stop being a desk job past n = 7.
ENUMERATION_GUARD = 7


class GuardExceeded(RuntimeError):
    """An exhaustive computation would exceed its size guard; pass force=True
    (or --force on the command line) to run it anyway."""


def canonical_edge(u: int, v: int, n: int) -> tuple[int, int]:
    """Validate one vertex pair against n and return it as (min, max)."""
    if not (isinstance(u, int) and isinstance(v, int)):
        raise ValueError(f"vertex pair ({u!r}, {v!r}) must be integers")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex pair ({u}, {v}) out of range for n={n}")
    if u == v:
        raise ValueError(f"({u}, {v}) is a self-loop, not an edge site")
    return (u, v) if u < v else (v, u)


@lru_cache(maxsize=None)
def all_edge_sites(n: int) -> tuple[tuple[int, int], ...]:
    """Every vertex pair over 0..n-1, lexicographically ordered."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def edge_index(n: int) -> dict[tuple[int, int], int]:
    """Position of each pair inside all_edge_sites(n); defines bitmask bits."""
    return {e: k for k, e in enumerate(all_edge_sites(n))}


@dataclass(frozen=True)
class SimpleGraph:
    """A labeled simple graph: vertex count n plus a set of canonical edges."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge {(u, v)} is not canonical for n={self.n}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def mask(self) -> int:
        """Edge-subset bitmask of this graph in the canonical site order."""
        idx = edge_index(self.n)
        m = 0
        for e in self.edges:
            m |= 1 << idx[e]
        return m

    def adjacency(self) -> list[int]:
        """Neighbor sets as per-vertex bitmasks over vertices."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


def make_graph(n: int, edges: Iterable[Sequence[int]], strict: bool = True) -> SimpleGraph:
    """Build a SimpleGraph from raw vertex pairs.

    Pairs are canonicalized to (min, max).  Duplicates after canonicalization
    are rejected when strict (the default) and collapsed otherwise.
    """
    seen: set[tuple[int, int]] = set()
    for pair in edges:
        u, v = pair
        e = canonical_edge(u, v, n)
        if e in seen and strict:
            raise ValueError(f"duplicate edge {e} after canonicalization")
        seen.add(e)
    return SimpleGraph(n, frozenset(seen))


def empty_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, frozenset())


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, frozenset(all_edge_sites(n)))


def graph_from_mask(n: int, mask: int) -> SimpleGraph:
    """Decode an edge-subset bitmask (canonical site order) into a graph."""
    sites = all_edge_sites(n)
    if mask < 0 or mask >= (1 << len(sites)):
        raise ValueError(f"mask {mask} out of range for n={n}")
    return SimpleGraph(n, frozenset(sites[k] for k in range(len(sites)) if mask >> k & 1))


def enumerate_graphs(n: int, force: bool = False) -> Iterator[SimpleGraph]:
    """All 2^C(n,2) labeled graphs on n vertices, in increasing bitmask order.

    Guarded at n <= ENUMERATION_GUARD unless force is given.
    """
    if n > ENUMERATION_GUARD and not force:
        raise GuardExceeded(f"enumerate_graphs(n={n}) exceeds guard n<={ENUMERATION_GUARD}")
    sites = all_edge_sites(n)
    for mask in range(1 << len(sites)):
        yield graph_from_mask(n, mask)


@dataclass(frozen=True)
class Motif:
    """A pattern graph on m vertices whose homomorphism density is tracked.

    p = number of edges.  Motifs must be simple with at least one edge; m >= 2.
    """

    name: str
    m: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError("a motif needs at least two vertices")
        if not self.edges:
            raise ValueError("a motif needs at least one edge")
        for u, v in self.edges:
            if not (0 <= u < v < self.m):
                raise ValueError(f"motif edge {(u, v)} is not canonical for m={self.m}")

    @property
    def p(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[int]:
        adj = [0] * self.m
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


BUILTIN_MOTIFS: dict[str, Motif] = {
    "edge": Motif("edge", 2, frozenset({(0, 1)})),
    "two-star": Motif("two-star", 3, frozenset({(0, 1), (1, 2)})),
    "triangle": Motif("triangle", 3, frozenset({(0, 1), (0, 2), (1, 2)})),
}


def motif_from_json(doc: str | dict) -> Motif:
    """Parse a motif document {"name": ..., "m": ..., "edges": [[u, v], ...]}."""
    data = json.loads(doc) if isinstance(doc, str) else doc
    try:
        name = str(data["name"])
        m = int(data["m"])
        raw = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"motif document must carry name, m, edges: {exc}") from exc
    edges = set()
    for pair in raw:
        u, v = pair
        e = canonical_edge(int(u), int(v), m)
        if e in edges:
            raise ValueError(f"duplicate motif edge {e}")
        edges.add(e)
    return Motif(name, m, frozenset(edges))


def load_motif(source: str) -> Motif:
    """Resolve a motif by builtin name or by JSON file path."""
    if source in BUILTIN_MOTIFS:
        return BUILTIN_MOTIFS[source]
    path = Path(source)
    if path.exists():
        return motif_from_json(path.read_text())
    raise ValueError(f"unknown motif {source!r}: not a builtin "
                     f"({', '.join(sorted(BUILTIN_MOTIFS))}) and no such file")


def graph_from_json(doc: str | dict) -> SimpleGraph:
    """Parse a graph document {"n": ..., "edges": [[u, v], ...]}."""
    data = json.loads(doc) if isinstance(doc, str) else doc
    try:
        n = int(data["n"])
        raw = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"graph document must carry n and edges: {exc}") from exc
    return make_graph(n, [(int(u), int(v)) for u, v in raw])


def check_alignment(motifs: Sequence[Motif], betas: Sequence) -> None:
    """A parameter vector must pair one real weight with each motif."""
    if len(motifs) != len(betas):
        raise ValueError(f"{len(motifs)} motifs but {len(betas)} weights")
    if not motifs:
        raise ValueError("empty motif family")
    for H in motifs:
        if not isinstance(H, Motif):
            raise ValueError(f"not a motif: {H!r}")


def _traversal_order(H: Motif) -> tuple[list[int], int]:
    """Backtracking order over the non-isolated motif vertices.

    Breadth-first inside each component so that every vertex after a component
    root has an already-placed neighbor (which is what makes the incremental
    candidate pruning bite).  Returns (order, isolated_count).
    """
    adj = H.adjacency()
    seen: set[int] = set()
    order: list[int] = []
    isolated = 0
    for start in range(H.m):
        if start in seen:
            continue
        if adj[start] == 0:
            isolated += 1
            seen.add(start)
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            nbrs = adj[v]
            while nbrs:
                bit = nbrs & -nbrs
                nbrs ^= bit
                u = bit.bit_length() - 1
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order, isolated


def hom_count(H: Motif, G: SimpleGraph) -> int:
    """Number of maps V(H) -> V(G) sending every motif edge to an edge of G.

    Plain backtracking over vertex images; at each step the candidate set is
    the intersection of the G-neighborhoods of the images of already-placed
    motif neighbors.  Isolated motif vertices contribute a free factor n each.
    """
    n = G.n
    if n == 0:
        return 0
    order, isolated = _traversal_order(H)
    hadj = H.adjacency()
    gadj = G.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    # Earlier-placed motif neighbors of each vertex in the order.
    earlier = [[pos[u] for u in _bits(hadj[v]) if u in pos and pos[u] < i]
               for i, v in enumerate(order)]
    full = (1 << n) - 1
    images = [0] * len(order)
    count = 0

    def place(i: int) -> None:
        nonlocal count
        if i == len(order):
            count += 1
            return
        cand = full
        for j in earlier[i]:
            cand &= gadj[images[j]]
            if not cand:
                return
        while cand:
            bit = cand & -cand
            cand ^= bit
            images[i] = bit.bit_length() - 1
            place(i + 1)

    place(0)
    return count * n ** isolated


def _bits(mask: int) -> Iterator[int]:
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1


def hom_density(H: Motif, G: SimpleGraph) -> Fraction:
    """t(H, G) = hom_count / n^m as an exact rational."""
    if G.n == 0:
        raise ValueError("homomorphism density needs at least one vertex")
    return Fraction(hom_count(H, G), G.n ** H.m)


def weighted_density(motifs: Sequence[Motif], betas: Sequence[float], G: SimpleGraph) -> float:
    """Sum of beta_i * t(H_i, G), accumulated exactly and rounded once.

    Floats are binary rationals, so folding each beta in as a Fraction keeps
    the whole sum exact; the only rounding is the final conversion.
    """
    check_alignment(motifs, betas)
    total = Fraction(0)
    for H, b in zip(motifs, betas):
        total += Fraction(b) * hom_density(H, G)
    return float(total)
