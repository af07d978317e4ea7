"""Polymer expansion of the normalized partition function.

The links of an interaction are its stored subsets; a hypergraph is a set of
links, connected when the links cannot be split into two groups with disjoint
supports.  Grouping connected hypergraphs by their support N gives polymers
with activity w_N; disjoint collections of polymers resum the partition
function exactly, and the log expands into cluster terms weighted by signed
connected-graph (Ursell) coefficients.  The per-site Kotecky-Preiss condition
sum_{N containing e} |w_N|-bound * M^|N| <= log M is certified by exact
enumeration up to a link-count head plus the analytic coefficient tail.

Enumeration order everywhere is fixed: links in canonical subset order,
connected sets by depth-first extension over that order, accumulation in
yield order.  Results are bit-reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .coefficients import (
    abar_recursion,
    coefficient_tail,
    optimal_M,
    radius_and_tail,
    region_bound,
)
from .ensemble import ENSEMBLE_GUARD, partition_normalized
from .graphs import GuardExceeded, Motif, all_edge_sites, edge_index, check_alignment
from .lattice import EdgeSubset, Interaction, banach_norm, build_interaction, freeze_sites

# Enumeration stops with GuardExceeded after this many connected sets.
DEFAULT_MAX_COUNT = 5_000_000
URSELL_GUARD = 8
ORDER_GUARD = 8
SPIN_GUARD = 20


class _LinkSystem:
    """Indexed view of an interaction's links for the enumeration routines."""

    def __init__(self, K: Interaction):
        self.n = K.n
        self.sites = all_edge_sites(K.n)
        self.index = edge_index(K.n)
        self.links: tuple[EdgeSubset, ...] = tuple(sorted(K.k_map))
        self.values = tuple(float(K.k_map[X]) for X in self.links)
        self.masks = tuple(self._site_mask(X) for X in self.links)
        # Link overlap graph: adjacency bitmasks over link indices.
        by_site: dict[int, int] = {}
        for i, mask in enumerate(self.masks):
            m = mask
            while m:
                bit = m & -m
                m ^= bit
                by_site[bit] = by_site.get(bit, 0) | (1 << i)
        adj = [0] * len(self.links)
        for members in by_site.values():
            mm = members
            while mm:
                bit = mm & -mm
                mm ^= bit
                i = bit.bit_length() - 1
                adj[i] |= members
        for i in range(len(adj)):
            adj[i] &= ~(1 << i)
        self.adj = adj

    def _site_mask(self, X: EdgeSubset) -> int:
        m = 0
        for e in X:
            m |= 1 << self.index[e]
        return m

    def sites_of_mask(self, mask: int) -> EdgeSubset:
        out = []
        while mask:
            bit = mask & -mask
            mask ^= bit
            out.append(self.sites[bit.bit_length() - 1])
        return tuple(out)


def _connected_item_sets(adj: Sequence[int], max_size: int,
                         max_count: int = DEFAULT_MAX_COUNT) -> Iterator[tuple[int, ...]]:
    """Every connected subset of at most max_size items, exactly once.

    Items are graph nodes with adjacency bitmasks.  Depth-first extension
    rooted at each item v in turn, growing only through indices above v and
    only into nodes not already reachable, which is what makes each subset
    appear a single time.  Deterministic lowest-bit-first order.
    """
    if max_size <= 0:
        return
    budget = max_count

    def rec(sub: tuple[int, ...], ext: int, covered: int, above: int) -> Iterator[tuple[int, ...]]:
        nonlocal budget
        budget -= 1
        if budget < 0:
            raise GuardExceeded(f"connected-set enumeration exceeded {max_count} sets")
        yield sub
        if len(sub) == max_size:
            return
        e = ext
        while e:
            wbit = e & -e
            e ^= wbit
            w = wbit.bit_length() - 1
            grow = adj[w] & ~covered & above
            yield from rec(sub + (w,), e | grow, covered | grow | wbit, above)

    for v in range(len(adj)):
        above = -1 << (v + 1)
        vbit = 1 << v
        yield from rec((v,), adj[v] & above, vbit | adj[v], above)


def enumerate_connected_hypergraphs(K: Interaction, max_links: int,
                                    root: Sequence[int] | None = None,
                                    max_count: int = DEFAULT_MAX_COUNT,
                                    ) -> Iterator[tuple[EdgeSubset, ...]]:
    """Connected sets of at most max_links links, as tuples of site tuples.

    With root given, only hypergraphs whose support contains that edge site
    are produced (the enumeration still walks the unrooted stream, so the
    guard counts every connected set inspected).  max_links = 0 yields nothing.
    """
    if max_links < 0:
        raise ValueError("max_links cannot be negative")
    sys = _LinkSystem(K)
    root_bit = None
    if root is not None:
        e = freeze_sites([root], K.n)[0]
        root_bit = 1 << sys.index[e]
    for idxs in _connected_item_sets(sys.adj, max_links, max_count):
        if root_bit is not None:
            support = 0
            for i in idxs:
                support |= sys.masks[i]
            if not support & root_bit:
                continue
        yield tuple(sys.links[i] for i in idxs)


def _spin_sum(values: Sequence[float], masks: Sequence[int], nmask: int) -> float:
    """Normalized sum over occupation states on the support of one hypergraph.

    Each link contributes exp(K(X) sigma_X) - 1 with sigma_X the product of
    the occupation numbers on its sites.  expm1(0) = 0 kills every state that
    leaves a link uncovered, so only the all-occupied state survives; the loop
    still runs the literal definition.
    """
    site_bits = []
    m = nmask
    while m:
        bit = m & -m
        m ^= bit
        site_bits.append(bit)
    s = len(site_bits)
    if s > SPIN_GUARD:
        raise GuardExceeded(f"spin sum over {s} sites exceeds guard {SPIN_GUARD}")
    total = 0.0
    for occ in range(1 << s):
        sigma = 0
        for j in range(s):
            if occ >> j & 1:
                sigma |= site_bits[j]
        prod = 1.0
        for val, lm in zip(values, masks):
            prod *= math.expm1(val if (sigma & lm) == lm else 0.0)
            if prod == 0.0:
                break
        total += prod
    return total / (1 << s)


def _subsystem(sys: _LinkSystem, nmask: int) -> tuple[list[int], list[int]]:
    """Indices of links inside nmask and their adjacency restricted there."""
    inside = [i for i, m in enumerate(sys.masks) if m and (m & nmask) == m]
    back = {i: j for j, i in enumerate(inside)}
    adj = [0] * len(inside)
    for j, i in enumerate(inside):
        nbrs = sys.adj[i]
        while nbrs:
            bit = nbrs & -nbrs
            nbrs ^= bit
            k = bit.bit_length() - 1
            if k in back:
                adj[j] |= 1 << back[k]
    return inside, adj


def polymer_activity(K: Interaction, N: Sequence[Sequence[int]], max_links: int,
                     max_count: int = DEFAULT_MAX_COUNT) -> float:
    """w_N: spin-summed weight of all connected hypergraphs with support N.

    Only links inside N can participate, so the sum over hypergraphs is finite
    even without the max_links cut; the cut is honored anyway as the polymer
    universe is built from bounded hypergraphs.
    """
    sys = _LinkSystem(K)
    X = freeze_sites(N, K.n)
    if not X:
        raise ValueError("a polymer support cannot be empty")
    nmask = sys._site_mask(X)
    inside, adj = _subsystem(sys, nmask)
    total = 0.0
    for idxs in _connected_item_sets(adj, max_links, max_count):
        support = 0
        for j in idxs:
            support |= sys.masks[inside[j]]
        if support != nmask:
            continue
        total += _spin_sum([sys.values[inside[j]] for j in idxs],
                           [sys.masks[inside[j]] for j in idxs], nmask)
    return total


def activity_bound(K: Interaction, N: Sequence[Sequence[int]], max_links: int,
                   max_count: int = DEFAULT_MAX_COUNT) -> float:
    """v_N: the same hypergraph sum with every factor replaced by expm1(|K(X)|).

    Dominates |w_N| term by term."""
    sys = _LinkSystem(K)
    X = freeze_sites(N, K.n)
    if not X:
        raise ValueError("a polymer support cannot be empty")
    nmask = sys._site_mask(X)
    inside, adj = _subsystem(sys, nmask)
    total = 0.0
    for idxs in _connected_item_sets(adj, max_links, max_count):
        support = 0
        prod = 1.0
        for j in idxs:
            support |= sys.masks[inside[j]]
            prod *= math.expm1(abs(sys.values[inside[j]]))
        if support == nmask:
            total += prod
    return total


@dataclass(frozen=True)
class Polymer:
    """A realizable support with its activity and the absolute-value bound."""

    support: EdgeSubset
    activity: float
    bound: float


def polymer_table(K: Interaction, max_links: int,
                  max_count: int = DEFAULT_MAX_COUNT) -> list[Polymer]:
    """All polymers realizable with at most max_links links, canonically sorted.

    Activities accumulate per connected hypergraph using the collapsed form
    of the spin sum: every state short of full occupation carries an expm1(0)
    factor, so the normalized sum equals the plain product of expm1(K(X))
    (bitwise identical to _spin_sum, which a test pins down).
    """
    sys = _LinkSystem(K)
    acc_w: dict[int, float] = {}
    acc_v: dict[int, float] = {}
    for idxs in _connected_item_sets(sys.adj, max_links, max_count):
        support = 0
        w = 1.0
        v = 1.0
        for i in idxs:
            support |= sys.masks[i]
            w *= math.expm1(sys.values[i])
            v *= math.expm1(abs(sys.values[i]))
        acc_w[support] = acc_w.get(support, 0.0) + w
        acc_v[support] = acc_v.get(support, 0.0) + v
    # The activity carries the 2^-|N| spin normalization; the bound, by its
    # definition, does not (it dominates |w_N| all the more).
    return [Polymer(sys.sites_of_mask(mask),
                    acc_w[mask] / (1 << mask.bit_count()),
                    acc_v[mask])
            for mask in sorted(acc_w)]


_URSELL_CACHE: dict[tuple[int, int], int] = {}


def _spanning_connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    if n == 1:
        return True
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = n
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


def _ursell_pairs(n: int, pair_mask: int) -> int:
    """Sum of (-1)^|R| over connected spanning subgraphs R of the overlap graph.

    Exhaustive over subsets of the present overlap edges, memoized by the
    (n, overlap bitmask) pattern; dense patterns near the size guard are
    expensive, which is why tuple sizes are capped at URSELL_GUARD.
    """
    if n == 1:
        return 1
    key = (n, pair_mask)
    hit = _URSELL_CACHE.get(key)
    if hit is not None:
        return hit
    pairs = list(combinations(range(n), 2))
    present = [pairs[k] for k in range(len(pairs)) if pair_mask >> k & 1]
    total = 0
    for sub in range(1 << len(present)):
        chosen = [present[j] for j in range(len(present)) if sub >> j & 1]
        if len(chosen) < n - 1:
            continue
        if _spanning_connected(n, chosen):
            total += -1 if len(chosen) & 1 else 1
    _URSELL_CACHE[key] = total
    return total


def ursell_coefficient(supports: Sequence[Sequence[Sequence[int]]], n_vertices: int | None = None) -> int:
    """Signed connected-graph coefficient of a tuple of polymer supports.

    Builds the overlap graph of the tuple (repeats allowed; equal supports
    always overlap) and sums (-1)^edges over its connected spanning subgraphs.
    Zero exactly when the overlap graph is disconnected.
    """
    k = len(supports)
    if k == 0:
        raise ValueError("the empty tuple has no coefficient")
    if k > URSELL_GUARD:
        raise GuardExceeded(f"tuple size {k} exceeds guard {URSELL_GUARD}")
    sets = [frozenset(tuple(e) for e in X) for X in supports]
    mask = 0
    for bit, (i, j) in enumerate(combinations(range(k), 2)):
        if sets[i] & sets[j]:
            mask |= 1 << bit
    return _ursell_pairs(k, mask)


def _blowup_ursell(r: int, pattern: int, comp: tuple[int, ...]) -> int:
    """Ursell coefficient of a multiset: r distinct supports with the given
    pairwise-overlap pattern, repeated comp[j] times each.

    The tuple overlap graph is the blow-up: copies of one support always
    overlap each other, cross copies follow the base pattern.
    """
    total = sum(comp)
    if total > URSELL_GUARD:
        raise GuardExceeded(f"cluster size {total} exceeds guard {URSELL_GUARD}")
    group = []
    for j, kj in enumerate(comp):
        group.extend([j] * kj)
    mask = 0
    base_pairs = {pair: bool(pattern >> bit & 1)
                  for bit, pair in enumerate(combinations(range(r), 2))}
    for bit, (a, b) in enumerate(combinations(range(total), 2)):
        ga, gb = group[a], group[b]
        if ga == gb or base_pairs[(ga, gb) if ga < gb else (gb, ga)]:
            mask |= 1 << bit
    return _ursell_pairs(total, mask)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _cluster_sums(polymers: Sequence[Polymer], order: int, sys: _LinkSystem,
                  max_count: int, use_abs: bool = False,
                  required: int | None = None) -> list[float]:
    """Per-size cluster sums S_1..S_order over the given polymer universe.

    A cluster is a multiset of polymers with connected overlap graph; ordered
    tuples collapse onto multisets with weight n!/prod k_j!, so each multiset
    contributes ursell * prod w^k / prod k!.  With use_abs the absolute-value
    version is accumulated, optionally restricted to multisets containing the
    polymer at index `required`.
    """
    per_size = [0.0] * (order + 1)
    if not polymers:
        return per_size[1:]
    pmasks = [sys._site_mask(p.support) for p in polymers]
    ws = [p.activity for p in polymers]
    adj = [0] * len(polymers)
    for i in range(len(polymers)):
        for j in range(i + 1, len(polymers)):
            if pmasks[i] & pmasks[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    fact = [math.factorial(i) for i in range(order + 1)]
    for base in _connected_item_sets(adj, order, max_count):
        if required is not None and required not in base:
            continue
        r = len(base)
        pattern = 0
        for bit, (a, b) in enumerate(combinations(range(r), 2)):
            if pmasks[base[a]] & pmasks[base[b]]:
                pattern |= 1 << bit
        base_w = [ws[i] for i in base]
        for total in range(r, order + 1):
            for comp in _compositions(total, r):
                coeff = _blowup_ursell(r, pattern, comp)
                if coeff == 0:
                    continue
                term = float(coeff)
                for wj, kj in zip(base_w, comp):
                    term *= wj ** kj / fact[kj]
                per_size[total] += abs(term) if use_abs else term
    return per_size[1:]


def truncated_log_partition(K: Interaction, order: int, max_links: int = 4,
                            max_count: int = DEFAULT_MAX_COUNT) -> list[float]:
    """Partial sums of the cluster expansion of log W through each order.

    Polymers come from connected hypergraphs with at most max_links links;
    entry n0-1 of the result is the expansion truncated at cluster size n0.
    """
    if not 1 <= order <= ORDER_GUARD:
        raise ValueError(f"order must lie in 1..{ORDER_GUARD}")
    sys = _LinkSystem(K)
    polymers = polymer_table(K, max_links, max_count)
    per_size = _cluster_sums(polymers, order, sys, max_count)
    out = []
    acc = 0.0
    for s in per_size:
        acc += s
        out.append(acc)
    return out


def pinned_cluster_abs_sum(K: Interaction, N: Sequence[Sequence[int]], order: int,
                           max_links: int = 4, max_count: int = DEFAULT_MAX_COUNT) -> float:
    """Absolute cluster mass through the given order of multisets containing N.

    This is the quantity the Kotecky-Preiss condition controls: when the
    certificate passes it is bounded by v_N * M^|N|.
    """
    if not 1 <= order <= ORDER_GUARD:
        raise ValueError(f"order must lie in 1..{ORDER_GUARD}")
    sys = _LinkSystem(K)
    X = freeze_sites(N, K.n)
    polymers = polymer_table(K, max_links, max_count)
    index = {p.support: i for i, p in enumerate(polymers)}
    if X not in index:
        raise ValueError(f"{X} is not a realizable polymer support here")
    per_size = _cluster_sums(polymers, order, sys, max_count,
                             use_abs=True, required=index[X])
    return sum(per_size)


def cluster_partition_sum(K: Interaction, max_count: int = DEFAULT_MAX_COUNT) -> float:
    """W resummed as sum over collections of pairwise-disjoint polymers.

    Polymer activities are aggregated over every connected hypergraph (no
    link-count cut: links inside a finite site set are finite), then the sum
    over disjoint collections runs as a subset-mask sweep.  Equals
    exp(partition_normalized(K)) up to float arithmetic.
    """
    sys = _LinkSystem(K)
    site_count = len(sys.sites)
    if site_count > 22:
        raise GuardExceeded(f"site mask sweep over {site_count} sites is too large")
    if not sys.links:
        return 1.0
    acc: dict[int, float] = {}
    for idxs in _connected_item_sets(sys.adj, len(sys.links), max_count):
        support = 0
        w = 1.0
        for i in idxs:
            support |= sys.masks[i]
            w *= math.expm1(sys.values[i])
        acc[support] = acc.get(support, 0.0) + w
    table = np.zeros(1 << site_count, dtype=np.float64)
    table[0] = 1.0
    masks = np.arange(1 << site_count, dtype=np.int64)
    for sup in sorted(acc):
        free = masks[(masks & sup) == 0]
        table[free | sup] += table[free] * (acc[sup] / (1 << sup.bit_count()))
    return float(np.sum(table))


@dataclass(frozen=True)
class KPCertificate:
    """Outcome of the per-site convergence check at weight base M.

    per_site_sums maps each edge site to its certified upper bound: the
    enumerated head over hypergraphs with at most tail_order links plus the
    analytic coefficient tail.  verdict is True when every entry is at most
    log M and the tail converges.
    """

    M: float
    per_site_sums: Mapping[tuple[int, int], float]
    verdict: bool
    tail_order: int
    norm: float
    tail: float
    reason: str = ""

    @property
    def log_m(self) -> float:
        return math.log(self.M)

    @property
    def max_site_sum(self) -> float:
        return max(self.per_site_sums.values(), default=0.0)


def kp_certify(K: Interaction, M: float, head_links: int = 4,
               table_order: int = 30, max_count: int = DEFAULT_MAX_COUNT) -> KPCertificate:
    """Certify the per-site condition sum_{N ni e} v_N M^|N| <= log M.

    Hypergraphs with at most head_links links are enumerated exactly (their
    absolute weight times M^|support| lands on every site of the support);
    everything longer is dominated by the coefficient tail, which requires the
    interaction norm at or below 1/2 and a convergent majorant series.  Both
    failure modes return a failing certificate with a reason instead of
    raising.
    """
    if not M > 1:
        raise ValueError(f"weight base M must exceed 1, got {M!r}")
    if head_links < 0:
        raise ValueError("head_links cannot be negative")
    sys = _LinkSystem(K)
    heads = {site: 0.0 for site in sys.sites}
    if sys.links and head_links > 0:
        for idxs in _connected_item_sets(sys.adj, head_links, max_count):
            support = 0
            prod = 1.0
            for i in idxs:
                support |= sys.masks[i]
                prod *= math.expm1(abs(sys.values[i]))
            term = prod * M ** support.bit_count()
            m = support
            while m:
                bit = m & -m
                m ^= bit
                heads[sys.sites[bit.bit_length() - 1]] += term
    norm = banach_norm(K)
    reason = ""
    if norm == 0.0:
        tail = 0.0
    elif norm > 0.5:
        tail = math.inf
        reason = (f"norm {norm:.6g} exceeds the 1/2 cap; "
                  "the analytic tail is not justified there")
    else:
        table = abar_recursion(K.p_max, norm, M, table_order)
        tail = coefficient_tail(table, head_links)
        if math.isinf(tail):
            reason = ("tail series divergent: 2 norm (M p)^p reaches "
                      "(p-1)^(p-1) at this norm")
    per_site = {site: heads[site] + tail for site in sys.sites}
    log_m = math.log(M)
    verdict = math.isfinite(tail) and all(v <= log_m for v in per_site.values())
    if not verdict and not reason:
        reason = "a per-site sum exceeds log M"
    return KPCertificate(M=float(M), per_site_sums=per_site, verdict=verdict,
                         tail_order=head_links, norm=norm, tail=tail, reason=reason)


@dataclass(frozen=True)
class OrderRow:
    order: int
    partial_sum: float
    gap_to_exact: float | None
    tail_bound: float | None


@dataclass(frozen=True)
class ExpansionReport:
    """Per-order truncation data plus the certificate and the parameter region."""

    n: int
    motif_names: tuple[str, ...]
    betas: tuple[float, ...]
    M: float
    p: int
    m: int
    norm: float
    max_links: int
    orders: tuple[OrderRow, ...]
    certificate: KPCertificate
    beta_budget: float | None
    log_w_exact: float | None


def expansion_report(motifs: Sequence[Motif], betas: Sequence[float], n: int,
                     order: int = 4, max_links: int = 4, M: float | None = None,
                     head_links: int | None = None, force: bool = False,
                     max_count: int = DEFAULT_MAX_COUNT) -> ExpansionReport:
    """Run the whole expansion pipeline for one parameter point.

    M defaults to the region-optimal base for the family's maximal edge count
    (2.0 for single-edge families, which have no optimum).  The exact log W
    reference is computed whenever n sits inside the ensemble guard.
    """
    check_alignment(motifs, betas)
    K = build_interaction(motifs, betas, n)
    p = K.p_max
    m = max(H.m for H in motifs)
    norm = banach_norm(K)
    if M is None:
        M = optimal_M(p) if p >= 2 else 2.0
    head = max_links if head_links is None else head_links
    cert = kp_certify(K, M, head, max_count=max_count)
    partials = truncated_log_partition(K, order, max_links, max_count)
    exact: float | None = None
    if n <= ENSEMBLE_GUARD or force:
        exact = partition_normalized(K, force=force)
    site_count = len(all_edge_sites(n))
    tail_fn: Callable[[int], float] | None = None
    if p >= 2 and norm > 0:
        _, tail_fn = radius_and_tail(p, norm, M)
    rows = []
    for n0, partial in enumerate(partials, start=1):
        gap = abs(partial - exact) if exact is not None else None
        tb: float | None
        if norm == 0:
            tb = 0.0
        elif tail_fn is None:
            tb = None
        else:
            t = tail_fn(n0)
            tb = site_count * t if math.isfinite(t) else None
        rows.append(OrderRow(order=n0, partial_sum=partial, gap_to_exact=gap, tail_bound=tb))
    budget = region_bound(p, m, M) if p >= 2 else None
    return ExpansionReport(
        n=n, motif_names=tuple(H.name for H in motifs),
        betas=tuple(float(b) for b in betas), M=float(M), p=p, m=m, norm=norm,
        max_links=max_links, orders=tuple(rows), certificate=cert,
        beta_budget=budget, log_w_exact=exact,
    )


def report_jsonable(report: ExpansionReport) -> dict:
    """Report as JSON-ready primitives; divergent bounds become null."""

    def _num(x: float | None) -> float | None:
        if x is None or not math.isfinite(x):
            return None
        return x

    cert = report.certificate
    return {
        "n": report.n,
        "motifs": list(report.motif_names),
        "betas": list(report.betas),
        "norm": report.norm,
        "log_w_exact": _num(report.log_w_exact),
        "orders": [
            {
                "order": row.order,
                "partial_sum": row.partial_sum,
                "gap_to_exact": _num(row.gap_to_exact),
                "tail_bound": _num(row.tail_bound),
            }
            for row in report.orders
        ],
        "kp": {
            "M": cert.M,
            "max_site_sum": _num(cert.max_site_sum),
            "logM": cert.log_m,
            "verdict": cert.verdict,
            "tail_order": cert.tail_order,
            "divergent": not math.isfinite(cert.tail),
            "reason": cert.reason,
        },
        "region": {
            "p": report.p,
            "m": report.m,
            "M": report.M,
            "beta_budget": _num(report.beta_budget),
        },
    }
