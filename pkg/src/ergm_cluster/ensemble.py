"""Exhaustive ensemble computations on small vertex sets.

Everything here enumerates all 2^C(n,2) graphs in bitmask order: the exact
normalized partition function of an interaction, the finite-size free energies
psi_n and phi_n, model expectations of motif densities, and a central-difference
check that d psi / d beta_i matches the expectation of t(H_i, G).

psi_n and the expectations go through raw homomorphism counts, while
partition_normalized goes through the sparse interaction; the two pipelines
share no intermediate, which is what makes the bookkeeping identity
psi_n = (C(n,2) log 2 + log W) / n^2 a real cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .graphs import (
    GuardExceeded,
    Motif,
    all_edge_sites,
    check_alignment,
    edge_index,
    graph_from_mask,
    hom_count,
)
from .lattice import Interaction

# 2^15 graphs at n = 6 is where exhaustive float sweeps start to crawl.
ENSEMBLE_GUARD = 6


def _check_guard(n: int, force: bool) -> None:
    if n < 1:
        raise ValueError("need at least one vertex")
    if n > ENSEMBLE_GUARD and not force:
        raise GuardExceeded(f"exhaustive ensemble at n={n} exceeds guard n<={ENSEMBLE_GUARD}")


def _logsumexp(values: np.ndarray) -> float:
    """Max-shifted log of a sum of exponentials, summed in array order."""
    hi = float(np.max(values))
    return hi + math.log(float(np.sum(np.exp(values - hi))))


@lru_cache(maxsize=None)
def motif_hom_table(H: Motif, n: int) -> np.ndarray:
    """hom_count(H, G) for every graph G on n vertices, indexed by bitmask.

    Computed once per (motif, n) by backtracking on each graph and memoized;
    the returned array is marked read-only because it is shared.
    """
    sites = all_edge_sites(n)
    table = np.zeros(1 << len(sites), dtype=np.int64)
    for mask in range(1 << len(sites)):
        table[mask] = hom_count(H, graph_from_mask(n, mask))
    table.flags.writeable = False
    return table


def graph_log_weights(motifs: Sequence[Motif], betas: Sequence[float], n: int) -> np.ndarray:
    """n^2 * T(G) for every graph, T(G) = sum_i beta_i t(H_i, G)."""
    check_alignment(motifs, betas)
    sites = all_edge_sites(n)
    weights = np.zeros(1 << len(sites), dtype=np.float64)
    n2 = float(n * n)
    for H, b in zip(motifs, betas):
        if b == 0:
            continue
        weights += (n2 * float(b) / n ** H.m) * motif_hom_table(H, n)
    return weights


def psi_n(motifs: Sequence[Motif], betas: Sequence[float], n: int, force: bool = False) -> float:
    """Finite-size free energy (1/n^2) log sum_G exp(n^2 T(G))."""
    _check_guard(n, force)
    return _logsumexp(graph_log_weights(motifs, betas, n)) / (n * n)


def partition_normalized(K: Interaction, force: bool = False) -> float:
    """log W for W = 2^-C(n,2) sum over configurations of exp(sum K(X) sigma_X).

    Configurations are edge subsets; sigma_X = 1 exactly when X is inside the
    occupied set, so each stored subset adds K(X) to the energy of every
    bitmask containing it.  Summation order is fixed by the bitmask order.
    """
    _check_guard(K.n, force)
    sites = all_edge_sites(K.n)
    idx = edge_index(K.n)
    count = 1 << len(sites)
    energies = np.zeros(count, dtype=np.float64)
    masks = np.arange(count, dtype=np.int64)
    for X in sorted(K.k_map):
        xmask = 0
        for e in X:
            xmask |= 1 << idx[e]
        energies[(masks & xmask) == xmask] += K.k_map[X]
    return _logsumexp(energies) - len(sites) * math.log(2.0)


def phi_n(K: Interaction, force: bool = False) -> float:
    """Per-site free energy log W / C(n,2)."""
    sites = all_edge_sites(K.n)
    return partition_normalized(K, force=force) / len(sites)


def expectation_densities(motifs: Sequence[Motif], betas: Sequence[float], n: int,
                          force: bool = False) -> list[float]:
    """Model expectations E[t(H_i, G)] under the exponential family weights."""
    _check_guard(n, force)
    weights = graph_log_weights(motifs, betas, n)
    probs = np.exp(weights - np.max(weights))
    probs /= np.sum(probs)
    out = []
    for H in motifs:
        dens = motif_hom_table(H, n) / float(n ** H.m)
        out.append(float(np.dot(dens, probs)))
    return out


def derivative_check(motifs: Sequence[Motif], betas: Sequence[float], n: int,
                     i: int, h: float = 1e-4, force: bool = False) -> tuple[float, float]:
    """Central difference of psi_n in beta_i against the motif expectation.

    Returns (finite_difference, expectation); the two agree to O(h^2) because
    d psi_n / d beta_i = E[t(H_i, G)] at every finite n.
    """
    check_alignment(motifs, betas)
    if not 0 <= i < len(betas):
        raise ValueError(f"coordinate {i} out of range")
    if h <= 0:
        raise ValueError("step must be positive")
    up = list(betas)
    dn = list(betas)
    up[i] += h
    dn[i] -= h
    fd = (psi_n(motifs, up, n, force) - psi_n(motifs, dn, n, force)) / (2 * h)
    return fd, expectation_densities(motifs, betas, n, force)[i]


@dataclass(frozen=True)
class EnsembleResult:
    """One exact-ensemble evaluation: free energies plus motif expectations.

    Satisfies psi == (C(n,2)/n^2) * (log 2 + phi) up to float arithmetic.
    """

    n: int
    betas: tuple[float, ...]
    log_w_normalized: float
    psi: float
    phi: float
    expectations: tuple[float, ...]


def ensemble_result(motifs: Sequence[Motif], betas: Sequence[float], n: int,
                    force: bool = False) -> EnsembleResult:
    """Run both exact pipelines for one parameter point."""
    from .lattice import build_interaction

    _check_guard(n, force)
    K = build_interaction(motifs, betas, n)
    log_w = partition_normalized(K, force=force)
    sites = all_edge_sites(n)
    return EnsembleResult(
        n=n,
        betas=tuple(float(b) for b in betas),
        log_w_normalized=log_w,
        psi=psi_n(motifs, betas, n, force=force),
        phi=log_w / len(sites),
        expectations=tuple(expectation_densities(motifs, betas, n, force=force)),
    )


def _fmt(x: float) -> str:
    return "%.17g" % x


def csv_header(k: int) -> str:
    """Column layout: n, beta_1..beta_k, psi_n, phi_n, E_1..E_k."""
    parts = ["n"]
    parts += [f"beta_{i}" for i in range(1, k + 1)]
    parts += ["psi_n", "phi_n"]
    parts += [f"E_{i}" for i in range(1, k + 1)]
    return ",".join(parts)


def csv_row(res: EnsembleResult) -> str:
    parts = [str(res.n)]
    parts += [_fmt(b) for b in res.betas]
    parts += [_fmt(res.psi), _fmt(res.phi)]
    parts += [_fmt(e) for e in res.expectations]
    return ",".join(parts)


def results_csv(results: Sequence[EnsembleResult]) -> str:
    """Render results as one CSV document (header + one row per result)."""
    if not results:
        raise ValueError("nothing to render")
    k = len(results[0].betas)
    if any(len(r.betas) != k for r in results):
        raise ValueError("results carry differing parameter counts")
    return "\n".join([csv_header(k)] + [csv_row(r) for r in results]) + "\n"
