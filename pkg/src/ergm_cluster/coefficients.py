"""Upper-bound coefficients for rooted connected hypergraph sums.

The per-site convergence certificate needs a majorant for the contribution of
connected hypergraphs with a given number of links.  With c = 2 ||K|| M^p the
majorant is abar_n = gamma_n c^n where the gamma_n solve a convolution
recursion; their generating function w(z) = sum gamma_n z^n satisfies
w = z (1 + w)^p, so gamma_n = binom(p n, n - 1) / n by Lagrange inversion and
the series has radius (p-1)^(p-1) / p^p.  Everything structural here is exact
rational arithmetic; floats appear only when a norm is substituted in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

COEFFICIENT_GUARD = 64


def _validate_pm(p: int, M: float) -> None:
    if not isinstance(p, int) or p < 1:
        raise ValueError(f"edge count p must be a positive integer, got {p!r}")
    if not M > 1:
        raise ValueError(f"weight base M must exceed 1, got {M!r}")


def optimal_M(p: int) -> float:
    """The weight base maximizing the admissible norm region for edge count p.

    Setting the M-derivative of the region bound to zero gives
    log M = (-p + sqrt(5 p^2 - 4 p)) / (2 p (p - 1)); degenerate at p = 1.
    """
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"optimal weight base needs p >= 2, got {p!r}")
    return math.exp((-p + math.sqrt(5.0 * p * p - 4.0 * p)) / (2.0 * p * (p - 1)))


def region_bound(p: int, m: int, M: float) -> float:
    """Largest admissible sum of |beta_i| for motifs on <= m vertices, <= p edges.

    The certificate tolerates interaction norms up to
    log M (p-1)^p / (2 (M p)^p (1 + (p-1) log M)), additionally capped at 1/2;
    dividing by the norm bound factor m(m-1) converts that into a budget on
    the parameter vector.  Degenerate at p = 1 (single-edge-motif families are
    solvable exactly and need no series region).
    """
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"region bound needs p >= 2, got {p!r}")
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"vertex count m must be an integer >= 2, got {m!r}")
    _validate_pm(p, M)
    log_m = math.log(M)
    rhs = log_m * (p - 1) ** p / (2.0 * (M * p) ** p * (1.0 + (p - 1) * log_m))
    return min(rhs, 0.5) / (m * (m - 1))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` positive integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _gamma_table(p: int, n_max: int) -> tuple[Fraction, ...]:
    """gamma_1..gamma_n_max as exact rationals, 0-slot padded for 1-indexing.

    gamma_1 = 1; for n >= 2,
    gamma_n = sum_{k=1..p} binom(p, k) sum over compositions n_1+..+n_k = n-1
    of gamma_{n_1} ... gamma_{n_k}.
    """
    g: list[Fraction] = [Fraction(0), Fraction(1)]
    for n in range(2, n_max + 1):
        total = Fraction(0)
        for k in range(1, p + 1):
            if n - 1 < k:
                break
            coeff = math.comb(p, k)
            for comp in _compositions(n - 1, k):
                prod = Fraction(coeff)
                for part in comp:
                    prod *= g[part]
                total += prod
        g.append(total)
    return tuple(g)


@dataclass(frozen=True)
class CoefficientTable:
    """abar_n = gamma_n * (2 norm M^p)^n for n = 1..n_max.

    gamma is stored exactly with the scalar c = 2 norm M^p factored out
    symbolically, so structural identities can be checked in rational
    arithmetic regardless of the float norm.
    """

    p: int
    norm: float
    M: float
    gamma: tuple[Fraction, ...]  # gamma[0] unused pad; entries 1..n_max live

    @property
    def n_max(self) -> int:
        return len(self.gamma) - 1

    @property
    def c(self) -> float:
        return 2.0 * self.norm * self.M ** self.p

    def abar(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"order {n} outside table 1..{self.n_max}")
        return float(self.gamma[n]) * self.c ** n


def abar_recursion(p: int, norm: float, M: float, n_max: int = 30) -> CoefficientTable:
    """Tabulate the majorant coefficients for one (p, norm, M) triple."""
    _validate_pm(p, M)
    if norm < 0:
        raise ValueError("interaction norm cannot be negative")
    if not 1 <= n_max <= COEFFICIENT_GUARD:
        raise ValueError(f"n_max must lie in 1..{COEFFICIENT_GUARD}")
    return CoefficientTable(p=p, norm=float(norm), M=float(M), gamma=_gamma_table(p, n_max))


def gamma_closed_form(p: int, n: int) -> Fraction:
    """binom(p n, n - 1) / n, the Lagrange-inversion value of gamma_n."""
    if n < 1:
        raise ValueError("order must be positive")
    return Fraction(math.comb(p * n, n - 1), n)


def _poly_mul(a: list[Fraction], b: list[Fraction], n_max: int) -> list[Fraction]:
    out = [Fraction(0)] * (n_max + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j > n_max:
                break
            out[i + j] += ai * bj
    return out


def _satisfies_identity(p: int, gamma: tuple[Fraction, ...]) -> bool:
    """Does w = z (1 + w)^p hold through the tabulated order?

    gamma is 1-indexed with a 0 pad; w is the formal series with those
    coefficients, and both sides are expanded as truncated rational series.
    """
    n_max = len(gamma) - 1
    w = [Fraction(0)] + list(gamma[1:])
    one_plus_w = list(w)
    one_plus_w[0] = Fraction(1)
    power = [Fraction(1)]
    for _ in range(p):
        power = _poly_mul(power, one_plus_w, n_max)
    rhs = [Fraction(0)] * (n_max + 1)
    for i in range(1, n_max + 1):
        rhs[i] = power[i - 1]
    return rhs == w


def generating_function_check(p: int, norm: float, M: float, n_max: int = 30) -> bool:
    """Verify the recursion output against its generating-function identity.

    The scalar c = 2 norm M^p rescales z without touching the identity, so the
    check runs on the exact gamma coefficients.
    """
    table = abar_recursion(p, norm, M, n_max)
    return _satisfies_identity(p, table.gamma)


def radius_and_tail(p: int, norm: float, M: float) -> tuple[float, Callable[[int], float]]:
    """Convergence radius in z and the closed-form geometric tail bound.

    abar_n <= (2 norm (M p)^p)^n (p-1)^(-(1 + (p-1) n)), a geometric sequence
    with ratio q = 2 norm (M p)^p / (p-1)^(p-1).  tail_bound(n0) sums the
    bound over n > n0 (math.inf when q >= 1, i.e. outside the radius).
    Degenerate at p = 1; norm = 0 returns an infinite radius and zero tails.
    """
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"radius/tail need p >= 2, got {p!r}")
    _validate_pm(p, M)
    if norm < 0:
        raise ValueError("interaction norm cannot be negative")
    if norm == 0:
        return math.inf, lambda n0: 0.0
    radius = (p - 1) ** (p - 1) / (2.0 * norm * (M * p) ** p)
    q = 2.0 * norm * (M * p) ** p / (p - 1) ** (p - 1)

    def tail_bound(n0: int) -> float:
        if n0 < 0:
            raise ValueError("tail order must be nonnegative")
        if q >= 1.0:
            return math.inf
        return q ** (n0 + 1) / ((p - 1) * (1.0 - q))

    return radius, tail_bound


def coefficient_tail(table: CoefficientTable, from_order: int) -> float:
    """sum_{n > from_order} abar_n: tabulated values, then a geometric cap.

    Orders beyond the table are covered by the closed-form bound on abar_n;
    returns math.inf when that bound's ratio reaches 1 (series divergent).
    """
    if from_order < 0:
        raise ValueError("tail order must be nonnegative")
    c = table.c
    if c == 0:
        return 0.0
    p = table.p
    total = 0.0
    for n in range(from_order + 1, table.n_max + 1):
        total += float(table.gamma[n]) * c ** n
    if p == 1:
        # Links with one site never overlap, so gamma_n = 1 and the series
        # past the table is exactly geometric in c.
        ratio, scale = c, 1.0
    else:
        ratio, scale = c * p ** p / (p - 1) ** (p - 1), 1.0 / (p - 1)
    if ratio >= 1.0:
        return math.inf
    start = max(from_order, table.n_max) + 1
    return total + scale * ratio ** start / (1.0 - ratio)
