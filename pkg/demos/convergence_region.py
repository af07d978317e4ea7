"""Size of the certified convergence region as a function of the weight base.

The per-site condition admits any base M > 1; the coupling budget it buys is
log M (p-1)^p / (2 (M p)^p (1 + (p-1) log M)) scaled by 1/(m(m-1)).  This
script scans M for several interaction ranges p, locates the maximum, and
compares it with the closed-form optimum exp((-p + sqrt(5p^2 - 4p)) / (2p(p-1))).
"""

import math

from ergm_cluster import optimal_M, region_bound


def scan_peak(p, m, lo=1.000001, hi=6.0, steps=400, rounds=4):
    # coarse grid, re-scanned around the best point a few times
    best_m = lo
    for _ in range(rounds):
        best = -1.0
        for k in range(steps + 1):
            M = lo + (hi - lo) * k / steps
            b = region_bound(p, m, M)
            if b > best:
                best_m, best = M, b
        span = (hi - lo) / steps
        lo, hi = max(1.000001, best_m - span), best_m + span
    return best_m, best


def main():
    m = 3
    print(f"budgets for motif families with at most {m} vertices")
    print(f"{'p':>3} {'optimal M':>12} {'log M':>10} {'budget':>14} {'scan peak M':>12}")
    for p in (2, 3, 4, 5):
        M = optimal_M(p)
        budget = region_bound(p, m, M)
        peak_m, _ = scan_peak(p, m)
        print(f"{p:>3} {M:>12.8f} {math.log(M):>10.6f} "
              f"{budget:>14.10f} {peak_m:>12.6f}")

    print()
    print("budget profile in M for p = 2 (flat near the optimum):")
    for M in (1.1, 1.25, optimal_M(2), 1.7, 2.0, 3.0):
        print(f"  M = {M:.6f}: budget = {region_bound(2, m, M):.10f}")

    # the budget shrinks like 1/(m(m-1)) with the motif vertex count
    print()
    print("vertex-count scaling at the p = 2 optimum:")
    M = optimal_M(2)
    for mm in (2, 3, 4, 6):
        print(f"  m = {mm}: budget = {region_bound(2, mm, M):.10f}")


if __name__ == "__main__":
    main()
