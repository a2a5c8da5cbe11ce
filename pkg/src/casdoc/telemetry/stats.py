"""Small statistical kernels used by the analysis.

Nothing here is fitted or iterative: Pearson's r and chi-square are closed
forms, the sign test sums binomial tail probabilities exactly, and
Kendall's tau-b uses the exact null distribution for small untied samples
and the tie-corrected normal approximation otherwise.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import StatsError


def pearson_r(xs, ys) -> float:
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise StatsError("samples must have equal length")
    n = len(xs)
    if n < 2:
        raise StatsError("need at least two observations")
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        raise StatsError("correlation undefined for zero variance")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    # sqrt each factor separately: the product can under- or overflow
    r = sxy / (math.sqrt(sxx) * math.sqrt(syy))
    return max(-1.0, min(1.0, r))


def chi_square_cramers_v(table) -> tuple[float, int, float]:
    rows = [list(row) for row in table]
    if not rows or not rows[0]:
        raise StatsError("empty table")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise StatsError("table must be rectangular")
    if len(rows) < 2 or width < 2:
        raise StatsError("table must be at least 2x2")
    if any(cell < 0 for row in rows for cell in row):
        raise StatsError("counts must be non-negative")

    row_sums = [sum(row) for row in rows]
    col_sums = [sum(col) for col in zip(*rows)]
    n = sum(row_sums)
    if any(s == 0 for s in row_sums) or any(s == 0 for s in col_sums):
        raise StatsError("degenerate table: empty row or column")

    chi2 = 0.0
    for i, row in enumerate(rows):
        for j, observed in enumerate(row):
            expected = row_sums[i] * col_sums[j] / n
            chi2 += (observed - expected) ** 2 / expected
    df = (len(rows) - 1) * (width - 1)
    v = math.sqrt(chi2 / (n * min(len(rows) - 1, width - 1)))
    return chi2, df, v


def sign_test(k: int, n: int) -> float:
    """Exact two-sided sign test against p = 1/2."""
    if n < 1:
        raise StatsError("need at least one trial")
    if not 0 <= k <= n:
        raise StatsError("successes must be within 0..n")
    m = max(k, n - k)
    tail = sum(math.comb(n, i) for i in range(m, n + 1))
    p = Fraction(2 * tail, 2**n)
    return float(min(p, Fraction(1)))


def _tau_counts(xs, ys) -> tuple[int, int, int, int, int]:
    """Concordant minus discordant bookkeeping over all pairs."""
    n = len(xs)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = (xs[i] > xs[j]) - (xs[i] < xs[j])
            b = (ys[i] > ys[j]) - (ys[i] < ys[j])
            if a * b > 0:
                concordant += 1
            elif a * b < 0:
                discordant += 1
    n0 = n * (n - 1) // 2
    n1 = sum(c * (c - 1) // 2 for c in _tie_sizes(xs))
    n2 = sum(c * (c - 1) // 2 for c in _tie_sizes(ys))
    return concordant, discordant, n0, n1, n2


def _tie_sizes(values) -> list[int]:
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def _inversion_counts(n: int) -> list[int]:
    """counts[k] = number of permutations of n items with k inversions."""
    counts = [1]
    for m in range(2, n + 1):
        prefix = [0] * (len(counts) + 1)
        for i, c in enumerate(counts):
            prefix[i + 1] = prefix[i] + c
        new = []
        for k in range(len(counts) + m - 1):
            lo = max(0, k - m + 1)
            new.append(prefix[min(k + 1, len(counts))] - prefix[lo])
        counts = new
    return counts


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2))


def kendall_tau(xs, ys) -> tuple[float, float]:
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise StatsError("samples must have equal length")
    n = len(xs)
    if n < 2:
        raise StatsError("need at least two observations")

    concordant, discordant, n0, n1, n2 = _tau_counts(xs, ys)
    if n0 == n1 or n0 == n2:
        raise StatsError("tau undefined when one sample is constant")
    s = concordant - discordant
    tau = s / math.sqrt((n0 - n1) * (n0 - n2))

    if n <= 10 and n1 == 0 and n2 == 0:
        # exact null distribution: S = n0 - 2*inversions
        counts = _inversion_counts(n)
        total = math.factorial(n)
        hits = sum(c for k, c in enumerate(counts) if abs(n0 - 2 * k) >= abs(s))
        p = hits / total
    else:
        t_term = sum(c * (c - 1) * (2 * c + 5) for c in _tie_sizes(xs))
        u_term = sum(c * (c - 1) * (2 * c + 5) for c in _tie_sizes(ys))
        var = (n * (n - 1) * (2 * n + 5) - t_term - u_term) / 18
        if n > 2:
            t1 = sum(c * (c - 1) * (c - 2) for c in _tie_sizes(xs))
            u1 = sum(c * (c - 1) * (c - 2) for c in _tie_sizes(ys))
            var += t1 * u1 / (9 * n * (n - 1) * (n - 2))
        t2 = sum(c * (c - 1) for c in _tie_sizes(xs))
        u2 = sum(c * (c - 1) for c in _tie_sizes(ys))
        var += t2 * u2 / (2 * n * (n - 1))
        if var <= 0:
            raise StatsError("tau variance collapsed to zero")
        z = abs(s) / math.sqrt(var)
        p = 2 * _normal_sf(z)
    return tau, min(1.0, p)
