"""Independent brute-force reference evaluators.

These deliberately avoid the dynamic programs and counting shortcuts used
by the main modules: they enumerate configurations outright and are only
feasible at small sizes. The verification suite and the tests compare fast
implementations against these references; keep the two routes separate.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .processes import SamplePath


def brute_k_interval_sup(path: SamplePath, m: int, k: int) -> Fraction:
    """Supremum over unions of <= k intervals by exhaustive enumeration.

    Decomposes [0, 1) into the alternating sequence gap, atom, gap, ...,
    atom, gap induced by the distinct sample values, enumerates every
    selection of at most k disjoint element windows, and evaluates the
    limit value |frequency - measure| of each selection directly. Partially
    covered gaps only shrink the objective, so windows of whole elements
    realize the supremum. Cost grows like (2m)**(2k); use small m, k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sorted_fixed = path.sorted_fixed(m)
    scale = 1 << path.precision
    values = []
    counts = []
    for n in sorted_fixed:
        if values and values[-1] == n:
            counts[-1] += 1
        else:
            values.append(n)
            counts.append(1)
    # Elements: even positions are gaps, odd are atoms.
    freq = []  # scaled by m * scale
    meas = []
    bounds = [0] + values + [scale]
    for i, v in enumerate(values):
        freq.append(0)
        meas.append(m * (v - bounds[i]))
        freq.append(counts[i] * scale)
        meas.append(0)
    freq.append(0)
    meas.append(m * (scale - (values[-1] if values else 0)))
    L = len(freq)
    pf = [0]
    pm = [0]
    for f, g in zip(freq, meas):
        pf.append(pf[-1] + f)
        pm.append(pm[-1] + g)

    windows = [(a, b) for a in range(L) for b in range(a + 1, L + 1)]
    best = 0

    def value_of(selection) -> int:
        f = sum(pf[b] - pf[a] for a, b in selection)
        g = sum(pm[b] - pm[a] for a, b in selection)
        return abs(f - g)

    for t in range(1, k + 1):
        for combo in combinations(windows, t):
            ordered = sorted(combo)
            if any(x[1] > y[0] for x, y in zip(ordered, ordered[1:])):
                continue
            v = value_of(ordered)
            if v > best:
                best = v
    return Fraction(best, m * scale)


def brute_shatter_coefficient(points, sets) -> int:
    """Distinct traces of explicit sets on points, via direct membership."""
    traces = set()
    for s in sets:
        traces.add(frozenset(i for i, x in enumerate(points) if x in s))
    return len(traces)


def brute_vc_dimension(points, sets, max_k: int) -> int:
    """Largest k such that some k-subset of points is fully traced."""
    points = tuple(points)
    best = 0
    for k in range(1, max_k + 1):
        found = False
        for subset in combinations(points, k):
            if brute_shatter_coefficient(subset, sets) == 1 << k:
                found = True
                break
        if not found:
            return best
        best = k
    return best
