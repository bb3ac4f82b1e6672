"""Adaptive Gauss-Kronrod integration core.

Shared by the bivariate tail integrator and the semi-infinite quadrature
oracle.  A 7-point Gauss rule embedded in a 15-point Kronrod rule gives a
per-panel error estimate; panels are bisected worst-first until the summed
estimate meets the tolerance or the panel budget runs out.
"""

from __future__ import annotations

import heapq
import itertools
import math
from typing import Callable

# G7K15 abscissae and weights (positive half; the rule is symmetric).
_XGK = (
    0.9914553711208126392068547,
    0.9491079123427585245261897,
    0.8648644233597690727897128,
    0.7415311855993944398638648,
    0.5860872354676911302941448,
    0.4058451513773971669066064,
    0.2077849550078984676006894,
    0.0,
)
_WGK = (
    0.0229353220105292249637320,
    0.0630920926299785532907007,
    0.1047900103222501838398763,
    0.1406532597155259187451896,
    0.1690047266392679028265834,
    0.1903505780647854099132564,
    0.2044329400752988924141620,
    0.2094821410847278280129992,
)
# 7-point Gauss weights, matching _XGK indices 1, 3, 5, 7.
_WG = (
    0.1294849661688696932706114,
    0.2797053914892766679014678,
    0.3818300505051189449503698,
    0.4179591836734693877551020,
)


def _panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Kronrod value and |Kronrod - Gauss| estimate for one panel."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fc = f(mid)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for j in range(7):
        dx = half * _XGK[j]
        fsum = f(mid - dx) + f(mid + dx)
        kron += _WGK[j] * fsum
        if j % 2 == 1:
            gauss += _WG[(j - 1) // 2] * fsum
    kron *= half
    gauss *= half
    return kron, abs(kron - gauss)


def adaptive_gauss_kronrod(
    f: Callable[[float], float],
    edges: list[float],
    rel_tol: float,
    abs_tol: float,
    max_panels: int = 2000,
) -> tuple[float, float, int, bool]:
    """Integrate f over the union of [edges[i], edges[i+1]] panels.

    Returns (value, error_estimate, evaluations, converged).  `edges` must be
    strictly increasing; supplying interior breakpoints (kinks, sharp
    transitions) lets the subdivision start where it matters.
    """
    if len(edges) < 2:
        raise ValueError("need at least two panel edges")
    counter = itertools.count()
    heap = []
    total = 0.0
    err_sum = 0.0
    evals = 0
    for a, b in zip(edges[:-1], edges[1:]):
        if not b > a:
            raise ValueError("panel edges must be strictly increasing")
        val, err = _panel(f, a, b)
        evals += 15
        total += val
        err_sum += err
        heapq.heappush(heap, (-err, next(counter), a, b, val))

    panels = len(edges) - 1
    while err_sum > max(rel_tol * abs(total), abs_tol) and panels < max_panels:
        neg_err, _, a, b, val = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            # Panel is at floating point resolution; keep its estimate.
            heapq.heappush(heap, (neg_err, next(counter), a, b, val))
            break
        left_val, left_err = _panel(f, a, mid)
        right_val, right_err = _panel(f, mid, b)
        evals += 30
        panels += 1
        total += left_val + right_val - val
        err_sum += left_err + right_err + neg_err
        heapq.heappush(heap, (-left_err, next(counter), a, mid, left_val))
        heapq.heappush(heap, (-right_err, next(counter), mid, b, right_val))

    # Recompute the error sum to clear accumulated cancellation noise.
    err_sum = -math.fsum(item[0] for item in heap)
    converged = err_sum <= max(rel_tol * abs(total), abs_tol)
    return total, err_sum, evals, converged
