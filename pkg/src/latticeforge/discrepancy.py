"""Exact star discrepancy by critical-box enumeration, and a QMC error demo.

Point coordinates are kept as integer numerators, so every count and every
local discrepancy on the critical grid is an exact rational. The sup over
half-open boxes ``[0, x)`` is attained in limits: approaching a grid corner
from above counts points ``p <= x`` (closed count), approaching from below
counts ``p < x`` (open count). Both are evaluated at every corner.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import PointSet, ProductWeights
from .errors import ScaleLimitError

GRID_MAX = 10**7
_INT_LIMIT = 2**62


@dataclass(frozen=True)
class DiscrepancyResult:
    """``value`` with the box that attains it.

    ``corner`` holds the grid coordinates as fractions; ``side`` tells whether
    the sup is approached from above (``"closed"``) or below (``"open"``).
    ``subset`` is the maximising coordinate subset (0-based) for weighted
    results and the full index range otherwise.
    """

    value: float
    exact: Fraction
    subset: tuple[int, ...]
    corner: tuple[Fraction, ...]
    side: str


def local_discrepancy(P: PointSet, x: Sequence[float]) -> float:
    """``(1/N) #{p in [0, x)} - prod x``."""
    x = np.asarray(x, dtype=float)
    inside = np.all(P.points < x[None, :], axis=1)
    return float(np.count_nonzero(inside)) / P.n_points - float(np.prod(x))


def _grids(P: PointSet) -> list[np.ndarray]:
    return [np.union1d(P.numerators[:, j], [P.denominator]).astype(np.int64) for j in range(P.dims)]


def _check_scale(P: PointSet, grids) -> None:
    size = math.prod(len(g) for g in grids)
    if size > GRID_MAX:
        raise ScaleLimitError(f"critical grid has {size} corners, limit is {GRID_MAX}")
    if P.n_points * P.denominator**P.dims >= _INT_LIMIT:
        raise ScaleLimitError("exact integer scaling would overflow 64 bits")


def _result(P, grids, idx, num, side, subset):
    den = P.n_points * P.denominator**P.dims
    exact = Fraction(int(num), den)
    corner = tuple(Fraction(int(g[i]), P.denominator) for g, i in zip(grids, idx))
    return DiscrepancyResult(float(exact), exact, tuple(subset), corner, side)


def star_discrepancy_exact(P: PointSet, subset: Sequence[int] | None = None) -> DiscrepancyResult:
    """Exact star discrepancy by cumulative counting on the critical grid.

    A histogram of points over grid ranks is summed cumulatively along every
    axis, giving closed counts at all corners at once.
    """
    subset = tuple(range(P.dims)) if subset is None else tuple(subset)
    if P.dims == 0:
        raise ValueError("point set has no coordinates")
    grids = _grids(P)
    _check_scale(P, grids)
    n, den, s = P.n_points, P.denominator, P.dims
    shape = tuple(len(g) for g in grids)
    ranks = tuple(np.searchsorted(g, P.numerators[:, j]) for j, g in enumerate(grids))
    closed = np.zeros(shape, dtype=np.int64)
    np.add.at(closed, ranks, 1)
    for axis in range(s):
        closed = np.cumsum(closed, axis=axis)
    opened = closed
    for axis in range(s):
        pad = [(0, 0)] * s
        pad[axis] = (1, 0)
        opened = np.pad(opened, pad)[tuple(slice(0, shape[a]) for a in range(s))]
    vol = np.ones(shape, dtype=np.int64)
    for axis, g in enumerate(grids):
        vol = vol * g.reshape([-1 if a == axis else 1 for a in range(s)])
    scale = den**s
    above = closed * scale - n * vol
    below = n * vol - opened * scale
    ia, ib = int(np.argmax(above)), int(np.argmax(below))
    if above.flat[ia] >= below.flat[ib]:
        return _result(P, grids, np.unravel_index(ia, shape), above.flat[ia], "closed", subset)
    return _result(P, grids, np.unravel_index(ib, shape), below.flat[ib], "open", subset)


def star_discrepancy_walk(P: PointSet) -> DiscrepancyResult:
    """Independent reference: visit every corner and count points directly."""
    grids = _grids(P)
    _check_scale(P, grids)
    n, den, s = P.n_points, P.denominator, P.dims
    scale = den**s
    pts = P.numerators
    best = None
    chunk = max(1, 2**21 // max(1, n * s))
    corners = itertools.product(*[range(len(g)) for g in grids])
    while True:
        block = list(itertools.islice(corners, chunk))
        if not block:
            break
        idx = np.array(block, dtype=np.int64)
        x = np.stack([grids[j][idx[:, j]] for j in range(s)], axis=1)
        le = np.all(pts[None, :, :] <= x[:, None, :], axis=2).sum(axis=1)
        lt = np.all(pts[None, :, :] < x[:, None, :], axis=2).sum(axis=1)
        vol = np.prod(x, axis=1)
        above = le * scale - n * vol
        below = n * vol - lt * scale
        for vals, side in ((above, "closed"), (below, "open")):
            i = int(np.argmax(vals))
            if best is None or vals[i] > best[0]:
                best = (int(vals[i]), tuple(idx[i]), side)
    return _result(P, grids, best[1], best[0], best[2], range(s))


def weighted_star_discrepancy_exact(P: PointSet, weights: ProductWeights) -> DiscrepancyResult:
    """``max_{u != {}} gamma_u D*(P_u)`` over all coordinate projections."""
    best = None
    for size in range(1, P.dims + 1):
        for u in itertools.combinations(range(P.dims), size):
            res = star_discrepancy_exact(P.project(u), subset=u)
            value = weights.gamma_u(u) * res.value
            if best is None or value > best[0]:
                best = (value, res)
    value, res = best
    return DiscrepancyResult(value, res.exact * Fraction(weights.gamma_u(res.subset)), res.subset, res.corner, res.side)


# ---------------------------------------------------------------------------
# integration demo

FAMILIES = ("constant", "product-linear", "product-quadratic")


@dataclass(frozen=True)
class QMCResult:
    estimate: float
    integral: float
    error: float
    norm: float | None


def _parts(family: str, alpha: np.ndarray):
    # per coordinate: f_j(x), value at x=1, integral of |f_j'|
    if family == "product-linear":
        return (lambda x: 1.0 + alpha * (x - 0.5)), 1.0 + alpha / 2, np.abs(alpha)
    if family == "product-quadratic":
        return (lambda x: 1.0 + alpha * ((x - 0.5) ** 2 - 1.0 / 12)), 1.0 + alpha / 6, np.abs(alpha) / 2
    raise ValueError(f"unknown test family {family!r}")


def weighted_variation(family: str, alpha: Sequence[float], gammas: Sequence[float]) -> float:
    """``sum_{u != {}} gamma_u^-1 int |d^u f(x_u, 1)| dx_u`` for the product families."""
    alpha = np.asarray(alpha, dtype=float)
    if family == "constant":
        return 0.0
    _, at_one, deriv = _parts(family, alpha)
    g = np.asarray(gammas, dtype=float)[: len(alpha)]
    return math.prod(deriv / g + np.abs(at_one)) - math.prod(np.abs(at_one))


def qmc_error_demo(
    P: PointSet,
    family: str,
    alpha: Sequence[float] | None = None,
    gammas: Sequence[float] | None = None,
) -> QMCResult:
    """QMC estimate of a product test function with known integral 1.

    ``norm`` is the weighted variation when ``gammas`` are given, so that
    ``error <= D*_gamma * norm`` can be checked.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown test family {family!r}")
    x = P.points
    if family == "constant":
        values = np.ones(P.n_points)
        norm = 0.0 if gammas is not None else None
    else:
        alpha = np.asarray(alpha if alpha is not None else np.ones(P.dims), dtype=float)
        f, _, _ = _parts(family, alpha)
        values = np.prod(f(x), axis=1)
        norm = weighted_variation(family, alpha, gammas) if gammas is not None else None
    estimate = math.fsum(values) / P.n_points
    return QMCResult(estimate, 1.0, abs(estimate - 1.0), norm)
