"""Tail sums sigma_d and the information-complexity estimates N*(eps, s)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import cbc_bound, discrepancy_first_term
from .core import MAX_POINTS, LatticeConfig, ProductWeights, ReductionSchedule
from .errors import ValidationError

SIGMA_FACTOR = 13.0
_POLY_EXPLICIT_TERMS = 1000
_D_SEARCH_MAX = 2**40


def _tail_bracket(weights: ProductWeights, schedule: ReductionSchedule, b: int, start: int) -> tuple[float, float]:
    """Bracket on ``sum_{j >= start} gamma_j b^w_j`` (0-based j) inside the tail regime."""
    wL = schedule.head[-1]
    Ls = len(schedule.head)
    step = schedule.step if schedule.tail == "linear" else 0
    w_start = wL + step * (start + 1 - Ls) if start >= Ls else schedule.w(start)
    if weights.tail == "geo":
        rho = weights.tail_param * float(b) ** step
        if rho >= 1.0:
            return math.inf, math.inf
        log_first = math.log(weights.gamma(start)) + w_start * math.log(b)
        value = math.exp(log_first) / (1.0 - rho)
        return value, value
    # poly tail: gamma_j = (j+1)^-a
    a = weights.tail_param
    if step > 0 or a <= 1.0:
        return math.inf, math.inf
    n = np.arange(start + 1, start + 1 + _POLY_EXPLICIT_TERMS, dtype=float)
    partial = math.fsum(n ** (-a))
    M = start + _POLY_EXPLICIT_TERMS
    lower = partial + (M + 1) ** (1.0 - a) / (a - 1.0)
    upper = partial + M ** (1.0 - a) / (a - 1.0)
    scale = float(b) ** w_start
    return scale * lower, scale * upper


def sigma_bracket(weights: ProductWeights, schedule: ReductionSchedule, b: int, d: int) -> tuple[float, float]:
    """Certified ``(lower, upper)`` for ``sigma_d = 13 sum_{j>d} gamma_j b^w_j``.

    Divergent tails give ``(inf, inf)``. Both descriptors need analytic tails.
    """
    if weights.tail is None or schedule.tail is None:
        raise ValidationError("sigma_d needs weights and reduction with tail descriptors")
    head_end = max(len(weights.head), len(schedule.head))
    explicit = [weights.gamma(j) * float(b) ** schedule.w(j) for j in range(d, head_end)]
    lo, hi = _tail_bracket(weights, schedule, b, max(d, head_end))
    head_sum = math.fsum(explicit)
    return SIGMA_FACTOR * (head_sum + lo), SIGMA_FACTOR * (head_sum + hi)


def sigma_d(weights: ProductWeights, schedule: ReductionSchedule, b: int, d: int) -> float:
    """Upper end of :func:`sigma_bracket`."""
    return sigma_bracket(weights, schedule, b, d)[1]


@dataclass
class TractabilityReport:
    epsilon: float
    delta: float
    sigma_0: float
    sigma_d: dict = field(default_factory=dict)
    d_star: int | None = None
    log_c_gamma_delta: float | None = None
    m_star_asymptotic: int | None = None
    m_star_constructive: int | None = None
    b: int = 2
    notes: list = field(default_factory=list)

    @property
    def c_gamma_delta(self) -> float | None:
        if self.log_c_gamma_delta is None:
            return None
        return math.exp(self.log_c_gamma_delta) if self.log_c_gamma_delta < 700 else math.inf

    @property
    def n_star_asymptotic(self) -> int | None:
        return None if self.m_star_asymptotic is None else self.b**self.m_star_asymptotic

    @property
    def n_star_constructive(self) -> int | None:
        return None if self.m_star_constructive is None else self.b**self.m_star_constructive

    def lines(self) -> list[str]:
        def fmt(v):
            return "none" if v is None else (f"{v:.17g}" if isinstance(v, float) else str(v))

        out = [
            f"epsilon = {fmt(self.epsilon)}",
            f"delta = {fmt(self.delta)}",
            f"sigma_0 = {fmt(self.sigma_0)}",
            f"d_star = {fmt(self.d_star)}",
        ]
        if self.d_star is not None:
            out.append(f"sigma_d_star = {fmt(self.sigma_d[self.d_star])}")
        out += [
            f"log_c_gamma_delta = {fmt(self.log_c_gamma_delta)}",
            f"m_star_asymptotic = {fmt(self.m_star_asymptotic)}",
            f"m_star_constructive = {fmt(self.m_star_constructive)}",
        ]
        out += [f"note = {n}" for n in self.notes]
        return out


def find_d_star(weights, schedule, b: int, target: float) -> int | None:
    """Smallest d with ``sigma_d <= target``; sigma_d is non-increasing in d."""
    if sigma_d(weights, schedule, b, 0) <= target:
        return 0
    hi = 1
    while sigma_d(weights, schedule, b, hi) > target:
        hi *= 2
        if hi > _D_SEARCH_MAX:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sigma_d(weights, schedule, b, mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _m_for(log_n: float, b: int) -> int:
    # guard against log_n landing a rounding error above an exact power
    return max(0, math.ceil(log_n / math.log(b) - 1e-12))


def constructive_m_star(
    weights: ProductWeights,
    schedule: ReductionSchedule,
    b: int,
    s: int,
    epsilon: float,
    m_max: int = 20,
    log_bound: bool = False,
) -> int | None:
    """Smallest m whose a-priori discrepancy bound at N = b^m is at most epsilon."""
    if epsilon >= 1.0:
        return 0
    for m in range(1, m_max + 1):
        if b**m >= MAX_POINTS:
            break
        cfg = LatticeConfig(b, m)
        value = discrepancy_first_term(cfg, weights, s) + 0.5 * cbc_bound(cfg, weights, schedule, s, log_bound).value
        if value <= epsilon:
            return m
    return None


def n_star_estimate(
    weights: ProductWeights,
    schedule: ReductionSchedule,
    b: int,
    s: int,
    epsilon: float,
    delta: float,
    m_max: int = 20,
    log_bound: bool = False,
) -> TractabilityReport:
    """Both routes to N*(eps, s).

    The asymptotic route picks d with ``sigma_d <= delta / (sigma_0 + 1)``,
    sets ``c = (1 + 1/sigma_d)^d`` and needs ``N >= (c / eps)^(1/(1-delta))``.
    The constructive route scans m for the first N = b^m whose closed-form
    bound is at most eps. ``log_bound`` replaces S_N by 4 log N there.
    """
    if not (0.0 < delta < 1.0):
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")
    if epsilon <= 0.0:
        raise ValidationError(f"epsilon must be positive, got {epsilon}")
    report = TractabilityReport(epsilon, delta, sigma_d(weights, schedule, b, 0), b=b)
    report.m_star_constructive = constructive_m_star(weights, schedule, b, s, epsilon, m_max, log_bound)
    if report.m_star_constructive is None:
        report.notes.append(f"constructive bound above epsilon for every m <= {m_max}")
    if math.isinf(report.sigma_0):
        report.notes.append("sigma_0 is infinite: sum of gamma_j b^w_j diverges, asymptotic route unavailable")
        return report
    target = delta / (report.sigma_0 + 1.0)
    d = find_d_star(weights, schedule, b, target)
    if d is None:
        report.notes.append("no d found with sigma_d below the target")
        return report
    report.d_star = d
    report.sigma_d = {k: sigma_d(weights, schedule, b, k) for k in range(min(d, 64) + 1)}
    report.sigma_d[d] = sigma_d(weights, schedule, b, d)
    report.log_c_gamma_delta = d * math.log1p(1.0 / report.sigma_d[d]) if d else 0.0
    log_n = (report.log_c_gamma_delta - math.log(epsilon)) / (1.0 - delta)
    report.m_star_asymptotic = _m_for(log_n, b)
    return report
