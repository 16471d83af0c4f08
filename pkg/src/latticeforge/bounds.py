"""Closed-form discrepancy bounds and the brute-force mean of R."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import GeneratingVector, LatticeConfig, ProductWeights, ReductionSchedule, search_space, search_space_size
from .errors import ScaleLimitError, ValidationError
from .kernel import KernelTable, phi_table, s_n, t_closed_form
from .quality import eta_initial, eta_update, r_from_eta, r_weighted_product

FORMS = ("standard", "as-printed")
BRUTEFORCE_MAX = 10**6


@dataclass
class BoundReport:
    """A bound value with its named addends and the assumptions it rests on."""

    kind: str
    value: float
    components: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)
    form: str | None = None

    def lines(self) -> list[str]:
        out = [f"kind = {self.kind}", f"value = {self.value:.17g}"]
        if self.form:
            out.append(f"form = {self.form}")
        out += [f"{k} = {v:.17g}" for k, v in self.components.items()]
        out += [f"assume.{k} = {str(v).lower()}" for k, v in self.assumptions.items()]
        return out

    def csv_row(self) -> list[str]:
        comps = ";".join(f"{k}={v:.17g}" for k, v in self.components.items())
        flags = ";".join(f"{k}={str(v).lower()}" for k, v in self.assumptions.items())
        return [self.kind, f"{self.value:.17g}", self.form or "", comps, flags]


def harmonic_term(N: int, log_bound: bool = False) -> float:
    """``S_N``, or its simplification ``4 log N`` when ``log_bound``."""
    return 4.0 * math.log(N) if log_bound else s_n(N)


def discrepancy_first_term(config: LatticeConfig, weights: ProductWeights, s: int, form: str = "standard") -> float:
    """The point-set independent part of the discrepancy bound.

    ``standard``: ``sum_{u != {}} gamma_u (1 - (1 - 1/N)^|u|)``.
    ``as-printed``: ``sum_u gamma_u N^-|u|``, empty set included.
    """
    g = weights.gammas(s)
    N = config.N
    if form == "standard":
        # prod a_j - prod b_j telescoped, with a_j - b_j = gamma_j / N: every
        # term is positive, so the difference suffers no cancellation
        a = 1.0 + g
        b = 1.0 + g * (1.0 - 1.0 / N)
        return math.fsum(
            (g[j] / N) * math.prod(b[:j]) * math.prod(a[j + 1 :]) for j in range(len(g))
        )
    if form == "as-printed":
        return math.prod(1.0 + g / N)
    raise ValidationError(f"unknown first-term form {form!r}")


def cbc_bound(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    d: int,
    log_bound: bool = False,
) -> BoundReport:
    """``(1/N) prod_{j<=d} (beta_j + (1 + 2 b^min(w_j,m)) gamma_j S_N)``."""
    S = harmonic_term(config.N, log_bound)
    g = weights.gammas(d)
    factors = [1.0 + gj + (1 + 2 * config.power(wj)) * gj * S for gj, wj in zip(g, schedule.ws(d))]
    value = math.prod(factors) / config.N
    return BoundReport("cbc", value, {"r_bound": value}, {"log_harmonic": log_bound})


def mean_bound(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    s: int,
    form: str = "standard",
) -> BoundReport:
    """Existence bound on the weighted star discrepancy via the mean of R.

    ``components["mean_r_bound"]`` bounds the mean of R over the whole
    reduced search space; the reported value adds the first term and half of
    it. Requires ``m >= 5``.
    """
    b, m, N = config.b, config.m, config.N
    if m < 5:
        raise ValidationError(f"mean bound needs m >= 5, got m = {m}")
    S = s_n(N)
    g = weights.gammas(s)
    beta = 1.0 + g
    ws = np.array(schedule.ws(s))
    full = math.prod(beta + g * S)
    p_sum = math.fsum(
        b ** (m - p - 1) * (b - 1) * math.prod(np.where(ws >= m - p, beta + g * S, beta)) for p in range(m)
    )
    bracket = full / N + p_sum / N - math.prod(beta)
    first = discrepancy_first_term(config, weights, s, form)
    return BoundReport(
        "mean",
        first + 0.5 * bracket,
        {"first_term": first, "r_term": 0.5 * bracket, "mean_r_bound": bracket},
        {"m_ge_5": True},
        form,
    )


def mean_r_closed_form(config: LatticeConfig, weights: ProductWeights, schedule: ReductionSchedule, s: int) -> float:
    """Exact mean of R over the reduced search space via the closed form of T."""
    N = config.N
    S = s_n(N)
    g = weights.gammas(s)
    beta = 1.0 + g
    ws = schedule.ws(s)
    sizes = [search_space_size(config, w) for w in ws]
    terms = []
    for k in range(1, N):
        terms.append(math.prod(beta[j] + g[j] * t_closed_form(config, ws[j], k) / sizes[j] for j in range(s)))
    return math.prod(beta + g * S) / N + math.fsum(terms) / N - math.prod(beta)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LATTICEFORGE_THREADS", "1")))
    except ValueError:
        return 1


def mean_r_bruteforce(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    s: int,
    kernel: KernelTable | None = None,
    max_vectors: int = BRUTEFORCE_MAX,
) -> float:
    """Average of R over every vector of ``Z_{N,w_1} x ... x Z_{N,w_s}``."""
    ws = schedule.ws(s)
    total = math.prod(search_space_size(config, w) for w in ws)
    if total > max_vectors:
        raise ScaleLimitError(f"{total} generating vectors exceed the brute-force limit {max_vectors}")
    kernel = phi_table(config) if kernel is None else kernel
    spaces = [search_space(config, w).members for w in ws]
    betas = weights.betas(s)
    N = config.N

    def evaluate(first_z):
        vals = []
        for rest in itertools.product(*spaces[1:]):
            eta = eta_initial(N)
            for j, z in enumerate((first_z,) + rest):
                eta = eta_update(eta, weights.gamma(j), (config.power(ws[j]) * int(z)) % N, kernel)
            vals.append(r_from_eta(eta, betas))
        return vals

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        chunks = list(pool.map(evaluate, spaces[0]))
    # fsum is exactly rounded, so the result does not depend on chunking
    return math.fsum(itertools.chain.from_iterable(chunks)) / total


def discrepancy_bound_for_vector(
    config: LatticeConfig,
    weights: ProductWeights,
    s: int,
    z: GeneratingVector | None = None,
    schedule: ReductionSchedule | None = None,
    form: str = "standard",
    kernel: KernelTable | None = None,
    log_bound: bool = False,
) -> BoundReport:
    """First term plus half of R(z), or of the a-priori CBC bound when ``z`` is None."""
    first = discrepancy_first_term(config, weights, s, form)
    if z is not None:
        # R is a sum of non-negative dual-lattice terms; drop rounding noise below 0
        r = max(0.0, r_weighted_product(config, weights, z, s, kernel))
        source = "vector"
    else:
        if schedule is None:
            raise ValidationError("need either a vector or a reduction schedule")
        r = cbc_bound(config, weights, schedule, s, log_bound).value
        source = "cbc_bound"
    return BoundReport(
        "discrepancy",
        first + 0.5 * r,
        {"first_term": first, "r_term": 0.5 * r},
        {"r_from_vector": source == "vector", "log_harmonic": log_bound},
        form,
    )
