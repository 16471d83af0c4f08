"""Component-by-component construction of reduced rank-1 lattice rules.

Every construction fixes ``z_1 = 1`` and then, one dimension at a time,
picks the candidate of the reduced search space minimising R. Candidates are
scanned in ascending order and the first one within :data:`TIE_RTOL` of the
minimum wins, so the naive, fast and exhaustive routes agree on ties.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    GeneratingVector,
    LatticeConfig,
    ProductWeights,
    ReductionSchedule,
    search_space,
    search_space_size,
)
from .cost import OpCounter, count
from .errors import ScaleLimitError
from .kernel import KernelTable, phi_table
from .quality import EtaVector, eta_initial, eta_update, kernel_column, r_from_eta, r_weighted_product

# candidates whose R is within TIE_RTOL * scale of the minimum count as tied
TIE_RTOL = 1e-12

EXHAUSTIVE_MAX = 10**5


def select_first_min(values: np.ndarray, atol: float) -> int:
    """Index of the first entry within ``atol`` of the minimum."""
    best = float(np.min(values))
    return int(np.flatnonzero(values <= best + atol)[0])


def _tie_atol(eta: EtaVector, gamma: float, kernel: KernelTable) -> float:
    scale = float(np.mean(np.abs(eta.values))) * (1.0 + gamma * float(np.max(np.abs(kernel.phi))))
    return TIE_RTOL * scale


def _prepare(config, kernel, counter):
    if kernel is None:
        kernel = phi_table(config, counter=counter)
    elif kernel.N != config.N:
        raise ValueError(f"kernel table is for N={kernel.N}, config has N={config.N}")
    return kernel


def candidate_r_values(
    config: LatticeConfig,
    eta: EtaVector,
    gamma: float,
    w: int,
    candidates: np.ndarray,
    beta_prod: float,
    kernel: KernelTable,
    counter: OpCounter | None = None,
    dim: int | None = None,
) -> np.ndarray:
    """R of the extended prefix for each candidate, one full k-sum per candidate."""
    N = config.N
    k = np.arange(N, dtype=np.int64)
    out = np.empty(len(candidates))
    for i, z in enumerate(candidates):
        c = (config.power(w) * int(z)) % N
        col = kernel.phi[(k * c) % N]
        out[i] = math.fsum(eta.values * (1.0 + gamma * col)) / N - beta_prod
    count(counter, len(candidates) * N, "search", dim)
    return out


def reduced_cbc(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    s: int,
    kernel: KernelTable | None = None,
    counter: OpCounter | None = None,
) -> tuple[GeneratingVector, list[float]]:
    """Reduced CBC: each candidate is scored with a full O(N) evaluation of R.

    Returns the generating vector and ``[R^1, ..., R^s]`` of its prefixes.
    """
    kernel = _prepare(config, kernel, counter)
    betas = weights.betas(s)
    ws = schedule.ws(s)
    vector = GeneratingVector(config, ((ws[0], 1),))
    eta = eta_update(eta_initial(config.N), weights.gamma(0), int(vector.effective[0]), kernel, counter, 1)
    r_values = [r_from_eta(eta, betas)]
    for d in range(1, s):
        gamma = weights.gamma(d)
        if ws[d] >= config.m:
            z = 1
        else:
            cands = search_space(config, ws[d]).members
            vals = candidate_r_values(
                config, eta, gamma, ws[d], cands, math.prod(betas[: d + 1]), kernel, counter, d + 1
            )
            z = int(cands[select_first_min(vals, _tie_atol(eta, gamma, kernel))])
        vector = vector.extend(ws[d], z)
        eta = eta_update(eta, gamma, int(vector.effective[d]), kernel, counter, d + 1)
        r_values.append(r_from_eta(eta, betas))
    return vector, r_values


def block_sum(eta: np.ndarray, n_blocks: int) -> np.ndarray:
    """Sum of the ``n_blocks`` consecutive equal-length blocks of ``eta``."""
    return eta.reshape(n_blocks, -1).sum(axis=0)


def omega_apply(
    config: LatticeConfig,
    kernel: KernelTable,
    level: int,
    etaprime: np.ndarray,
    counter: OpCounter | None = None,
    dim: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Dense product with ``Omega^(l)``.

    For each ``z`` in ``Z_{b^l,0}`` returns ``T(z) = sum_{k < b^l} phi({k z / b^l}) eta'(k)``,
    with phi taken from the level-N table. Returns ``(candidates, T)``.
    """
    b, m, N = config.b, config.m, config.N
    L = b**level
    if len(etaprime) != L:
        raise ValueError(f"eta' must have length b^l = {L}, got {len(etaprime)}")
    if level == 0:
        cands = np.array([1], dtype=np.int64)
    else:
        zs = np.arange(1, L, dtype=np.int64)
        cands = zs[zs % b != 0]
    k = np.arange(L, dtype=np.int64)
    scale = b ** (m - level)
    omega = kernel.phi[(np.outer(cands, k) % L) * scale]
    count(counter, len(cands) * L, "omega", dim)
    return cands, omega @ etaprime


def reduced_fast_cbc(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    s: int,
    kernel: KernelTable | None = None,
    counter: OpCounter | None = None,
    strict_reset: bool = False,
) -> tuple[GeneratingVector, list[float]]:
    """Reduced fast CBC: block-sum eta, then one dense Omega product per step.

    Dimensions past ``t = max{j : w_j < m}`` get ``z_j = 1``. With
    ``strict_reset`` the last searched component ``z_t`` is also reset to 1
    when ``s > t``.
    """
    kernel = _prepare(config, kernel, counter)
    b, m, N = config.b, config.m, config.N
    betas = weights.betas(s)
    ws = schedule.ws(s)
    t = schedule.threshold(m, s)
    comps = [(ws[0], 1)]
    eta = eta_update(eta_initial(N), weights.gamma(0), config.power(ws[0]) % N, kernel, counter, 1)
    etas = [eta]
    for d in range(1, s):
        gamma = weights.gamma(d)
        w = ws[d]
        if w >= m:
            z = 1
        else:
            etaprime = block_sum(eta.values, b**w)
            count(counter, N, "blocksum", d + 1)
            cands, T = omega_apply(config, kernel, m - w, etaprime, counter, d + 1)
            r_vals = (math.fsum(eta.values) + gamma * T) / N - math.prod(betas[: d + 1])
            z = int(cands[select_first_min(r_vals, _tie_atol(eta, gamma, kernel))])
        comps.append((w, z))
        eta = eta_update(eta, gamma, (config.power(w) * z) % N, kernel, counter, d + 1)
        etas.append(eta)
    if strict_reset and s > t >= 1:
        comps[t - 1] = (comps[t - 1][0], 1)
        eta = etas[t - 2] if t >= 2 else eta_initial(N)
        etas = etas[: t - 1]
        for d in range(t - 1, s):
            w, z = comps[d]
            eta = eta_update(eta, weights.gamma(d), (config.power(w) * z) % N, kernel, counter, d + 1)
            etas.append(eta)
    vector = GeneratingVector(config, tuple(comps))
    return vector, [r_from_eta(e, betas) for e in etas]


def exhaustive_best(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    d: int,
    prefix: GeneratingVector | None,
    kernel: KernelTable | None = None,
    search_first: bool = False,
) -> int:
    """The minimising ``z_d`` (1-based d) given the first ``d - 1`` components.

    Every candidate is scored by evaluating R of the whole extended vector from
    scratch. At ``d = 1`` the answer is 1 by convention unless ``search_first``.
    """
    w = schedule.w(d - 1)
    size = search_space_size(config, w)
    if size > EXHAUSTIVE_MAX:
        raise ScaleLimitError(f"|Z_(N,{w})| = {size} exceeds {EXHAUSTIVE_MAX}")
    if d == 1 and not search_first:
        return 1
    if size == 1:
        return 1
    kernel = _prepare(config, kernel, None)
    if prefix is None:
        prefix = GeneratingVector(config, ())
    if prefix.dims != d - 1:
        raise ValueError(f"prefix has {prefix.dims} components, expected {d - 1}")
    cands = search_space(config, w).members
    vals = np.array([r_weighted_product(config, weights, prefix.extend(w, int(z)), kernel=kernel) for z in cands])
    eta = eta_initial(config.N)
    c = prefix.effective
    for j in range(d - 1):
        eta = eta_update(eta, weights.gamma(j), int(c[j]), kernel)
    return int(cands[select_first_min(vals, _tie_atol(eta, weights.gamma(d - 1), kernel))])


def exhaustive_cbc(
    config: LatticeConfig,
    weights: ProductWeights,
    schedule: ReductionSchedule,
    s: int,
    kernel: KernelTable | None = None,
) -> tuple[GeneratingVector, list[float]]:
    """CBC driven step by step by :func:`exhaustive_best`."""
    kernel = _prepare(config, kernel, None)
    vector = GeneratingVector(config, ())
    for d in range(1, s + 1):
        z = exhaustive_best(config, weights, schedule, d, vector, kernel)
        vector = vector.extend(schedule.w(d - 1), z)
    r_values = [r_weighted_product(config, weights, vector.prefix(d), kernel=kernel) for d in range(1, s + 1)]
    return vector, r_values


def standard_cbc(
    config: LatticeConfig,
    weights: ProductWeights,
    s: int,
    kernel: KernelTable | None = None,
    counter: OpCounter | None = None,
    fast: bool = False,
) -> tuple[GeneratingVector, list[float]]:
    """Unreduced CBC: every component searched over all units modulo N."""
    algo = reduced_fast_cbc if fast else reduced_cbc
    return algo(config, weights, ReductionSchedule.zeros(), s, kernel, counter)
