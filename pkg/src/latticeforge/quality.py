"""The figure of merit R_{N,gamma} in subset, product and incremental forms.

The subset form sums exponential sums computed directly from their
definition; the product and incremental forms read the shared phi table.
Keeping the two routes separate is what makes them useful as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .core import GeneratingVector, LatticeConfig, ProductWeights
from .cost import OpCounter, count
from .errors import ScaleLimitError
from .kernel import KernelTable, _check_real, _frequencies, phi_table

SUBSET_MAX_DIMS = 12


def exp_sum_direct(N: int, c: int) -> np.ndarray:
    """``sum_{h != 0} e^{2 pi i h k c/N} / |h|`` for every k, by direct summation."""
    h = _frequencies(N)
    h = h[h != 0]
    k = np.arange(N, dtype=np.int64)
    phase = ((k * (c % N)) % N)[:, None] * h[None, :] % N
    vals = np.exp(2j * np.pi * phase / N) @ (1.0 / np.abs(h))
    return _check_real(vals, "exponential sum")


def r_subset(config: LatticeConfig, z: GeneratingVector, u: Iterable[int], _cache=None) -> float:
    """``R_N(z, u) = (1/N) sum_k prod_{j in u} (1 + sum_{h!=0} e(h k c_j/N)/|h|) - 1``.

    ``u`` holds 0-based dimension indices; the empty set gives 0.
    """
    u = tuple(u)
    if not u:
        return 0.0
    c = z.effective
    prod = np.ones(config.N)
    for j in u:
        col = _cache[j] if _cache is not None else exp_sum_direct(config.N, int(c[j]))
        prod *= 1.0 + col
    return math.fsum(prod) / config.N - 1.0


def r_weighted(config: LatticeConfig, weights: ProductWeights, z: GeneratingVector, s: int | None = None) -> float:
    """Subset expansion ``sum_{u != {}} gamma_u R_N(z, u)``. Oracle use only."""
    s = z.dims if s is None else s
    if s > SUBSET_MAX_DIMS:
        raise ScaleLimitError(f"subset form is limited to {SUBSET_MAX_DIMS} dimensions, got {s}")
    c = z.effective
    cols = [exp_sum_direct(config.N, int(c[j])) for j in range(s)]
    terms = []
    for size in range(1, s + 1):
        for u in combinations(range(s), size):
            terms.append(weights.gamma_u(u) * r_subset(config, z, u, _cache=cols))
    return math.fsum(terms)


def _kernel_for(config: LatticeConfig, kernel: KernelTable | None) -> KernelTable:
    if kernel is None:
        return phi_table(config)
    if kernel.N != config.N:
        raise ValueError(f"kernel table is for N={kernel.N}, config has N={config.N}")
    return kernel


def r_weighted_product(
    config: LatticeConfig,
    weights: ProductWeights,
    z: GeneratingVector,
    s: int | None = None,
    kernel: KernelTable | None = None,
) -> float:
    """Product form ``(1/N) sum_k prod_j (1 + gamma_j phi(k c_j/N)) - prod_j beta_j``."""
    kernel = _kernel_for(config, kernel)
    s = z.dims if s is None else s
    eta = eta_initial(config.N)
    c = z.effective
    for j in range(s):
        eta = eta_update(eta, weights.gamma(j), int(c[j]), kernel)
    return r_from_eta(eta, weights.betas(s))


@dataclass(frozen=True, eq=False)
class EtaVector:
    """``eta_d(k) = prod_{j<=d} (1 + gamma_j phi(k c_j / N))`` for ``k = 0..N-1``."""

    d: int
    values: np.ndarray


def eta_initial(N: int) -> EtaVector:
    return EtaVector(0, np.ones(N))


def kernel_column(kernel: KernelTable, c: int) -> np.ndarray:
    """``phi(k c / N)`` for every k; the index is reduced in integer arithmetic."""
    N = kernel.N
    idx = (np.arange(N, dtype=np.int64) * (c % N)) % N
    return kernel.phi[idx]


def eta_update(
    eta: EtaVector,
    gamma: float,
    c: int,
    kernel: KernelTable,
    counter: OpCounter | None = None,
    dim: int | None = None,
) -> EtaVector:
    """Multiply in the factor of one more coordinate with effective component ``c``."""
    values = eta.values * (1.0 + gamma * kernel_column(kernel, c))
    count(counter, kernel.N, "eta", dim)
    return EtaVector(eta.d + 1, values)


def r_from_eta(eta: EtaVector, betas: np.ndarray) -> float:
    beta_prod = math.prod(betas[: eta.d], start=1.0)
    return float(math.fsum(eta.values) / len(eta.values) - beta_prod)
