"""Harmonic sums, the kernel phi and the exponential sums T_{N,w}(k).

Every sum over frequencies runs over ``-N/2 < h <= N/2``: for even N that
includes ``h = N/2`` but not ``-N/2``. :func:`h_range` is the single place
this convention is encoded.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import LatticeConfig, search_space
from .cost import OpCounter, count

EULER_GAMMA = 0.5772156649015329

# |Im| allowed on mathematically real exponential sums
IMAG_TOL = 1e-9

_EXACT_HARMONIC_MAX = 2**20


def h_range(n: int) -> range:
    """Integers h with ``-n/2 < h <= n/2``."""
    return range(-((n - 1) // 2), n // 2 + 1)


def _frequencies(n: int) -> np.ndarray:
    return np.arange(-((n - 1) // 2), n // 2 + 1, dtype=np.int64)


@lru_cache(maxsize=256)
def harmonic(k: int) -> float:
    """``H_k = sum_{h=1}^k 1/h``; exactly rounded summation for moderate k."""
    if k <= 0:
        return 0.0
    if k <= _EXACT_HARMONIC_MAX:
        return math.fsum(1.0 / np.arange(1, k + 1, dtype=float))
    # asymptotic expansion, error far below double precision at this size
    inv = 1.0 / k
    inv2 = inv * inv
    return math.log(k) + EULER_GAMMA + 0.5 * inv - inv2 / 12 + inv2 * inv2 / 120


def s_n(n: int) -> float:
    """``S_n = sum_{-n/2 < h <= n/2, h != 0} 1/|h|``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n % 2 == 0:
        return harmonic(n // 2) + harmonic(n // 2 - 1)
    return 2.0 * harmonic((n - 1) // 2)


def s_n_table(n_max: int) -> np.ndarray:
    """``S_1..S_{n_max}`` (index 0 unused) from compensated prefix sums."""
    h = np.zeros(n_max // 2 + 2)
    acc = 0.0
    comp = 0.0
    for k in range(1, len(h)):
        # Neumaier summation keeps each prefix within an ulp or two
        term = 1.0 / k
        t = acc + term
        if abs(acc) >= abs(term):
            comp += (acc - t) + term
        else:
            comp += (term - t) + acc
        acc = t
        h[k] = acc + comp
    out = np.zeros(n_max + 1)
    n = np.arange(1, n_max + 1)
    even = n % 2 == 0
    out[1:][even] = h[n[even] // 2] + h[n[even] // 2 - 1]
    out[1:][~even] = 2.0 * h[(n[~even] - 1) // 2]
    return out


@dataclass(frozen=True)
class EpsilonBound:
    """Bracket on ``eps(n) = S_n - (2 log n + 2 gamma - log 4)``.

    Even n: ``(-4/n^2, 0]``; odd n: ``(-3/n^2, 1/n^2)``.
    """

    n: int
    lower: float
    upper: float
    upper_closed: bool

    def contains(self, x: float) -> bool:
        if x <= self.lower:
            return False
        return x <= self.upper if self.upper_closed else x < self.upper


def epsilon_bound(n: int) -> EpsilonBound:
    if n % 2 == 0:
        return EpsilonBound(n, -4.0 / n**2, 0.0, True)
    return EpsilonBound(n, -3.0 / n**2, 1.0 / n**2, False)


def s_n_asymptotic(n: int) -> tuple[float, EpsilonBound]:
    """Asymptotic approximation ``2 log n + 2 gamma - log 4`` and its error bracket."""
    return 2.0 * math.log(n) + 2.0 * EULER_GAMMA - math.log(4.0), epsilon_bound(n)


def _check_real(values: np.ndarray, what: str) -> np.ndarray:
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst >= IMAG_TOL:
        raise ArithmeticError(f"{what}: imaginary residue {worst:.3e}")
    return values.real.copy()


@dataclass(frozen=True, eq=False)
class KernelTable:
    """``phi[k] = phi(k/N)`` for ``k = 0..N-1`` together with ``S_N``."""

    N: int
    phi: np.ndarray
    s_N: float

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["k", "phi_k"])
            for k, v in enumerate(self.phi):
                writer.writerow([k, f"{v:.17g}"])


def _symmetrize(phi: np.ndarray) -> np.ndarray:
    # phi(k/N) = phi((N-k)/N) holds exactly; make the stored table honour it
    out = phi.copy()
    if len(out) > 1:
        out[1:] = 0.5 * (phi[1:] + phi[:0:-1])
    return out


def phi_direct(N: int, counter: OpCounter | None = None) -> np.ndarray:
    """Reference O(N^2) evaluation of the phi table."""
    h = _frequencies(N)
    inv_r = 1.0 / np.maximum(1, np.abs(h))
    phi = np.empty(N, dtype=complex)
    chunk = max(1, 2**22 // N)
    for start in range(0, N, chunk):
        k = np.arange(start, min(N, start + chunk), dtype=np.int64)
        phase = (k[:, None] * h[None, :]) % N
        phi[start : start + len(k)] = np.exp(2j * np.pi * phase / N) @ inv_r
    count(counter, N * N, "phi")
    return _check_real(phi, "phi table")


def phi_fft(N: int, counter: OpCounter | None = None) -> np.ndarray:
    """phi table as N times the inverse DFT of ``1/r(h)`` indexed by h mod N."""
    h = _frequencies(N)
    coeffs = np.zeros(N)
    coeffs[h % N] = 1.0 / np.maximum(1, np.abs(h))
    phi = np.fft.ifft(coeffs) * N
    count(counter, N * max(1, math.ceil(math.log2(N))), "phi")
    return _check_real(phi, "phi table")


def phi_table(config: LatticeConfig | int, method: str = "fft", counter: OpCounter | None = None) -> KernelTable:
    """Tabulate ``phi(k/N) = sum_h e^{2 pi i h k/N} / max(1, |h|)``.

    ``method="direct"`` is the O(N^2) reference; ``"fft"`` is the O(N log N)
    route used for construction.
    """
    N = config.N if isinstance(config, LatticeConfig) else int(config)
    if method == "direct":
        phi = phi_direct(N, counter)
    elif method == "fft":
        phi = phi_fft(N, counter)
    else:
        raise ValueError(f"unknown phi method {method!r}")
    return KernelTable(N, _symmetrize(phi), s_n(N))


def t_direct(config: LatticeConfig, w: int, k: int) -> float:
    """``T_{N,w}(k)`` by explicit double summation over z and h."""
    N = config.N
    if not 1 <= k < N:
        raise ValueError(f"k must lie in 1..{N - 1}, got {k}")
    c = (search_space(config, w).members * config.power(w)) % N
    h = _frequencies(N)
    h = h[h != 0]
    phase = (k * c[:, None] % N * h[None, :]) % N
    total = np.sum(np.exp(2j * np.pi * phase / N) / np.abs(h))
    return float(_check_real(np.array([total]), "T_direct")[0])


def _valuation(n: int, b: int) -> int:
    v = 0
    while n % b == 0:
        n //= b
        v += 1
    return v


def t_closed_form(config: LatticeConfig, w: int, k: int) -> float:
    """``T_{N,w}(k)`` from its closed form.

    * ``w >= m``: ``S_N``
    * ``w < m`` and ``b^(m-w) | k``: ``|Z_{N,w}| S_N``
    * otherwise ``b^nu (S_{b^(w+nu)} - S_{b^(w+nu+1)})`` with
      ``b^nu = gcd(b^(m-w), k mod b^(m-w))``
    """
    b, m, N = config.b, config.m, config.N
    if not 1 <= k < N:
        raise ValueError(f"k must lie in 1..{N - 1}, got {k}")
    if w >= m:
        return s_n(N)
    period = b ** (m - w)
    r = k % period
    if r == 0:
        return (b ** (m - w - 1) * (b - 1)) * s_n(N)
    nu = _valuation(r, b)
    return b**nu * (s_n(b ** (w + nu)) - s_n(b ** (w + nu + 1)))
