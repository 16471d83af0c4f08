"""Configuration and point-set types for rank-1 lattice rules with N = b^m points.

Dimensions are 0-based in every Python API (``weights.gamma(0)`` is the weight
of the first coordinate). Text formats and CLI output use 1-based dimension
numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

MAX_POINTS = 2**62


def is_prime(n: int) -> bool:
    """Trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _config_violations(b, m) -> list[str]:
    problems = []
    if not isinstance(b, (int, np.integer)) or isinstance(b, bool):
        problems.append(f"base must be an integer, got {b!r}")
    elif not is_prime(int(b)):
        problems.append(f"b not prime: {b}")
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        problems.append(f"m must be an integer >= 1, got {m!r}")
    if not problems and int(b) ** int(m) >= MAX_POINTS:
        problems.append(f"N = {b}^{m} overflows the 2^62 point limit")
    return problems


@dataclass(frozen=True)
class LatticeConfig:
    """Prime base ``b`` and exponent ``m``; the lattice has ``N = b**m`` points."""

    b: int
    m: int
    N: int = field(init=False)

    def __post_init__(self):
        problems = _config_violations(self.b, self.m)
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "N", self.b**self.m)

    def power(self, w: int) -> int:
        """``b**min(w, m)``; larger exponents are irrelevant modulo N."""
        return self.b ** min(int(w), self.m)


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class ProductWeights:
    """Non-increasing product weights ``0 < gamma_j <= 1``.

    ``head`` lists the first L weights explicitly. The optional ``tail``
    extends the sequence past L:

    * ``"poly"`` with parameter a: ``gamma_j = j**-a`` (1-based j),
    * ``"geo"`` with parameter q: ``gamma_j = gamma_L * q**(j - L)``, where
      ``gamma_0 = 1`` when the head is empty.

    Without a tail the weights are defined only for the first L dimensions.
    """

    head: tuple[float, ...] = ()
    tail: str | None = None
    tail_param: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(float(g) for g in self.head))
        problems = self.violations()
        if problems:
            raise ValidationError(problems)

    def violations(self) -> list[str]:
        problems = []
        head = self.head
        for j, g in enumerate(head, start=1):
            if not (0.0 < g <= 1.0):
                problems.append(f"gamma_{j} = {g} out of (0, 1]")
        for j in range(1, len(head)):
            if head[j] > head[j - 1]:
                problems.append(
                    f"weights not non-increasing: gamma_{j + 1} = {head[j]} > gamma_{j} = {head[j - 1]}"
                )
        if self.tail not in (None, "poly", "geo"):
            problems.append(f"unknown weight tail {self.tail!r}")
        elif self.tail is None:
            if not head:
                problems.append("weights need a head list or a tail")
        elif self.tail_param is None:
            problems.append(f"{self.tail} tail needs a parameter")
        elif self.tail == "poly":
            a = self.tail_param
            if a < 0:
                problems.append(f"poly tail exponent must be >= 0, got {a}")
            elif head and (len(head) + 1) ** (-a) > head[-1]:
                problems.append("weights not non-increasing at the poly tail junction")
        else:
            q = self.tail_param
            if not (0.0 < q <= 1.0):
                problems.append(f"geo tail ratio must lie in (0, 1], got {q}")
        return problems

    @property
    def length(self) -> float:
        """Number of defined weights (``inf`` when a tail is present)."""
        return float("inf") if self.tail else len(self.head)

    def gamma(self, j: int) -> float:
        """Weight of 0-based dimension ``j``."""
        L = len(self.head)
        if j < L:
            return self.head[j]
        if self.tail == "poly":
            return float((j + 1) ** (-self.tail_param))
        if self.tail == "geo":
            last = self.head[-1] if self.head else 1.0
            return last * self.tail_param ** (j + 1 - L)
        raise ValidationError(f"weights are only defined for {L} dimensions, asked for dimension {j + 1}")

    def gammas(self, s: int) -> np.ndarray:
        return np.array([self.gamma(j) for j in range(s)], dtype=float)

    def betas(self, s: int) -> np.ndarray:
        return 1.0 + self.gammas(s)

    def gamma_u(self, u: Iterable[int]) -> float:
        return prod((self.gamma(j) for j in u), start=1.0)


# ---------------------------------------------------------------------------
# reduction schedule


@dataclass(frozen=True)
class ReductionSchedule:
    """Non-decreasing reduction exponents ``w_j >= 0``.

    The ``tail`` extends ``head`` indefinitely: ``"const"`` repeats the last
    value, ``"linear"`` adds ``step`` per dimension past the head.
    """

    head: tuple[int, ...] = ()
    tail: str | None = None
    step: int = 0

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(int(w) for w in self.head))
        problems = self.violations()
        if problems:
            raise ValidationError(problems)

    def violations(self) -> list[str]:
        problems = []
        head = self.head
        for j, w in enumerate(head, start=1):
            if w < 0:
                problems.append(f"w_{j} = {w} is negative")
        for j in range(1, len(head)):
            if head[j] < head[j - 1]:
                problems.append(f"reduction not non-decreasing: w_{j + 1} = {head[j]} < w_{j} = {head[j - 1]}")
        if self.tail not in (None, "const", "linear"):
            problems.append(f"unknown reduction tail {self.tail!r}")
        if not head:
            problems.append("reduction schedule needs at least one explicit value")
        if self.tail == "linear" and self.step < 0:
            problems.append(f"linear tail step must be >= 0, got {self.step}")
        return problems

    @classmethod
    def zeros(cls) -> "ReductionSchedule":
        return cls((0,), "const")

    @property
    def length(self) -> float:
        return float("inf") if self.tail else len(self.head)

    def w(self, j: int) -> int:
        """Reduction exponent of 0-based dimension ``j``."""
        L = len(self.head)
        if j < L:
            return self.head[j]
        if self.tail == "const":
            return self.head[-1]
        if self.tail == "linear":
            return self.head[-1] + self.step * (j + 1 - L)
        raise ValidationError(f"reduction is only defined for {L} dimensions, asked for dimension {j + 1}")

    def ws(self, s: int) -> list[int]:
        return [self.w(j) for j in range(s)]

    def threshold(self, m: int, s: int | None = None) -> float:
        """``t = max{j : w_j < m}`` (1-based count), capped at ``s`` if given.

        Returns ``inf`` when the schedule never reaches m and no cap is given.
        """
        if s is not None:
            return sum(1 for j in range(s) if self.w(j) < m)
        count = sum(1 for w in self.head if w < m)
        if count < len(self.head) or self.tail is None:
            return count
        if self.tail == "const" or self.step == 0:
            return float("inf")
        # linear: w_j = head[-1] + step * (j - L) < m
        extra = (m - 1 - self.head[-1]) // self.step
        return len(self.head) + max(0, extra)


# ---------------------------------------------------------------------------
# search spaces and generating vectors


@dataclass(frozen=True)
class SearchSpace:
    """Reduced candidate set ``Z_{N,w}`` for one coordinate."""

    N: int
    w: int
    members: np.ndarray

    def __len__(self):
        return len(self.members)


def search_space_size(config: LatticeConfig, w: int) -> int:
    if w >= config.m:
        return 1
    return config.b ** (config.m - w - 1) * (config.b - 1)


def search_space(config: LatticeConfig, w: int) -> SearchSpace:
    """Integers ``1 <= z < b^(m-w)`` coprime to b, or ``{1}`` when ``w >= m``."""
    if w < 0:
        raise ValidationError(f"reduction exponent must be >= 0, got {w}")
    if w >= config.m:
        members = np.array([1], dtype=np.int64)
    else:
        z = np.arange(1, config.b ** (config.m - w), dtype=np.int64)
        members = z[z % config.b != 0]
    return SearchSpace(config.N, int(w), members)


def _in_search_space(config: LatticeConfig, w: int, z: int) -> bool:
    if w >= config.m:
        return z == 1
    return 1 <= z < config.b ** (config.m - w) and gcd(z, config.b) == 1


@dataclass(frozen=True)
class GeneratingVector:
    """Pairs ``(w_j, z_j)`` with effective components ``c_j = b^w_j z_j mod N``."""

    config: LatticeConfig
    components: tuple[tuple[int, int], ...]

    def __post_init__(self):
        comps = tuple((int(w), int(z)) for w, z in self.components)
        object.__setattr__(self, "components", comps)
        problems = [
            f"z_{j} = {z} not in Z_(N,{w})"
            for j, (w, z) in enumerate(comps, start=1)
            if not _in_search_space(self.config, w, z)
        ]
        if problems:
            raise ValidationError(problems)

    @classmethod
    def from_lists(cls, config: LatticeConfig, ws: Sequence[int], zs: Sequence[int]) -> "GeneratingVector":
        if len(ws) != len(zs):
            raise ValidationError("w and z lists differ in length")
        return cls(config, tuple(zip(ws, zs)))

    @property
    def dims(self) -> int:
        return len(self.components)

    @property
    def ws(self) -> list[int]:
        return [w for w, _ in self.components]

    @property
    def zs(self) -> list[int]:
        return [z for _, z in self.components]

    @property
    def effective(self) -> np.ndarray:
        N = self.config.N
        return np.array([(self.config.power(w) * z) % N for w, z in self.components], dtype=np.int64)

    def prefix(self, d: int) -> "GeneratingVector":
        return GeneratingVector(self.config, self.components[:d])

    def restrict(self, u: Iterable[int]) -> "GeneratingVector":
        return GeneratingVector(self.config, tuple(self.components[j] for j in u))

    def extend(self, w: int, z: int) -> "GeneratingVector":
        return GeneratingVector(self.config, self.components + ((w, z),))


@dataclass(frozen=True)
class PointSet:
    """Points stored as integer numerators over a common denominator.

    Row k of a lattice point set is ``(k * c_j mod N) / N``. Keeping the
    numerators exact lets the discrepancy oracles count points without any
    floating-point comparisons.
    """

    numerators: np.ndarray
    denominator: int

    @property
    def n_points(self) -> int:
        return self.numerators.shape[0]

    @property
    def dims(self) -> int:
        return self.numerators.shape[1]

    @property
    def points(self) -> np.ndarray:
        return self.numerators / self.denominator

    def project(self, u: Sequence[int]) -> "PointSet":
        return PointSet(self.numerators[:, list(u)], self.denominator)


def lattice_points(config: LatticeConfig, z: GeneratingVector) -> PointSet:
    """All N points ``{k c / N}`` for ``k = 0..N-1``; row 0 is the origin."""
    k = np.arange(config.N, dtype=np.int64)[:, None]
    c = z.effective[None, :] % config.N
    return PointSet((k * c) % config.N, config.N)


# ---------------------------------------------------------------------------
# instance validation


@dataclass(frozen=True)
class Instance:
    config: LatticeConfig
    weights: ProductWeights
    schedule: ReductionSchedule
    dims: int


def validate_instance(b, m, weights, schedule, dims) -> Instance:
    """Build and check a full construction instance.

    ``weights`` and ``schedule`` may be ready objects or descriptor strings such as
    ``"poly:2"`` and ``"list:0,1,2+linear:1"``. Every violation across all
    parts is collected before raising.
    """
    from .formats import parse_reduction, parse_weights

    problems = _config_violations(b, m)
    if isinstance(weights, str):
        try:
            weights = parse_weights(weights)
        except ValidationError as exc:
            problems += exc.violations
            weights = None
    if isinstance(schedule, str):
        try:
            schedule = parse_reduction(schedule)
        except ValidationError as exc:
            problems += exc.violations
            schedule = None
    if not isinstance(dims, (int, np.integer)) or dims < 1:
        problems.append(f"dims must be a positive integer, got {dims!r}")
    else:
        if weights is not None and weights.length < dims:
            problems.append(f"weights cover {weights.length} dimensions, need {dims}")
        if schedule is not None and schedule.length < dims:
            problems.append(f"reduction covers {schedule.length} dimensions, need {dims}")
    if problems:
        raise ValidationError(problems)
    return Instance(LatticeConfig(b, m), weights, schedule, int(dims))
