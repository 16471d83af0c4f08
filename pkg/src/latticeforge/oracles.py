"""Property checks against brute-force oracles, used by ``latticeforge oracle``.

Each check returns a :class:`CheckReport`; the first failure carries a
replayable description of the counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import cbc_bound, discrepancy_bound_for_vector, mean_bound, mean_r_bruteforce
from .cbc import TIE_RTOL, exhaustive_best, reduced_cbc, reduced_fast_cbc
from .core import LatticeConfig, ProductWeights, ReductionSchedule, is_prime, lattice_points, search_space
from .discrepancy import weighted_star_discrepancy_exact
from .formats import format_reduction, format_weights
from .kernel import phi_table, s_n, t_closed_form, t_direct
from .quality import r_weighted_product

T_ATOL = 1e-9
# relative allowance for rounding in floating-point bound evaluations
BOUND_SLACK = 1e-12


@dataclass
class CheckReport:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, text: str) -> None:
        self.failures.append(text)


def random_weights(rng: np.random.Generator, s: int) -> ProductWeights:
    g = np.sort(rng.uniform(0.05, 1.0, size=s))[::-1]
    return ProductWeights(tuple(float(x) for x in g))


def random_schedule(rng: np.random.Generator, s: int, w_max: int) -> ReductionSchedule:
    return ReductionSchedule(tuple(int(w) for w in np.sort(rng.integers(0, w_max + 1, size=s))))


def replay(b, m, s, weights, schedule) -> str:
    return f"--base {b} --m {m} --dims {s} --weights {format_weights(weights)} --reduction {format_reduction(schedule)}"


def desk_grid(small: bool = False) -> list[tuple[int, int]]:
    """(b, m) pairs of the default kernel grid: b=2 up to m=7, b=3 up to m=4."""
    out = [(2, m) for m in range(1, 8)] + [(3, m) for m in range(1, 5)]
    return [p for p in out if p[0] ** p[1] <= 32] if small else out


def small_prime_powers(n_max: int = 128) -> list[tuple[int, int]]:
    out = []
    for b in range(2, n_max + 1):
        if is_prime(b):
            m = 1
            while b**m <= n_max:
                out.append((b, m))
                m += 1
    return out


def check_t_closed_form(pairs) -> CheckReport:
    rep = CheckReport("t-closed-form")
    for b, m in pairs:
        cfg = LatticeConfig(b, m)
        for w in range(m + 3):
            for k in range(1, cfg.N):
                rep.cases += 1
                a, d = t_closed_form(cfg, w, k), t_direct(cfg, w, k)
                if abs(a - d) > T_ATOL:
                    rep.fail(f"--base {b} --m {m} w={w} k={k}: closed {a!r} direct {d!r}")
    return rep


def t_abs_sum_sides(cfg: LatticeConfig, w: int) -> tuple[float, float]:
    size = len(search_space(cfg, w))
    lhs = sum(abs(t_closed_form(cfg, w, k)) for k in range(1, cfg.N)) / size
    return lhs, 2 * cfg.power(w) * s_n(cfg.N)


def check_t_abs_sum(pairs) -> CheckReport:
    rep = CheckReport("t-abs-sum")
    for b, m in pairs:
        cfg = LatticeConfig(b, m)
        for w in range(m + 3):
            rep.cases += 1
            lhs, rhs = t_abs_sum_sides(cfg, w)
            if lhs > rhs * (1 + BOUND_SLACK):
                rep.fail(f"--base {b} --m {m} w={w}: sum |T|/|Z| = {lhs!r} > {rhs!r}")
    return rep


def instances(pairs, dims, draws: int, seed: int):
    """Random (config, weights, schedule, s) draws over the given grids."""
    rng = np.random.default_rng(seed)
    for b, m in pairs:
        for s in dims:
            for _ in range(draws):
                yield LatticeConfig(b, m), random_weights(rng, s), random_schedule(rng, s, m + 1), s


def check_cbc_optimality(cases) -> CheckReport:
    rep = CheckReport("cbc-optimality")
    for cfg, W, S, s in cases:
        rep.cases += 1
        kernel = phi_table(cfg)
        vec, r_naive = reduced_cbc(cfg, W, S, s, kernel)
        fvec, r_fast = reduced_fast_cbc(cfg, W, S, s, kernel)
        where = replay(cfg.b, cfg.m, s, W, S)
        if fvec.zs != vec.zs:
            rep.fail(f"{where}: fast {fvec.zs} != naive {vec.zs}")
            continue
        for d in range(1, s + 1):
            best = exhaustive_best(cfg, W, S, d, vec.prefix(d - 1), kernel)
            if best != vec.zs[d - 1]:
                rep.fail(f"{where}: step {d} chose {vec.zs[d - 1]}, exhaustive {best}")
                break
            chosen = r_naive[d - 1]
            for z in search_space(cfg, S.w(d - 1)).members:
                other = r_weighted_product(cfg, W, vec.prefix(d - 1).extend(S.w(d - 1), int(z)), kernel=kernel)
                if chosen > other + TIE_RTOL * max(1.0, abs(other)) * 10:
                    rep.fail(f"{where}: step {d} R={chosen!r} > R(z={int(z)})={other!r}")
                    break
            bound = cbc_bound(cfg, W, S, d).value
            if chosen > bound * (1 + BOUND_SLACK):
                rep.fail(f"{where}: R^{d} = {chosen!r} above cbc bound {bound!r}")
    return rep


def check_mean(cases) -> CheckReport:
    rep = CheckReport("mean")
    for cfg, W, S, s in cases:
        rep.cases += 1
        mean = mean_r_bruteforce(cfg, W, S, s)
        bound = mean_bound(cfg, W, S, s).components["mean_r_bound"]
        if mean > bound * (1 + BOUND_SLACK):
            rep.fail(f"{replay(cfg.b, cfg.m, s, W, S)}: mean R {mean!r} > bound {bound!r}")
    return rep


def check_discrepancy(cases) -> CheckReport:
    rep = CheckReport("discrepancy")
    for cfg, W, S, s in cases:
        rep.cases += 1
        kernel = phi_table(cfg)
        vec, _ = reduced_fast_cbc(cfg, W, S, s, kernel)
        exact = weighted_star_discrepancy_exact(lattice_points(cfg, vec), W).value
        bound = discrepancy_bound_for_vector(cfg, W, s, vec, kernel=kernel).value
        if exact > bound * (1 + BOUND_SLACK):
            rep.fail(f"{replay(cfg.b, cfg.m, s, W, S)}: D* = {exact!r} > bound {bound!r}")
    return rep
