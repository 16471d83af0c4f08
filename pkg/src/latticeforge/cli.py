"""Command-line front end.

Exit status: 0 success, 1 validation error, 2 scale limit, 3 failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from pathlib import Path

from . import oracles
from .bounds import FORMS, cbc_bound, discrepancy_bound_for_vector, mean_bound
from .cbc import exhaustive_cbc, reduced_cbc, reduced_fast_cbc, standard_cbc
from .core import LatticeConfig, ProductWeights, ReductionSchedule, lattice_points, search_space_size, validate_instance
from .cost import OpCounter
from .errors import ScaleLimitError, ValidationError
from .formats import format_points, format_vector, parse_vector, parse_weights, read_instance
from .kernel import phi_table
from .quality import r_weighted, r_weighted_product
from .tractability import n_star_estimate

EXIT_OK, EXIT_INVALID, EXIT_SCALE, EXIT_CHECK = 0, 1, 2, 3


class CheckFailed(Exception):
    pass


def _add_instance_args(p, need_reduction=True):
    p.add_argument("--instance", type=Path, help="instance file (flags override its values)")
    p.add_argument("--base", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--dims", type=int)
    p.add_argument("--weights")
    if need_reduction:
        p.add_argument("--reduction")


def _instance_values(args) -> dict:
    values = read_instance(args.instance) if getattr(args, "instance", None) else {}
    for key, attr in (("base", "base"), ("m", "m"), ("dims", "dims"), ("weights", "weights"), ("reduction", "reduction")):
        v = getattr(args, attr, None)
        if v is not None:
            values[key] = str(v)
    return values


def _int(values, key):
    if key not in values:
        raise ValidationError(f"missing {key}")
    try:
        return int(values[key])
    except ValueError:
        raise ValidationError(f"{key} must be an integer, got {values[key]!r}") from None


def _load_instance(args, default_reduction=None, default_m=None):
    values = _instance_values(args)
    if "m" not in values and default_m is not None:
        values["m"] = str(default_m)
    if "reduction" not in values and default_reduction:
        values["reduction"] = default_reduction
    for key in ("weights", "reduction"):
        if key not in values:
            raise ValidationError(f"missing {key}")
    return validate_instance(_int(values, "base"), _int(values, "m"), values["weights"], values["reduction"], _int(values, "dims"))


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    default = "const:0" if args.algorithm == "standard" else None
    inst = _load_instance(args, default)
    cfg, W, S, s = inst.config, inst.weights, inst.schedule, inst.dims
    kernel = phi_table(cfg)
    if args.algorithm == "reduced":
        vec, r = reduced_cbc(cfg, W, S, s, kernel)
    elif args.algorithm == "fast":
        vec, r = reduced_fast_cbc(cfg, W, S, s, kernel, strict_reset=args.strict_reset)
    elif args.algorithm == "standard":
        vec, r = standard_cbc(cfg, W, s, kernel, fast=True)
    else:
        vec, r = exhaustive_cbc(cfg, W, S, s, kernel)
    _emit(format_vector(vec, r), args.out)
    return EXIT_OK


def _vector_and_weights(args):
    vec, _ = parse_vector(Path(args.vector).read_text())
    values = _instance_values(args)
    if "weights" not in values:
        raise ValidationError("missing weights")
    weights = parse_weights(values["weights"])
    if weights.length < vec.dims:
        raise ValidationError(f"weights cover {weights.length} dimensions, vector has {vec.dims}")
    return vec, weights


def cmd_evaluate(args) -> int:
    vec, W = _vector_and_weights(args)
    if args.form == "subset":
        value = r_weighted(vec.config, W, vec)
    else:
        value = r_weighted_product(vec.config, W, vec)
    print(f"{value:.17g}")
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.which == "discrepancy" and args.vector:
        vec, W = _vector_and_weights(args)
        rep = discrepancy_bound_for_vector(vec.config, W, vec.dims, vec, form=args.form)
    else:
        inst = _load_instance(args)
        cfg, W, S, s = inst.config, inst.weights, inst.schedule, inst.dims
        if args.which == "mean":
            rep = mean_bound(cfg, W, S, s, form=args.form)
        elif args.which == "cbc":
            rep = cbc_bound(cfg, W, S, s, log_bound=args.log_harmonic)
        else:
            rep = discrepancy_bound_for_vector(cfg, W, s, schedule=S, form=args.form, log_bound=args.log_harmonic)
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["kind", "value", "form", "components", "assumptions"])
        writer.writerow(rep.csv_row())
        sys.stdout.write(buf.getvalue())
    else:
        print("\n".join(rep.lines()))
    return EXIT_OK


def _oracle_cases(args, pairs, dims):
    values = _instance_values(args)
    if "weights" in values and "base" in values:
        inst = _load_instance(args)
        return [(inst.config, inst.weights, inst.schedule, inst.dims)]
    return list(oracles.instances(pairs, dims, args.draws, args.seed))


def cmd_oracle(args) -> int:
    values = _instance_values(args)
    if "base" in values and "m" in values:
        pairs = [(_int(values, "base"), _int(values, "m"))]
        LatticeConfig(*pairs[0])
    else:
        pairs = None
    dims = [_int(values, "dims")] if "dims" in values else [1, 2, 3]
    if args.check == "t-closed-form":
        rep = oracles.check_t_closed_form(pairs or oracles.desk_grid())
    elif args.check in ("t-abs-sum", "lemma34"):
        rep = oracles.check_t_abs_sum(pairs or oracles.small_prime_powers(128))
    elif args.check == "cbc-optimality":
        rep = oracles.check_cbc_optimality(_oracle_cases(args, pairs or [(2, 4), (3, 3)], dims))
    elif args.check == "mean":
        pairs = pairs or [(2, 5)]
        cases = _oracle_cases(args, pairs, dims if "dims" in values else [1, 2])
        rep = oracles.check_mean(cases)
    else:
        rep = oracles.check_discrepancy(_oracle_cases(args, pairs or [(2, 3), (2, 4), (3, 2)], dims))
    status = "pass" if rep.ok else "FAIL"
    print(f"{rep.name}: {status} ({rep.cases} cases, {len(rep.failures)} failures)")
    if not rep.ok:
        print(f"counterexample: {rep.failures[0]}")
        raise CheckFailed(rep.name)
    return EXIT_OK


BENCH_COLUMNS = ["instance", "algorithm", "dim", "w_d", "level", "candidates", "search_ops", "other_ops", "search_normalized"]


def bench_rows(cfg: LatticeConfig, W, S, s: int, label: str, wall: bool = False) -> list[list[str]]:
    rows = []
    runs = (
        ("reduced-fast", lambda c: reduced_fast_cbc(cfg, W, S, s, counter=c)),
        ("standard", lambda c: standard_cbc(cfg, W, s, counter=c)),
    )
    for name, run in runs:
        counter = OpCounter()
        t0 = time.perf_counter()
        run(counter)
        elapsed = time.perf_counter() - t0
        ws = S.ws(s) if name == "reduced-fast" else [0] * s
        rows.append([label, name, "phi", "", "", "", "", str(counter.phase("phi")), ""])
        for d in range(1, s + 1):
            w = ws[d - 1]
            level = max(0, cfg.m - w)
            search = counter.step(d, "omega") + counter.step(d, "search")
            other = counter.step(d) - search
            cands = search_space_size(cfg, w)
            # dense Omega costs |Z_{b^l,0}| b^l; naive search costs |Z| N
            unit = cands * (cfg.b**level if name == "reduced-fast" else cfg.N)
            norm = f"{search / unit:.6g}" if search else "0"
            rows.append([label, name, str(d), str(w), str(level), str(cands), str(search), str(other), norm])
        total = [label, name, "total", "", "", "", "", str(counter.total), ""]
        if wall:
            total[-1] = f"{elapsed:.6f}s"
        rows.append(total)
    return rows


def cmd_bench(args) -> int:
    values = _instance_values(args)
    if "base" in values:
        inst = _load_instance(args)
        grid = [(inst.config, inst.weights, inst.schedule, inst.dims)]
    else:
        grid = []
        for m in args.grid_m:
            cfg = LatticeConfig(2, m)
            grid.append((cfg, ProductWeights((), "poly", 2.0), ReductionSchedule((0,), "linear", 1), 8))
    rows = []
    for cfg, W, S, s in grid:
        label = f"b={cfg.b};m={cfg.m};s={s}"
        first = bench_rows(cfg, W, S, s, label, args.wall_time)
        for _ in range(args.repeat - 1):
            again = bench_rows(cfg, W, S, s, label, False)
            if [r[:8] for r in again] != [r[:8] for r in first]:
                raise CheckFailed("operation counts changed between repeats")
        rows += first
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_points(args) -> int:
    vec, _ = parse_vector(Path(args.vector).read_text())
    _emit(format_points(lattice_points(vec.config, vec)), args.out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    table = phi_table(LatticeConfig(args.base, args.m), method=args.method)
    out = args.out
    if out is None:
        buf = io.StringIO()
        buf.write("k,phi_k\n")
        for k, v in enumerate(table.phi):
            buf.write(f"{k},{v:.17g}\n")
        sys.stdout.write(buf.getvalue())
    else:
        table.to_csv(out)
    return EXIT_OK


def cmd_tractability(args) -> int:
    # m is searched over; a placeholder keeps instance validation uniform
    inst = _load_instance(args, default_m=1)
    rep = n_star_estimate(
        inst.weights,
        inst.schedule,
        inst.config.b,
        inst.dims,
        args.epsilon,
        args.delta,
        m_max=args.m_max,
        log_bound=args.log_harmonic,
    )
    print("\n".join(rep.lines()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latticeforge", description="Reduced CBC lattice rule toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a generating vector")
    _add_instance_args(p)
    p.add_argument("--algorithm", choices=["reduced", "fast", "standard", "exhaustive"], default="fast")
    p.add_argument("--strict-paper", dest="strict_reset", action="store_true", help="also reset z_t to 1 when s > t")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("evaluate", help="figure of merit R of a vector file")
    p.add_argument("vector", type=Path)
    _add_instance_args(p, need_reduction=False)
    p.add_argument("--form", choices=["product", "subset"], default="product")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bound", help="closed-form bounds")
    _add_instance_args(p)
    p.add_argument("--which", choices=["mean", "cbc", "discrepancy"], default="cbc")
    p.add_argument("--form", choices=list(FORMS), default="standard")
    p.add_argument("--vector", type=Path, help="evaluate the discrepancy bound for this vector")
    p.add_argument("--log-harmonic", action="store_true", help="replace S_N by 4 log N")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("oracle", help="run a brute-force property check")
    _add_instance_args(p)
    p.add_argument("--check", required=True, choices=["cbc-optimality", "t-closed-form", "t-abs-sum", "lemma34", "mean", "discrepancy"])
    p.add_argument("--draws", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="counted construction cost, CSV")
    _add_instance_args(p)
    p.add_argument("--grid-m", type=int, nargs="+", default=[6, 8, 10])
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--wall-time", action="store_true", help="append wall time to total rows")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("points", help="point set as exact rationals, CSV")
    p.add_argument("vector", type=Path)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("kernel", help="phi table, CSV")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=["fft", "direct"], default="fft")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("tractability", help="sigma_d chain and N*(eps, s)")
    _add_instance_args(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--m-max", type=int, default=20)
    p.add_argument("--log-harmonic", action="store_true")
    p.set_defaults(func=cmd_tractability)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ScaleLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except CheckFailed:
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
