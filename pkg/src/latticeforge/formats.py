"""Plain-text formats: weight/reduction descriptors, instance files, vector files.

Weight descriptors::

    poly:A                  gamma_j = j^-A
    geo:Q                   gamma_j = Q^j
    list:G1,G2,...          explicit weights, defined only for those dimensions
    list:G1,...+poly:A      explicit head, then j^-A
    list:G1,...+geo:Q       explicit head, then gamma_L * Q^(j-L)

Reduction descriptors::

    list:W1,W2,...          explicit exponents
    list:W1,...+const       repeat the last exponent
    list:W1,...+linear:S    grow by S per dimension past the list
    const:W                 w_j = W for every j
    linear:S                w_j = S * (j - 1)

Instance files hold one ``key = value`` pair per line (``key: value`` and
``key value`` are accepted too); ``#`` starts a comment. Keys: ``base``,
``m``, ``dims``, ``weights``, ``reduction``.
"""

from __future__ import annotations

import io
from pathlib import Path

from .core import GeneratingVector, LatticeConfig, PointSet, ProductWeights, ReductionSchedule
from .errors import ValidationError

INSTANCE_KEYS = ("base", "m", "dims", "weights", "reduction")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"bad number list {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"bad integer list {text!r}") from None


def _number(text: str, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ValidationError(f"bad number {text!r}") from None


def parse_weights(text: str) -> ProductWeights:
    text = text.strip()
    body, _, tail = text.partition("+")
    kind, _, arg = body.partition(":")
    if kind in ("poly", "geo"):
        if tail:
            raise ValidationError(f"{kind} weights take no tail: {text!r}")
        return ProductWeights((), kind, _number(arg))
    if kind != "list":
        raise ValidationError(f"unknown weight descriptor {text!r}")
    head = _floats(arg)
    if not tail:
        return ProductWeights(head)
    tkind, _, targ = tail.partition(":")
    if tkind not in ("poly", "geo"):
        raise ValidationError(f"unknown weight tail {tail!r}")
    return ProductWeights(head, tkind, _number(targ))


def format_weights(weights: ProductWeights) -> str:
    if not weights.head:
        return f"{weights.tail}:{weights.tail_param:g}"
    out = "list:" + ",".join(repr(g) for g in weights.head)
    if weights.tail:
        out += f"+{weights.tail}:{weights.tail_param:g}"
    return out


def parse_reduction(text: str) -> ReductionSchedule:
    text = text.strip()
    body, _, tail = text.partition("+")
    kind, _, arg = body.partition(":")
    if kind == "const":
        return ReductionSchedule((_number(arg, int),), "const")
    if kind == "linear":
        return ReductionSchedule((0,), "linear", _number(arg, int))
    if kind != "list":
        raise ValidationError(f"unknown reduction descriptor {text!r}")
    head = _ints(arg)
    if not tail:
        return ReductionSchedule(head)
    if tail == "const":
        return ReductionSchedule(head, "const")
    tkind, _, targ = tail.partition(":")
    if tkind != "linear":
        raise ValidationError(f"unknown reduction tail {tail!r}")
    return ReductionSchedule(head, "linear", _number(targ, int))


def format_reduction(schedule: ReductionSchedule) -> str:
    out = "list:" + ",".join(str(w) for w in schedule.head)
    if schedule.tail == "const":
        out += "+const"
    elif schedule.tail == "linear":
        out += f"+linear:{schedule.step}"
    return out


def _key_values(lines) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            parts = line.split("=", 1)
        elif line.split(":", 1)[0].strip() in INSTANCE_KEYS:
            parts = line.split(":", 1)
        else:
            parts = line.split(None, 1)
        if len(parts) != 2 or not parts[1].strip():
            raise ValidationError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        out[parts[0].strip()] = parts[1].strip()
    return out


def read_instance(path) -> dict[str, str]:
    """Raw key/value pairs of an instance file (values left as strings)."""
    text = Path(path).read_text()
    values = _key_values(text.splitlines())
    unknown = sorted(set(values) - set(INSTANCE_KEYS))
    if unknown:
        raise ValidationError(f"unknown instance keys: {', '.join(unknown)}")
    return values


def write_instance(path, b, m, dims, weights: ProductWeights, schedule: ReductionSchedule) -> None:
    Path(path).write_text(
        f"base = {b}\nm = {m}\ndims = {dims}\n"
        f"weights = {format_weights(weights)}\nreduction = {format_reduction(schedule)}\n"
    )


# ---------------------------------------------------------------------------
# generating vectors


def format_vector(vector: GeneratingVector, r_values=None) -> str:
    cfg = vector.config
    buf = io.StringIO()
    buf.write("# rank-1 lattice generating vector\n")
    buf.write(f"base {cfg.b}\nm {cfg.m}\ndims {vector.dims}\n")
    buf.write("# j w_j z_j c_j\n")
    for j, ((w, z), c) in enumerate(zip(vector.components, vector.effective), start=1):
        buf.write(f"{j} {w} {z} {int(c)}\n")
    if r_values is not None:
        buf.write("# d R_d\n")
        for d, r in enumerate(r_values, start=1):
            buf.write(f"R {d} {r:.17g}\n")
    return buf.getvalue()


def parse_vector(text: str) -> tuple[GeneratingVector, list[float]]:
    header: dict[str, int] = {}
    rows = []
    r_values = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if line[0] in ("base", "m", "dims") and len(line) == 2:
            header[line[0]] = int(line[1])
        elif line[0] == "R" and len(line) == 3:
            r_values.append(float(line[2]))
        elif len(line) == 4:
            rows.append(tuple(int(v) for v in line))
        else:
            raise ValidationError(f"unrecognised vector line {raw.strip()!r}")
    missing = [k for k in ("base", "m", "dims") if k not in header]
    if missing:
        raise ValidationError(f"vector file lacks {', '.join(missing)}")
    config = LatticeConfig(header["base"], header["m"])
    if len(rows) != header["dims"] or [r[0] for r in rows] != list(range(1, len(rows) + 1)):
        raise ValidationError("vector rows do not match the declared dims")
    vector = GeneratingVector(config, tuple((w, z) for _, w, z, _ in rows))
    stated = [c for *_, c in rows]
    if stated != [int(c) for c in vector.effective]:
        raise ValidationError("c_j column disagrees with b^w_j z_j mod N")
    return vector, r_values


def format_points(points: PointSet) -> str:
    """CSV of exact rationals ``num/den``, one row per point."""
    den = points.denominator
    lines = [",".join(f"x{j}" for j in range(1, points.dims + 1))]
    for row in points.numerators:
        lines.append(",".join(f"{int(v)}/{den}" for v in row))
    return "\n".join(lines) + "\n"
