"""Step functions on R, eventually-constant sequences on Z, and their variation."""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

from .exact import ZERO, Rational, rat, rat_str


class MalformedInput(ValueError):
    """Structurally invalid instance data; ``field`` points at the offending entry."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class ClassViolation(ValueError):
    """The instance lies outside the function class an operation is valid for."""


@dataclass(frozen=True)
class StepFunction:
    """a on (-inf, t_0), values[k-1] on [t_{k-1}, t_k), b on [t_K, inf)."""

    breakpoints: tuple
    values: tuple
    a: Rational = ZERO
    b: Rational = ZERO

    def __post_init__(self):
        bps = tuple(rat(t) for t in self.breakpoints)
        vals = tuple(rat(v) for v in self.values)
        if not bps:
            raise MalformedInput("at least one breakpoint is required", "breakpoints")
        if len(vals) != len(bps) - 1:
            raise MalformedInput(
                f"expected {len(bps) - 1} values for {len(bps)} breakpoints, got {len(vals)}", "values"
            )
        for i in range(1, len(bps)):
            if bps[i] <= bps[i - 1]:
                raise MalformedInput("breakpoints must be strictly increasing", f"breakpoints[{i}]")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "b", rat(self.b))

    @property
    def K(self) -> int:
        return len(self.values)

    def levels(self) -> tuple:
        """Tail and piece values in order: (a, alpha_1, ..., alpha_K, b)."""
        return (self.a, *self.values, self.b)

    def __call__(self, x) -> Rational:
        i = bisect_right(self.breakpoints, rat(x))
        return self.levels()[i]

    def scaled(self, c) -> StepFunction:
        c = rat(c)
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values), c * self.a, c * self.b)


@dataclass(frozen=True)
class BVSequence:
    """a for n < offset, core[n - offset] on the core, b beyond it."""

    offset: int
    core: tuple
    a: Rational = ZERO
    b: Rational = ZERO

    def __post_init__(self):
        if isinstance(self.offset, bool) or not isinstance(self.offset, int):
            raise MalformedInput("offset must be an integer", "offset")
        object.__setattr__(self, "core", tuple(rat(v) for v in self.core))
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "b", rat(self.b))

    @property
    def start(self) -> int:
        return self.offset

    @property
    def end(self) -> int:
        """Last core position (start - 1 for an empty core)."""
        return self.offset + len(self.core) - 1

    def __call__(self, n: int) -> Rational:
        if n < self.offset:
            return self.a
        if n > self.end:
            return self.b
        return self.core[n - self.offset]

    def scaled(self, c) -> BVSequence:
        c = rat(c)
        return BVSequence(self.offset, tuple(c * v for v in self.core), c * self.a, c * self.b)


Instance = Union[StepFunction, BVSequence]


def normalize(f: Instance) -> Instance:
    """Merge equal neighbours and absorb pieces equal to the tails."""
    if isinstance(f, BVSequence):
        core = list(f.core)
        offset = f.offset
        lead = 0
        while lead < len(core) and core[lead] == f.a:
            lead += 1
        core = core[lead:]
        offset += lead
        while core and core[-1] == f.b:
            core.pop()
        return BVSequence(offset, tuple(core), f.a, f.b)

    bps = list(f.breakpoints)
    levels = list(f.levels())
    # levels[i] sits between bps[i-1] and bps[i]; drop bps[i] when levels match across it
    keep_bps, keep_levels = [], [levels[0]]
    for i, t in enumerate(bps):
        if levels[i + 1] == keep_levels[-1]:
            continue
        keep_bps.append(t)
        keep_levels.append(levels[i + 1])
    if not keep_bps:
        # constant function: keep one breakpoint so the type stays well formed
        return StepFunction((bps[0],), (), f.a, f.b)
    return StepFunction(tuple(keep_bps), tuple(keep_levels[1:-1]), keep_levels[0], keep_levels[-1])


def abs_of(f: Instance) -> Instance:
    if isinstance(f, BVSequence):
        return BVSequence(f.offset, tuple(abs(v) for v in f.core), abs(f.a), abs(f.b))
    return StepFunction(f.breakpoints, tuple(abs(v) for v in f.values), abs(f.a), abs(f.b))


def variation(values: Iterable) -> Rational:
    """Sum of absolute consecutive differences."""
    total = ZERO
    prev = None
    for v in values:
        if prev is not None:
            total += abs(v - prev)
        prev = v
    return total


def total_var(f: Instance) -> Rational:
    if isinstance(f, BVSequence):
        return variation((f.a, *f.core, f.b))
    return variation(f.levels())


def var_over(points: Sequence, evaluator: Callable) -> Rational:
    """Variation of ``evaluator`` sampled on a finite increasing set of points."""
    if not points:
        raise MalformedInput("sample set is empty", "points")
    for i in range(1, len(points)):
        if not points[i] > points[i - 1]:
            raise MalformedInput("sample points must be strictly increasing", f"points[{i}]")
    return variation(evaluator(x) for x in points)


def is_alternating(f: Instance) -> bool:
    """Adjacent piece values multiply to zero (tails are not pieces)."""
    g = normalize(f)
    vals = [v for _, _, v in pieces(g)] if isinstance(g, BVSequence) else g.values
    return all(vals[i] * vals[i + 1] == 0 for i in range(len(vals) - 1))


def pieces(f: Instance) -> tuple:
    """Run-length pieces of the normalized core, as (start, end, value) with end exclusive."""
    g = normalize(f)
    if isinstance(g, StepFunction):
        t = g.breakpoints
        return tuple((t[k], t[k + 1], g.values[k]) for k in range(g.K))
    out = []
    n = g.offset
    for v in g.core:
        if out and out[-1][2] == v:
            out[-1] = (out[-1][0], n + 1, v)
        else:
            out.append((n, n + 1, v))
        n += 1
    return tuple(out)


def one_sided_value(f: StepFunction, x, side: str) -> Rational:
    """f(x-) or f(x+) under the half-open piece convention."""
    x = rat(x)
    levels = f.levels()
    if side == "right":
        return levels[bisect_right(f.breakpoints, x)]
    if side == "left":
        return levels[bisect_left(f.breakpoints, x)]
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def reflect(f: Instance) -> Instance:
    """The mirror image x -> f(-x); for step functions equal to it off the breakpoints."""
    if isinstance(f, BVSequence):
        return BVSequence(-f.end, tuple(reversed(f.core)), f.b, f.a)
    return StepFunction(tuple(-t for t in reversed(f.breakpoints)), tuple(reversed(f.values)), f.b, f.a)


# ------------------------------------------------------------ JSON surface


def to_dict(f: Instance) -> dict:
    if isinstance(f, BVSequence):
        return {"a": rat_str(f.a), "b": rat_str(f.b), "offset": f.offset, "core": [rat_str(v) for v in f.core]}
    return {
        "a": rat_str(f.a),
        "b": rat_str(f.b),
        "breakpoints": [rat_str(t) for t in f.breakpoints],
        "values": [rat_str(v) for v in f.values],
    }


def to_json(f: Instance) -> str:
    return json.dumps(to_dict(f))


def _field_rat(value, field: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise MalformedInput(f"expected a rational string like \"3/4\", got {value!r}", field)
    try:
        return rat(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"cannot parse {value!r} as a rational ({exc})", field) from None


def _field_list(data: dict, key: str) -> list:
    value = data.get(key)
    if not isinstance(value, list):
        raise MalformedInput("expected a list", key)
    return [_field_rat(v, f"{key}[{i}]") for i, v in enumerate(value)]


def from_dict(data) -> Instance:
    if not isinstance(data, dict):
        raise MalformedInput("instance must be a JSON object")
    a = _field_rat(data.get("a", "0"), "a")
    b = _field_rat(data.get("b", "0"), "b")
    if "breakpoints" in data:
        bps = _field_list(data, "breakpoints")
        vals = _field_list(data, "values") if "values" in data else []
        return StepFunction(tuple(bps), tuple(vals), a, b)
    if "offset" in data or "core" in data:
        offset = data.get("offset", 0)
        if isinstance(offset, bool) or not isinstance(offset, int):
            raise MalformedInput(f"expected an integer, got {offset!r}", "offset")
        return BVSequence(offset, tuple(_field_list(data, "core")), a, b)
    raise MalformedInput("missing 'breakpoints' (step function) or 'core' (sequence)")


def from_json(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def indicator(lo, hi, value=1) -> StepFunction:
    """value * 1_[lo, hi)."""
    return StepFunction((lo, hi), (value,))
