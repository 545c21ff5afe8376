"""Bridges between sequences on Z and step functions on R.

Extension spreads G(n) over the unit cell [n - 1/2, n + 1/2).  Sampling
goes the other way, averaging g over dyadic cells of length 2^-N; the
averages of |g| are tied to g through the restricted operator M_N, which
only admits centered windows of length (2j - 1) / 2^N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .continuous import _Profile, var_of_m
from .discrete import _prepare, _max_at, var_of_m_discrete
from .exact import HALF, Rational, SurdSum, exact_json, mpq, rat_str
from .functions import BVSequence, StepFunction, abs_of, normalize, total_var, variation


def extend(G: BVSequence) -> StepFunction:
    """The step function equal to G(n) on [n - 1/2, n + 1/2)."""
    if not G.core:
        return StepFunction((mpq(G.offset) - HALF,), (), G.a, G.b)
    bps = tuple(mpq(n) - HALF for n in range(G.start, G.end + 2))
    return StepFunction(bps, G.core, G.a, G.b)


@dataclass(frozen=True)
class SamplePair:
    N: int
    G: BVSequence  # averages of g
    G_abs: BVSequence  # averages of |g|

    def to_json(self) -> dict:
        from .functions import to_dict

        return {"N": self.N, "G_N": to_dict(self.G), "tilde_G_N": to_dict(self.G_abs)}


def _cell_averages(P: _Profile, N: int) -> BVSequence:
    scale = mpq(2) ** N
    t = P.t
    lo = int(math.floor(t[0] * scale)) - 1
    hi = int(math.ceil(t[-1] * scale)) + 1
    core = []
    for n in range(lo, hi + 1):
        u, v = (n - HALF) / scale, (n + HALF) / scale
        core.append((P.H(v) - P.H(u)) * scale)
    return normalize(BVSequence(lo, tuple(core), P.a, P.b))


def sample(g: StepFunction, N: int) -> SamplePair:
    """Exact dyadic cell averages G_N of g and tilde_G_N of |g| at resolution N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return SamplePair(N, _cell_averages(_Profile(g), N), _cell_averages(_Profile(abs_of(g)), N))


@dataclass(frozen=True)
class SamplingGrid:
    resolution: int
    points: tuple

    def __len__(self) -> int:
        return len(self.points)

    def scaled(self, N: int) -> tuple:
        """The integers 2^N x for x in the grid (requires N >= resolution)."""
        if N < self.resolution:
            raise ValueError("N must be at least the grid resolution")
        return tuple(int(x * 2**N) for x in self.points)


def grid(resolution: int) -> SamplingGrid:
    """2^-N* Z intersected with [-2^N*, 2^N*]."""
    if resolution < 0:
        raise ValueError("resolution must be nonnegative")
    step = mpq(1, 2**resolution)
    span = 4**resolution
    return SamplingGrid(resolution, tuple(k * step for k in range(-span, span + 1)))


def truncate(G: BVSequence, N: int) -> BVSequence:
    """a left of -N, G on [-N, N], b right of N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return normalize(BVSequence(-N, tuple(G(n) for n in range(-N, N + 1)), G.a, G.b))


def sampled_var(g: StepFunction, resolution: int) -> Rational:
    """Variation of Mg over the grid of the given resolution."""
    P = _Profile(normalize(abs_of(g)))
    return variation(P.centered(x) for x in grid(resolution).points)


@dataclass
class TransferReport:
    resolution: int
    N: int
    var_g: Rational
    var_G: Rational
    var_G_abs: Rational
    grid_var_Mg: Rational
    grid_var_MNg: Rational
    grid_var_MG_abs: Rational
    var_MG_abs: Rational
    var_Mg: object
    pointwise_failures: list
    checks: dict

    @property
    def holds(self) -> bool:
        return all(self.checks.values()) and not self.pointwise_failures

    @property
    def observed_gaps(self) -> dict:
        return {
            "var_Mg_minus_grid_var_Mg": self._sub(self.var_Mg, self.grid_var_Mg),
            "grid_var_Mg_minus_grid_var_MNg": self.grid_var_Mg - self.grid_var_MNg,
        }

    @staticmethod
    def _sub(x, y):
        return (SurdSum.of(x) - SurdSum.of(y)).simplify()

    def to_json(self) -> dict:
        return {
            "resolution": self.resolution,
            "N": self.N,
            "holds": self.holds,
            "quantities": {
                "var_g": rat_str(self.var_g),
                "var_G_N": rat_str(self.var_G),
                "var_tilde_G_N": rat_str(self.var_G_abs),
                "grid_var_Mg": rat_str(self.grid_var_Mg),
                "grid_var_M_N_g": rat_str(self.grid_var_MNg),
                "grid_var_M_tilde_G_N": rat_str(self.grid_var_MG_abs),
                "var_M_tilde_G_N": rat_str(self.var_MG_abs),
                "var_Mg": exact_json(self.var_Mg),
            },
            "checks": self.checks,
            "pointwise_failures": [
                {"n": n, "lhs": rat_str(u), "rhs": rat_str(v), "relation": rel} for n, u, v, rel in self.pointwise_failures
            ],
            "observed_gaps": {k: exact_json(v) for k, v in self.observed_gaps.items()},
        }


def transfer_audit(g: StepFunction, resolution: int, N: int) -> TransferReport:
    """Evaluate the sampling chain exactly at finite resolutions and check its exact links."""
    if N < resolution:
        raise ValueError("N must be at least the grid resolution")
    g_abs = normalize(abs_of(g))
    P = _Profile(g_abs)
    pair = sample(g, N)
    S_abs, S_signed = _prepare(pair.G_abs), _prepare(pair.G)
    E = grid(resolution)
    ns = E.scaled(N)
    Mg = [P.centered(x) for x in E.points]
    MNg = [P.restricted(x, N) for x in E.points]
    MGa = [_max_at(S_abs, n, "centered") for n in ns]
    MGs = [_max_at(S_signed, n, "centered") for n in ns]
    failures = []
    for n, u, v, w in zip(ns, MGs, MGa, MNg):
        if v != w:
            failures.append((n, v, w, "M tilde_G_N(n) = M_N g(n/2^N)"))
        if u > v:
            failures.append((n, u, v, "M G_N(n) <= M tilde_G_N(n)"))

    var_g = total_var(g)
    rep = TransferReport(
        resolution=resolution,
        N=N,
        var_g=var_g,
        var_G=total_var(pair.G),
        var_G_abs=total_var(pair.G_abs),
        grid_var_Mg=variation(Mg),
        grid_var_MNg=variation(MNg),
        grid_var_MG_abs=variation(MGa),
        var_MG_abs=var_of_m_discrete(pair.G_abs),
        var_Mg=var_of_m(g_abs),
        pointwise_failures=failures,
        checks={},
    )
    rep.checks = {
        "grid_var_M_N_g == grid_var_M_tilde_G_N": rep.grid_var_MNg == rep.grid_var_MG_abs,
        "grid_var_M_tilde_G_N <= var_M_tilde_G_N": rep.grid_var_MG_abs <= rep.var_MG_abs,
        "var_G_N <= var_g": rep.var_G <= var_g,
        "var_tilde_G_N <= var_g": rep.var_G_abs <= var_g,
        "grid_var_Mg <= var_Mg": _le(rep.grid_var_Mg, rep.var_Mg),
    }
    return rep


def _le(x, y) -> bool:
    return SurdSum.of(x) <= SurdSum.of(y)
