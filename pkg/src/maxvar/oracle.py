"""Brute-force reference values, independent of the candidate-curve reductions.

The centered discrete maximal function is evaluated on a finite window by
enumerating every radius up to (distance to the far core edge) + 64, with
exact integer arithmetic in numpy.  Variation beyond the window is closed
by a monotone-tail certificate: the last ``certificate`` steps must be
monotone, and the remaining variation is then |MG(edge) - MG(+-inf)|.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numba
import numpy as np

from .exact import mpq, rat
from .functions import BVSequence, StepFunction, abs_of, normalize

SLACK = 64


class OracleError(RuntimeError):
    pass


def _integer_scale(G: BVSequence):
    dens = [v.denominator for v in (G.a, G.b, *G.core)]
    scale = math.lcm(*(int(d) for d in dens))
    ints = [int(v * scale) for v in (G.a, G.b, *G.core)]
    return scale, ints[0], ints[1], ints[2:]


@numba.njit(cache=True)
def _window_sum(prefix, a, b, c0, c1, lo, hi):
    total = 0
    clo = min(max(lo, c0), c1 + 1)
    chi = min(max(hi, c0 - 1), c1)
    if chi >= clo:
        total += prefix[chi - c0 + 1] - prefix[clo - c0]
    left = min(hi, c0 - 1) - lo + 1
    if left > 0:
        total += a * left
    right = hi - max(lo, c1 + 1) + 1
    if right > 0:
        total += b * right
    return total


@numba.njit(cache=True)
def _centered_kernel(prefix, a, b, c0, c1, lo, hi, slack):
    size = hi - lo + 1
    span = c1 - c0 + slack + 1
    # head[j]: sum over [c0 - slack + j, c1]; tail[j]: sum over [c0, c0 + j]
    head = np.empty(span, dtype=np.int64)
    tail = np.empty(span, dtype=np.int64)
    for j in range(span):
        head[j] = _window_sum(prefix, a, b, c0, c1, c0 - slack + j, c1)
        tail[j] = _window_sum(prefix, a, b, c0, c1, c0, c0 + j)
    num = np.empty(size, dtype=np.int64)
    den = np.empty(size, dtype=np.int64)
    for idx in range(size):
        n = lo + idx
        bn = 2 * _window_sum(prefix, a, b, c0, c1, n, n)
        bd = 2
        # radius -> infinity limit (a + b) / 2
        if (a + b) * bd > bn * 2:
            bn, bd = a + b, 2
        if n > c1:
            # left edge l, right edge 2n - l in the right tail
            for j in range(c1 - c0 + slack + 1):
                l = c0 - slack + j
                s = head[j] + b * (2 * n - l - c1)
                d = 2 * (n - l) + 1
                if s * bd > bn * d:
                    bn, bd = s, d
        elif n < c0:
            for j in range(c1 - c0 + slack + 1):
                r = c0 + j
                s = tail[j] + a * (c0 - 2 * n + r)
                d = 2 * (r - n) + 1
                if s * bd > bn * d:
                    bn, bd = s, d
        else:
            for m in range(0, c1 - c0 + slack + 1):
                s = _window_sum(prefix, a, b, c0, c1, n - m, n + m)
                d = 2 * m + 1
                if s * bd > bn * d:
                    bn, bd = s, d
        num[idx] = bn
        den[idx] = bd
    return num, den


def centered_values(G: BVSequence, lo: int, hi: int):
    """(num, den, scale): MG(n) = num/den/scale on lo..hi, by exhaustive radii.

    Right of the core every window with left edge in [c0 - SLACK, c1] is
    tried, left of it every window with right edge in [c0, c1 + SLACK], and
    on the core every radius up to the core span + SLACK; all remaining
    windows lie inside one tail and average to the radius-0 value.
    """
    H = normalize(abs_of(G))
    scale, a, b, core = _integer_scale(H)
    prefix = np.concatenate(([0], np.cumsum(np.asarray(core, dtype=np.int64)))).astype(np.int64)
    num, den = _centered_kernel(prefix, a, b, H.start, H.end, lo, hi, SLACK)
    return num, den, scale


def _turning_variation(num, den, scale):
    """Exact sum of |consecutive differences| of num/den, via monotone runs."""
    diff = num[1:] * den[:-1] - num[:-1] * den[1:]
    signs = np.sign(diff)
    nz = np.nonzero(signs)[0]
    if len(nz) == 0:
        return Fraction(0), signs
    s_nz = signs[nz]
    turns = nz[np.nonzero(s_nz[1:] != s_nz[:-1])[0] + 1]
    keep = [0, *(int(i) for i in turns)]
    keep.append(len(num) - 1)
    vals = [Fraction(int(num[i]), int(den[i]) * scale) for i in keep]
    return sum((abs(vals[i + 1] - vals[i]) for i in range(len(vals) - 1)), Fraction(0)), signs


def brute_var_discrete(G: BVSequence, window: int = 10**4, certificate: int = SLACK) -> Fraction:
    """Var(MG) by exhaustive evaluation on [-window, window] plus a monotone-tail certificate."""
    H = normalize(abs_of(G))
    lo = min(-window, H.start - 2 - certificate)
    hi = max(window, H.end + 2 + certificate)
    num, den, scale = centered_values(H, lo, hi)
    total, signs = _turning_variation(num, den, scale)
    for tail in (signs[:certificate], signs[-certificate:]):
        nz = tail[tail != 0]
        if len(nz) and not (np.all(nz > 0) or np.all(nz < 0)):
            raise OracleError("maximal function is not monotone near the window edge")
    first = Fraction(int(num[0]), int(den[0]) * scale)
    last = Fraction(int(num[-1]), int(den[-1]) * scale)
    a, b = Fraction(H.a), Fraction(H.b)
    total += abs(first - max(a, (a + b) / 2)) + abs(last - max(b, (a + b) / 2))
    return total


def brute_m_discrete(G: BVSequence, n: int, variant: str = "centered", extra: int = SLACK) -> Fraction:
    """Pointwise brute force over all windows up to span + extra, plus the tail limits."""
    H = normalize(abs_of(G))
    span = abs(n - H.start) + abs(n - H.end) + extra
    vals = [Fraction(H(y)) for y in range(n - span, n + span + 1)]
    pre = [Fraction(0)]
    for v in vals:
        pre.append(pre[-1] + v)
    c = span  # index of n in vals

    def avg(i, j):
        return (pre[j + 1] - pre[i]) / (j - i + 1)

    a, b = Fraction(H.a), Fraction(H.b)
    if variant == "centered":
        return max(max(avg(c - m, c + m) for m in range(span + 1)), (a + b) / 2)
    if variant == "one_sided":
        return max(max(avg(c, c + m) for m in range(span + 1)), b)
    if variant == "uncentered":
        best = max(avg(i, j) for i in range(0, c + 1) for j in range(c, 2 * span + 1))
        return max(best, a, b)
    raise ValueError(variant)


def brute_m_continuous(f: StepFunction, x, radii: int = 4000, span=None) -> Fraction:
    """Lower bound for Mf(x) from a fine grid of radii (exact averages)."""
    g = abs_of(f)
    x = Fraction(rat(x))
    ts = [Fraction(t) for t in g.breakpoints]
    if span is None:
        span = 2 * (max(abs(ts[0] - x), abs(ts[-1] - x)) + 1)
    levels = [Fraction(v) for v in g.levels()]

    def integral(lo, hi):
        total = Fraction(0)
        edges = [lo] + [t for t in ts if lo < t < hi] + [hi]
        for u, v in zip(edges, edges[1:]):
            total += (v - u) * levels[sum(1 for t in ts if t <= u)]
        return total

    best = Fraction(0)
    for k in range(1, radii + 1):
        r = span * Fraction(k, radii)
        best = max(best, integral(x - r, x + r) / (2 * r))
    return best


def as_fraction(v) -> Fraction:
    v = rat(v)
    return Fraction(int(v.numerator), int(v.denominator))


__all__ = [
    "OracleError",
    "brute_var_discrete",
    "brute_m_discrete",
    "brute_m_continuous",
    "centered_values",
    "as_fraction",
    "mpq",
]
