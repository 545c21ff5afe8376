"""Centered, one-sided and uncentered maximal functions of eventually-constant sequences.

Every supremum is reduced to a finite maximum: windows whose far edges
stay near the core are enumerated, windows reaching deep into a tail form
linear-fractional families that are monotone in the window size, so they
contribute either a boundary member (already enumerated) or their limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import HALF, Mobius, Rational, isolate_roots, mpq
from .functions import BVSequence, abs_of, normalize

VARIANTS = ("centered", "one_sided", "uncentered")


class _Sums:
    """Window sums of a nonnegative normalized sequence."""

    def __init__(self, G: BVSequence):
        self.G = G
        self.c0, self.c1 = G.start, G.end
        prefix = [mpq(0)]
        for v in G.core:
            prefix.append(prefix[-1] + v)
        self.prefix = prefix

    def core_sum(self, lo: int, hi: int) -> Rational:
        """Sum of core entries at positions lo..hi (clipped to the core)."""
        lo, hi = max(lo, self.c0), min(hi, self.c1)
        if lo > hi:
            return mpq(0)
        return self.prefix[hi - self.c0 + 1] - self.prefix[lo - self.c0]

    def window(self, lo: int, hi: int) -> Rational:
        G = self.G
        total = self.core_sum(lo, hi)
        left = min(hi, self.c0 - 1) - lo + 1
        if left > 0:
            total += G.a * left
        right = hi - max(lo, self.c1 + 1) + 1
        if right > 0:
            total += G.b * right
        return total

    def avg(self, lo: int, hi: int) -> Rational:
        return self.window(lo, hi) / (hi - lo + 1)


def _prepare(G: BVSequence) -> _Sums:
    return _Sums(normalize(abs_of(G)))


def _edges(S: _Sums) -> range:
    return range(S.c0 - 1, S.c1 + 2)


def _max_at(S: _Sums, n: int, variant: str) -> Rational:
    G = S.G
    edges = _edges(S)
    if variant == "centered":
        radii = {0}
        radii.update(n - e for e in edges if e <= n)
        radii.update(e - n for e in edges if e >= n)
        best = (G.a + G.b) * HALF
        for m in radii:
            v = S.avg(n - m, n + m)
            if v > best:
                best = v
        return best
    if variant == "one_sided":
        best = G.b
        for e in {n, *(e for e in edges if e >= n)}:
            v = S.avg(n, e)
            if v > best:
                best = v
        return best
    if variant == "uncentered":
        lefts = {n, *(e for e in edges if e <= n)}
        rights = {n, *(e for e in edges if e >= n)}
        best = max(G.a, G.b)
        for lo in lefts:
            for hi in rights:
                v = S.avg(lo, hi)
                if v > best:
                    best = v
        return best
    raise ValueError(f"unknown variant {variant!r}")


def m_discrete_at(G: BVSequence, n: int, variant: str = "centered") -> Rational:
    """Exact value of the maximal function of G at the integer n."""
    return _max_at(_prepare(G), n, variant)


def m_discrete_values(G: BVSequence, ns, variant: str = "centered") -> list:
    S = _prepare(G)
    return [_max_at(S, n, variant) for n in ns]


def m_limit(G: BVSequence, side: int, variant: str = "centered") -> Rational:
    """Limit of the maximal function as n -> side * infinity (side = +1 or -1)."""
    a, b = abs(G.a), abs(G.b)
    if variant == "centered":
        return max(a if side < 0 else b, (a + b) * HALF)
    if variant == "one_sided":
        return b if side > 0 else max(a, b)
    if variant == "uncentered":
        return max(a, b)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class TailCandidate:
    """A curve in n equal to one window family's average for n beyond the core."""

    anchor: int | None  # core position of the window edge, None for constants
    curve: Mobius
    side: int  # +1: valid for n > core end, -1: valid for n < core start

    def __call__(self, n) -> Rational:
        return self.curve(mpq(n))


def tail_candidates(G: BVSequence, side: int = 1, variant: str = "centered") -> list[TailCandidate]:
    """Curves whose pointwise maximum is the maximal function beyond the core on ``side``."""
    S = _prepare(G)
    H = S.G
    a, b, c0, c1 = H.a, H.b, S.c0, S.c1
    out = []
    anchors = range(c0, c1 + 1)
    if side > 0:
        consts = {"centered": (b, (a + b) * HALF), "one_sided": (b,), "uncentered": (a, b)}[variant]
        for l in anchors:
            tail = S.core_sum(l, c1)
            if variant == "centered":
                # window [l, 2n - l]
                out.append(TailCandidate(l, Mobius(2 * b, tail - b * (l + c1), mpq(2), mpq(1 - 2 * l)), 1))
            elif variant == "uncentered":
                # window [l, n]
                out.append(TailCandidate(l, Mobius(b, tail - b * c1, mpq(1), mpq(1 - l)), 1))
    else:
        consts = {"centered": (a, (a + b) * HALF), "one_sided": (a, b), "uncentered": (a, b)}[variant]
        for r in anchors:
            head = S.core_sum(c0, r)
            if variant == "centered":
                # window [2n - r, r]
                out.append(TailCandidate(r, Mobius(-2 * a, a * (c0 + r) + head, mpq(-2), mpq(2 * r + 1)), -1))
            else:
                # window [n, r]
                out.append(TailCandidate(r, Mobius(-a, a * c0 + head, mpq(-1), mpq(r + 1)), -1))
    for c in dict.fromkeys(consts):
        out.append(TailCandidate(None, Mobius.constant(c), side))
    return out


def _floor_ceil(root) -> tuple[int, int]:
    r = root
    while math.floor(r.lo) != math.floor(r.hi) and not r.is_point:
        r = r.refine((r.hi - r.lo) / 4)
    if r.is_point:
        return math.floor(r.lo), math.ceil(r.lo)
    return math.floor(r.lo), math.floor(r.lo) + 1


def tail_events(cands: list[TailCandidate], start: int, side: int) -> list[int]:
    """Integers (from ``start`` outward) between which no two candidates cross."""
    events = {start}
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            coeffs = cands[i].curve.crossing_poly(cands[j].curve)
            if not any(coeffs):
                continue
            for root in isolate_roots(*coeffs):
                lo, hi = _floor_ceil(root)
                for e in (lo, hi):
                    if (e - start) * side > 0:
                        events.add(e)
    return sorted(events, reverse=side < 0)


def crossing_bound(G: BVSequence, side: int = 1, variant: str = "centered") -> int:
    """Integer n* beyond which (on ``side``) a single candidate curve is the maximum."""
    S = _prepare(G)
    start = S.c1 + 1 if side > 0 else S.c0 - 1
    events = tail_events(tail_candidates(G, side, variant), start, side)
    return events[-1] + side


def var_of_m_discrete(G: BVSequence, variant: str = "centered") -> Rational:
    """Exact total variation over Z of the maximal function of G."""
    S = _prepare(G)
    H = S.G
    if not H.core and H.a == H.b:
        return mpq(0)
    lo, hi = S.c0 - 1, S.c1 + 1
    mid = [_max_at(S, n, variant) for n in range(lo, hi + 1)]
    total = sum((abs(mid[i + 1] - mid[i]) for i in range(len(mid) - 1)), mpq(0))
    for side, start in ((1, hi), (-1, lo)):
        cands = tail_candidates(H, side, variant)
        events = tail_events(cands, start, side)
        vals = [max(c(e) for c in cands) for e in events]
        # between consecutive events the maximizing curve is fixed, hence monotone
        total += sum((abs(vals[i + 1] - vals[i]) for i in range(len(vals) - 1)), mpq(0))
        total += abs(vals[-1] - m_limit(H, side, variant))
    return total
