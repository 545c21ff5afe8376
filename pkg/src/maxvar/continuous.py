"""The centered maximal function of a step function, as an exact object.

For a step function the average of |f| over (x - r, x + r) is linear
fractional in r between consecutive radii |x - t_k|, hence monotone there,
so Mf(x) is a maximum over finitely many radii plus the r -> 0 and
r -> infinity limits.  Read as functions of x, these finitely many
windows form anchored candidate curves (window edge pinned at a
breakpoint) which are linear fractional between consecutive midpoints
(t_i + t_j) / 2.  The upper envelope of the candidates is Mf; it is built
exactly, with crossings kept as isolated quadratic roots.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Union

from .exact import (
    HALF,
    ZERO,
    Mobius,
    QuadraticValue,
    Rational,
    RootDescriptor,
    SurdSum,
    compare,
    exact_json,
    isolate_roots,
    mpq,
    rat,
    rat_str,
    simplify,
)
from .functions import ClassViolation, StepFunction, abs_of, is_alternating, normalize

Boundary = Union[None, Rational, RootDescriptor]

MAX_PIECES = 128


class _Profile:
    """Antiderivative bookkeeping for a nonnegative normalized step function."""

    def __init__(self, f: StepFunction):
        self.f = f
        self.t = f.breakpoints
        self.levels = f.levels()
        self.a, self.b = f.a, f.b
        H = [ZERO]
        for k, v in enumerate(f.values):
            H.append(H[-1] + v * (self.t[k + 1] - self.t[k]))
        self.Ht = H

    def piece(self, y) -> tuple[Rational, Rational]:
        """(c, beta) with H(z) = c z + beta on the piece containing y (half-open)."""
        i = bisect_right(self.t, y)
        c = self.levels[i]
        if i == 0:
            return c, -c * self.t[0]
        return c, self.Ht[i - 1] - c * self.t[i - 1]

    def H(self, y) -> Rational:
        c, beta = self.piece(y)
        return c * y + beta

    def left(self, x) -> Rational:
        return self.levels[bisect_left(self.t, x)]

    def right(self, x) -> Rational:
        return self.levels[bisect_right(self.t, x)]

    def centered(self, x) -> Rational:
        best = max((self.a + self.b) * HALF, (self.left(x) + self.right(x)) * HALF)
        H = self.H
        for t in self.t:
            rho = x - t if t < x else t - x
            if rho:
                v = (H(x + rho) - H(x - rho)) / (2 * rho)
                if v > best:
                    best = v
        return best

    def restricted(self, x, N: int) -> Rational:
        scale = mpq(2) ** (N + 1)
        js = {1}
        for t in self.t:
            rho = abs(x - t) * scale
            js.add(max(1, int((rho + 1) // 2)))
            js.add(max(1, -int(-(rho + 1) // 2)))
        best = (self.a + self.b) * HALF
        H = self.H
        for j in js:
            r = (2 * j - 1) / scale
            v = (H(x + r) - H(x - r)) / (2 * r)
            if v > best:
                best = v
        return best

    def one_sided(self, x) -> Rational:
        best = max(self.b, self.right(x))
        Hx = self.H(x)
        for t in self.t:
            if t > x:
                v = (self.H(t) - Hx) / (t - x)
                if v > best:
                    best = v
        return best

    def uncentered(self, x) -> Rational:
        best = max(self.a, self.b, self.left(x), self.right(x))
        lefts = [t for t in self.t if t < x] + [x]
        rights = [t for t in self.t if t > x] + [x]
        for lo in lefts:
            Hl = self.H(lo)
            for hi in rights:
                if hi > lo:
                    v = (self.H(hi) - Hl) / (hi - lo)
                    if v > best:
                        best = v
        return best


def _profile(f: StepFunction) -> _Profile:
    return _Profile(normalize(abs_of(f)))


def m_at(f: StepFunction, x, variant: str = "centered") -> Rational:
    """Exact value at rational x of the centered (or one-sided / uncentered) maximal function."""
    P = _profile(f)
    x = rat(x)
    if variant == "centered":
        return P.centered(x)
    if variant == "one_sided":
        return P.one_sided(x)
    if variant == "uncentered":
        return P.uncentered(x)
    raise ValueError(f"unknown variant {variant!r}")


def m_restricted_at(f: StepFunction, x, N: int) -> Rational:
    """Supremum over centered windows of length in (2Z + 1) / 2^N only."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return _profile(f).restricted(rat(x), N)


def m_limit(f: StepFunction, side: int) -> Rational:
    a, b = abs(f.a), abs(f.b)
    return max(a if side < 0 else b, (a + b) * HALF)


# ------------------------------------------------------------ candidates

# Candidate keys sort by anchor index, so ties go to the smaller anchor.
LEFT, RIGHT, LOCAL, GLOBAL = "left", "right", "local", "global"


def _key(kind: str, index: int, K: int) -> tuple:
    if kind == LOCAL:
        return (K + 1, 2, kind)
    if kind == GLOBAL:
        return (K + 2, 3, kind)
    return (index, 0 if kind == LEFT else 1, kind)


def _segment_curves(P: _Profile, sample) -> list[tuple[tuple, Mobius]]:
    """Candidates as single linear-fractional pieces on the segment containing ``sample``."""
    K = len(P.t) - 1
    out = []
    for i, t in enumerate(P.t):
        y = 2 * sample - t
        c, beta = P.piece(y)
        if t < sample:
            # window (t, 2x - t)
            out.append((_key(LEFT, i, K), Mobius(2 * c, beta - c * t - P.Ht[i], mpq(2), -2 * t)))
        elif t > sample:
            # window (2x - t, t)
            out.append((_key(RIGHT, i, K), Mobius(-2 * c, P.Ht[i] + c * t - beta, mpq(-2), 2 * t)))
    out.append((_key(LOCAL, 0, K), Mobius.constant(P.right(sample))))
    out.append((_key(GLOBAL, 0, K), Mobius.constant((P.a + P.b) * HALF)))
    return out


@dataclass(frozen=True)
class CandidateCurve:
    """One candidate for Mf as a piecewise linear-fractional curve of the center x."""

    kind: str
    anchor: Optional[int]
    pieces: tuple  # ((lo, hi, Mobius), ...) with lo/hi rational or None for infinity
    profile: _Profile = field(repr=False, compare=False)

    def __call__(self, x) -> Optional[Rational]:
        x = rat(x)
        P = self.profile
        if self.kind == LOCAL:
            return (P.left(x) + P.right(x)) * HALF
        if self.kind == GLOBAL:
            return (P.a + P.b) * HALF
        t = P.t[self.anchor]
        if self.kind == LEFT and x > t:
            return (P.H(2 * x - t) - P.Ht[self.anchor]) / (2 * (x - t))
        if self.kind == RIGHT and x < t:
            return (P.Ht[self.anchor] - P.H(2 * x - t)) / (2 * (t - x))
        return None


def candidate_curves(f: StepFunction) -> list[CandidateCurve]:
    P = _profile(f)
    # a constant has nothing to anchor to
    t = () if P.f.K == 0 and P.a == P.b else P.t
    out = []
    for i, ti in enumerate(t):
        mids = sorted({(ti + tk) / 2 for tk in t if tk > ti})
        cuts = [ti, *mids, None]
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            sample = lo + 1 if hi is None else (lo + hi) / 2
            y = 2 * sample - ti
            c, beta = P.piece(y)
            pieces.append((lo, hi, Mobius(2 * c, beta - c * ti - P.Ht[i], mpq(2), -2 * ti)))
        out.append(CandidateCurve(LEFT, i, tuple(pieces), P))
    for j, tj in enumerate(t):
        mids = sorted({(tj + tk) / 2 for tk in t if tk < tj})
        cuts = [None, *mids, tj]
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            sample = hi - 1 if lo is None else (lo + hi) / 2
            y = 2 * sample - tj
            c, beta = P.piece(y)
            pieces.append((lo, hi, Mobius(-2 * c, P.Ht[j] + c * tj - beta, mpq(-2), 2 * tj)))
        out.append(CandidateCurve(RIGHT, j, tuple(pieces), P))
    out.append(CandidateCurve(LOCAL, None, (), P))
    out.append(CandidateCurve(GLOBAL, None, (), P))
    return out


# ---------------------------------------------------------- boundaries


def _exact(b: Boundary):
    if isinstance(b, RootDescriptor):
        return simplify(b.value)
    return b


def _enclose(b: Boundary) -> tuple:
    if isinstance(b, RootDescriptor):
        return b.lo, b.hi
    return b, b


def _separate(lo_b: Boundary, hi_b: Boundary) -> tuple[Boundary, Boundary]:
    """Refine root boundaries until their enclosures are disjoint."""
    while True:
        _, l_hi = _enclose(lo_b)
        h_lo, _ = _enclose(hi_b)
        if l_hi < h_lo:
            return lo_b, hi_b
        if isinstance(lo_b, RootDescriptor) and not lo_b.is_point:
            lo_b = lo_b.refine((lo_b.hi - lo_b.lo) / 4)
        if isinstance(hi_b, RootDescriptor) and not hi_b.is_point:
            hi_b = hi_b.refine((hi_b.hi - hi_b.lo) / 4)


def rational_between(lo_b: Boundary, hi_b: Boundary) -> Rational:
    """A rational strictly between two boundaries (None stands for -inf / +inf)."""
    if lo_b is None and hi_b is None:
        return ZERO
    if lo_b is None:
        return _enclose(hi_b)[0] - 1
    if hi_b is None:
        return _enclose(lo_b)[1] + 1
    lo_b, hi_b = _separate(lo_b, hi_b)
    return (_enclose(lo_b)[1] + _enclose(hi_b)[0]) / 2


def _cmp_boundary(x, b: Boundary, side: int) -> int:
    """compare(x, b) with None read as side * infinity."""
    if b is None:
        return -side
    return compare(x, _exact(b))


def _boundary_text(b: Boundary, side: int) -> str:
    if b is None:
        return "-inf" if side < 0 else "inf"
    return str(_exact(b)) if isinstance(b, RootDescriptor) else rat_str(b)


def _end_value(curve: Mobius, b: Boundary, side: int):
    if b is None:
        return curve.limit(side)
    return simplify(curve(_exact(b)))


# ------------------------------------------------------------- envelope


@dataclass(frozen=True)
class Segment:
    """An open interval on which one candidate is the maximum and is monotone."""

    lo: Boundary
    hi: Boundary
    key: tuple
    curve: Mobius
    direction: int
    lo_value: object  # limit of Mf at lo (Rational or QuadraticValue)
    hi_value: object

    @property
    def kind(self) -> str:
        return self.key[2]

    @property
    def anchor(self) -> Optional[int]:
        return self.key[0] if self.key[2] in (LEFT, RIGHT) else None

    def contains(self, x) -> bool:
        return _cmp_boundary(x, self.lo, -1) > 0 and _cmp_boundary(x, self.hi, 1) < 0

    def to_json(self) -> dict:
        return {
            "lo": _boundary_json(self.lo, -1),
            "hi": _boundary_json(self.hi, 1),
            "candidate": {"kind": self.kind, "anchor": self.anchor},
            "mobius": self.curve.to_json(),
            "monotonicity": {1: "increasing", -1: "decreasing", 0: "constant"}[self.direction],
            "lo_value": exact_json(self.lo_value),
            "hi_value": exact_json(self.hi_value),
        }


def _boundary_json(b: Boundary, side: int):
    if b is None:
        return "-inf" if side < 0 else "inf"
    if isinstance(b, RootDescriptor):
        return {
            "root_of": [rat_str(b.A), rat_str(b.B), rat_str(b.C)],
            "index": b.index,
            "isolating_interval": [rat_str(b.lo), rat_str(b.hi)],
            "exact": exact_json(b.value),
        }
    return rat_str(b)


def _envelope(curves, lo: Boundary, hi: Boundary) -> list[tuple]:
    """Upper envelope of linear-fractional curves on the open interval (lo, hi)."""
    ends = []
    for key, c in curves:
        u, v = _end_value(c, lo, -1), _end_value(c, hi, 1)
        ends.append((u, v) if compare(u, v) <= 0 else (v, u))
    floor = ends[0][0]
    for e in ends[1:]:
        if compare(e[0], floor) > 0:
            floor = e[0]
    live = [kc for kc, e in zip(curves, ends) if compare(e[1], floor) >= 0]
    if len(live) == 1:
        return [(lo, hi, live[0][0], live[0][1])]

    roots = []
    for (_, c1), (_, c2) in combinations(live, 2):
        coeffs = c1.crossing_poly(c2)
        if not any(coeffs):
            continue
        for root in isolate_roots(*coeffs):
            x = _exact(root)
            if _cmp_boundary(x, lo, -1) > 0 and _cmp_boundary(x, hi, 1) < 0:
                roots.append((x, root))
    ordered = []
    for x, root in sorted(roots, key=lambda xr: float(xr[0])):
        ordered.append((x, root))
    # float ordering is only a hint; fix it exactly
    for i in range(1, len(ordered)):
        j = i
        while j > 0 and compare(ordered[j - 1][0], ordered[j][0]) > 0:
            ordered[j - 1], ordered[j] = ordered[j], ordered[j - 1]
            j -= 1
    cuts = []
    for x, root in ordered:
        if cuts and compare(cuts[-1][0], x) == 0:
            continue
        cuts.append((x, root))

    bounds = [lo, *(r for _, r in cuts), hi]
    pieces = []
    for u, v in zip(bounds, bounds[1:]):
        s = rational_between(u, v)
        best_key, best_curve, best_val = None, None, None
        for key, c in live:
            val = c(s)
            if best_val is None or val > best_val or (val == best_val and key < best_key):
                best_key, best_curve, best_val = key, c, val
        if pieces and pieces[-1][2] == best_key:
            pieces[-1] = (pieces[-1][0], v, best_key, best_curve)
        else:
            pieces.append((u, v, best_key, best_curve))
    return pieces


@dataclass
class PiecewiseMax:
    """Mf as alternating segments and points: seg_0, pt_0, seg_1, ..., seg_n."""

    f: StepFunction
    segments: list
    points: list  # [(abscissa boundary, value)], points[i] sits between segments i and i+1
    limits: tuple

    def nodes(self):
        for i, s in enumerate(self.segments):
            yield ("seg", i, s)
            if i < len(self.points):
                yield ("pt", i, self.points[i])

    def value_at(self, x):
        """Mf at a rational (or quadratic) abscissa."""
        for i, (b, v) in enumerate(self.points):
            if compare(x, _exact(b)) == 0:
                return v
        for s in self.segments:
            if s.contains(x):
                return simplify(s.curve(x))
        raise AssertionError("abscissa not covered")

    def one_sided(self, x, side: str):
        x = rat(x)
        for i, (b, v) in enumerate(self.points):
            if compare(x, _exact(b)) == 0:
                seg = self.segments[i] if side == "left" else self.segments[i + 1]
                return seg.hi_value if side == "left" else seg.lo_value
        for s in self.segments:
            if s.contains(x):
                return simplify(s.curve(x))
        raise AssertionError("abscissa not covered")

    def contributions(self) -> list:
        """Variation carried by each node, in node order."""
        out = []
        for kind, i, obj in self.nodes():
            if kind == "seg":
                diff = SurdSum.of(obj.hi_value) - SurdSum.of(obj.lo_value)
                out.append(diff * obj.direction)
            else:
                _, v = obj
                left = self.segments[i].hi_value
                right = self.segments[i + 1].lo_value
                out.append(abs(SurdSum.of(left) - SurdSum.of(v)) + abs(SurdSum.of(v) - SurdSum.of(right)))
        return out

    def variation(self):
        total = SurdSum()
        for c in self.contributions():
            total = total + c
        return total.simplify()

    def to_json(self) -> dict:
        return {
            "segments": [s.to_json() for s in self.segments],
            "points": [{"x": _boundary_json(b, 0), "value": exact_json(v)} for b, v in self.points],
            "limits": [exact_json(v) for v in self.limits],
        }


def build_piecewise(f: StepFunction, max_pieces: int = MAX_PIECES) -> PiecewiseMax:
    """Exact upper envelope of the candidate curves, i.e. Mf on all of R."""
    g = normalize(abs_of(f))
    if g.K > max_pieces:
        raise ValueError(f"{g.K} pieces exceeds the cap of {max_pieces}")
    P = _Profile(g)
    lim = ((P.a + P.b) * HALF, (P.a + P.b) * HALF)
    lim = (max(P.a, lim[0]), max(P.b, lim[1]))
    if g.K == 0 and g.a == g.b:
        c = Mobius.constant(g.a)
        seg = Segment(None, None, _key(GLOBAL, 0, 0), c, 0, g.a, g.a)
        return PiecewiseMax(g, [seg], [], lim)

    t = P.t
    structural = sorted({(u + v) / 2 for u in t for v in t})
    bounds = [None, *structural, None]
    raw = []
    for u, v in zip(bounds, bounds[1:]):
        sample = rational_between(u, v)
        raw.extend(_envelope(_segment_curves(P, sample), u, v))

    segments, points = [], []
    for idx, (u, v, key, curve) in enumerate(raw):
        seg = Segment(u, v, key, curve, curve.direction(), _end_value(curve, u, -1), _end_value(curve, v, 1))
        segments.append(seg)
        if idx + 1 < len(raw):
            if isinstance(v, RootDescriptor) and not v.is_point:
                value = _end_value(curve, v, 1)
            else:
                x = _exact(v)
                value = P.centered(x.p if isinstance(x, QuadraticValue) else x)
            points.append((v, value))
    return PiecewiseMax(g, segments, points, lim)


def m_one_sided(f: StepFunction, x, side: str, pm: PiecewiseMax | None = None):
    """Mf(x-) or Mf(x+), read off the envelope segment adjacent to x."""
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    pm = pm or build_piecewise(f)
    return pm.one_sided(x, side)


def var_of_m(f: StepFunction, pm: PiecewiseMax | None = None):
    """Exact Var(Mf): a rational, or a SurdSum when irrational extrema contribute."""
    pm = pm or build_piecewise(f)
    return pm.variation()


# ------------------------------------------------------ extrema, lemmas


@dataclass(frozen=True)
class Extremum:
    kind: str  # "max" or "min"
    value: object
    first: int  # node positions (index into list(pm.nodes())) of the run
    last: int
    lo: Boundary  # the run covers (lo, hi) or [lo, hi] per the closed flags
    hi: Boundary
    lo_closed: bool
    hi_closed: bool

    def contains(self, x) -> bool:
        cl = _cmp_boundary(x, self.lo, -1)
        ch = _cmp_boundary(x, self.hi, 1)
        return (cl > 0 or (cl == 0 and self.lo_closed)) and (ch < 0 or (ch == 0 and self.hi_closed))


def _node_value(node):
    kind, _, obj = node
    if kind == "pt":
        return obj[1]
    return obj.lo_value if obj.direction == 0 else None


def local_extrema(pm: PiecewiseMax) -> list[Extremum]:
    """Local maxima and minima of Mf in the sense of the max-def (plateaus count once)."""
    nodes = list(pm.nodes())
    out = []
    i = 0
    while i < len(nodes):
        M = _node_value(nodes[i])
        if M is None:
            i += 1
            continue
        j = i
        while j + 1 < len(nodes):
            w = _node_value(nodes[j + 1])
            if w is None or compare(w, M) != 0:
                break
            j += 1
        if i > 0 and j < len(nodes) - 1:
            left, right = nodes[i - 1], nodes[j + 1]
            if left[0] == "pt":
                L, ldir = left[2][1], 0
            else:
                L, ldir = left[2].hi_value, left[2].direction
            if right[0] == "pt":
                R, rdir = right[2][1], 0
            else:
                R, rdir = right[2].lo_value, right[2].direction
            cl, cr = compare(L, M), compare(R, M)
            is_max = (cl < 0 or (cl == 0 and ldir > 0)) and (cr < 0 or (cr == 0 and rdir < 0))
            is_min = (cl > 0 or (cl == 0 and ldir < 0)) and (cr > 0 or (cr == 0 and rdir > 0))
            if is_max or is_min:
                first, last = nodes[i], nodes[j]
                lo = first[2][0] if first[0] == "pt" else first[2].lo
                hi = last[2][0] if last[0] == "pt" else last[2].hi
                out.append(Extremum("max" if is_max else "min", M, i, j, lo, hi,
                                    first[0] == "pt", last[0] == "pt"))
        i = j + 1
    return out


@dataclass(frozen=True)
class Representative:
    x: Rational
    k_left: int  # k': window starts at t_{k'-1}
    k_right: int  # k'': window ends at t_{k''}
    window: tuple
    value: Rational

    def to_json(self) -> dict:
        return {
            "x": rat_str(self.x),
            "k_left": self.k_left,
            "k_right": self.k_right,
            "window": [rat_str(w) for w in self.window],
            "value": rat_str(self.value),
        }


def _require_class(f: StepFunction) -> StepFunction:
    g = normalize(abs_of(f))
    if not is_alternating(g):
        raise ClassViolation("adjacent pieces must alternate between zero and nonzero values")
    return g


def representatives(f: StepFunction, pm: PiecewiseMax | None = None, check_class: bool = True) -> list[Representative]:
    """Anchored representatives x_* = (t_{k'-1} + t_{k''}) / 2 of the local maxima of Mf."""
    g = _require_class(f) if check_class else normalize(abs_of(f))
    pm = pm or build_piecewise(g)
    P = _Profile(g)
    t = P.t
    out = []
    for ext in local_extrema(pm):
        if ext.kind != "max":
            continue
        best = None
        for i, j in combinations(range(len(t)), 2):
            c = (t[i] + t[j]) / 2
            if not ext.contains(c):
                continue
            avg = (P.Ht[j] - P.Ht[i]) / (t[j] - t[i])
            if compare(avg, ext.value) != 0 or P.centered(c) != avg:
                continue
            cand = (t[j] - t[i], c, i, j)
            if best is None or cand < best:
                best = cand
        if best is None:
            raise LookupError(f"no anchored window attains the local maximum {ext.value}")
        _, c, i, j = best
        out.append(Representative(c, i + 1, j, (t[i], t[j]), (P.Ht[j] - P.Ht[i]) / (t[j] - t[i])))
    return out


def _var_upto(pm: PiecewiseMax, contrib: list, nodes: list, pos):
    """Var of Mf over (-inf, pos]; pos is (node index, abscissa)."""
    k, x = pos
    total = SurdSum()
    for c in contrib[:k]:
        total = total + c
    kind, i, obj = nodes[k]
    if kind == "pt":
        L = pm.segments[i].hi_value
        return total + abs(SurdSum.of(L) - SurdSum.of(obj[1]))
    return total + abs(SurdSum.of(simplify(obj.curve(x))) - SurdSum.of(obj.lo_value))


def _locate(pm: PiecewiseMax, nodes: list, x):
    for k, (kind, i, obj) in enumerate(nodes):
        if kind == "pt" and compare(x, _exact(obj[0])) == 0:
            return (k, x)
        if kind == "seg" and obj.contains(x):
            return (k, x)
    raise AssertionError("abscissa not covered")


def _minimum_between(pm: PiecewiseMax, nodes: list, extrema: list, x_lo, x_hi):
    """Leftmost abscissa attaining the minimum of Mf over [x_lo, x_hi], with its value."""
    best = None
    for ext in extrema:
        if ext.kind != "min":
            continue
        kind, i, obj = nodes[ext.first]
        if kind == "pt":
            y = _exact(obj[0])
        else:
            y = rational_between(obj.lo, obj.hi)
        if compare(y, x_lo) <= 0 or compare(y, x_hi) >= 0:
            continue
        if best is None or compare(ext.value, best[1]) < 0:
            best = (y, ext.value)
    return best


def t_value(interval, x):
    """T_I(x) = |I| / |J_I(x)|, J_I(x) the smallest interval containing I centered at x."""
    lo, hi = rat(interval[0]), rat(interval[1])
    if hi <= lo:
        raise ValueError("interval must have positive length")
    left, right = x - lo, hi - x
    half = left if compare(left, right) >= 0 else right
    return simplify((hi - lo) / (2 * half) if not isinstance(half, QuadraticValue) else QuadraticValue.of(hi - lo) / (2 * half))


def var_t_over(interval, x_lo=None, x_hi=None):
    """Variation of T_I over [x_lo, x_hi]; None stands for an infinite end."""
    lo, hi = rat(interval[0]), rat(interval[1])
    c = (lo + hi) / 2
    ta = ZERO if x_lo is None else t_value(interval, x_lo)
    tb = ZERO if x_hi is None else t_value(interval, x_hi)
    before = x_lo is None or compare(x_lo, c) <= 0
    after = x_hi is None or compare(x_hi, c) >= 0
    if before and after:
        return _qsub(_qsub(mpq(2), ta), tb)
    return _qabs(_qsub(ta, tb))


def _qsub(x, y):
    if isinstance(x, QuadraticValue) or isinstance(y, QuadraticValue):
        return simplify(QuadraticValue.of(x) - QuadraticValue.of(y))
    return x - y


def _qabs(x):
    return abs(x)


@dataclass
class AuditLine:
    label: str
    lhs: object
    rhs: object
    holds: bool

    def to_json(self) -> dict:
        return {"label": self.label, "lhs": exact_json(self.lhs), "rhs": exact_json(self.rhs), "holds": self.holds}


@dataclass
class AuditReport:
    name: str
    lines: list
    representatives: list
    minima: list

    @property
    def holds(self) -> bool:
        return all(line.holds for line in self.lines)

    def to_json(self) -> dict:
        return {
            "audit": self.name,
            "holds": self.holds,
            "representatives": [r.to_json() for r in self.representatives],
            "minima": [{"x": exact_json(y), "value": exact_json(v)} for y, v in self.minima],
            "lines": [line.to_json() for line in self.lines],
        }


def _structure(f: StepFunction):
    g = _require_class(f)
    pm = build_piecewise(g)
    reps = representatives(g, pm)
    nodes = list(pm.nodes())
    extrema = local_extrema(pm)
    minima = []
    for r1, r2 in zip(reps, reps[1:]):
        found = _minimum_between(pm, nodes, extrema, r1.x, r2.x)
        if found is None:
            raise AssertionError("no local minimum between consecutive representatives")
        minima.append(found)
    return g, pm, reps, nodes, minima


def _t_sum(g: StepFunction, x_lo, x_hi, skip_first: bool):
    total = ZERO
    t = g.breakpoints
    for k, alpha in enumerate(g.values):
        if k == 0 and skip_first or alpha == 0:
            continue
        total = _qadd(total, _qmul(alpha, var_t_over((t[k], t[k + 1]), x_lo, x_hi)))
    return total


def _qadd(x, y):
    if isinstance(x, QuadraticValue) or isinstance(y, QuadraticValue):
        return simplify(QuadraticValue.of(x) + QuadraticValue.of(y))
    return x + y


def _qmul(c, y):
    if isinstance(y, QuadraticValue):
        return simplify(y * c)
    return c * y


def lemma3_audit(f: StepFunction) -> AuditReport:
    """Check the local envelope bounds by the tent curves T_{I_k} at representatives and minima."""
    g, pm, reps, nodes, minima = _structure(f)
    skip = bool(g.values) and g.values[0] <= g.a
    lines = []
    for variant in ((False, True) if skip else (False,)):
        tag = " (first summand omitted)" if variant else ""
        if reps:
            x1, xN = reps[0], reps[-1]
            rhs = _t_sum(g, None, x1.x, variant)
            lines.append(AuditLine(f"Mf(x_1) <= sum alpha_k Var_(-inf,x_1] T{tag}", x1.value, rhs, compare(x1.value, rhs) <= 0))
            rhs = _t_sum(g, xN.x, None, variant)
            lines.append(AuditLine(f"Mf(x_N) <= sum alpha_k Var_[x_N,inf) T{tag}", xN.value, rhs, compare(xN.value, rhs) <= 0))
        for n, ((y, my), r1, r2) in enumerate(zip(minima, reps, reps[1:]), start=2):
            lhs = _qsub(r1.value, my)
            rhs = _t_sum(g, r1.x, y, variant)
            lines.append(AuditLine(f"Mf(x_{n - 1}) - Mf(y_{n}) <= sum alpha_k Var T{tag}", lhs, rhs, compare(lhs, rhs) <= 0))
            lhs = _qsub(r2.value, my)
            rhs = _t_sum(g, y, r2.x, variant)
            lines.append(AuditLine(f"Mf(x_{n}) - Mf(y_{n}) <= sum alpha_k Var T{tag}", lhs, rhs, compare(lhs, rhs) <= 0))
    return AuditReport("lemma3", lines, reps, minima)


def var_split_audit(f: StepFunction) -> AuditReport:
    """Check Var(Mf) against its split at representatives and the minima between them."""
    g, pm, reps, nodes, minima = _structure(f)
    total = SurdSum.of(pm.variation())
    lines = []
    if reps:
        contrib = pm.contributions()
        head = _var_upto(pm, contrib, nodes, _locate(pm, nodes, reps[0].x))
        tail = total - _var_upto(pm, contrib, nodes, _locate(pm, nodes, reps[-1].x))
        middle = SurdSum()
        for (y, my), r1, r2 in zip(minima, reps, reps[1:]):
            middle = middle + SurdSum.of(r1.value) + SurdSum.of(r2.value) - SurdSum.of(my) * 2
        rhs = head + middle + tail
        lines.append(AuditLine("Var(Mf) = Var_(-inf,x_1] + sum(Mf(x_{n-1}) - 2Mf(y_n) + Mf(x_n)) + Var_[x_N,inf)",
                               total.simplify(), rhs.simplify(), total == rhs))
    return AuditReport("var_split", lines, reps, minima)
