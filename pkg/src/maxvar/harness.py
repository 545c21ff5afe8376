"""Inequality checks, seeded searches with shrinking, and the worked examples."""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cmp_to_key

from . import continuous, discrete
from .exact import HALF, SurdSum, UndecidedSign, exact_json, exact_text, mpq, rat, rat_str
from .functions import (
    BVSequence,
    ClassViolation,
    Instance,
    StepFunction,
    abs_of,
    is_alternating,
    normalize,
    to_dict,
    total_var,
)
from .transference import extend

CLASSES = ("alternating", "general", "plateau")
DOMAINS = ("discrete", "continuous")


def _domain(inst: Instance) -> str:
    return "discrete" if isinstance(inst, BVSequence) else "continuous"


@dataclass
class CheckReport:
    """Var(Mf) against Var(f) - |(|a| - |b|)| / 2 for one instance."""

    instance: Instance
    lhs: object
    rhs: object
    margin: object
    verdict: str  # holds | violated | undecided-enclosure
    mode: str  # exact | certified
    statement: str = "conjecture"

    @property
    def tight(self) -> bool:
        return self.verdict == "holds" and self.margin == 0

    def text(self) -> str:
        tag = {"holds": "HOLDS", "violated": "VIOLATED", "undecided-enclosure": "UNDECIDED"}[self.verdict]
        if self.tight:
            tag += "(tight)"
        return f"lhs={exact_text(self.lhs)} rhs={exact_text(self.rhs)} margin={exact_text(self.margin)} {tag}"

    def to_json(self) -> dict:
        return {
            "instance": to_dict(self.instance),
            "domain": _domain(self.instance),
            "statement": self.statement,
            "lhs": exact_json(self.lhs),
            "rhs": exact_json(self.rhs),
            "margin": exact_json(self.margin),
            "verdict": self.verdict,
            "tight": self.tight,
            "mode": self.mode,
        }


def _lhs(inst: Instance):
    if isinstance(inst, BVSequence):
        return discrete.var_of_m_discrete(inst)
    return continuous.var_of_m(inst)


def _report(inst: Instance, statement: str) -> CheckReport:
    lhs = _lhs(inst)
    rhs = total_var(inst) - abs(abs(inst.a) - abs(inst.b)) * HALF
    margin = (SurdSum.of(rhs) - SurdSum.of(lhs)).simplify()
    mode = "certified" if isinstance(margin, SurdSum) else "exact"
    try:
        s = margin.sign() if isinstance(margin, SurdSum) else (margin > 0) - (margin < 0)
        verdict = "violated" if s < 0 else "holds"
    except UndecidedSign:
        verdict = "undecided-enclosure"
    return CheckReport(inst, lhs, rhs, margin, verdict, mode, statement)


def check_theorem1(inst: Instance) -> CheckReport:
    """The strengthened inequality on the alternating class, where it is a theorem."""
    if not is_alternating(abs_of(inst)):
        raise ClassViolation(
            "adjacent pieces must satisfy alpha_k * alpha_(k+1) = 0; use check_conjecture for general instances"
        )
    return _report(inst, "theorem1")


def check_conjecture(inst: Instance) -> CheckReport:
    """The strengthened inequality for any simple instance."""
    return _report(inst, "conjecture")


# ------------------------------------------------------------------ search


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    count: int = 100
    cls: str = "alternating"
    domain: str = "discrete"
    k_min: int = 0
    k_max: int = 12
    value_bound: int = 16
    breakpoint_bound: int = 4
    shrink: bool = True
    near_ratio: object = mpq(1, 10**6)
    keep: int = 5
    workers: int = 1

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise ValueError(f"class must be one of {CLASSES}")
        if self.domain not in DOMAINS:
            raise ValueError(f"domain must be one of {DOMAINS}")
        if not 0 <= self.k_min <= self.k_max:
            raise ValueError("need 0 <= k_min <= k_max")
        if self.count < 0 or self.value_bound < 1 or self.breakpoint_bound < 1:
            raise ValueError("count must be nonnegative, bounds positive")

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "class": self.cls,
            "domain": self.domain,
            "k_range": [self.k_min, self.k_max],
            "value_bound": self.value_bound,
            "breakpoint_bound": self.breakpoint_bound,
            "shrink": self.shrink,
            "near_ratio": rat_str(rat(self.near_ratio)),
        }


def _value(rng: random.Random, bound: int, signed: bool = False):
    v = mpq(rng.randint(0, bound), rng.randint(1, 4))
    return -v if signed and rng.random() < 0.25 else v


def _piece_values(rng: random.Random, cfg: SearchConfig, K: int) -> tuple[list, object, object]:
    vb = cfg.value_bound
    if cfg.cls == "alternating":
        phase = rng.randint(0, 1)
        vals = [_value(rng, vb, True) if (k + phase) % 2 == 0 else mpq(0) for k in range(K)]
        return vals, _value(rng, vb), _value(rng, vb)
    if cfg.cls == "general":
        return [_value(rng, vb, True) for _ in range(K)], _value(rng, vb, True), _value(rng, vb, True)
    # bump-on-plateau: a high plateau carrying small bumps
    plateau = mpq(rng.randint(vb // 2, vb) * 4 + 1, 4)
    bumps = [plateau + _value(rng, 2) if rng.random() < 0.5 else plateau for _ in range(K)]
    return bumps, _value(rng, 1), _value(rng, 1)


def generate(cfg: SearchConfig, index: int) -> Instance:
    """The index-th instance of the stream; independent of every other index."""
    rng = random.Random(f"{cfg.seed}:{cfg.cls}:{cfg.domain}:{index}")
    K = rng.randint(cfg.k_min, cfg.k_max)
    vals, a, b = _piece_values(rng, cfg, K)
    if cfg.domain == "discrete":
        core = []
        for v in vals:
            core.extend([v] * rng.randint(1, cfg.breakpoint_bound))
        return BVSequence(rng.randint(-cfg.breakpoint_bound, cfg.breakpoint_bound), tuple(core), a, b)
    quarter = mpq(1, 4)
    t = [rng.randint(-cfg.breakpoint_bound, cfg.breakpoint_bound) + quarter * rng.randint(-1, 1)]
    for _ in range(K):
        t.append(t[-1] + rng.randint(1, cfg.breakpoint_bound) + quarter * rng.randint(-1, 1))
    return StepFunction(tuple(t), tuple(vals), a, b)


def _check(cfg: SearchConfig, inst: Instance) -> CheckReport:
    return check_theorem1(inst) if cfg.cls == "alternating" else check_conjecture(inst)


def _interesting(rep: CheckReport, near_ratio) -> bool:
    if rep.verdict != "holds":
        return True
    if rep.margin == 0:
        return False
    return SurdSum.of(rep.margin) < SurdSum.of(total_var(rep.instance) * rat(near_ratio))


def _shrink_steps(inst: Instance):
    """Strictly simpler neighbours: fewer pieces, or integer values / breakpoints."""
    if isinstance(inst, BVSequence):
        core = list(inst.core)
        for i in range(len(core)):
            yield BVSequence(inst.offset, tuple(core[:i] + core[i + 1 :]), inst.a, inst.b)
        for i, v in enumerate(core):
            if v.denominator != 1:
                yield BVSequence(inst.offset, tuple(core[:i] + [mpq(round(v))] + core[i + 1 :]), inst.a, inst.b)
        for name in ("a", "b"):
            v = getattr(inst, name)
            if v.denominator != 1:
                yield replace(inst, **{name: mpq(round(v))})
        return
    t, vals = list(inst.breakpoints), list(inst.values)
    for i in range(len(vals)):
        # drop piece i by merging its interval into a neighbour
        yield StepFunction(tuple(t[: i + 1] + t[i + 2 :]), tuple(vals[:i] + vals[i + 1 :]), inst.a, inst.b)
    for i, v in enumerate(vals):
        if v.denominator != 1:
            yield StepFunction(tuple(t), tuple(vals[:i] + [mpq(round(v))] + vals[i + 1 :]), inst.a, inst.b)
    for i, x in enumerate(t):
        if x.denominator != 1:
            snapped = t[:i] + [mpq(round(x))] + t[i + 1 :]
            if all(u < v for u, v in zip(snapped, snapped[1:])):
                yield StepFunction(tuple(snapped), tuple(vals), inst.a, inst.b)
    for name in ("a", "b"):
        v = getattr(inst, name)
        if v.denominator != 1:
            yield replace(inst, **{name: mpq(round(v))})


def shrink(cfg: SearchConfig, rep: CheckReport) -> CheckReport:
    """Greedy reduction preserving the violation / near-violation predicate."""
    current = rep
    progress = True
    while progress:
        progress = False
        for cand in _shrink_steps(current.instance):
            try:
                r = _check(cfg, cand)
            except ClassViolation:
                continue
            if _interesting(r, cfg.near_ratio) and (r.verdict != "holds") >= (current.verdict != "holds"):
                current, progress = r, True
                break
    return current


@dataclass
class SearchResult:
    config: SearchConfig
    checked: int
    violations: list = field(default_factory=list)
    near: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    tight: int = 0
    minimal: list = field(default_factory=list)  # (margin, index, report), smallest first
    reports: list = field(default_factory=list, repr=False)

    def summary(self) -> dict:
        return {
            "config": self.config.to_json(),
            "checked": self.checked,
            "violations": len(self.violations),
            "undecided": len(self.undecided),
            "near_violations": len(self.near),
            "tight": self.tight,
            "minimal_margin": [{"index": i, **r.to_json()} for _, i, r in self.minimal],
            "violating_instances": [{"index": i, **r.to_json()} for i, r in self.violations],
            "near_violating_instances": [{"index": i, **r.to_json()} for i, r in self.near],
            "undecided_instances": [{"index": i, **r.to_json()} for i, r in self.undecided],
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)

    def text(self) -> str:
        return f"{self.checked} checked, {len(self.violations)} violations"


def _run_one(args):
    cfg, index = args
    return _check(cfg, generate(cfg, index))


def search(cfg: SearchConfig, progress=None) -> SearchResult:
    """Check cfg.count generated instances; results are indexed by sequence number."""
    jobs = [(cfg, i) for i in range(cfg.count)]
    if cfg.workers > 1 and cfg.count > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            reports = list(pool.map(_run_one, jobs, chunksize=16))
    else:
        reports = []
        for job in jobs:
            reports.append(_run_one(job))
            if progress:
                progress(len(reports))
    res = SearchResult(cfg, len(reports), reports=reports)
    for i, r in enumerate(reports):
        if r.tight:
            res.tight += 1
        if r.verdict == "undecided-enclosure":
            res.undecided.append((i, r))
            continue
        if _interesting(r, cfg.near_ratio):
            r = shrink(cfg, r) if cfg.shrink else r
            (res.violations if r.verdict == "violated" else res.near).append((i, r))
        res.minimal.append((SurdSum.of(r.margin), i, r))
        res.minimal.sort(key=cmp_to_key(_by_margin))
        del res.minimal[cfg.keep :]
    return res


def _by_margin(x, y) -> int:
    if x[0] == y[0]:
        return x[1] - y[1]
    return -1 if x[0] < y[0] else 1


# ---------------------------------------------------------- worked examples


def g_family(a, b, N) -> StepFunction:
    """a on (-inf, -1), N on [-1, 1), b on [1, inf)."""
    return StepFunction((-1, 1), (rat(N),), rat(a), rat(b))


def G_family(a, b, N) -> BVSequence:
    """a on the negative integers, N at 0, b on the positive integers."""
    return BVSequence(0, (rat(N),), rat(a), rat(b))


def limitation_example(C=10**6) -> StepFunction:
    """1 on [-2,-1) and [1,2), plus the plateau C on [-2, 2)."""
    C = rat(C)
    return StepFunction((-2, -1, 1, 2), (C + 1, C, C + 1))


@dataclass
class ReproLine:
    section: str
    label: str
    expected: object
    got: object

    @property
    def ok(self) -> bool:
        return self.expected == self.got

    def text(self) -> str:
        mark = "ok" if self.ok else "MISMATCH"
        return f"[{mark}] {self.section}: {self.label}: expected {_show(self.expected)}, got {_show(self.got)}"

    def to_json(self) -> dict:
        return {"section": self.section, "label": self.label, "ok": self.ok,
                "expected": _jsonable(self.expected), "got": _jsonable(self.got)}


def _show(v) -> str:
    if isinstance(v, (tuple, list)):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    if isinstance(v, bool):
        return str(v)
    return exact_text(v)


def _jsonable(v):
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, bool):
        return v
    return exact_json(v)


@dataclass
class Reproduction:
    lines: list

    @property
    def ok(self) -> bool:
        return all(line.ok for line in self.lines)

    def to_json(self) -> dict:
        return {"ok": self.ok, "lines": [line.to_json() for line in self.lines]}


def reproduce_optimality(values=(0, "1/2", 1, 2), Ns=(2, 5, 17)) -> list:
    lines = []
    for N in Ns:
        for a in map(rat, values):
            for b in map(rat, values):
                if not N >= a >= b >= 0:
                    continue
                g = g_family(a, b, N)
                lines.append(ReproLine("g_N", f"Var(g_N) a={rat_str(a)} b={rat_str(b)} N={N}", 2 * N - a - b, total_var(g)))
                lines.append(ReproLine("g_N", f"Var(Mg_N) a={rat_str(a)} b={rat_str(b)} N={N}",
                                       2 * N - a - (a + b) * HALF, continuous.var_of_m(g)))
    return lines


def limitation_table(C=10**6) -> dict:
    """Local maxima (representatives) and minima of Mg for the plateau example."""
    g = limitation_example(C)
    pm = continuous.build_piecewise(g)
    reps = continuous.representatives(g, pm, check_class=False)
    nodes = list(pm.nodes())
    ext = continuous.local_extrema(pm)
    minima = [continuous._minimum_between(pm, nodes, ext, r1.x, r2.x) for r1, r2 in zip(reps, reps[1:])]
    return {
        "maxima": [(r.x, r.value) for r in reps],
        "minima": [(y, v) for y, v in minima],
        "var": continuous.var_of_m(g, pm),
    }


def reproduce_limitation(C=10**6) -> list:
    C = rat(C)
    table = limitation_table(C)
    sec = "plateau example"
    lines = [
        ReproLine(sec, "local maxima (x, Mg(x))",
                  ((mpq(-3, 2), C + 1), (mpq(0), C + HALF), (mpq(3, 2), C + 1)), tuple(table["maxima"])),
        ReproLine(sec, "local minima (x, Mg(x))",
                  ((mpq(-1, 2), C + mpq(1, 3)), (mpq(1, 2), C + mpq(1, 3))), tuple(table["minima"])),
        ReproLine(sec, "Var(Mg)", 2 * C + 4 - mpq(1, 3), table["var"]),
        ReproLine(sec, "Var(g)", 2 * C + 4, total_var(limitation_example(C))),
    ]
    return lines


def reproduce_lower_bounds(values=(0, 1, 2, 3), Ns=(1, 2, 5, 16)) -> list:
    """One-sided and uncentered floors on the three-level sequences, checked on a window."""
    lines = []
    for N in Ns:
        for a in map(rat, values):
            for b in map(rat, values):
                G = G_family(a, b, N)
                ns = range(-3 * N - 8, 3 * N + 9)
                one = discrete.m_discrete_values(G, ns, "one_sided")
                unc = discrete.m_discrete_values(G, ns, "uncentered")
                ok_one = all(m >= max(abs(G(n)), abs(b)) for n, m in zip(ns, one))
                ok_unc = all(m >= max(abs(G(n)), abs(a), abs(b)) for n, m in zip(ns, unc))
                tag = f"a={rat_str(a)} b={rat_str(b)} N={N}"
                lines.append(ReproLine("floors", f"one-sided >= max(G, b) {tag}", True, ok_one))
                lines.append(ReproLine("floors", f"uncentered >= max(G, a, b) {tag}", True, ok_unc))
    return lines


def reproduce_extension(values=(0, 1, 2), Ns=(1, 3, 8)) -> list:
    lines = []
    for N in Ns:
        for a in map(rat, values):
            for b in map(rat, values):
                G = G_family(a, b, N)
                P = continuous._profile(extend(G))
                ns = range(-2 * N - 4, 2 * N + 5)
                ok = all(P.centered(mpq(n)) == discrete.m_discrete_at(G, n) for n in ns)
                lines.append(ReproLine("extension", f"Mg(n) = MG(n) a={rat_str(a)} b={rat_str(b)} N={N}", True, ok))
    return lines


def reproduce_paper(C=10**6) -> Reproduction:
    return Reproduction(reproduce_optimality() + reproduce_limitation(C) + reproduce_lower_bounds() + reproduce_extension())


# ------------------------------------------------------- constant estimates


@dataclass
class ConstantEstimate:
    operator: str
    domain: str
    a: object
    b: object
    rows: list  # (N, Var f, Var Mf, ratio, margin)
    C_lower: object
    c_upper: object
    witness: Instance

    def to_json(self) -> dict:
        return {
            "operator": self.operator,
            "domain": self.domain,
            "a": rat_str(self.a),
            "b": rat_str(self.b),
            "C_lower_bound": rat_str(self.C_lower),
            "c_upper_bound": rat_str(self.c_upper),
            "witness": to_dict(self.witness),
            "rows": [
                {"N": N, "var_f": rat_str(v), "var_Mf": rat_str(m), "ratio": rat_str(r), "margin": rat_str(d)}
                for N, v, m, r, d in self.rows
            ],
        }


def estimate_constants(operator: str, domain: str, a, b, Ns) -> ConstantEstimate:
    """Var(M.)/Var(.) and Var(.) - Var(M.) along the three-level families."""
    if operator not in discrete.VARIANTS:
        raise ValueError(f"operator must be one of {discrete.VARIANTS}")
    if domain not in DOMAINS:
        raise ValueError(f"domain must be one of {DOMAINS}")
    if domain == "continuous" and operator != "centered":
        raise ValueError("continuous variation is implemented for the centered operator only")
    a, b = rat(a), rat(b)
    rows, witness = [], None
    for N in Ns:
        if domain == "continuous":
            f = g_family(a, b, N)
            vm = continuous.var_of_m(f)
        else:
            f = G_family(a, b, N)
            vm = discrete.var_of_m_discrete(f, operator)
        vf = total_var(f)
        if vf == 0:
            continue
        rows.append((N, vf, vm, vm / vf, vf - vm))
        witness = f
    if not rows:
        raise ValueError("no family member with positive variation")
    return ConstantEstimate(
        operator, domain, a, b, rows,
        C_lower=max(r[3] for r in rows),
        c_upper=min(r[4] for r in rows),
        witness=witness,
    )
