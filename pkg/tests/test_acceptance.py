"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import itertools
import random
import time

import pytest

from maxvar.continuous import build_piecewise, local_extrema, m_at, representatives, var_of_m
from maxvar.discrete import m_discrete_values, var_of_m_discrete
from maxvar.exact import SurdSum, compare, mpq
from maxvar.functions import BVSequence, StepFunction, normalize, total_var
from maxvar.harness import G_family, SearchConfig, g_family, generate, limitation_example, search
from maxvar.oracle import as_fraction, brute_var_discrete
from maxvar.transference import extend, sample, sampled_var, transfer_audit

C = 10**6


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return emit


def _random_step(rng, k_max=8, signed=True):
    K = rng.randint(0, k_max)
    t = [mpq(rng.randint(-16, 16), 4)]
    for _ in range(K):
        t.append(t[-1] + mpq(rng.randint(1, 12), 4))

    def val():
        v = mpq(rng.randint(0, 16), rng.randint(1, 4))
        return -v if signed and rng.random() < 0.25 else v

    return StepFunction(tuple(t), tuple(val() for _ in range(K)), val(), val())


def _random_seq(rng, max_len=8):
    def val():
        return mpq(rng.randint(0, 16), rng.randint(1, 4))

    core = tuple(val() for _ in range(rng.randint(0, max_len)))
    return BVSequence(rng.randint(-6, 6), core, val(), val())


def test_criterion_1_optimality_family(report):
    start = time.perf_counter()
    values = [mpq(0), mpq(1, 2), mpq(1), mpq(2)]
    bad = []
    for a, b, N in itertools.product(values, values, (2, 5, 17)):
        if not N >= a >= b >= 0:
            continue
        g = g_family(a, b, N)
        if total_var(g) != 2 * N - a - b or var_of_m(g) != 2 * N - a - (a + b) / 2:
            bad.append((a, b, N))
    elapsed = time.perf_counter() - start
    report(1, not bad and elapsed < 1, f"{len(bad)} mismatches, {elapsed:.2f}s")


def test_criterion_2_limitation_example(report):
    start = time.perf_counter()
    g = limitation_example(C)
    pm = build_piecewise(g)
    ext = local_extrema(pm)
    maxima = [e.value for e in ext if e.kind == "max"]
    minima = [(e.value, e.contains(mpq(s, 2))) for e, s in zip([e for e in ext if e.kind == "min"], (-1, 1))]
    reps = [r.x for r in representatives(g, pm, check_class=False)]
    ok = (
        maxima == [C + 1, C + mpq(1, 2), C + 1]
        and reps == [mpq(-3, 2), 0, mpq(3, 2)]
        and minima == [(C + mpq(1, 3), True)] * 2
        and var_of_m(g, pm) == 2 * C + 4 - mpq(1, 3)
    )
    elapsed = time.perf_counter() - start
    report(2, ok and elapsed < 1, f"Var(Mg) = {var_of_m(g, pm)}, {elapsed:.2f}s")


@pytest.mark.slow
@pytest.mark.parametrize("domain", ["discrete", "continuous"])
def test_criterion_3_theorem1_suite(report, domain):
    start = time.perf_counter()
    cfg = SearchConfig(seed=20240601, count=10**4, cls="alternating", domain=domain, k_max=12, value_bound=16)
    res = search(cfg)
    elapsed = time.perf_counter() - start
    ok = res.checked == 10**4 and not res.violations and not res.undecided and elapsed < 600
    report(3, ok, f"{domain}: {res.text()}, {len(res.undecided)} undecided, {elapsed:.0f}s")


def _exhaustive_sequences():
    seen = set()
    digits = [mpq(v) for v in range(4)]
    for L in range(7):
        for core in itertools.product(digits, repeat=L):
            for a, b in itertools.product(digits, repeat=2):
                H = normalize(BVSequence(0, core, a, b))
                key = (H.core, H.a, H.b)
                if key not in seen:
                    seen.add(key)
                    yield H


@pytest.mark.slow
def test_criterion_4_discrete_oracle(report):
    start = time.perf_counter()
    rng = random.Random(4)
    corpus = list(_exhaustive_sequences())
    exhaustive = len(corpus)
    corpus += [_random_seq(rng) for _ in range(10**3)]
    bad = [G for G in corpus if brute_var_discrete(G) != as_fraction(var_of_m_discrete(G))]
    elapsed = time.perf_counter() - start
    report(4, not bad and elapsed < 600, f"{exhaustive} exhaustive + 1000 random, {len(bad)} mismatches, {elapsed:.0f}s")


def test_criterion_5_transference(report):
    start = time.perf_counter()
    rng = random.Random(5)
    failures = 0
    for _ in range(10**3):
        G = _random_seq(rng)
        span = max(G.end - G.start + 1, 1)
        ns = list(range(G.start - 2 * span, G.end + 2 * span + 1))
        g = extend(G)
        discrete = m_discrete_values(G, ns)
        failures += sum(m_at(g, n) != v for n, v in zip(ns, discrete))
    for i in range(10**2):
        g = _random_step(rng, k_max=6)
        for N in range(1, 5):
            pair = sample(g, N)
            if max(total_var(pair.G), total_var(pair.G_abs)) > total_var(g):
                failures += 1
            rep = transfer_audit(g, min(N, 2), N)
            failures += len(rep.pointwise_failures)
    elapsed = time.perf_counter() - start
    report(5, failures == 0 and elapsed < 300, f"{failures} failures, {elapsed:.0f}s")


def test_criterion_6_limit_law(report):
    rng = random.Random(6)
    failures = checked = 0
    for _ in range(10**3):
        f = _random_step(rng)
        pm = build_piecewise(f)
        for x in f.breakpoints:
            left, right = pm.one_sided(x, "left"), pm.one_sided(x, "right")
            low = left if compare(left, right) <= 0 else right
            checked += 1
            failures += compare(low, m_at(f, x)) != 0
    report(6, failures == 0, f"{checked} breakpoints, {failures} failures")


def test_criterion_7_constant_estimates(report):
    bad = []
    for N in range(2, 65):
        g = g_family(1, 0, N)
        v, vm = total_var(g), var_of_m(g)
        if not (vm / v > 1 - mpq(2, N) and v - vm == mpq(1, 2)):
            bad.append(("centered", N))
    for a, b in [(0, 1), (1, 0), (1, 2), (2, 1), (0, 3), (3, 0), (1, 1)]:
        G = G_family(a, b, 64)
        if total_var(G) - var_of_m_discrete(G, "one_sided") != max(0, b - a):
            bad.append(("one_sided", a, b))
        if total_var(G) - var_of_m_discrete(G, "uncentered") != abs(b - a):
            bad.append(("uncentered", a, b))
    report(7, not bad, f"mismatches: {bad}")


def _grid_corpus():
    cfg = SearchConfig(seed=8, count=50, cls="general", domain="continuous", k_max=12)
    return [generate(cfg, i) for i in range(50)]


def test_criterion_8_grid_monotone_and_bounded(report):
    bad = 0
    for f in _grid_corpus():
        exact = SurdSum.of(var_of_m(f))
        vals = [sampled_var(f, r) for r in range(7)]
        bad += any(x > y for x, y in zip(vals, vals[1:])) or SurdSum.of(vals[-1]) > exact
    report(8, bad == 0, f"{bad} of 50 instances non-monotone or above Var(Mf)")


def test_criterion_8_gap_at_resolution_6(report):
    worst, over = mpq(0), 0
    for f in _grid_corpus():
        gap = SurdSum.of(var_of_m(f)) - SurdSum.of(sampled_var(f, 6))
        bound = (1 + total_var(f)) / mpq(2**10)
        lo, _ = gap.enclosure(64)
        if (gap - SurdSum.of(bound)).sign() >= 0:
            over += 1
        worst = max(worst, lo / bound)
    report(8, over == 0, f"gap >= 2^-10 (1 + Var f) on {over} of 50 instances, worst ratio {float(worst):.1f}")
