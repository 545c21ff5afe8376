import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxvar.continuous import (
    build_piecewise,
    candidate_curves,
    lemma3_audit,
    local_extrema,
    m_at,
    m_limit,
    m_one_sided,
    m_restricted_at,
    representatives,
    t_value,
    var_of_m,
    var_split_audit,
    var_t_over,
)
from maxvar.exact import SurdSum, compare, mpq
from maxvar.functions import (
    ClassViolation,
    StepFunction,
    abs_of,
    indicator,
    normalize,
    one_sided_value,
    reflect,
    total_var,
    var_over,
)
from maxvar.harness import g_family, limitation_example

from conftest import rationals, step_functions

IND = indicator(-1, 1)
C = 10**6


def _le(x, y):
    return (SurdSum.of(y) - SurdSum.of(x)).sign() >= 0


def test_pointwise_examples():
    assert m_at(IND, 0) == 1
    assert m_at(IND, 2) == mpq(1, 3)
    assert m_at(IND, 1) == mpq(1, 2)


def test_one_sided_examples():
    assert m_one_sided(IND, 1, "left") == 1
    assert m_one_sided(IND, 1, "right") == mpq(1, 2)
    with pytest.raises(ValueError):
        m_one_sided(IND, 1, "up")


def test_limits():
    f = g_family(1, 0, 5)
    assert m_limit(f, -1) == 1
    assert m_limit(f, 1) == mpq(1, 2)
    assert m_limit(StepFunction((0,), (), 3, 3), 1) == 3


def test_candidate_curve_counts():
    curves = candidate_curves(g_family(1, 0, 5))
    assert len([c for c in curves if c.kind in ("left", "right")]) == 4
    assert len([c for c in curves if c.kind not in ("left", "right")]) == 2
    const = candidate_curves(StepFunction((0,), (), 2, 2))
    assert all(c.kind not in ("left", "right") for c in const)
    assert max(c(mpq(5)) for c in const if c(mpq(5)) is not None) == 2


def test_left_anchor_of_the_indicator():
    (left,) = [c for c in candidate_curves(IND) if c.kind == "left" and c(mpq(2)) is not None and c.anchor == 0]
    assert left(mpq(2)) == mpq(1, 3)


@given(step_functions(signed=True), rationals(30, 8, signed=True))
def test_candidate_max_equals_pointwise_value(f, x):
    vals = [v for v in (c(x) for c in candidate_curves(f)) if v is not None]
    assert max(vals) == m_at(f, x)


def test_indicator_envelope():
    pm = build_piecewise(IND)
    for x in (mpq(-1, 2), 0, mpq(3, 4)):
        assert pm.value_at(x) == 1
    for x in (2, -2, 7):
        assert pm.value_at(mpq(x)) == mpq(2, 2 * abs(x) + 2)
    assert pm.value_at(mpq(1)) == pm.value_at(mpq(-1)) == mpq(1, 2)
    assert var_of_m(IND) == 2


def test_constant_envelope():
    f = StepFunction((0,), (), 4, 4)
    pm = build_piecewise(f)
    assert len(pm.segments) == 1
    assert var_of_m(f) == 0
    assert representatives(f) == []
    assert lemma3_audit(f).holds and var_split_audit(f).holds


@given(step_functions(signed=True))
def test_envelope_matches_pointwise_probes(f):
    pm = build_piecewise(f)
    rng = random.Random(hash(tuple(f.breakpoints)))
    lo, hi = f.breakpoints[0] - 3, f.breakpoints[-1] + 3
    for _ in range(24):
        x = lo + (hi - lo) * mpq(rng.randint(0, 997), 997)
        assert compare(pm.value_at(x), m_at(f, x)) == 0


def test_g5_variation_and_representative():
    f = g_family(1, 0, 5)
    assert var_of_m(f) == mpq(17, 2)
    (r,) = representatives(f)
    assert r.x == 0 and r.window == (-1, 1) and r.value == 5


@pytest.mark.parametrize("a, b", [(0, 0), (mpq(1, 2), 0), (1, 0), (1, 1), (2, 1), (2, 2), (2, mpq(1, 2))])
@pytest.mark.parametrize("N", [2, 5, 17])
def test_optimality_family(a, b, N):
    f = g_family(a, b, N)
    assert total_var(f) == 2 * N - a - b
    assert var_of_m(f) == 2 * N - a - mpq(a + b, 2)


def test_limitation_example():
    g = limitation_example(C)
    pm = build_piecewise(g)
    exts = local_extrema(pm)
    maxima = [e for e in exts if e.kind == "max"]
    minima = [e for e in exts if e.kind == "min"]
    assert [e.value for e in maxima] == [C + 1, C + mpq(1, 2), C + 1]
    assert [e.value for e in minima] == [C + mpq(1, 3)] * 2
    assert [m.contains(mpq(s, 2)) for m, s in zip(minima, (-1, 1))] == [True, True]
    assert var_of_m(g, pm) == 2 * C + 4 - mpq(1, 3)
    reps = representatives(g, pm, check_class=False)
    assert [r.x for r in reps] == [mpq(-3, 2), 0, mpq(3, 2)]


def test_limitation_example_is_outside_the_class():
    with pytest.raises(ClassViolation):
        representatives(limitation_example(C))
    with pytest.raises(ClassViolation):
        lemma3_audit(limitation_example(C))


def test_t_curve_examples():
    assert t_value((-1, 1), 0) == 1
    assert t_value((-1, 1), 2) == mpq(1, 3)
    assert var_t_over((-1, 1), 2, None) == mpq(1, 3)
    assert var_t_over((-1, 1)) == 2
    with pytest.raises(ValueError):
        t_value((1, 1), 0)


@given(rationals(10, 4, signed=True), st.integers(1, 8), rationals(20, 4, signed=True))
def test_t_curve_shape(lo, width, x):
    I = (lo, lo + width)
    c = lo + mpq(width, 2)
    assert t_value(I, c) == 1
    v = t_value(I, x)
    assert 0 < v <= 1
    assert var_t_over(I, None, x) + var_t_over(I, x, None) == 2
    assert var_t_over(I, x, x) == 0


def test_t_curve_matches_the_maximal_function_off_the_interval():
    for x in (mpq(-7, 2), mpq(-2), mpq(3, 2), mpq(9)):
        assert t_value((-1, 1), x) == m_at(IND, x)


def test_restricted_examples():
    f = indicator(mpq(-1, 2), mpq(1, 2))
    assert m_restricted_at(f, 0, 0) == 1
    prev = None
    for N in range(7):
        v = m_restricted_at(f, 0, N)
        assert v <= m_at(f, 0)
        if prev is not None:
            assert v >= prev
        prev = v
    assert prev == m_at(f, 0)


@given(step_functions(signed=True), rationals(20, 4, signed=True), st.integers(0, 5))
def test_restricted_is_below(f, x, N):
    assert m_restricted_at(f, x, N) <= m_at(f, x)


def test_restricted_levels_are_not_nested():
    # length 1 is admissible at level 0 but not at level 1
    f = StepFunction((0, mpq(1, 4), mpq(1, 2)), (0, 1))
    assert m_restricted_at(f, 0, 0) == mpq(1, 4)
    assert m_restricted_at(f, 0, 1) == mpq(1, 6)


@given(step_functions(signed=True), rationals(20, 4, signed=True))
def test_pointwise_floors(f, x):
    m = m_at(f, x)
    assert m >= (abs(f.a) + abs(f.b)) / 2
    assert m >= (abs(one_sided_value(f, x, "left")) + abs(one_sided_value(f, x, "right"))) / 2


@given(step_functions(signed=True))
def test_limit_law_at_breakpoints(f):
    pm = build_piecewise(f)
    probes = list(f.breakpoints) + [(s + t) / 2 for s, t in zip(f.breakpoints, f.breakpoints[1:])]
    for x in probes:
        left, right = pm.one_sided(x, "left"), pm.one_sided(x, "right")
        low = left if compare(left, right) <= 0 else right
        assert compare(low, m_at(f, x)) == 0


@given(step_functions(signed=True))
def test_sampled_variation_is_a_lower_bound(f):
    v = var_of_m(f)
    lo, hi = f.breakpoints[0] - 4, f.breakpoints[-1] + 4
    prev = mpq(0)
    for k in (1, 2, 3):
        n = 8 * 2**k
        pts = [lo + (hi - lo) * mpq(i, n) for i in range(n + 1)]
        s = var_over(pts, lambda x: m_at(f, x))
        assert s >= prev
        assert _le(s, v)
        prev = s


@given(step_functions(alternating=True))
def test_representative_bound(f):
    g = normalize(abs_of(f))
    reps = representatives(f)
    assert len(reps) <= max(g.K, 1) ** 2
    for r in reps:
        lo, hi = r.window
        assert r.x == (lo + hi) / 2
        assert m_at(g, r.x) == r.value


@given(step_functions(signed=True, alternating=True))
def test_theorem1_on_the_alternating_class(f):
    rhs = total_var(f) - abs(abs(f.a) - abs(f.b)) / 2
    assert _le(var_of_m(f), rhs)


@given(step_functions(signed=True, max_k=4), st.fractions(-4, 4, max_denominator=3))
def test_scaling(f, c):
    c = mpq(c.numerator, c.denominator)
    cf = f.scaled(c)
    for x in f.breakpoints:
        assert m_at(cf, x) == abs(c) * m_at(f, x)
    assert SurdSum.of(var_of_m(cf)) == SurdSum.of(var_of_m(f)) * abs(c)


@given(step_functions(signed=True, max_k=4))
def test_reflection(f):
    assert SurdSum.of(var_of_m(reflect(f))) == SurdSum.of(var_of_m(f))


def test_g5_audits():
    f = g_family(1, 0, 5)
    split = var_split_audit(f)
    assert split.holds
    assert split.lines[0].lhs == (5 - 1) + (5 - mpq(1, 2))
    assert lemma3_audit(f).holds


@given(step_functions(alternating=True, max_k=4))
def test_audits_hold_on_the_alternating_class(f):
    assert lemma3_audit(f).holds
    assert var_split_audit(f).holds


def test_audit_rejects_the_wrong_class():
    f = StepFunction((0, 1, 2), (1, 2))
    with pytest.raises(ClassViolation):
        var_split_audit(f)


def test_json_of_the_envelope():
    d = build_piecewise(IND).to_json()
    assert d["segments"] and "points" in d
