import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxvar.discrete import (
    crossing_bound,
    m_discrete_at,
    m_discrete_values,
    m_limit,
    tail_candidates,
    var_of_m_discrete,
)
from maxvar.exact import mpq
from maxvar.functions import BVSequence, abs_of, normalize, reflect
from maxvar.oracle import as_fraction, brute_m_discrete, brute_var_discrete

from conftest import indicator_seq, sequences

ONE = indicator_seq()


def test_pointwise_examples():
    assert m_discrete_at(ONE, 0) == 1
    assert m_discrete_at(ONE, 1) == mpq(1, 3)
    assert m_discrete_at(BVSequence(0, (), 1, 0), 0) == mpq(1, 2)
    assert m_discrete_at(ONE, -1, "one_sided") == mpq(1, 2)
    assert m_discrete_at(ONE, 2, "uncentered") == mpq(1, 3)


def test_limits():
    G = BVSequence(0, (), 1, 0)
    assert m_limit(G, 1) == mpq(1, 2)
    assert m_limit(G, -1) == 1
    assert m_limit(G, 1, "uncentered") == 1
    assert m_limit(G, 1, "one_sided") == 0


def test_tail_candidates_examples():
    right = tail_candidates(ONE, 1)
    anchored = [c for c in right if c.anchor is not None]
    assert [c.anchor for c in anchored] == [0]
    assert all(anchored[0](n) == mpq(1, 2 * n + 1) for n in range(1, 12))
    assert {c(5) for c in right if c.anchor is None} == {0}
    empty = tail_candidates(BVSequence(0, (), 1, 0), 1)
    assert all(c.anchor is None for c in empty)
    assert {c(3) for c in empty} == {0, mpq(1, 2)}


@pytest.mark.parametrize("variant", ["centered", "one_sided", "uncentered"])
@given(G=sequences(max_len=6), side=st.sampled_from([1, -1]))
def test_tail_candidates_reproduce_the_maximal_function(variant, G, side):
    H = normalize(abs_of(G))
    cands = tail_candidates(G, side, variant)
    start = H.end + 1 if side > 0 else H.start - 1
    for k in range(1, 15):
        n = start + side * k
        assert max(c(n) for c in cands) == m_discrete_at(G, n, variant)


def test_var_examples():
    assert var_of_m_discrete(ONE) == 2
    assert var_of_m_discrete(BVSequence(0, (), 3, 3)) == 0
    assert var_of_m_discrete(BVSequence(0, (5,), 1, 0)) == mpq(17, 2)
    assert var_of_m_discrete(BVSequence(0, (0, 0, 0))) == 0


def test_var_of_the_five_spike_matches_the_oracle():
    G = BVSequence(0, (5,), 1, 0)
    assert brute_var_discrete(G) == as_fraction(var_of_m_discrete(G))


@pytest.mark.parametrize("variant", ["centered", "one_sided", "uncentered"])
@given(G=sequences(max_len=6, signed=True, max_num=6))
def test_pointwise_agrees_with_brute_force(variant, G):
    H = normalize(G)
    for n in range(H.start - 4, H.end + 5):
        assert as_fraction(m_discrete_at(G, n, variant)) == brute_m_discrete(G, n, variant)


def test_var_agrees_with_oracle_on_random_instances():
    rng = random.Random(7)
    for _ in range(60):
        core = tuple(mpq(rng.randint(0, 8), rng.randint(1, 4)) for _ in range(rng.randint(0, 8)))
        G = BVSequence(rng.randint(-3, 3), core, mpq(rng.randint(0, 8), rng.randint(1, 4)), mpq(rng.randint(0, 8)))
        assert brute_var_discrete(G) == as_fraction(var_of_m_discrete(G))


@given(sequences(signed=True))
def test_pointwise_floors(G):
    H = normalize(abs_of(G))
    a, b = H.a, H.b
    for n in range(H.start - 3, H.end + 4):
        m = m_discrete_at(G, n)
        assert m >= (a + b) / 2
        assert m >= abs(G(n))
        assert m >= (abs(G(n - 1)) + abs(G(n)) + abs(G(n + 1))) / 3
        assert m_discrete_at(G, n, "uncentered") >= max(abs(G(n)), a, b)
        assert m_discrete_at(G, n, "one_sided") >= max(abs(G(n)), b)


@pytest.mark.parametrize("variant", ["one_sided", "uncentered"])
@given(G=sequences(max_len=7))
def test_local_maxima_sit_on_the_sequence(variant, G):
    ns = list(range(G.start - 10, G.end + 11))
    M = m_discrete_values(G, ns, variant)
    i = 1
    while i < len(M) - 1:
        j = i
        while j + 1 < len(M) and M[j + 1] == M[i]:
            j += 1
        if j < len(M) - 1 and M[i - 1] < M[i] and M[j + 1] < M[i]:
            for k in range(i, j + 1):
                assert M[k] == abs(G(ns[k]))
        i = j + 1


@given(G=sequences(max_len=6, signed=True), c=st.fractions(-5, 5, max_denominator=4))
def test_scaling(G, c):
    c = mpq(c.numerator, c.denominator)
    cG = G.scaled(c)
    for n in range(G.start - 2, G.end + 3):
        assert m_discrete_at(cG, n) == abs(c) * m_discrete_at(G, n)
    assert var_of_m_discrete(cG) == abs(c) * var_of_m_discrete(G)


@given(sequences(max_len=6))
def test_reflection(G):
    assert var_of_m_discrete(reflect(G)) == var_of_m_discrete(G)


@given(sequences(max_len=6))
def test_single_curve_beyond_the_crossing_bound(G):
    for side in (1, -1):
        nstar = crossing_bound(G, side)
        cands = tail_candidates(G, side)
        win = [max(range(len(cands)), key=lambda i: (cands[i](nstar + side * k), -i)) for k in range(0, 6)]
        vals = [max(c(nstar + side * k) for c in cands) for k in range(0, 6)]
        diffs = [(vals[k + 1] - vals[k]) for k in range(5)]
        assert all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs)
