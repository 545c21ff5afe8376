import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from maxvar.exact import mpq
from maxvar.functions import BVSequence, StepFunction

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rationals(max_num=12, max_den=4, signed=False):
    lo = -max_num if signed else 0
    return st.builds(mpq, st.integers(lo, max_num), st.integers(1, max_den))


@st.composite
def step_functions(draw, max_k=5, signed=False, alternating=False):
    K = draw(st.integers(0, max_k))
    start = draw(st.integers(-6, 6))
    gaps = draw(st.lists(st.integers(1, 12), min_size=K, max_size=K))
    t = [mpq(start)]
    for g in gaps:
        t.append(t[-1] + mpq(g, 4))
    vals = draw(st.lists(rationals(signed=signed), min_size=K, max_size=K))
    if alternating:
        phase = draw(st.integers(0, 1))
        vals = [v if (k + phase) % 2 == 0 else mpq(0) for k, v in enumerate(vals)]
    a = draw(rationals(6, signed=signed))
    b = draw(rationals(6, signed=signed))
    return StepFunction(tuple(t), tuple(vals), a, b)


@st.composite
def sequences(draw, max_len=8, signed=False, max_num=8):
    core = draw(st.lists(rationals(max_num, signed=signed), max_size=max_len))
    offset = draw(st.integers(-5, 5))
    a = draw(rationals(max_num, signed=signed))
    b = draw(rationals(max_num, signed=signed))
    return BVSequence(offset, tuple(core), a, b)


def indicator_seq(n=0, value=1):
    return BVSequence(n, (mpq(value),))
