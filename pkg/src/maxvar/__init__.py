"""Exact centered maximal functions of step functions and sequences, and their variation."""

from .continuous import (
    build_piecewise,
    candidate_curves,
    lemma3_audit,
    local_extrema,
    m_at,
    m_one_sided,
    m_restricted_at,
    representatives,
    t_value,
    var_of_m,
    var_split_audit,
    var_t_over,
)
from .discrete import m_discrete_at, m_limit, tail_candidates, var_of_m_discrete
from .exact import QuadraticValue, Rational, RootDescriptor, SurdSum, isolate_roots, quad_sign, rat, rat_cmp
from .functions import (
    BVSequence,
    ClassViolation,
    MalformedInput,
    StepFunction,
    abs_of,
    from_json,
    is_alternating,
    normalize,
    one_sided_value,
    to_json,
    total_var,
    var_over,
)
from .harness import (
    CheckReport,
    SearchConfig,
    check_conjecture,
    check_theorem1,
    estimate_constants,
    reproduce_paper,
    search,
)
from .transference import extend, grid, sample, transfer_audit, truncate

__version__ = "0.1.0"
