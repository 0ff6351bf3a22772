from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from curank.cucore import is_full
from curank.errors import MalformedPayload
from curank.scalar import ExtScalar
from curank.spectral import (
    PLFunction,
    SpectralModel,
    SpectralProfile,
    StepFunction,
    cutdown,
    dimension_at,
    dimension_function,
    pl_leq_step,
    rank_function,
    smooth,
    step_leq,
    step_leq_pl,
    trace_function,
)

F = Fraction
SPEC = SpectralModel()
EPSILONS = [F(1, 8), F(1, 4), F(1, 2)]


@st.composite
def pl_functions(draw):
    inner = draw(st.lists(st.integers(1, 15), unique=True, max_size=3))
    knots = [F(0)] + sorted(F(j, 16) for j in inner) + [F(1)]
    values = [F(draw(st.integers(0, 8)), 8) for _ in knots]
    return PLFunction(tuple(knots), tuple(values))


profiles = st.lists(pl_functions(), min_size=1, max_size=3).map(lambda fs: SpectralProfile(tuple(fs)))


def sample_points(a, extra=()):
    # knots, their midpoints and a dense grid
    ts = set(a.knots()) | set(extra) | {F(j, 97) for j in range(98)}
    ordered = sorted(ts)
    ts |= {(s + t) / 2 for s, t in zip(ordered, ordered[1:])}
    return sorted(ts)


def test_rank_of_identity():
    a = SpectralProfile.parse("0:0, 1:1")
    r = rank_function(a, 0)
    assert r(0) == 0
    assert r(F(1, 10**6)) == 1 and r(1) == 1


def test_rank_of_constant_ones_at_half():
    assert rank_function(SpectralProfile.parse("0:1, 1:1; 0:1, 1:1"), F(1, 2)) == StepFunction.constant(2)


def test_rank_of_identity_above_half_matches_sampling():
    a = SpectralProfile.parse("0:0, 1:1")
    r = rank_function(a, F(1, 2))
    for t in sample_points(a, [F(1, 2)]):
        assert r(t) == (1 if t > F(1, 2) else 0)
    assert r(F(1, 2)) == 0


def test_cutdown_examples():
    a = SpectralProfile.parse("0:0, 1:1")
    c = cutdown(a, F(1, 2))
    assert c.eigenvalues[0] == PLFunction.from_pairs([(0, 0), (F(1, 2), 0), (1, F(1, 2))])
    assert cutdown(a, 0) == a
    assert cutdown(SpectralProfile.parse("0:1/4, 1:1/4"), F(1, 2)).eigenvalues[0] == PLFunction.constant(0)


def test_smooth_examples():
    one = SpectralProfile.parse("0:1, 1:1")
    assert smooth(one, F(1, 3)) == one
    ident = smooth(SpectralProfile.parse("0:0, 1:1"), F(1, 2))
    assert ident.eigenvalues[0](F(3, 8)) == F(1, 2)
    small = SpectralProfile.parse("0:1/16, 1:1/16")  # eps/4 with eps = 1/4
    assert smooth(small, F(1, 4)).eigenvalues[0] == PLFunction.constant(0)


def test_dimension_at_examples():
    a = SpectralProfile.parse("0:0, 1:1; 0:1, 1:1")
    assert dimension_at(a, 0) == ExtScalar(F(1, 2))
    assert dimension_at(a, F(1, 2)) == 1
    assert dimension_at(SpectralProfile.parse("0:0, 1:0"), F(1, 3)) == 0


def test_profile_validation():
    with pytest.raises(MalformedPayload):
        SpectralProfile.parse("0:0, 1:2")
    with pytest.raises(MalformedPayload):
        SpectralProfile.parse("0:0, 1/2:1")
    with pytest.raises(MalformedPayload):
        SpectralProfile.parse("0:0; 1:1")
    with pytest.raises(MalformedPayload):
        SPEC.make_element(StepFunction((F(0), F(1)), (ExtScalar(1), ExtScalar(1)), (ExtScalar(0),)))


def test_collinear_knots_are_dropped():
    f = PLFunction.from_pairs([(0, 0), (F(1, 2), F(1, 2)), (1, 1)])
    assert f.knots == (0, 1)


def test_step_functions_merge_equal_pieces():
    f = StepFunction((F(0), F(1, 2), F(1)), (ExtScalar(1),) * 3, (ExtScalar(1), ExtScalar(1)))
    assert f == StepFunction.constant(1)


@given(profiles, st.sampled_from([F(0)] + EPSILONS))
def test_rank_function_matches_sampling(a, eps):
    r = rank_function(a, eps)
    assert r.is_lsc()
    for t in sample_points(a, [c for f in a.eigenvalues for c in f.crossings(eps)]):
        expected = sum(1 for f in a.eigenvalues if f(t) > eps)
        assert r(t) == expected
        assert r(t) <= a.n


@given(profiles, st.sampled_from(EPSILONS))
def test_smoothing_twice_eps_has_rank_of_cutdown(a, eps):
    assert rank_function(smooth(a, 2 * eps), 0) == rank_function(cutdown(a, eps), 0)


@given(profiles, st.sampled_from(EPSILONS), st.sampled_from([F(1), F(2), F(4)]))
def test_dirac_sandwich(a, eps, shrink):
    delta = eps / 8 / shrink
    d = dimension_function(cutdown(a, delta))
    assert pl_leq_step(trace_function(smooth(a, eps)), d)
    assert step_leq_pl(d, trace_function(smooth(a, delta)))


@given(profiles, st.sampled_from(EPSILONS), st.sampled_from(EPSILONS))
def test_cutdown_ranks_are_monotone(a, e1, e2):
    lo, hi = min(e1, e2), max(e1, e2)
    assert step_leq(rank_function(cutdown(a, hi), 0), rank_function(cutdown(a, lo), 0))


@given(profiles)
def test_full_iff_rank_at_least_one(a):
    r = rank_function(a, 0)
    assert is_full(SPEC, r) == (r.min_value() >= 1)
    assert is_full(SPEC, r) == all(any(f(t) > 0 for f in a.eigenvalues) for t in sample_points(a))


@given(profiles)
def test_make_element_from_profile_is_rank(a):
    assert SPEC.make_element(a) == rank_function(a, 0)
    assert SPEC.make_element(str(a)) == rank_function(a, 0)
