from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from curank.errors import NormalizationRequired, NotFull
from curank.oscillation import (
    contrank_check,
    limit_rho_cutdown,
    omega,
    oscillation_defect,
    uniform_defect,
)
from curank.scalar import INF, ONE, ZERO, ExtScalar
from curank.spectral import (
    PLFunction,
    SpectralProfile,
    dimension_at,
    normalize,
    smooth,
    trace_at,
)

F = Fraction
T = SpectralProfile.parse("0:0, 1:1")
T_AND_ONE = SpectralProfile.parse("0:0, 1:1; 0:1, 1:1")


def test_examples():
    assert omega(T) == ONE
    assert limit_rho_cutdown(T) == INF
    assert omega(T_AND_ONE) == ExtScalar(F(1, 2))
    assert limit_rho_cutdown(T_AND_ONE) == ExtScalar(2)
    bounded = SpectralProfile.parse("0:1/2, 1:1; 0:1/4, 1:1")
    assert omega(bounded) == ZERO
    assert limit_rho_cutdown(bounded) == ONE


def test_contrank_reports():
    bad = contrank_check(T_AND_ONE)
    assert not any(bad.conditions.values())
    assert bad.omega == ExtScalar(F(1, 2)) and bad.limit_rho_cutdown == ExtScalar(2)
    assert set(bad.witnesses) == set(bad.conditions) - {"limit_rho_is_one", "omega_is_zero"} | {
        "limit_rho_cutdown",
        "omega",
    }
    good = contrank_check(SpectralProfile.parse("0:1/2, 1:1; 0:1/4, 1:1"))
    assert all(good.conditions.values()) and not good.witnesses


def test_contrank_preconditions():
    with pytest.raises(NotFull):
        contrank_check(T)
    with pytest.raises(NormalizationRequired):
        contrank_check(SpectralProfile.parse("0:1/2, 1:1/2"))


@st.composite
def pl(draw, floor=0):
    inner = draw(st.lists(st.integers(1, 15), unique=True, max_size=3))
    knots = [F(0)] + sorted(F(j, 16) for j in inner) + [F(1)]
    values = [F(draw(st.integers(floor, 8)), 8) for _ in knots]
    return PLFunction(tuple(knots), tuple(values))


@st.composite
def full_profiles(draw):
    lead = draw(pl(floor=1))
    rest = draw(st.lists(st.one_of(pl(), pl(floor=2), st.just(PLFunction.constant(0))), max_size=2))
    return normalize(SpectralProfile((lead, *rest)))


profiles = st.lists(pl(), min_size=1, max_size=3).map(lambda fs: SpectralProfile(tuple(fs)))


@given(full_profiles())
def test_four_conditions_agree(a):
    report = contrank_check(a, strict=False)
    assert report.agree
    assert report.omega.is_zero == report.uniform_convergence


@given(profiles)
def test_omega_vanishes_iff_cutdowns_converge_uniformly(a):
    assert omega(a).is_zero == (uniform_defect(a).value == 0)


@given(profiles, st.lists(st.integers(0, 64), min_size=1, max_size=4), st.sampled_from([F(1, 64), F(1, 32)]))
def test_point_mixtures_stay_below_the_sup(a, points, eps):
    # averaging the pointwise gap over finitely many points cannot beat the sup
    ts = [F(p, 64) for p in points]
    s = smooth(a, eps)
    gaps = [dimension_at(a, t).fraction - trace_at(s, t) for t in ts]
    assert sum(gaps) / len(gaps) <= oscillation_defect(a, eps).value


@given(profiles, st.sampled_from([F(1, 8), F(1, 4), F(1, 2)]))
def test_trace_of_smoothing_is_below_dimension(a, eps):
    s = smooth(a, eps)
    for j in range(33):
        t = F(j, 32)
        assert trace_at(s, t) <= dimension_at(a, t).fraction
    assert oscillation_defect(a, eps).value >= 0
