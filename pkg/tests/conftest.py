from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from curank.models import DirectSumModel, Idem, IdempotentModel, PerforatedModel, PointFnModel
from curank.scalar import INF, ExtScalar
from curank.spectral import StepFunction

settings.register_profile(
    "default",
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def scalars(max_value=12, infinite=True, min_value=0):
    finite = st.integers(min_value, max_value).map(ExtScalar)
    return st.one_of(finite, st.just(INF)) if infinite else finite


rationals = st.fractions(min_value=0, max_value=20, max_denominator=12).map(ExtScalar)
ext_scalars = st.one_of(rationals, st.just(INF), st.just(ExtScalar(0)))


perforated = st.integers(1, 6).map(PerforatedModel)
pointfn = st.lists(st.sampled_from("pqrs"), min_size=1, max_size=3, unique=True).map(
    lambda ps: PointFnModel(tuple(ps))
)
idempotent = st.just(IdempotentModel())
basic_models = st.one_of(perforated, pointfn, idempotent)
directsum = st.builds(DirectSumModel, basic_models, basic_models)


@st.composite
def step_functions(draw, max_value=3, full=False, finite=True):
    inner = draw(st.lists(st.sampled_from([Fraction(j, 4) for j in (1, 2, 3)]), unique=True, max_size=3))
    bps = (Fraction(0),) + tuple(sorted(inner)) + (Fraction(1),)
    lo = 1 if full else 0
    top = [ExtScalar(v) for v in range(lo, max_value + 1)] + ([] if finite else [INF])
    intervals = tuple(draw(st.sampled_from(top)) for _ in range(len(bps) - 1))
    points = []
    for i in range(len(bps)):
        near = [intervals[j] for j in (i - 1, i) if 0 <= j < len(intervals)]
        cap = min(near)
        choices = [v for v in top if v <= cap]
        points.append(draw(st.sampled_from(choices)))
    return StepFunction(bps, tuple(points), intervals)


@st.composite
def elements(draw, S, max_value=12, full=False, infinite=True):
    if isinstance(S, PerforatedModel):
        return draw(scalars(max_value, infinite, 1 if full else 0))
    if isinstance(S, PointFnModel):
        return tuple(draw(scalars(max_value, infinite, 1 if full else 0)) for _ in S.points)
    if isinstance(S, IdempotentModel):
        return Idem.U if full else draw(st.sampled_from([Idem.ZERO, Idem.U]))
    if isinstance(S, DirectSumModel):
        return (draw(elements(S.left, max_value, full, infinite)), draw(elements(S.right, max_value, full, infinite)))
    return draw(step_functions(min(max_value, 3), full, finite=not infinite))
