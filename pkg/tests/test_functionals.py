from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import assume, given

from conftest import basic_models, directsum, elements
from curank.cucore import is_full
from curank.errors import NotNormalizable
from curank.functionals import (
    Functional,
    lambda_ideal,
    lambda_infinity,
    normalize_at,
    normalized_family,
    ray_functional,
)
from curank.models import Idem, IdempotentModel, PerforatedModel, PointFnModel
from curank.scalar import INF, ONE, ZERO, ExtScalar, ext_mul
from curank.spectral import SpectralModel

PQ = PointFnModel(("p", "q"))


def v(*xs):
    return PQ.make_element(list(xs))


def test_lambda_infinity():
    lam = lambda_infinity(PQ)
    assert lam(v(0, 0)) == ZERO
    assert lam(v(1, 0)) == INF
    assert lambda_infinity(PerforatedModel(3))(ExtScalar(5)) == INF


def test_lambda_ideal():
    lam = lambda_ideal(PQ, v(1, 0))
    assert lam(v(7, 0)) == ZERO
    assert lam(v(0, 1)) == INF
    top = lambda_ideal(PQ, PQ.largest())
    assert all(top(x) == ZERO for x in PQ.enumerate_targets(3))


def test_normalized_family_examples():
    fam = normalized_family(PerforatedModel(3), ExtScalar(2))
    assert not fam.empty
    assert fam.vertices()[0](ExtScalar(2)) == ONE
    assert fam.vertices()[0].coefficients[0][1] == ExtScalar(Fraction(1, 2))
    assert normalized_family(IdempotentModel(), Idem.U).empty
    assert normalized_family(PQ, v("inf", "inf")).empty
    assert normalized_family(PQ, v("inf", "inf")).constraint() == "empty"


def test_infinite_vector_admits_no_normalized_functional_by_grid():
    # any positive coefficient on a ray gives inf, all-zero gives 0
    z = v("inf", "inf")
    grid = [ZERO, ExtScalar(Fraction(1, 4)), ONE, ExtScalar(3), INF]
    for cp in grid:
        for cq in grid:
            lam = Functional.of(PQ, {"p": cp, "q": cq})
            assert lam(z) != ONE


def test_normalize_at_examples():
    both = Functional.of(PQ, {"p": 1, "q": 1})
    scaled = normalize_at(both, v(1, 1))
    assert dict(scaled.coefficients) == {"p": ExtScalar(Fraction(1, 2)), "q": ExtScalar(Fraction(1, 2))}
    with pytest.raises(NotNormalizable):
        normalize_at(lambda_infinity(PQ), v(1, 1))
    ident = normalize_at(ray_functional(PerforatedModel(3), "id"), ExtScalar(4))
    assert ident.coefficients == (("id", ExtScalar(Fraction(1, 4))),)


coefficients = st.sampled_from([ZERO, ExtScalar(Fraction(1, 3)), ONE, ExtScalar(5), INF])
models = st.one_of(basic_models, directsum, st.just(SpectralModel()))


@st.composite
def model_functional(draw):
    S = draw(models)
    x, y = draw(elements(S)), draw(elements(S))
    keys = S.ray_keys(x, y, S.o2_term(x, 1))
    chosen = [k for k in keys if draw(st.booleans())]
    default = draw(st.sampled_from([ZERO, INF]))
    lam = Functional(S, tuple((k, draw(coefficients)) for k in chosen), default)
    return S, lam, x, y


@given(model_functional())
def test_random_functionals_satisfy_the_axioms(case):
    S, lam, x, y = case
    assert lam(S.zero()) == ZERO
    assert lam(S.add(x, y)) == lam(x) + lam(y)
    if S.leq(x, y):
        assert lam(x) <= lam(y)


@given(model_functional())
def test_random_functionals_preserve_canonical_sups(case):
    S, lam, x, _ = case
    if isinstance(S, (PerforatedModel, PointFnModel, SpectralModel)):
        values = [lam(S.o2_term(x, n)) for n in (1, 2, 4, 8, 64)]
        assert all(a <= b for a, b in zip(values, values[1:]))
        if lam(x).is_finite:
            assert values[-1] == lam(x)


@given(st.data())
def test_ideal_functionals_are_functionals(data):
    S = data.draw(models)
    g, x, y = (data.draw(elements(S)) for _ in range(3))
    lam = lambda_ideal(S, g)
    assert lam(S.zero()) == ZERO
    assert lam(S.add(x, y)) == lam(x) + lam(y)
    if S.leq(x, y):
        assert lam(x) <= lam(y)
    assert lam(x) in (ZERO, INF)


@given(st.data())
def test_functionals_normalized_at_a_larger_full_element_restrict(data):
    S = data.draw(models)
    x = data.draw(elements(S, full=True))
    y = S.add(x, data.draw(elements(S)))
    assume(is_full(S, x) and S.leq(x, y))
    fam = normalized_family(S, y, x)
    assume(not fam.empty)
    for lam in fam.vertices():
        assert lam(y) == ONE
        witness = normalize_at(lam, x)
        assert witness(x) == ONE
    assert not normalized_family(S, x).empty


@given(st.data())
def test_scaling_commutes_with_evaluation(data):
    case = data.draw(model_functional())
    S, lam, x, _ = case
    c = data.draw(coefficients.filter(lambda c: not c.is_zero))
    assert lam.scaled(c)(x) == ext_mul(c, lam(x))
