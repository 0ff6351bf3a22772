from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import assume, given, settings

from conftest import basic_models, directsum, elements, perforated, pointfn
from oracles import premise, rc_oracle
from curank.cucore import is_full
from curank.errors import EmptyNormalizedFamily, NotFull
from curank.models import DirectSumModel, Idem, IdempotentModel, PerforatedModel, PointFnModel
from curank.radius import (
    irc,
    premise_holds,
    rc_exact,
    rc_range_sample,
    rc_search,
    rc_strict,
    verify_certificate,
)
from curank.scalar import INF, ZERO, ExtScalar, ext_div_ratio
from curank.spectral import SpectralModel

F = Fraction
P4 = PerforatedModel(4)


def test_perforated_values():
    assert rc_exact(P4, ExtScalar(1)).value == ExtScalar(3)
    assert rc_exact(P4, ExtScalar(2)).value == ExtScalar(F(3, 2))
    assert rc_exact(P4, INF).value == ZERO
    assert rc_strict(P4, ExtScalar(1)).value == ExtScalar(3)


def test_other_models():
    pq = PointFnModel(("p", "q"))
    assert rc_exact(pq, (ExtScalar(1), ExtScalar(2))).value == ZERO
    assert rc_strict(pq, (ExtScalar(1), ExtScalar(1))).value == ZERO
    with pytest.raises(EmptyNormalizedFamily):
        rc_strict(IdempotentModel(), Idem.U)
    with pytest.raises(NotFull):
        rc_exact(pq, (ExtScalar(1), ZERO))
    with pytest.raises(NotFull):
        rc_search(P4, ZERO, 4)


def test_irc():
    assert irc(PerforatedModel(3), ExtScalar(1)) == ExtScalar(F(1, 2))
    assert irc(PointFnModel(("p",)), (ExtScalar(2),)) == INF
    assert irc(PerforatedModel(3), INF) == INF


def test_search_certificates():
    res = rc_search(P4, ExtScalar(1), 30)
    assert res.value == ExtScalar(3)
    assert (res.certificate.x, res.certificate.y) == (ExtScalar(1), ExtScalar(4))
    assert verify_certificate(P4, ExtScalar(1), res.certificate)
    res = rc_search(PerforatedModel(2), ExtScalar(1), 4, [F(1, 2), F(1), F(3, 2)])
    assert res.value == ExtScalar(1) and res.clear_from == F(3, 2)


def test_range_sample():
    values = rc_range_sample(PerforatedModel(6), 4)
    assert values == {ExtScalar(5), ExtScalar(F(5, 2)), ExtScalar(F(5, 3)), ExtScalar(F(5, 4))}


@pytest.mark.parametrize("k", [2, 3, 5])
@pytest.mark.parametrize("w", [1, 3])
def test_perforated_matches_oracle(k, w):
    S = PerforatedModel(k)
    assert ExtScalar(rc_oracle(S, ExtScalar(w), 3 * k + 2, top=k)) == rc_exact(S, ExtScalar(w)).value


def test_pointfn_matches_oracle():
    S = PointFnModel(("p", "q"))
    for w in [(ExtScalar(1), ExtScalar(2)), (ExtScalar(3), INF)]:
        assert rc_oracle(S, w, 3, denominator=4, top=2) == 0 == rc_exact(S, w).value


@given(st.data())
@settings(max_examples=60)
def test_premise_agrees_with_functionals(data):
    S = data.draw(st.one_of(perforated, pointfn))
    w = data.draw(elements(S, full=True, infinite=False, max_value=4))
    assume(is_full(S, w))
    x, y = data.draw(elements(S, max_value=8)), data.draw(elements(S, max_value=8))
    r = data.draw(st.fractions(min_value=F(1, 12), max_value=4, max_denominator=12))
    assert premise_holds(S, x, y, w, r) == premise(S, x, y, w, r)


rc_models = st.one_of(basic_models, directsum, st.just(SpectralModel()))


@given(st.data())
def test_homogeneity_and_antitone(data):
    S = data.draw(rc_models)
    w = data.draw(elements(S, full=True))
    assume(is_full(S, w))
    n = data.draw(st.integers(1, 7))
    base = rc_exact(S, w).value
    assert rc_exact(S, S.multiple(n, w)).value == ext_div_ratio(base, ExtScalar(n))
    bigger = S.add(w, data.draw(elements(S)))
    if S.leq(w, bigger):
        assert rc_exact(S, bigger).value <= base
    assert irc(S, S.multiple(n, w)) == irc(S, w) * ExtScalar(n)


small_models = st.one_of(
    st.integers(1, 4).map(PerforatedModel),
    st.just(PointFnModel(("p",))),
    st.just(IdempotentModel()),
    st.builds(DirectSumModel, st.integers(1, 3).map(PerforatedModel), st.just(PointFnModel(("p",)))),
)


@given(st.data())
@settings(max_examples=40)
def test_search_is_a_sound_lower_bound(data):
    S = data.draw(small_models)
    w = data.draw(elements(S, full=True, infinite=False, max_value=3))
    assume(is_full(S, w))
    res = rc_search(S, w, 5, [F(j, 4) for j in range(1, 17)])
    assert res.value <= rc_exact(S, w).value
    if res.certificate is not None:
        assert verify_certificate(S, w, res.certificate)
