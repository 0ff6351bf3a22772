"""Oscillation of spectral profiles and the continuity-of-rank test.

All suprema over t are taken piece by piece on exact partitions: on a
point piece the value is attained, on an open piece a linear function
approaches the smaller of its two end limits.  Limits in m are read off at
the stabilization index of the profile and re-checked at twice that index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NormalizationRequired, NotFull
from .rankratio import rho_normalized
from .scalar import ExtScalar
from .spectral import (
    PLFunction,
    SpectralModel,
    SpectralProfile,
    StepFunction,
    cutdown,
    dimension_function,
    norm,
    rank_function,
    smooth,
    stabilization_index,
    step_sub,
    trace_function,
)

MODEL = SpectralModel()


@dataclass(frozen=True)
class Defect:
    value: Fraction
    where: str


def _sup_step_minus_pl(s: StepFunction, f: PLFunction) -> Defect:
    """sup over t of s(t) - f(t) for finite s."""
    bps = sorted(set(f.knots) | set(s.breakpoints))
    best, where = None, ""
    for j, t in enumerate(bps):
        cands = [(s(t).fraction - f(t), f"t={t}")]
        if j + 1 < len(bps):
            u = bps[j + 1]
            cands.append((s((t + u) / 2).fraction - min(f(t), f(u)), f"({t},{u})"))
        for v, label in cands:
            if best is None or v > best:
                best, where = v, label
    return Defect(best, where)


def _sup_step(s: StepFunction) -> Defect:
    best = max(s.pieces(), key=lambda p: p.value)
    first = next(p for p in s.pieces() if p.value == best.value)
    return Defect(first.value.fraction, first.label())


def oscillation_defect(a: SpectralProfile, eps) -> Defect:
    """sup_t [ dim(a)(t) - trace(f_eps(a))(t) ]."""
    return _sup_step_minus_pl(dimension_function(a), trace_function(smooth(a, eps)))


def cutdown_defect(a: SpectralProfile, eps) -> Defect:
    """sup_t [ dim(a)(t) - dim((a - eps)_+)(t) ]."""
    return _sup_step(step_sub(dimension_function(a), dimension_function(cutdown(a, eps))))


def _stable(fn, a: SpectralProfile):
    m = stabilization_index(a)
    first, again = fn(Fraction(1, m)), fn(Fraction(1, 2 * m))
    if first.value != again.value:
        raise AssertionError(f"not stable beyond index {m}: {first.value} vs {again.value}")
    return first


def omega(a: SpectralProfile) -> ExtScalar:
    return ExtScalar(omega_defect(a).value)


def omega_defect(a: SpectralProfile) -> Defect:
    return _stable(lambda e: oscillation_defect(a, e), a)


def uniform_defect(a: SpectralProfile) -> Defect:
    """Limit of the uniform gap between dim(a) and dim of its cutdowns."""
    return _stable(lambda e: cutdown_defect(a, e), a)


def unit(a: SpectralProfile) -> StepFunction:
    return StepFunction.constant(a.n)


def limit_rho_cutdown(a: SpectralProfile) -> ExtScalar:
    return _limit_rho(a)[0]


def _limit_rho(a: SpectralProfile):
    x = rank_function(a, 0)

    def at(eps):
        res = rho_normalized(MODEL, unit(a), x, rank_function(cutdown(a, eps), 0))
        return res

    m = stabilization_index(a)
    first, again = at(Fraction(1, m)), at(Fraction(1, 2 * m))
    if first.value != again.value:
        raise AssertionError(f"rank ratio not stable beyond index {m}")
    return first.value, first.witness.label


def rank_continuous(a: SpectralProfile) -> tuple[bool, str]:
    r = rank_function(a, 0)
    if r.is_constant():
        return True, ""
    pieces = r.pieces()
    for p, q in zip(pieces, pieces[1:]):
        if p.value != q.value:
            return False, (p if p.is_point else q).label()
    return False, ""


@dataclass(frozen=True)
class OscillationReport:
    omega: ExtScalar
    limit_rho_cutdown: ExtScalar
    uniform_defect: ExtScalar
    uniform_convergence: bool
    rank_continuous: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def conditions(self) -> dict[str, bool]:
        return {
            "limit_rho_is_one": self.limit_rho_cutdown == 1,
            "uniform_convergence": self.uniform_convergence,
            "omega_is_zero": self.omega.is_zero,
            "rank_continuous": self.rank_continuous,
        }

    @property
    def agree(self) -> bool:
        return len(set(self.conditions.values())) == 1


def _require_full(a: SpectralProfile) -> None:
    if rank_function(a, 0).min_value() < 1:
        raise NotFull("the rank vanishes somewhere on [0, 1]")


def contrank_check(a: SpectralProfile, strict: bool = True) -> OscillationReport:
    """Evaluate the four equivalent continuity conditions independently."""
    _require_full(a)
    if norm(a) != 1:
        raise NormalizationRequired(f"largest eigenvalue is {norm(a)}, rescale to 1 first")
    lim, lim_where = _limit_rho(a)
    unif = uniform_defect(a)
    osc = omega_defect(a)
    cont, cont_where = rank_continuous(a)
    witnesses = {}
    if lim != 1:
        witnesses["limit_rho_cutdown"] = lim_where
    if unif.value:
        witnesses["uniform_convergence"] = unif.where
    if osc.value:
        witnesses["omega"] = osc.where
    if not cont:
        witnesses["rank_continuous"] = cont_where
    report = OscillationReport(
        omega=ExtScalar(osc.value),
        limit_rho_cutdown=lim,
        uniform_defect=ExtScalar(unif.value),
        uniform_convergence=unif.value == 0,
        rank_continuous=cont,
        witnesses=witnesses,
    )
    if strict and not report.agree:
        raise AssertionError(f"continuity conditions disagree: {report.conditions}")
    return report
