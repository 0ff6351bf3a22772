"""Rank ratios rho(x, y) and their normalized variant.

rho(x, y) is the infimum of r > 0 with lambda(x) <= r*lambda(y) for every
functional.  On a ray-complete model it is the largest ray ratio, unless y
generates an ideal missing x, in which case the ideal functional of that
ideal makes the set of admissible r empty.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cucore import ArithmeticChain, Chain, CuModel, StableChain, ideal_membership, is_full
from .errors import (
    ChainNotIncreasing,
    EmptyNormalizedFamily,
    ModelContractError,
    NotCompactlyDominated,
    NotFull,
)
from .functionals import normalized_family
from .scalar import INF, ONE, ZERO, ExtScalar, ext_add, ext_div_ratio, ext_mul

EXACT = "exact-rays"
SAMPLED = "sampled-lower-bound"


@dataclass(frozen=True)
class Witness:
    kind: str  # "ray", "ideal", "vacuous" or "sample"
    label: str = ""
    key: Any = None

    def __str__(self) -> str:
        return self.kind if not self.label else f"{self.kind} {self.label}"


VACUOUS = Witness("vacuous")


@dataclass(frozen=True)
class RhoResult:
    value: ExtScalar
    witness: Witness
    method: str = EXACT


def _require_rays(S: CuModel) -> None:
    if not S.ray_complete:
        raise ModelContractError(f"{S.describe()} does not declare ray completeness")


def _ray_sup(table, select=None) -> tuple[ExtScalar, Witness]:
    best, witness = ZERO, VACUOUS
    for ray in table:
        if select is not None and not select(ray):
            continue
        r = ext_div_ratio(ray.values[0], ray.values[1])
        if r > best:  # strict: the first attaining ray wins
            best, witness = r, Witness("ray", ray.label, ray.key)
    return best, witness


def rho(S: CuModel, x, y) -> RhoResult:
    _require_rays(S)
    best, witness = _ray_sup(S.ray_table(x, y))
    if best.is_finite and not ideal_membership(S, y, x):
        return RhoResult(INF, Witness("ideal", f"Idl({S.format_element(y)})"))
    return RhoResult(best, witness)


def rho_normalized(S: CuModel, z, x, y) -> RhoResult:
    """rho restricted to functionals with value 1 at z."""
    _require_rays(S)
    if not is_full(S, z):
        raise NotFull(f"{S.format_element(z)} is not full")
    if normalized_family(S, z).empty:
        raise EmptyNormalizedFamily(f"no functional is finite and positive at {S.format_element(z)}")
    zz = S.infinity_times(z)
    for name, e in (("x", x), ("y", y)):
        if not S.compactly_contained(e, zz):
            raise NotCompactlyDominated(f"{name} is not compactly contained in inf*z")
    table = S.ray_table(x, y, z)
    # a linear-fractional objective over the simplex peaks at a vertex; the
    # vertices are the rays finite and positive on z
    best, witness = _ray_sup(table, lambda r: r.values[2].is_finite and not r.values[2].is_zero)
    return RhoResult(best, witness)


def rho_sampled(
    S: CuModel, x, y, samples: int, seed: int = 0, ray_sampling: bool = True
) -> RhoResult:
    """Lower bound for rho from random nonnegative combinations of rays.

    Draw i uses the i-th value of a seeded stream, so increasing ``samples``
    only adds functionals.  With ``ray_sampling`` the first draw is the first
    single ray that is finite and positive on y.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = random.Random(seed)
    table = S.ray_table(x, y)
    best, witness = ZERO, VACUOUS
    draws = []
    if ray_sampling:
        seed_ray = next(
            (r for r in table if r.values[1].is_finite and not r.values[1].is_zero), None
        )
        if seed_ray is not None:
            draws.append([(seed_ray, ONE)])
    while len(draws) < samples:
        draw = []
        for ray in table:
            u = rng.random()
            if u < 0.3:
                continue
            if u < 0.35:
                draw.append((ray, INF))
            else:
                draw.append((ray, ExtScalar(Fraction(rng.randint(1, 12), rng.randint(1, 12)))))
        draws.append(draw)
    for i, draw in enumerate(draws[:samples]):
        lx, ly = ZERO, ZERO
        for ray, c in draw:
            lx = ext_add(lx, ext_mul(c, ray.values[0]))
            ly = ext_add(ly, ext_mul(c, ray.values[1]))
        r = ext_div_ratio(lx, ly)
        if r > best:
            best, witness = r, Witness("sample", f"draw {i}")
    return RhoResult(best, witness, SAMPLED)


# -- limits along chains ------------------------------------------------------------


@dataclass(frozen=True)
class ChainLimits:
    terms_over_x: ExtScalar  # lim rho(x_n, x)
    x_over_terms: ExtScalar  # lim rho(x, x_n)


def _check_dominated(S: CuModel, chain: Chain, x) -> None:
    for n in list(chain.checked_indices()) + [max(chain.checked_indices(), default=0) + 1]:
        if not S.leq(chain.term(n), x):
            raise ChainNotIncreasing(f"x_{n} is not below the target element")


def _side(base: ExtScalar, step: ExtScalar) -> str:
    if base.is_infinite or step.is_infinite:
        return "inf"
    return "const" if step.is_zero else "grow"


def _arithmetic_ratio_limit(num_base, num_step, den_base, den_step) -> ExtScalar:
    """lim_n ratio(a + n*b, c + n*d) with the 0/0 and inf/inf rules."""
    num, den = _side(num_base, num_step), _side(den_base, den_step)
    if num == "const" and den == "const":
        return ext_div_ratio(num_base, den_base)
    if den == "inf":
        return ZERO
    if den == "grow":
        if num == "const":
            return ZERO
        return INF if num == "inf" else ext_div_ratio(num_step, den_step)
    # constant denominator, numerator infinite or unbounded
    return ext_div_ratio(INF, den_base)


def rho_chain_limits(S: CuModel, chain: Chain, x) -> ChainLimits:
    """The limits of rho(x_n, x) and rho(x, x_n) along an increasing chain."""
    _require_rays(S)
    chain.verify()
    _check_dominated(S, chain, x)
    if isinstance(chain, StableChain):
        last = chain.sup()
        return ChainLimits(rho(S, last, x).value, rho(S, x, last).value)
    if isinstance(chain, ArithmeticChain):
        return _arithmetic_limits(S, chain, x)
    from .spectral import CutdownChain

    if isinstance(chain, CutdownChain):
        m = chain.stable_from
        first = (rho(S, chain.term(m), x).value, rho(S, x, chain.term(m)).value)
        again = (rho(S, chain.term(2 * m), x).value, rho(S, x, chain.term(2 * m)).value)
        if first != again:
            raise AssertionError("cutdown ratios did not stabilize")
        return ChainLimits(*first)
    raise ModelContractError(f"no tail law for {type(chain).__name__}")


def _arithmetic_limits(S: CuModel, chain: ArithmeticChain, x) -> ChainLimits:
    # per ray, x_n is base + n*step; the ratio sup is a max of finitely many
    # monotone sequences, so the limit of the max is the max of the limits
    table = S.ray_table(chain.base, chain.step, x)
    fwd, bwd = ZERO, ZERO
    for ray in table:
        b, s, v = ray.values
        fwd = max(fwd, _arithmetic_ratio_limit(b, s, v, ZERO))
        bwd = max(bwd, _arithmetic_ratio_limit(v, ZERO, b, s))
    # x_n <= x keeps x_n in Idl(x); all x_n generate the ideal of x_1
    if bwd.is_finite and not ideal_membership(S, chain.term(1), x):
        bwd = INF
    return ChainLimits(fwd, bwd)
