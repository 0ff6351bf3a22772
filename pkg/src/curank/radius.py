"""Relative radius of comparison.

S has r-comparison relative to w when ``x + r*w <= y`` on every functional
forces ``x <= y``; rc(S, w) is the infimum of such r.  Exact values come from
per-model closed forms; ``rc_search`` certifies lower bounds by exhaustive
enumeration and is model-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .cucore import ArithmeticChain, Chain, CuModel, StableChain, ideal_membership, is_full
from .errors import EmptyNormalizedFamily, ModelContractError, NotCompactlyDominated, NotFull
from .functionals import normalized_family
from .scalar import INF, ZERO, ExtScalar, ext

EXACT_FORMULA = "exact-formula"
BOUNDED_SEARCH = "bounded-search"


@dataclass(frozen=True)
class Certificate:
    x: Any
    y: Any
    r: ExtScalar


@dataclass(frozen=True)
class RcResult:
    value: ExtScalar
    method: str
    certificate: Certificate | None = None
    bound: int | None = None
    grid: tuple[Fraction, ...] = field(default=(), repr=False)
    # smallest grid value above the certified bound with no violation found
    clear_from: Fraction | None = None


def _require_full(S: CuModel, w) -> None:
    if not is_full(S, w):
        raise NotFull(f"{S.format_element(w)} is not full")


def rc_exact(S: CuModel, w) -> RcResult:
    _require_full(S, w)
    return RcResult(S.rc_formula(w), EXACT_FORMULA)


def rc_strict(S: CuModel, w) -> RcResult:
    """Radius for the strict premise ``x/w + r < y/w`` on the family normalized at w."""
    _require_full(S, w)
    if normalized_family(S, w).empty:
        raise EmptyNormalizedFamily(f"no functional is finite and positive at {S.format_element(w)}")
    if not S.compactly_contained(w, S.largest()):
        raise NotCompactlyDominated("the strict premise needs w compactly contained in the top")
    return RcResult(S.rc_strict_formula(w), EXACT_FORMULA)


def irc(S: CuModel, x) -> ExtScalar:
    return rc_exact(S, x).value.reciprocal()


# -- premises -----------------------------------------------------------------------


def premise_threshold(S: CuModel, x, y, w) -> ExtScalar | None:
    """Largest r with ``x + r*w <= y`` on rays and ideal functionals.

    The premise holds exactly for r in (0, threshold]; None means it fails
    for every r > 0.
    """
    if not (ideal_membership(S, y, x) and ideal_membership(S, y, w)):
        return None
    t = INF
    for ray in S.ray_table(x, y, w):
        vx, vy, vw = ray.values
        if vy.is_infinite:
            continue
        if vx.is_infinite or vw.is_infinite or vx > vy:
            return None
        if vw.is_zero:
            continue
        gap = vy.fraction - vx.fraction
        if gap == 0:
            return None
        t = min(t, ExtScalar(gap / vw.fraction))
    return t


def strict_threshold(S: CuModel, x, y, w) -> ExtScalar | None:
    """Supremum of r with ``x + r*w < y`` on every ray finite and positive at w.

    The strict premise holds exactly for r in (0, threshold); None means the
    threshold is 0.
    """
    t = INF
    for ray in S.ray_table(x, y, w):
        vx, vy, vw = ray.values
        if vw.is_zero or vw.is_infinite:
            continue
        if vy.is_infinite:
            if vx.is_infinite:
                return None
            continue
        if vx.is_infinite or vx >= vy:
            return None
        t = min(t, ExtScalar((vy.fraction - vx.fraction) / vw.fraction))
    return t


def premise_holds(S: CuModel, x, y, w, r) -> bool:
    t = premise_threshold(S, x, y, w)
    return t is not None and ext(r) <= t


def strict_premise_holds(S: CuModel, x, y, w, r) -> bool:
    t = strict_threshold(S, x, y, w)
    return t is not None and ext(r) < t


def comparison_counterexample(S: CuModel, w, r, bound: int, strict: bool = False):
    """First pair up to ``bound`` where the premise at r holds but x <= y fails."""
    check = strict_premise_holds if strict else premise_holds
    targets = list(S.enumerate_targets(bound))
    for x in S.enumerate_elements(bound):
        for y in targets:
            if not S.leq(x, y) and check(S, x, y, w, r):
                return (x, y)
    return None


def has_comparison(S: CuModel, w, r, bound: int, strict: bool = False) -> bool:
    """r-comparison restricted to elements of complexity <= bound."""
    return comparison_counterexample(S, w, r, bound, strict) is None


# -- bounded search -------------------------------------------------------------------


def default_grid(bound: int, denominator: int = 12) -> tuple[Fraction, ...]:
    return tuple(Fraction(j, denominator) for j in range(1, denominator * bound + 1))


def rc_search(S: CuModel, w, bound: int, r_grid: Sequence | None = None) -> RcResult:
    """Certified lower bound for rc(S, w) from pairs of complexity <= bound."""
    _require_full(S, w)
    if bound < 1:
        raise ValueError("bound must be positive")
    grid = tuple(sorted({Fraction(ext(r).fraction) for r in (r_grid or default_grid(bound))}))
    if not grid or grid[0] <= 0:
        raise ValueError("grid values must be positive")
    # every violating pair covers the grid up to its premise threshold
    violations = []
    targets = list(S.enumerate_targets(bound))
    for x in S.enumerate_elements(bound):
        for y in targets:
            if S.leq(x, y):
                continue
            t = premise_threshold(S, x, y, w)
            if t is not None:
                violations.append((x, y, t))
    best = None
    for r in grid:
        if any(t >= ExtScalar(r) for _, _, t in violations):
            best = r
    if best is None:
        return RcResult(ZERO, BOUNDED_SEARCH, None, bound, grid, grid[0])
    x, y, _ = next(v for v in violations if v[2] >= ExtScalar(best))
    above = [r for r in grid if r > best]
    return RcResult(
        ExtScalar(best),
        BOUNDED_SEARCH,
        Certificate(x, y, ExtScalar(best)),
        bound,
        grid,
        above[0] if above else None,
    )


def verify_certificate(S: CuModel, w, cert: Certificate) -> bool:
    return premise_holds(S, cert.x, cert.y, w, cert.r) and not S.leq(cert.x, cert.y)


def rc_range_sample(S: CuModel, bound: int) -> set[ExtScalar]:
    return {rc_exact(S, w).value for w in S.enumerate_elements(bound) if is_full(S, w)}


# -- limits along chains --------------------------------------------------------------


def rc_chain_limit(S: CuModel, chain: Chain) -> ExtScalar:
    """lim rc(S, y_n) for a chain of full elements."""
    chain.verify()
    if isinstance(chain, StableChain):
        return rc_exact(S, chain.sup()).value
    if isinstance(chain, ArithmeticChain):
        _require_full(S, chain.term(1))
        if chain.step == S.zero():
            return rc_exact(S, chain.base).value
        return S.rc_tail_limit(chain.base, chain.step)
    from .spectral import CutdownChain

    if isinstance(chain, CutdownChain):
        return ZERO
    raise ModelContractError(f"no tail law for {type(chain).__name__}")


def rc_multiple_limit(S: CuModel, chain: StableChain) -> ExtScalar:
    """lim rc(S, n*y_n) for a chain that stabilizes at a full element c.

    Eventually n*y_n = n*c, so the tail law with base 0 and step c applies
    (n*c itself need not be increasing in every model).
    """
    chain.verify()
    c = chain.sup()
    _require_full(S, c)
    return S.rc_tail_limit(S.zero(), c)
