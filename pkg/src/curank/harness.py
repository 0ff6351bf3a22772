"""Random generators, the property registry and the suite runner.

Every property draws a case from a seeded generator, checks its hypotheses
explicitly (returning ``VACUOUS`` when they fail) and then its conclusion.
A failing case is shrunk greedily: candidates are tried in a fixed order
(elements toward 0 and fewer coordinates, chains toward fewer terms,
profiles toward fewer knots and eigenvalues) and the first candidate that
still fails replaces the case.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator

from . import oscillation as osc
from .cucore import ArithmeticChain, Chain, CuModel, StableChain, capped_chain, is_full
from .errors import CuError, UnknownPropertyName
from .functionals import lambda_ideal, normalize_at, normalized_family
from .models import DirectSumModel, Idem, IdempotentModel, PerforatedModel, PointFnModel
from .radius import (
    comparison_counterexample,
    has_comparison,
    irc,
    premise_holds,
    rc_chain_limit,
    rc_exact,
    rc_multiple_limit,
    rc_search,
    rc_strict,
    verify_certificate,
)
from .rankratio import rho, rho_chain_limits, rho_normalized, rho_sampled
from .scalar import INF, ONE, ZERO, ExtScalar, ext_mul
from .spectral import (
    PLFunction,
    SpectralModel,
    SpectralProfile,
    StepFunction,
    cutdown,
    dimension_function,
    normalize,
    pl_leq_step,
    rank_function,
    smooth,
    step_leq_pl,
    trace_function,
)

VACUOUS = None
MANIFEST = Path(__file__).with_name("data") / "properties.txt"

# -- generators ---------------------------------------------------------------------

BASIC_KINDS = ("pointfn", "perforated", "idempotent", "directsum", "spectral")


def random_model(rng: random.Random, kinds: Iterable[str] = BASIC_KINDS) -> CuModel:
    kind = rng.choice(tuple(kinds))
    if kind == "pointfn":
        return PointFnModel(tuple("pqrs"[: rng.randint(1, 3)]))
    if kind == "perforated":
        return PerforatedModel(rng.randint(1, 6))
    if kind == "idempotent":
        return IdempotentModel()
    if kind == "spectral":
        return SpectralModel()
    if kind == "directsum":
        return DirectSumModel(
            random_model(rng, ("perforated", "pointfn", "idempotent")),
            random_model(rng, ("perforated", "pointfn", "idempotent")),
        )
    raise ValueError(f"unknown model kind {kind!r}")


def _grid_value(rng: random.Random, den: int = 8, lo: int = 0) -> Fraction:
    return Fraction(rng.randint(lo, den), den)


def random_pl(
    rng: random.Random, breakpoints: int = 3, floor: int = 0, zero_prob: float = 0.3
) -> PLFunction:
    inner = sorted({Fraction(rng.randint(1, 15), 16) for _ in range(rng.randint(0, breakpoints))})
    knots = [Fraction(0)] + inner + [Fraction(1)]
    values = []
    for _ in knots:
        if floor == 0 and rng.random() < zero_prob:
            values.append(Fraction(0))
        else:
            values.append(_grid_value(rng, 8, max(floor, 1)))
    return PLFunction(tuple(knots), tuple(values))


def random_profile(
    rng: random.Random,
    n: int | None = None,
    breakpoints: int = 3,
    full: bool = False,
    bounded_below: bool = False,
    normalized: bool = False,
) -> SpectralProfile:
    """Random profile; ``full`` keeps one eigenvalue positive everywhere and
    ``bounded_below`` makes every eigenvalue 0 or at least 1/4 everywhere."""
    n = n or rng.randint(1, 3)
    fs = []
    for i in range(n):
        if bounded_below:
            if i > 0 and rng.random() < 0.2:
                fs.append(PLFunction.constant(0))
            else:
                fs.append(random_pl(rng, breakpoints, floor=2))
        elif full and i == 0:
            fs.append(random_pl(rng, breakpoints, floor=1))
        else:
            fs.append(random_pl(rng, breakpoints))
    a = SpectralProfile(tuple(fs))
    if normalized:
        a = normalize(a) if any(f.max_value() > 0 for f in fs) else a
    return a


def _random_scalar(rng: random.Random, bound: int, lo: int = 0, inf_prob: float = 0.1):
    if rng.random() < inf_prob:
        return INF
    return ExtScalar(rng.randint(lo, max(lo, bound)))


def random_element(
    rng: random.Random, S: CuModel, bound: int = 12, full: bool = False, finite: bool = False
):
    inf_prob = 0.0 if finite else 0.1
    if isinstance(S, PerforatedModel):
        return _random_scalar(rng, bound, 1 if full else 0, inf_prob)
    if isinstance(S, PointFnModel):
        return tuple(_random_scalar(rng, bound, 1 if full else 0, inf_prob) for _ in S.points)
    if isinstance(S, IdempotentModel):
        if full:
            return Idem.U
        return rng.choice((Idem.ZERO, Idem.U))
    if isinstance(S, DirectSumModel):
        return (
            random_element(rng, S.left, bound, full, finite),
            random_element(rng, S.right, bound, full, finite),
        )
    if isinstance(S, SpectralModel):
        x = rank_function(random_profile(rng, full=full), 0)
        if not finite and rng.random() < inf_prob:
            x = S.infinity_times(x)
        return x
    raise TypeError(f"no generator for {S!r}")


def random_above(rng: random.Random, S: CuModel, x, bound: int = 12):
    """An element y >= x, usually x plus something small."""
    for _ in range(8):
        y = S.add(x, random_element(rng, S, bound, finite=rng.random() < 0.8))
        if S.leq(x, y):
            return y
    return S.largest()


def random_stable_chain(
    rng: random.Random, S: CuModel, full: bool = True, length: int = 4, bound: int = 8
) -> StableChain:
    terms = [random_element(rng, S, bound, full=full, finite=True)]
    for _ in range(rng.randint(0, length - 1)):
        terms.append(random_above(rng, S, terms[-1], bound))
    return StableChain(S, tuple(terms))


def parse_model_spec(text: str) -> CuModel:
    """``perforated:3``, ``pointfn:p,q``, ``idempotent``, ``spectral``,
    ``directsum:<spec>|<spec>``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind == "perforated":
        return PerforatedModel(int(arg or 2))
    if kind == "pointfn":
        return PointFnModel(tuple(p.strip() for p in (arg or "p").split(",")))
    if kind == "idempotent":
        return IdempotentModel()
    if kind == "spectral":
        return SpectralModel()
    if kind == "directsum":
        left, _, right = arg.partition("|")
        return DirectSumModel(parse_model_spec(left), parse_model_spec(right))
    raise ValueError(f"unknown model kind {kind!r}")


def generate(kind: "str | CuModel", bound: int, seed: int, what: str = "element", full: bool = False):
    """Deterministic generator: ``what`` is element, profile or chain.

    For spectral kinds (``spectral`` or ``spectral:n``) ``bound`` caps the
    number of interior knots per eigenvalue and ``n`` fixes the fiber.
    """
    rng = random.Random(seed)
    fiber = None
    if isinstance(kind, str) and kind.startswith("spectral"):
        _, _, arg = kind.partition(":")
        fiber = int(arg) if arg else None
        S: CuModel = SpectralModel()
    else:
        S = parse_model_spec(kind) if isinstance(kind, str) else kind
    if isinstance(S, SpectralModel):
        prof = random_profile(rng, n=fiber, breakpoints=bound, full=full)
        if what == "profile":
            return prof
        if what == "element":
            return rank_function(prof, 0)
    if what == "element":
        return random_element(rng, S, bound, full=full)
    if what == "chain":
        return random_stable_chain(rng, S, full=full, bound=bound)
    raise ValueError(f"cannot generate {what!r} for {kind!r}")


# -- registry -------------------------------------------------------------------------


@dataclass(frozen=True)
class Property:
    name: str
    summary: str
    generate: Callable[[random.Random], dict]
    check: Callable[[dict], "bool | None"]


REGISTRY: dict[str, Property] = {}


def register(name: str, summary: str, gen: Callable[[random.Random], dict]):
    def deco(check):
        REGISTRY[name] = Property(name, summary, gen, check)
        return check

    return deco


def manifest_names() -> list[str]:
    lines = MANIFEST.read_text().splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]


def _div(v: ExtScalar, n: int) -> ExtScalar:
    return ext_mul(v, ExtScalar(Fraction(1, n)))


def _has_functionals(S, z) -> bool:
    return not normalized_family(S, z).empty


# ---- generator helpers shared by several properties

ANY = BASIC_KINDS
NO_SPECTRAL = ("pointfn", "perforated", "idempotent", "directsum")
RC_KINDS = ("pointfn", "perforated", "idempotent", "directsum", "spectral")


def _gen_xyn(kinds=ANY, nmax=10):
    def gen(rng):
        S = random_model(rng, kinds)
        return {
            "S": S,
            "x": random_element(rng, S),
            "y": random_element(rng, S),
            "n": rng.randint(1, nmax),
        }

    return gen


def _gen_triple_ordered(kinds=ANY, full_prob=0.5):
    def gen(rng):
        S = random_model(rng, kinds)
        x = random_element(rng, S, full=rng.random() < full_prob)
        y = random_above(rng, S, x)
        z = random_above(rng, S, y)
        return {"S": S, "x": x, "y": y, "z": z}

    return gen


def _gen_random_triple(kinds=ANY):
    def gen(rng):
        S = random_model(rng, kinds)
        return {"S": S, "x": random_element(rng, S), "y": random_element(rng, S), "z": random_element(rng, S)}

    return gen


def _gen_full_pair(kinds=ANY, inf_prob=0.3, ordered=False):
    def gen(rng):
        S = random_model(rng, kinds)
        x = random_element(rng, S, full=True)
        if ordered:
            y = random_above(rng, S, x)
        else:
            y = random_element(rng, S, full=True)
        if rng.random() < inf_prob:
            y = S.infinity_times(y)
        if rng.random() < inf_prob / 2:
            x = S.infinity_times(x)
        return {"S": S, "x": x, "y": y}

    return gen


# ---- rank ratio


@register("rho.homogeneity", "rho(x, n*y) = rho(x, y)/n", _gen_xyn())
def _(c):
    S = c["S"]
    return rho(S, c["x"], S.multiple(c["n"], c["y"])).value == _div(rho(S, c["x"], c["y"]).value, c["n"])


@register("rho.mixed_monotonicity", "x <= y <= z gives rho(z,y) <= rho(z,x) and rho(x,z) <= rho(y,z)", _gen_triple_ordered())
def _(c):
    S, x, y, z = c["S"], c["x"], c["y"], c["z"]
    if not (S.leq(x, y) and S.leq(y, z)):
        return VACUOUS
    return rho(S, z, y).value <= rho(S, z, x).value and rho(S, x, z).value <= rho(S, y, z).value


@register("rho.additivity", "rho(x+y, z) >= max and rho(z, x+y) <= min of the one-term ratios", _gen_random_triple())
def _(c):
    S, x, y, z = c["S"], c["x"], c["y"], c["z"]
    s = S.add(x, y)
    return rho(S, s, z).value >= max(rho(S, x, z).value, rho(S, y, z).value) and rho(
        S, z, s
    ).value <= min(rho(S, z, x).value, rho(S, z, y).value)


@register("rho.order_bounds", "bounds on rho(x, y) and rho(y, x) for x <= y", _gen_triple_ordered(full_prob=0.7))
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not S.leq(x, y):
        return VACUOUS
    fwd, bwd = rho(S, x, y).value, rho(S, y, x).value
    ok = fwd <= ONE
    if x == S.zero() and y != S.zero():
        ok &= fwd.is_zero and bwd.is_infinite
    if is_full(S, x) and _has_functionals(S, y):
        ok &= not fwd.is_zero
    if _has_functionals(S, x):
        ok &= bwd >= ONE
    if bwd == ONE:
        ok &= all(r.values[0] == r.values[1] for r in S.ray_table(x, y))
    if is_full(S, x) and _has_functionals(S, x) and S.compactly_contained(y, S.infinity_times(x)):
        k = 1
        while not S.leq(y, S.multiple(k, x)):
            k += 1
        ok &= ONE <= bwd <= ExtScalar(k)
    return ok


@register("rho.zero_iff_empty_family", "for full x, y: rho(x, y) = 0 iff no functional is normalized at y", _gen_full_pair())
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (is_full(S, x) and is_full(S, y)):
        return VACUOUS
    return rho(S, x, y).value.is_zero == (not _has_functionals(S, y))


@register("rho.zero_dichotomy", "full x, y with rho(x, y) = 0: rho(y, x) is 0 or inf", _gen_full_pair(inf_prob=0.7))
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (is_full(S, x) and is_full(S, y)) or not rho(S, x, y).value.is_zero:
        return VACUOUS
    back = rho(S, y, x).value
    return back == (INF if _has_functionals(S, x) else ZERO)


def _gen_normalized(kinds):
    def gen(rng):
        S = random_model(rng, kinds)
        return {
            "S": S,
            "z": random_element(rng, S, full=True, finite=True),
            "x": random_element(rng, S, finite=rng.random() < 0.9),
            "y": random_element(rng, S, finite=rng.random() < 0.9),
        }

    return gen


def _normalized_ok(S, z, x, y) -> bool:
    if not is_full(S, z) or not _has_functionals(S, z):
        return False
    zz = S.infinity_times(z)
    return S.compactly_contained(x, zz) and S.compactly_contained(y, zz)


@register("rho.normalized_below", "rho_z(x, y) <= rho(x, y)", _gen_normalized(NO_SPECTRAL + ("spectral",)))
def _(c):
    S, z, x, y = c["S"], c["z"], c["x"], c["y"]
    if not _normalized_ok(S, z, x, y):
        return VACUOUS
    return rho_normalized(S, z, x, y).value <= rho(S, x, y).value


def _gen_order_by_rays_full(rng):
    S = random_model(rng, ("pointfn", "spectral"))
    return {
        "S": S,
        "z": random_element(rng, S, full=True, finite=True),
        "x": random_element(rng, S, full=True, finite=True),
        "y": random_element(rng, S, full=True, finite=True),
    }


@register("rho.normalized_equals", "order-by-rays models, full finite x, y: rho = rho_z, finite", _gen_order_by_rays_full)
def _(c):
    S, z, x, y = c["S"], c["z"], c["x"], c["y"]
    if not (is_full(S, x) and is_full(S, y) and _normalized_ok(S, z, x, y)):
        return VACUOUS
    exact = rho(S, x, y).value
    return exact == rho_normalized(S, z, x, y).value and exact.is_finite


def _gen_sampled(rng):
    S = random_model(rng)
    return {
        "S": S,
        "x": random_element(rng, S),
        "y": random_element(rng, S),
        "samples": rng.randint(1, 40),
        "seed": rng.randint(0, 10**6),
    }


@register("rho.sampled_below_exact", "random functionals never exceed the exact rho", _gen_sampled)
def _(c):
    S = c["S"]
    return rho_sampled(S, c["x"], c["y"], c["samples"], c["seed"]).value <= rho(S, c["x"], c["y"]).value


def _gen_chain_target(kinds=ANY, full_prob=0.7):
    def gen(rng):
        S = random_model(rng, kinds)
        full = rng.random() < full_prob
        if isinstance(S, PerforatedModel) and rng.random() < 0.5:
            base = ExtScalar(rng.randint(1, 4))
            steps = rng.randint(2, 6)
            cap = base + ExtScalar(steps * S.k)
            chain: Chain = capped_chain(S, base, ExtScalar(S.k), cap)
            x = cap if rng.random() < 0.6 else random_above(rng, S, cap)
        elif isinstance(S, (PointFnModel, SpectralModel)) and rng.random() < 0.3:
            base = random_element(rng, S, full=full, finite=True)
            step = random_element(rng, S, finite=True)
            chain = ArithmeticChain(S, base, step)
            x = chain.sup() if rng.random() < 0.5 else S.largest()
        else:
            chain = random_stable_chain(rng, S, full=full)
            x = chain.sup() if rng.random() < 0.5 else random_above(rng, S, chain.sup())
        return {"S": S, "chain": chain, "x": x}

    return gen


def _chain_ok(S, chain, x) -> bool:
    try:
        chain.verify()
    except CuError:
        return False
    horizon = _horizon(chain)
    return all(S.leq(chain.term(n), x) for n in range(1, horizon + 1))


def _horizon(chain) -> int:
    if isinstance(chain, StableChain):
        return chain.stable_from + 2
    return 10


@register("rho.chain_limits", "along x_n <= x: rho(x_n, x) rises to a limit <= 1, rho(x, x_n) falls", _gen_chain_target())
def _(c):
    S, chain, x = c["S"], c["chain"], c["x"]
    if not _chain_ok(S, chain, x):
        return VACUOUS
    h = _horizon(chain)
    fwd = [rho(S, chain.term(n), x).value for n in range(1, h + 1)]
    bwd = [rho(S, x, chain.term(n)).value for n in range(1, h + 1)]
    ok = all(a <= b for a, b in zip(fwd, fwd[1:])) and fwd[-1] <= ONE
    ok &= all(a >= b for a, b in zip(bwd, bwd[1:]))
    lim = rho_chain_limits(S, chain, x)
    ok &= all(v <= lim.terms_over_x for v in fwd) and lim.terms_over_x <= ONE
    ok &= all(v >= lim.x_over_terms for v in bwd)
    if isinstance(chain, StableChain):
        ok &= lim.terms_over_x == fwd[-1] and lim.x_over_terms == bwd[-1]
    if all(is_full(S, chain.term(n)) for n in range(1, h + 1)) and _has_functionals(S, x):
        ok &= not lim.terms_over_x.is_zero and lim.x_over_terms >= ONE
    return ok


# ---- radius of comparison


def _gen_rc_full_pair(kinds=RC_KINDS, ordered=True, eta=False):
    def gen(rng):
        S = random_model(rng, kinds)
        x = random_element(rng, S, full=True)
        y = random_above(rng, S, x) if ordered else random_element(rng, S, full=True)
        return {"S": S, "x": x, "y": y}

    return gen


@register("rc.scaling_bound", "x <= eta*y on rays gives rc(y)/eta <= rc(x)", _gen_rc_full_pair(ordered=False))
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (is_full(S, x) and is_full(S, y)):
        return VACUOUS
    eta = rho(S, x, y).value
    if eta.is_zero or eta.is_infinite:
        return VACUOUS
    return ext_mul(eta.reciprocal(), rc_exact(S, y).value) <= rc_exact(S, x).value


@register("rc.antitone", "x <= y full gives rc(y) <= rc(x)", _gen_rc_full_pair())
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (S.leq(x, y) and is_full(S, x)):
        return VACUOUS
    return rc_exact(S, y).value <= rc_exact(S, x).value


def _gen_rc_multiple(rng):
    S = random_model(rng, RC_KINDS)
    return {"S": S, "x": random_element(rng, S, full=True), "n": rng.randint(1, 6)}


@register("rc.homogeneity", "rc(n*x) = rc(x)/n", _gen_rc_multiple)
def _(c):
    S, x, n = c["S"], c["x"], c["n"]
    if not is_full(S, x):
        return VACUOUS
    return rc_exact(S, S.multiple(n, x)).value == _div(rc_exact(S, x).value, n)


@register("rc.subadditive", "rc(x + y) <= min(rc(x), rc(y))", _gen_rc_full_pair(ordered=False))
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (is_full(S, x) and is_full(S, y)):
        return VACUOUS
    return rc_exact(S, S.add(x, y)).value <= min(rc_exact(S, x).value, rc_exact(S, y).value)


def _gen_premise(rng):
    S = random_model(rng, NO_SPECTRAL + ("spectral",))
    e = random_element(rng, S, full=True, finite=True)
    x = random_element(rng, S, finite=rng.random() < 0.8)
    r = Fraction(rng.randint(1, 8), 4)
    m = -(-r.numerator // r.denominator)
    y = S.add(S.add(x, S.multiple(m, e)), random_element(rng, S, bound=3))
    if rng.random() < 0.2:
        y = random_element(rng, S)
    return {"S": S, "e": e, "x": x, "y": y, "r": r}


@register("rc.premise_forces_full", "x + r*e <= y on functionals with e full forces y full", _gen_premise)
def _(c):
    S, e, x, y, r = c["S"], c["e"], c["x"], c["y"], c["r"]
    if not is_full(S, e) or not premise_holds(S, x, y, e, r):
        return VACUOUS
    return is_full(S, y) and lambda_ideal(S, y)(e).is_zero


def _gen_sandwich(kinds=("perforated", "directsum")):
    def gen(rng):
        S = random_model(rng, kinds)
        x = random_element(rng, S, full=True, finite=rng.random() < 0.8)
        y = random_above(rng, S, x)
        return {"S": S, "x": x, "y": y}

    return gen


def sandwich_holds(S, x, y) -> "bool | None":
    """Two-sided bound of rc(x) by rc(y) through the rank ratios, or None
    when the hypotheses fail."""
    if not (is_full(S, x) and is_full(S, y) and S.leq(x, y) and _has_functionals(S, y)):
        return VACUOUS
    rx, ry = rc_exact(S, x).value, rc_exact(S, y).value
    ok = ext_mul(rho(S, x, y).value.reciprocal(), ry) <= rx
    back = rho(S, y, x).value
    if back.is_finite:
        ok &= rx <= ext_mul(back, ry)
    return ok


@register("rc.sandwich", "rc(y)/rho(x,y) <= rc(x) <= rho(y,x)*rc(y) for full x <= y", _gen_sandwich())
def _(c):
    return sandwich_holds(c["S"], c["x"], c["y"])


def _gen_rc_chain(rng):
    S = random_model(rng, ("perforated", "directsum", "pointfn", "idempotent"))
    if isinstance(S, PerforatedModel) and rng.random() < 0.6:
        M = rng.randint(1, 8)
        y = ExtScalar(1 + M * S.k)
        chain = capped_chain(S, ONE, ExtScalar(S.k), y)
        return {"S": S, "chain": chain, "y": y}
    chain = random_stable_chain(rng, S, full=True)
    y = chain.sup() if rng.random() < 0.6 else random_above(rng, S, chain.sup())
    return {"S": S, "chain": chain, "y": y}


def _full_chain_ok(S, chain, y) -> bool:
    if not _chain_ok(S, chain, y) or not is_full(S, y):
        return False
    return all(is_full(S, chain.term(n)) for n in range(1, _horizon(chain) + 1))


@register("rc.chain_sandwich", "limits of rc along a chain are squeezed by the rank-ratio limits", _gen_rc_chain)
def _(c):
    S, chain, y = c["S"], c["chain"], c["y"]
    if not _full_chain_ok(S, chain, y) or not _has_functionals(S, y):
        return VACUOUS
    lim = rho_chain_limits(S, chain, y)
    if lim.x_over_terms.is_infinite:
        return VACUOUS
    lim_rc, ry = rc_chain_limit(S, chain), rc_exact(S, y).value
    return ext_mul(lim.terms_over_x.reciprocal(), ry) <= lim_rc <= ext_mul(lim.x_over_terms, ry)


@register("rc.chain_continuity", "lim rho(y, y_n) = 1 gives lim rc(y_n) = rc(y)", _gen_rc_chain)
def _(c):
    S, chain, y = c["S"], c["chain"], c["y"]
    if not _full_chain_ok(S, chain, y):
        return VACUOUS
    if rho_chain_limits(S, chain, y).x_over_terms != ONE:
        return VACUOUS
    return rc_chain_limit(S, chain) == rc_exact(S, y).value


@register("rc.zero_ratio", "rho(x, y) = 0 forces rc(y) = 0 and equal radii when both ratios vanish", _gen_full_pair(RC_KINDS, inf_prob=0.7))
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (is_full(S, x) and is_full(S, y)) or not rho(S, x, y).value.is_zero:
        return VACUOUS
    rx, ry = rc_exact(S, x).value, rc_exact(S, y).value
    ok = all(ry <= rc_exact(S, S.multiple(n, x)).value for n in range(1, 6))
    if rx.is_finite:
        ok &= ry.is_zero
    if rho(S, y, x).value.is_zero:
        ok &= rx == ry
    return ok


def _gen_infinite_ratio(rng):
    S = random_model(rng, ("perforated", "pointfn", "directsum"))
    chain = random_stable_chain(rng, S, full=True)
    y = S.infinity_times(chain.sup()) if rng.random() < 0.85 else random_above(rng, S, chain.sup())
    return {"S": S, "chain": chain, "y": y}


@register("rc.infinite_ratio_limit", "no functional at y and rho(y, y_n) -> inf give rc(n*y_n) -> 0 = rc(y)", _gen_infinite_ratio)
def _(c):
    S, chain, y = c["S"], c["chain"], c["y"]
    if not _full_chain_ok(S, chain, y) or _has_functionals(S, y):
        return VACUOUS
    if not rho_chain_limits(S, chain, y).x_over_terms.is_infinite:
        return VACUOUS
    terms = [chain.term(n) for n in range(1, _horizon(chain) + 1)]
    ok = all(_has_functionals(S, t) for t in terms)
    if any(rc_exact(S, t).value.is_finite for t in terms):
        ok &= rc_multiple_limit(S, chain) == ZERO == rc_exact(S, y).value
    return ok


def _gen_zero_ratio_chain(rng):
    S = random_model(rng, ("perforated", "pointfn", "idempotent", "directsum"))
    chain = random_stable_chain(rng, S, full=True)
    if rng.random() < 0.8:
        top = S.infinity_times(chain.sup())
        chain = StableChain(S, chain.prefix + (top,))
    return {"S": S, "chain": chain, "y": chain.sup()}


@register("rc.zero_ratio_limit", "lim rho(y, y_n) = 0: eventually no functionals, and rc converges to rc(y)", _gen_zero_ratio_chain)
def _(c):
    S, chain, y = c["S"], c["chain"], c["y"]
    if not _full_chain_ok(S, chain, y):
        return VACUOUS
    if not rho_chain_limits(S, chain, y).x_over_terms.is_zero:
        return VACUOUS
    tail = chain.term(_horizon(chain))
    return (
        not _has_functionals(S, y)
        and not _has_functionals(S, tail)
        and rc_chain_limit(S, chain) == rc_exact(S, y).value
    )


def _gen_irc(rng):
    S = random_model(rng, RC_KINDS)
    x = random_element(rng, S, full=True)
    if isinstance(S, PerforatedModel) and rng.random() < 0.5:
        M = rng.randint(1, 6)
        chain: Chain = capped_chain(S, ONE, ExtScalar(S.k), ExtScalar(1 + M * S.k))
    else:
        chain = random_stable_chain(rng, S, full=True)
    return {"S": S, "x": x, "y": random_above(rng, S, x), "n": rng.randint(1, 6), "chain": chain}


@register("irc.properties", "Irc is monotone, homogeneous and sup-continuous along ratio-1 chains", _gen_irc)
def _(c):
    S, x, y, n, chain = c["S"], c["x"], c["y"], c["n"], c["chain"]
    if not (is_full(S, x) and S.leq(x, y)):
        return VACUOUS
    ok = irc(S, x) <= irc(S, y)
    ok &= irc(S, S.multiple(n, x)) == ext_mul(ExtScalar(n), irc(S, x))
    top = chain.sup()
    if _full_chain_ok(S, chain, top) and _has_functionals(S, top):
        if rho_chain_limits(S, chain, top).x_over_terms == ONE:
            values = [irc(S, chain.term(k)) for k in range(1, _horizon(chain) + 1)]
            ok &= max(values) == irc(S, top)
    return ok


def _gen_search(rng):
    S = random_model(rng, ("perforated", "pointfn", "idempotent", "directsum", "spectral"))
    if isinstance(S, DirectSumModel):
        # keep the enumeration small: one-coordinate components only
        S = DirectSumModel(
            random_model(rng, ("perforated", "idempotent")), PointFnModel(("p",))
        )
    if isinstance(S, SpectralModel):
        bound = 1
    elif isinstance(S, DirectSumModel) or (isinstance(S, PointFnModel) and len(S.points) > 1):
        bound = 3
    else:
        bound = rng.randint(3, 10)
    fulls = [w for w in S.enumerate_elements(bound) if is_full(S, w)]
    return {"S": S, "w": rng.choice(fulls), "bound": bound}


@register("rc.search_sound", "bounded-search certificates re-verify and never exceed the exact radius", _gen_search)
def _(c):
    S, w, bound = c["S"], c["w"], c["bound"]
    res = rc_search(S, w, bound)
    ok = res.value <= rc_exact(S, w).value
    if res.certificate is not None:
        ok &= verify_certificate(S, w, res.certificate)
    return ok


def _gen_strict(rng):
    S = random_model(rng, ("perforated", "pointfn", "spectral", "directsum"))
    if isinstance(S, DirectSumModel) and rng.random() < 0.7:
        S = DirectSumModel(PerforatedModel(rng.randint(1, 5)), PointFnModel(("p",)))
    return {"S": S, "w": random_element(rng, S, full=True, finite=True)}


@register("rc.strict_equals_exact", "strict normalized radius equals rc on stably finite models", _gen_strict)
def _(c):
    S, w = c["S"], c["w"]
    if not is_full(S, w) or not _has_functionals(S, w):
        return VACUOUS
    if isinstance(S, DirectSumModel) and any(
        isinstance(p, IdempotentModel) for p in S.parts()
    ):
        return VACUOUS
    value = rc_strict(S, w).value
    ok = value == rc_exact(S, w).value
    if isinstance(S, PerforatedModel):
        bound = S.k + 2
        ok &= has_comparison(S, w, value.fraction, bound, strict=True) if not value.is_zero else True
        below = value.fraction - Fraction(1, 12)
        if below > 0:
            ok &= not has_comparison(S, w, below, bound, strict=True)
    return ok


def _gen_relations(rng):
    k = rng.randint(1, 6)
    S = PerforatedModel(k)
    return {"S": S, "w": ExtScalar(rng.randint(1, 4)), "r": Fraction(rng.randint(1, 72), 12)}


@register("rc.comparison_relations", "non-strict at r gives strict at r; strict at r gives non-strict at r + 1/12", _gen_relations)
def _(c):
    S, w, r = c["S"], c["w"], c["r"]
    bound = S.k + 3
    nonstrict = has_comparison(S, w, r, bound)
    strict = has_comparison(S, w, r, bound, strict=True)
    if not (nonstrict or strict):
        return VACUOUS
    ok = True
    if nonstrict:
        ok &= strict
    if strict:
        ok &= has_comparison(S, w, r + Fraction(1, 12), bound)
    return ok


def _gen_purely_infinite(rng):
    return {"S": IdempotentModel(), "r": Fraction(rng.randint(1, 48), 12)}


@register("rc.purely_infinite", "the idempotent model has r-comparison for every r", _gen_purely_infinite)
def _(c):
    S, r = c["S"], c["r"]
    return rc_exact(S, Idem.U).value.is_zero and comparison_counterexample(S, Idem.U, r, 1) is None


# ---- functionals and fullness


@register("functional.full_witness", "x <= y full with functionals at y gives functionals at x", _gen_full_pair(ordered=True, inf_prob=0.1))
def _(c):
    S, x, y = c["S"], c["x"], c["y"]
    if not (is_full(S, x) and S.leq(x, y)):
        return VACUOUS
    fam = normalized_family(S, y, x)
    if fam.empty:
        return VACUOUS
    lam = normalize_at(fam.vertices()[0], x)
    return lam(x) == ONE and not normalized_family(S, x).empty


def _gen_positive(rng):
    S = random_model(rng, ("pointfn", "spectral"))
    return {"S": S, "v": random_element(rng, S, full=rng.random() < 0.5)}


@register("models.full_iff_positive", "on order-by-rays models fullness is positivity on the unit-normalized family", _gen_positive)
def _(c):
    S, v = c["S"], c["v"]
    unit = S.make_element([1] * len(S.points)) if isinstance(S, PointFnModel) else StepFunction.constant(1)
    values = [r.values[1] for r in S.ray_table(unit, v)]
    return is_full(S, v) == (min(values) > ZERO)


# ---- oscillation


def _gen_profile(full: bool, normalized: bool):
    def gen(rng):
        return {
            "a": random_profile(
                rng,
                full=full,
                bounded_below=rng.random() < 0.3,
                normalized=normalized,
            )
        }

    return gen


@register("osc.omega_iff_uniform", "omega vanishes iff cutdown dimensions converge uniformly", _gen_profile(False, False))
def _(c):
    a = c["a"]
    return osc.omega(a).is_zero == (osc.uniform_defect(a).value == 0)


@register("osc.contrank_agreement", "the four continuity conditions agree on full normalized profiles", _gen_profile(True, True))
def _(c):
    a = c["a"]
    if rank_function(a, 0).min_value() < 1:
        return VACUOUS
    return osc.contrank_check(a, strict=False).agree


def _gen_profile_eps(rng):
    return {"a": random_profile(rng), "eps": rng.choice((Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)))}


@register("osc.trace_chain", "trace(b) <= dim(b) <= trace(b') <= dim(b') for nested smoothings", _gen_profile_eps)
def _(c):
    a, eps = c["a"], c["eps"]
    b, b2 = smooth(a, eps), smooth(a, eps / 4)
    db, db2 = dimension_function(b), dimension_function(b2)
    return (
        pl_leq_step(trace_function(b), db)
        and step_leq_pl(db, trace_function(b2))
        and pl_leq_step(trace_function(b2), db2)
    )


@register("spectral.smooth_vs_cutdown", "rank of the 2eps-smoothing equals rank of the eps-cutdown", _gen_profile_eps)
def _(c):
    a, eps = c["a"], c["eps"]
    return rank_function(smooth(a, 2 * eps), 0) == rank_function(cutdown(a, eps), 0)


@register("spectral.dirac_sandwich", "trace of the eps-smoothing <= dim of the delta-cutdown <= trace of the delta-smoothing", _gen_profile_eps)
def _(c):
    a, eps = c["a"], c["eps"]
    delta = eps / 8
    d = dimension_function(cutdown(a, delta))
    return pl_leq_step(trace_function(smooth(a, eps)), d) and step_leq_pl(
        d, trace_function(smooth(a, delta))
    )


# -- running ------------------------------------------------------------------------


@dataclass
class PropertyResult:
    name: str
    passed: int = 0
    failed: int = 0
    vacuous: int = 0
    floor: int = 50
    counterexample: str | None = None
    error: str | None = None
    seconds: float = 0.0

    @property
    def non_vacuous(self) -> int:
        return self.passed + self.failed

    @property
    def floor_met(self) -> bool:
        return self.non_vacuous >= self.floor

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.floor_met

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "vacuous": self.vacuous,
            "floor": self.floor,
            "floor_met": self.floor_met,
            "counterexample": self.counterexample,
            "error": self.error,
        }


@dataclass
class SuiteReport:
    seed: int
    cases: int
    results: list[PropertyResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_json(self) -> str:
        body = {
            "seed": self.seed,
            "cases": self.cases,
            "ok": self.ok,
            "properties": [r.as_dict() for r in self.results],
        }
        return json.dumps(body, indent=2, sort_keys=True)

    def to_text(self) -> str:
        width = max((len(r.name) for r in self.results), default=10)
        lines = [f"{'property':<{width}}  pass  fail  vacuous  status"]
        for r in self.results:
            status = "ok" if r.ok else ("FAIL" if r.failed else "FLOOR")
            lines.append(
                f"{r.name:<{width}}  {r.passed:>4}  {r.failed:>4}  {r.vacuous:>7}  {status}"
            )
            if r.counterexample:
                lines.append(f"    counterexample: {r.counterexample}")
            if r.error:
                lines.append(f"    error: {r.error}")
        return "\n".join(lines)


def evaluate(prop: Property, case: dict) -> tuple["bool | None", str | None]:
    try:
        out = prop.check(case)
    except Exception as exc:  # a crash on a generated case counts as a failure
        return False, f"{type(exc).__name__}: {exc}"
    if out is VACUOUS:
        return VACUOUS, None
    return bool(out), None


def run_property(prop: Property, cases: int, seed: int, floor: int = 50) -> PropertyResult:
    rng = random.Random(f"{seed}:{prop.name}")
    res = PropertyResult(prop.name, floor=floor)
    start = time.perf_counter()
    for _ in range(cases):
        case = prop.generate(rng)
        out, err = evaluate(prop, case)
        if out is VACUOUS:
            res.vacuous += 1
        elif out:
            res.passed += 1
        else:
            res.failed += 1
            if res.counterexample is None:
                small = shrink_case(prop, case)
                res.counterexample = format_case(small)
                res.error = evaluate(prop, small)[1] or err
    res.seconds = time.perf_counter() - start
    return res


def run_suite(
    names: Iterable[str] | None = None, cases: int = 200, seed: int = 0, floor: int = 50
) -> SuiteReport:
    selected = list(REGISTRY) if names is None else list(names)
    for n in selected:
        if n not in REGISTRY:
            raise UnknownPropertyName(n)
    report = SuiteReport(seed, cases)
    for n in selected:
        report.results.append(run_property(REGISTRY[n], cases, seed, floor))
    return report


# -- shrinking ------------------------------------------------------------------------


def _shrink_scalar(v: ExtScalar) -> list[ExtScalar]:
    if v.is_infinite:
        return [ZERO, ONE]
    n = int(v.fraction)
    return [ExtScalar(m) for m in dict.fromkeys((0, n // 2, n - 1)) if 0 <= m < n]


def shrink_element(S: CuModel, x) -> Iterator[Any]:
    if isinstance(S, PerforatedModel):
        yield from _shrink_scalar(x)
    elif isinstance(S, PointFnModel):
        for i, v in enumerate(x):
            for s in _shrink_scalar(v):
                yield x[:i] + (s,) + x[i + 1 :]
    elif isinstance(S, IdempotentModel):
        if x is Idem.U:
            yield Idem.ZERO
    elif isinstance(S, DirectSumModel):
        for a in shrink_element(S.left, x[0]):
            yield (a, x[1])
        for b in shrink_element(S.right, x[1]):
            yield (x[0], b)
    elif isinstance(S, SpectralModel):
        if not x.is_zero():
            yield S.zero()
        for j in range(1, len(x.breakpoints) - 1):
            bps = x.breakpoints[:j] + x.breakpoints[j + 1 :]
            merged = min(x.interval_values[j - 1], x.interval_values[j])
            iv = x.interval_values[: j - 1] + (merged,) + x.interval_values[j + 1 :]
            pv = list(x.point_values[:j] + x.point_values[j + 1 :])
            pv[j - 1] = min(pv[j - 1], merged)
            pv[j] = min(pv[j], merged)
            yield StepFunction(bps, tuple(pv), iv)


def _shrink_profile(a: SpectralProfile) -> Iterator[SpectralProfile]:
    fs = a.eigenvalues
    for i in range(len(fs)):
        if len(fs) > 1:
            yield SpectralProfile(fs[:i] + fs[i + 1 :])
    for i, f in enumerate(fs):
        for j in range(1, len(f.knots) - 1):
            g = PLFunction(f.knots[:j] + f.knots[j + 1 :], f.values[:j] + f.values[j + 1 :])
            yield SpectralProfile(fs[:i] + (g,) + fs[i + 1 :])


def shrink_value(S: CuModel | None, v) -> Iterator[Any]:
    if isinstance(v, bool):
        return
    if isinstance(v, int):
        for m in dict.fromkeys((1, v // 2, v - 1)):
            if 1 <= m < v:
                yield m
    elif isinstance(v, SpectralProfile):
        yield from _shrink_profile(v)
    elif isinstance(v, StableChain):
        if len(v.prefix) > 1:
            yield StableChain(v.model, v.prefix[1:])
            yield StableChain(v.model, v.prefix[:-2] + v.prefix[-1:])
    elif isinstance(v, (Fraction, Chain, CuModel)):
        return
    elif S is not None and S.contains(v):
        yield from shrink_element(S, v)


def shrink_case(prop: Property, case: dict, max_steps: int = 200) -> dict:
    current = dict(case)
    for _ in range(max_steps):
        improved = False
        for key in sorted(current):
            for cand in shrink_value(current.get("S"), current[key]):
                trial = dict(current)
                trial[key] = cand
                if evaluate(prop, trial)[0] is False:
                    current, improved = trial, True
                    break
            if improved:
                break
        if not improved:
            break
    return current


def format_value(S: CuModel | None, v) -> str:
    if isinstance(v, CuModel):
        return v.describe()
    if isinstance(v, StableChain):
        return "chain[" + ", ".join(v.model.format_element(t) for t in v.prefix) + "]"
    if isinstance(v, ArithmeticChain):
        return f"chain[{v.model.format_element(v.base)} + n*{v.model.format_element(v.step)}]"
    if isinstance(v, SpectralProfile):
        return "profile(" + str(v) + ")"
    if S is not None and not isinstance(v, (int, Fraction)) and S.contains(v):
        return S.format_element(v)
    return str(v)


def format_case(case: dict) -> str:
    S = case.get("S")
    return ", ".join(f"{k}={format_value(S, case[k])}" for k in sorted(case))
