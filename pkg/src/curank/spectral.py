"""Symbolic model of diagonal elements over [0, 1].

A profile is a tuple of continuous piecewise-linear eigenvalue functions
with rational knots.  Its class in the semigroup is the rank function
t -> #{i : f_i(t) > 0}, an integer-valued lower semicontinuous step function;
order and addition are pointwise on those step functions.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .cucore import Chain, CuModel, Ray
from .errors import MalformedPayload
from .models import split_top, strip_brackets
from .scalar import INF, ONE, ZERO, ExtScalar, ext

Q = Fraction


def _q(v) -> Fraction:
    if isinstance(v, ExtScalar):
        return v.fraction
    return Fraction(v)


# -- piecewise-linear functions ---------------------------------------------------


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on [0, 1]."""

    knots: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        knots = tuple(Fraction(t) for t in self.knots)
        values = tuple(Fraction(v) for v in self.values)
        if len(knots) != len(values) or len(knots) < 2:
            raise MalformedPayload("need at least two (knot, value) pairs")
        if knots[0] != 0 or knots[-1] != 1:
            raise MalformedPayload("knots must start at 0 and end at 1")
        if any(a >= b for a, b in zip(knots, knots[1:])):
            raise MalformedPayload("knots must be strictly increasing")
        # drop interior knots where the slope does not change
        kk, vv = [knots[0]], [values[0]]
        for i in range(1, len(knots) - 1):
            s_left = (values[i] - vv[-1]) / (knots[i] - kk[-1])
            s_right = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i])
            if s_left != s_right:
                kk.append(knots[i])
                vv.append(values[i])
        kk.append(knots[-1])
        vv.append(values[-1])
        object.__setattr__(self, "knots", tuple(kk))
        object.__setattr__(self, "values", tuple(vv))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "PLFunction":
        pairs = sorted((Fraction(t), Fraction(v)) for t, v in pairs)
        if len(pairs) == 1:
            raise MalformedPayload("a single pair does not cover [0, 1]")
        return cls(tuple(t for t, _ in pairs), tuple(v for _, v in pairs))

    @classmethod
    def constant(cls, c) -> "PLFunction":
        c = Fraction(c)
        return cls((Q(0), Q(1)), (c, c))

    @classmethod
    def identity(cls) -> "PLFunction":
        return cls((Q(0), Q(1)), (Q(0), Q(1)))

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        if t < 0 or t > 1:
            raise ValueError(f"{t} outside [0, 1]")
        j = bisect.bisect_right(self.knots, t) - 1
        if j >= len(self.knots) - 1:
            return self.values[-1]
        t0, t1 = self.knots[j], self.knots[j + 1]
        v0, v1 = self.values[j], self.values[j + 1]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def segments(self) -> Iterator[tuple[Fraction, Fraction, Fraction, Fraction]]:
        for j in range(len(self.knots) - 1):
            yield self.knots[j], self.knots[j + 1], self.values[j], self.values[j + 1]

    def crossings(self, level) -> list[Fraction]:
        """Points strictly inside segments where the function passes ``level``."""
        c = Fraction(level)
        out = []
        for t0, t1, v0, v1 in self.segments():
            if min(v0, v1) < c < max(v0, v1):
                out.append(t0 + (c - v0) * (t1 - t0) / (v1 - v0))
        return out

    def compose(self, g: "PLFunction | ValueMap") -> "PLFunction":
        """t -> g(f(t)) for a piecewise-linear map g of the value axis."""
        knots = set(self.knots)
        for c in g.knots:
            knots.update(self.crossings(c))
        ordered = sorted(knots)
        return PLFunction(tuple(ordered), tuple(g(self(t)) for t in ordered))

    def max_value(self) -> Fraction:
        return max(self.values)

    def min_value(self) -> Fraction:
        return min(self.values)

    def scaled(self, c) -> "PLFunction":
        c = Fraction(c)
        return PLFunction(self.knots, tuple(c * v for v in self.values))

    def __str__(self) -> str:
        return ", ".join(f"{t}:{v}" for t, v in zip(self.knots, self.values))


@dataclass(frozen=True)
class ValueMap:
    """Piecewise-linear map on [0, inf), constant after its last knot."""

    knots: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __call__(self, v) -> Fraction:
        v = Fraction(v)
        if v >= self.knots[-1]:
            return self.values[-1]
        j = bisect.bisect_right(self.knots, v) - 1
        t0, t1 = self.knots[j], self.knots[j + 1]
        v0, v1 = self.values[j], self.values[j + 1]
        return v0 + (v1 - v0) * (v - t0) / (t1 - t0)


def _value_map(points: Sequence[tuple[Fraction, Fraction]]) -> ValueMap:
    pts = []
    for k, v in sorted(points):
        if pts and pts[-1][0] == k:
            continue
        pts.append((k, v))
    return ValueMap(tuple(k for k, _ in pts), tuple(v for _, v in pts))


def cutdown_map(eps) -> ValueMap:
    """v -> max(v - eps, 0) on [0, 1]."""
    e = Fraction(eps)
    top = max(Q(1), e)
    return _value_map([(Q(0), Q(0)), (e, Q(0)), (top, top - e)])


def smoothing_map(eps) -> ValueMap:
    """0 up to eps/2, linear ramp to 1 at eps, then 1."""
    e = Fraction(eps)
    if e <= 0:
        raise ValueError("smoothing needs eps > 0")
    return _value_map([(Q(0), Q(0)), (e / 2, Q(0)), (e, Q(1))])


# -- integer step functions -------------------------------------------------------


class Piece(NamedTuple):
    left: Fraction
    right: Fraction  # equal to left for point pieces
    value: ExtScalar

    @property
    def is_point(self) -> bool:
        return self.left == self.right

    @property
    def representative(self) -> Fraction:
        return (self.left + self.right) / 2

    def label(self) -> str:
        return f"t={self.left}" if self.is_point else f"({self.left},{self.right})"


@dataclass(frozen=True)
class StepFunction:
    """Step function on [0,1]: a value at each breakpoint and on each open gap."""

    breakpoints: tuple[Fraction, ...]
    point_values: tuple[ExtScalar, ...]
    interval_values: tuple[ExtScalar, ...]

    def __post_init__(self):
        bps = tuple(Fraction(t) for t in self.breakpoints)
        pv = tuple(ext(v) for v in self.point_values)
        iv = tuple(ext(v) for v in self.interval_values)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise MalformedPayload("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise MalformedPayload("breakpoints must be strictly increasing")
        if len(pv) != len(bps) or len(iv) != len(bps) - 1:
            raise MalformedPayload("value counts do not match breakpoints")
        kb, kp, ki = [bps[0]], [pv[0]], []
        for j in range(1, len(bps)):
            if j < len(bps) - 1 and iv[j - 1] == pv[j] == iv[j]:
                continue
            ki.append(iv[j - 1])
            kb.append(bps[j])
            kp.append(pv[j])
        object.__setattr__(self, "breakpoints", tuple(kb))
        object.__setattr__(self, "point_values", tuple(kp))
        object.__setattr__(self, "interval_values", tuple(ki))

    @classmethod
    def constant(cls, c) -> "StepFunction":
        c = ext(c)
        return cls((Q(0), Q(1)), (c, c), (c,))

    @classmethod
    def indicator(cls, a, b, closed_left: bool = False, closed_right: bool = False):
        """Indicator of an interval with endpoints a < b inside [0, 1]."""
        a, b = Fraction(a), Fraction(b)
        bps = sorted({Q(0), a, b, Q(1)})
        pv = []
        for t in bps:
            inside = a < t < b or (t == a and closed_left) or (t == b and closed_right)
            pv.append(ONE if inside else ZERO)
        iv = [ONE if a <= s and t <= b else ZERO for s, t in zip(bps, bps[1:])]
        return cls(tuple(bps), tuple(pv), tuple(iv))

    def __call__(self, t) -> ExtScalar:
        t = Fraction(t)
        if t < 0 or t > 1:
            raise ValueError(f"{t} outside [0, 1]")
        j = bisect.bisect_left(self.breakpoints, t)
        if j < len(self.breakpoints) and self.breakpoints[j] == t:
            return self.point_values[j]
        return self.interval_values[j - 1]

    def pieces(self) -> list[Piece]:
        out = []
        for j, t in enumerate(self.breakpoints):
            out.append(Piece(t, t, self.point_values[j]))
            if j < len(self.interval_values):
                out.append(Piece(t, self.breakpoints[j + 1], self.interval_values[j]))
        return out

    def values(self) -> list[ExtScalar]:
        return [p.value for p in self.pieces()]

    def is_lsc(self) -> bool:
        for j, v in enumerate(self.point_values):
            if j > 0 and v > self.interval_values[j - 1]:
                return False
            if j < len(self.interval_values) and v > self.interval_values[j]:
                return False
        return True

    def is_constant(self) -> bool:
        return len(self.breakpoints) == 2 and len(set(self.values())) == 1

    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.values())

    def map(self, fn: Callable[[ExtScalar], ExtScalar]) -> "StepFunction":
        return StepFunction(
            self.breakpoints,
            tuple(fn(v) for v in self.point_values),
            tuple(fn(v) for v in self.interval_values),
        )

    def usc_envelope(self) -> "StepFunction":
        """Smallest upper semicontinuous function above this one."""
        pv = []
        for j, v in enumerate(self.point_values):
            nb = [v]
            if j > 0:
                nb.append(self.interval_values[j - 1])
            if j < len(self.interval_values):
                nb.append(self.interval_values[j])
            pv.append(max(nb))
        return StepFunction(self.breakpoints, tuple(pv), self.interval_values)

    def max_value(self) -> ExtScalar:
        return max(self.values())

    def min_value(self) -> ExtScalar:
        return min(self.values())

    def __str__(self) -> str:
        return " ".join(
            f"[{p.left}]={p.value}" if p.is_point else f"({p.left},{p.right})={p.value}"
            for p in self.pieces()
        )


def common_pieces(*fs: StepFunction) -> list[Piece]:
    """Pieces of the coarsest partition refining every argument (values unset)."""
    bps = sorted(set().union(*(f.breakpoints for f in fs)))
    out = []
    for j, t in enumerate(bps):
        out.append(Piece(t, t, ZERO))
        if j + 1 < len(bps):
            out.append(Piece(t, bps[j + 1], ZERO))
    return out


def combine(op: Callable[..., ExtScalar], *fs: StepFunction) -> StepFunction:
    bps = sorted(set().union(*(f.breakpoints for f in fs)))
    pv = tuple(op(*(f(t) for f in fs)) for t in bps)
    iv = tuple(op(*(f((a + b) / 2) for f in fs)) for a, b in zip(bps, bps[1:]))
    return StepFunction(tuple(bps), pv, iv)


def step_add(f: StepFunction, g: StepFunction) -> StepFunction:
    return combine(lambda a, b: a + b, f, g)


def step_sum(fs: Iterable[StepFunction]) -> StepFunction:
    total = StepFunction.constant(0)
    for f in fs:
        total = step_add(total, f)
    return total


def step_leq(f: StepFunction, g: StepFunction) -> bool:
    return all(
        f(p.representative) <= g(p.representative) for p in common_pieces(f, g)
    )


def step_sub(f: StepFunction, g: StepFunction) -> StepFunction:
    """Pointwise f - g for finite f >= g."""
    return combine(lambda a, b: ExtScalar(a.fraction - b.fraction), f, g)


# comparisons between a piecewise-linear function and a step function;
# on an open piece a linear function stays below c iff both end limits do


def _pl_pieces(f: PLFunction, s: StepFunction):
    bps = sorted(set(f.knots) | set(s.breakpoints))
    for j, t in enumerate(bps):
        yield (f(t), f(t)), s(t)
        if j + 1 < len(bps):
            u = bps[j + 1]
            yield (f(t), f(u)), s((t + u) / 2)


def pl_leq_step(f: PLFunction, s: StepFunction) -> bool:
    return all(ExtScalar(max(lim)) <= v for lim, v in _pl_pieces(f, s))


def step_leq_pl(s: StepFunction, f: PLFunction) -> bool:
    return all(v <= ExtScalar(min(lim)) for lim, v in _pl_pieces(f, s))


# -- profiles ---------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralProfile:
    """n eigenvalue functions [0,1] -> [0,1]."""

    eigenvalues: tuple[PLFunction, ...]

    def __post_init__(self):
        fs = tuple(self.eigenvalues)
        if not fs:
            raise MalformedPayload("a profile needs at least one eigenvalue function")
        for i, f in enumerate(fs):
            if not isinstance(f, PLFunction):
                raise MalformedPayload(f"eigenvalue {i} is not a PLFunction")
            if f.min_value() < 0 or f.max_value() > 1:
                raise MalformedPayload(f"eigenvalue {i} leaves [0, 1]")
        object.__setattr__(self, "eigenvalues", fs)

    @classmethod
    def diag(cls, *fs: PLFunction) -> "SpectralProfile":
        return cls(tuple(fs))

    @classmethod
    def from_pairs(cls, functions: Iterable[Iterable[tuple]]) -> "SpectralProfile":
        return cls(tuple(PLFunction.from_pairs(p) for p in functions))

    @classmethod
    def parse(cls, text: str) -> "SpectralProfile":
        """``"0:0, 1:1; 0:1, 1:1"``: eigenvalues separated by ';'."""
        functions = []
        for chunk in split_top(strip_brackets(text), ";"):
            pairs = []
            for item in split_top(strip_brackets(chunk), ","):
                if ":" not in item:
                    raise MalformedPayload(f"expected t:v, got {item!r}")
                t, v = item.split(":", 1)
                try:
                    pairs.append((Fraction(t.strip()), Fraction(v.strip())))
                except (ValueError, ZeroDivisionError) as exc:
                    raise MalformedPayload(f"bad rational in {item!r}") from exc
            functions.append(pairs)
        return cls.from_pairs(functions)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def knots(self) -> list[Fraction]:
        return sorted(set().union(*(f.knots for f in self.eigenvalues)))

    def compose(self, g) -> "SpectralProfile":
        return SpectralProfile(tuple(f.compose(g) for f in self.eigenvalues))

    def __str__(self) -> str:
        return "; ".join(str(f) for f in self.eigenvalues)


def _indicator_above(f: PLFunction, eps: Fraction) -> StepFunction:
    bps = sorted(set(f.knots) | set(f.crossings(eps)))
    pv = tuple(ONE if f(t) > eps else ZERO for t in bps)
    iv = tuple(ONE if f((a + b) / 2) > eps else ZERO for a, b in zip(bps, bps[1:]))
    return StepFunction(tuple(bps), pv, iv)


def rank_function(a: SpectralProfile, epsilon=0) -> StepFunction:
    """t -> #{i : f_i(t) > epsilon}."""
    eps = _q(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    return step_sum(_indicator_above(f, eps) for f in a.eigenvalues)


def cutdown(a: SpectralProfile, epsilon) -> SpectralProfile:
    eps = _q(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    if eps == 0:
        return a
    return a.compose(cutdown_map(eps))


def smooth(a: SpectralProfile, epsilon) -> SpectralProfile:
    return a.compose(smoothing_map(_q(epsilon)))


def dimension_at(a: SpectralProfile, t) -> ExtScalar:
    return ExtScalar(rank_function(a, 0)(t).fraction / a.n)


def trace_at(a: SpectralProfile, t) -> Fraction:
    """Normalized trace of the fiber at t."""
    return sum((f(t) for f in a.eigenvalues), Q(0)) / a.n


def trace_function(a: SpectralProfile) -> PLFunction:
    knots = a.knots()
    return PLFunction(tuple(knots), tuple(trace_at(a, t) for t in knots))


def dimension_function(a: SpectralProfile, epsilon=0) -> StepFunction:
    """Normalized rank (values in [0, 1])."""
    return rank_function(a, epsilon).map(lambda v: ExtScalar(v.fraction / a.n))


def norm(a: SpectralProfile) -> Fraction:
    return max(f.max_value() for f in a.eigenvalues)


def normalize(a: SpectralProfile) -> SpectralProfile:
    """Rescale so that the largest eigenvalue reaches 1."""
    m = norm(a)
    if m == 0:
        raise ValueError("cannot normalize the zero profile")
    return SpectralProfile(tuple(f.scaled(1 / m) for f in a.eigenvalues))


def stabilization_index(a: SpectralProfile) -> int:
    """Least m with 2/m below every positive eigenvalue at every knot of the profile.

    Zeros of an eigenvalue sit on knots, so from there on the sets where some
    eigenvalue is below 1/m are disjoint slivers next to those zeros: the
    pieces of the cutdown ranks only move inside their cells and every sup
    over pieces is constant in m.
    """
    ts = a.knots()
    positives = [f(t) for f in a.eigenvalues for t in ts if f(t) > 0]
    if not positives:
        return 1
    tau = min(positives)
    return int(2 / tau) + 1


# -- the semigroup ----------------------------------------------------------------


def _parse_step(text: str) -> StepFunction:
    s = text.strip().lower()
    if s in ("inf", "infinity"):
        return StepFunction.constant(INF)
    try:
        c = ExtScalar(s)
    except ValueError:
        return None  # type: ignore[return-value]
    return StepFunction.constant(c)


@dataclass(frozen=True, repr=False)
class SpectralModel(CuModel):
    """Lower semicontinuous integer step functions on [0,1], pointwise."""

    kind = "spectral"
    ray_complete = True
    order_by_rays = True

    def describe(self) -> str:
        return "Spectral[0,1]"

    def zero(self):
        return StepFunction.constant(0)

    def largest(self):
        return StepFunction.constant(INF)

    def make_element(self, payload):
        if isinstance(payload, SpectralProfile):
            return rank_function(payload, 0)
        if isinstance(payload, str):
            step = _parse_step(payload)
            if step is not None:
                payload = step
            else:
                return rank_function(SpectralProfile.parse(payload), 0)
        if not isinstance(payload, StepFunction):
            raise MalformedPayload(f"cannot read a spectral element from {payload!r}")
        if not all(v.is_integer() for v in payload.values()):
            raise MalformedPayload("rank values must be integers or inf")
        if not payload.is_lsc():
            raise MalformedPayload("rank functions must be lower semicontinuous")
        return payload

    def add(self, x, y):
        return step_add(x, y)

    def leq(self, x, y):
        return step_leq(x, y)

    def infinity_times(self, x):
        return x.map(lambda v: ZERO if v.is_zero else INF)

    def compactly_contained(self, x, y):
        # finite, and the closure of each level set {x >= j} sits inside {y >= j}
        if any(v.is_infinite for v in x.values()):
            return False
        return step_leq(x.usc_envelope(), y)

    def ray_keys(self, *elements):
        return [p.representative for p in common_pieces(*elements)]

    def ray_table(self, *elements):
        if not elements:
            return []
        return [
            Ray(p.representative, p.label(), tuple(e(p.representative) for e in elements))
            for p in common_pieces(*elements)
        ]

    def ray_value(self, key, x):
        return x(key)

    def ray_label(self, key):
        return f"t={key}"

    def positive_outside(self, x, keys):
        # a nonzero lsc step function is positive on an open interval
        return not x.is_zero()

    def enumerate_elements(self, bound):
        """Lsc step functions with breakpoints {0, 1/2, 1} and values <= bound."""
        bps = (Q(0), Q(1, 2), Q(1))
        seen = set()
        vals = range(bound + 1)
        for i0, i1 in itertools.product(vals, repeat=2):
            for p0 in range(i0 + 1):
                for pm in range(min(i0, i1) + 1):
                    for p1 in range(i1 + 1):
                        f = StepFunction(bps, (p0, pm, p1), (i0, i1))
                        if f not in seen:
                            seen.add(f)
                            yield f

    def complexity(self, x):
        return max((int(v.fraction) for v in x.values() if v.is_finite), default=0)

    def o2_term(self, x, n):
        """Sum over levels j <= n of the level sets {x >= j}, shrunk at open ends."""
        parts = []
        top = x.max_value()
        levels = n if top.is_infinite else min(n, int(top.fraction))
        pieces = x.pieces()
        for j in range(1, levels + 1):
            for run in _runs(pieces, lambda v: v >= j):
                a, b = run[0].left, run[-1].right
                closed_left = run[0].is_point
                closed_right = run[-1].is_point
                margin = (b - a) / (2 * (n + 1))
                lo = a if closed_left else a + margin
                hi = b if closed_right else b - margin
                parts.append(StepFunction.indicator(lo, hi, closed_left, closed_right))
        return step_sum(parts)

    def rc_formula(self, w):
        return ZERO

    def rc_strict_formula(self, w):
        return ZERO

    def rc_tail_limit(self, base, step):
        return ZERO

    def format_element(self, x):
        return str(x)


def _runs(pieces: list[Piece], keep) -> list[list[Piece]]:
    runs, cur = [], []
    for p in pieces:
        if keep(p.value):
            cur.append(p)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


@dataclass(frozen=True)
class CutdownChain(Chain):
    """m -> rank of (a - 1/m)_+; increasing, with supremum rank(a)."""

    model: SpectralModel
    profile: SpectralProfile

    @property
    def stable_from(self) -> int:
        return stabilization_index(self.profile)

    def term(self, n: int):
        if n < 1:
            raise IndexError("chains are indexed from 1")
        return rank_function(cutdown(self.profile, Q(1, n)), 0)

    def profile_term(self, n: int) -> SpectralProfile:
        return cutdown(self.profile, Q(1, n))

    def sup(self):
        return rank_function(self.profile, 0)

    def checked_indices(self) -> range:
        return range(1, 2 * self.stable_from + 1)

