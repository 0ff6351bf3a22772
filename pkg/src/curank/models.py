"""Finite-description models: point functions, perforated integers,
the two-element idempotent monoid and direct sums."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Any, Iterator

from .cucore import CuModel
from .errors import MalformedPayload
from .scalar import INF, ZERO, ExtScalar, ext


def _ext_int(value: Any, where: str = "value") -> ExtScalar:
    try:
        v = ext(value.strip() if isinstance(value, str) else value)
    except (ValueError, TypeError) as exc:
        raise MalformedPayload(f"{where}: {exc}") from exc
    if not v.is_integer():
        raise MalformedPayload(f"{where}: {v} is not an integer")
    return v


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside any brackets."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def strip_brackets(text: str) -> str:
    t = text.strip()
    while len(t) >= 2 and t[0] + t[-1] in ("()", "[]", "{}"):
        t = t[1:-1].strip()
    return t


@dataclass(frozen=True, repr=False)
class PointFnModel(CuModel):
    """Vectors in (Z>=0 + inf)^P with pointwise order and addition."""

    points: tuple[str, ...]
    kind = "pointfn"
    ray_complete = True
    order_by_rays = True

    def __post_init__(self):
        if not self.points or len(set(self.points)) != len(self.points):
            raise MalformedPayload("point labels must be distinct and nonempty")

    def describe(self) -> str:
        return "PointFn{" + ",".join(self.points) + "}"

    def zero(self):
        return tuple(ZERO for _ in self.points)

    def largest(self):
        return tuple(INF for _ in self.points)

    def make_element(self, payload):
        if isinstance(payload, str):
            text = strip_brackets(payload)
            payload = split_top(text, ",") if text else []
        try:
            entries = list(payload)
        except TypeError as exc:
            raise MalformedPayload(f"expected {len(self.points)} coordinates") from exc
        if len(entries) != len(self.points):
            raise MalformedPayload(
                f"expected {len(self.points)} coordinates, got {len(entries)}"
            )
        return tuple(_ext_int(v, f"coordinate {p}") for p, v in zip(self.points, entries))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def leq(self, x, y):
        return all(a <= b for a, b in zip(x, y))

    def infinity_times(self, x):
        return tuple(ZERO if a.is_zero else INF for a in x)

    def compactly_contained(self, x, y):
        return all(a <= b and (b.is_finite or a.is_finite) for a, b in zip(x, y))

    def ray_keys(self, *elements):
        return list(self.points)

    def ray_value(self, key, x):
        return x[self.points.index(key)]

    def positive_outside(self, x, keys):
        keys = set(keys)
        return any(not a.is_zero for p, a in zip(self.points, x) if p not in keys)

    def enumerate_elements(self, bound):
        for combo in itertools.product(range(bound + 1), repeat=len(self.points)):
            yield tuple(ExtScalar(c) for c in combo)

    def enumerate_targets(self, bound):
        values = [ExtScalar(c) for c in range(bound + 1)] + [INF]
        for combo in itertools.product(values, repeat=len(self.points)):
            yield tuple(combo)

    def complexity(self, x):
        return max((int(a.fraction) for a in x if a.is_finite), default=0)

    def o2_term(self, x, n):
        return tuple(min(a, ExtScalar(n)) for a in x)

    def rc_formula(self, w):
        return ZERO

    def rc_strict_formula(self, w):
        return ZERO

    def rc_tail_limit(self, base, step):
        return ZERO

    def format_element(self, x):
        return "(" + ", ".join(str(a) for a in x) + ")"


@dataclass(frozen=True, repr=False)
class PerforatedModel(CuModel):
    """Z>=0 + inf, ordinary addition, a <= b iff a = b, a = 0, a + k <= b or b = inf."""

    k: int
    kind = "perforated"
    ray_complete = True
    order_by_rays = False

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise MalformedPayload(f"perforation gap must be a positive integer, got {self.k!r}")

    def describe(self) -> str:
        return f"Perforated({self.k})"

    def zero(self):
        return ZERO

    def largest(self):
        return INF

    def make_element(self, payload):
        if isinstance(payload, (list, tuple)):
            if len(payload) != 1:
                raise MalformedPayload("perforated elements are single integers")
            payload = payload[0]
        if isinstance(payload, str):
            payload = strip_brackets(payload)
        return _ext_int(payload)

    def add(self, x, y):
        return x + y

    def leq(self, x, y):
        if x == y or x.is_zero or y.is_infinite:
            return True
        if x.is_infinite:
            return False
        return x.fraction + self.k <= y.fraction

    def infinity_times(self, x):
        return ZERO if x.is_zero else INF

    def compactly_contained(self, x, y):
        return self.leq(x, y) and (y.is_finite or x.is_finite)

    def ray_keys(self, *elements):
        return ["id"]

    def ray_value(self, key, x):
        return x

    def positive_outside(self, x, keys):
        return "id" not in set(keys) and not x.is_zero

    def enumerate_elements(self, bound):
        for m in range(bound + 1):
            yield ExtScalar(m)

    def complexity(self, x):
        return int(x.fraction) if x.is_finite else 0

    def o2_term(self, x, n):
        return ExtScalar(n * self.k) if x.is_infinite else x

    def rc_formula(self, w):
        # violations are pairs 0 < x < y < x + k with y - x >= r*w
        if w.is_infinite:
            return ZERO
        return ExtScalar((self.k - 1) / w.fraction)

    def rc_strict_formula(self, w):
        return self.rc_formula(w)

    def rc_tail_limit(self, base, step):
        return ZERO

    def format_element(self, x):
        return str(x)


class Idem(enum.Enum):
    ZERO = "0"
    U = "u"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, repr=False)
class IdempotentModel(CuModel):
    """{0, u} with u + u = u."""

    kind = "idempotent"
    ray_complete = True
    order_by_rays = True

    def describe(self) -> str:
        return "Idempotent"

    def zero(self):
        return Idem.ZERO

    def largest(self):
        return Idem.U

    def make_element(self, payload):
        if isinstance(payload, Idem):
            return payload
        text = str(payload).strip().lower()
        if text in ("0", "zero"):
            return Idem.ZERO
        if text in ("u", "inf"):
            return Idem.U
        raise MalformedPayload(f"idempotent elements are 0 or u, got {payload!r}")

    def add(self, x, y):
        return Idem.U if Idem.U in (x, y) else Idem.ZERO

    def leq(self, x, y):
        return x is Idem.ZERO or y is Idem.U

    def infinity_times(self, x):
        return x

    def compactly_contained(self, x, y):
        # every chain with supremum u is eventually u
        return self.leq(x, y)

    def ray_keys(self, *elements):
        return ["inf"]

    def ray_value(self, key, x):
        return INF if x is Idem.U else ZERO

    def positive_outside(self, x, keys):
        return "inf" not in set(keys) and x is Idem.U

    def enumerate_elements(self, bound):
        yield Idem.ZERO
        if bound >= 1:
            yield Idem.U

    def complexity(self, x):
        return 0 if x is Idem.ZERO else 1

    def o2_term(self, x, n):
        return x

    def rc_formula(self, w):
        return ZERO

    def rc_strict_formula(self, w):
        return ZERO

    def rc_tail_limit(self, base, step):
        return ZERO

    def format_element(self, x):
        return str(x)


@dataclass(frozen=True, repr=False)
class DirectSumModel(CuModel):
    """Pairs with componentwise structure."""

    left: CuModel
    right: CuModel
    kind = "directsum"

    @property
    def ray_complete(self) -> bool:  # type: ignore[override]
        return self.left.ray_complete and self.right.ray_complete

    @property
    def order_by_rays(self) -> bool:  # type: ignore[override]
        return self.left.order_by_rays and self.right.order_by_rays

    def describe(self) -> str:
        return f"{self.left.describe()} + {self.right.describe()}"

    def parts(self):
        return (self.left, self.right)

    def zero(self):
        return (self.left.zero(), self.right.zero())

    def largest(self):
        return (self.left.largest(), self.right.largest())

    def make_element(self, payload):
        if isinstance(payload, str):
            pieces = split_top(payload, "|")
            if len(pieces) != 2:
                raise MalformedPayload("direct-sum payload needs exactly one top-level '|'")
            payload = [strip_brackets(p) if p.startswith("[") else p for p in pieces]
        try:
            a, b = payload
        except (TypeError, ValueError) as exc:
            raise MalformedPayload("direct-sum payload must be a pair") from exc
        return (self.left.make_element(a), self.right.make_element(b))

    def add(self, x, y):
        return (self.left.add(x[0], y[0]), self.right.add(x[1], y[1]))

    def leq(self, x, y):
        return self.left.leq(x[0], y[0]) and self.right.leq(x[1], y[1])

    def infinity_times(self, x):
        return (self.left.infinity_times(x[0]), self.right.infinity_times(x[1]))

    def compactly_contained(self, x, y):
        return self.left.compactly_contained(x[0], y[0]) and self.right.compactly_contained(
            x[1], y[1]
        )

    def ray_keys(self, *elements):
        lk = self.left.ray_keys(*(e[0] for e in elements))
        rk = self.right.ray_keys(*(e[1] for e in elements))
        return [(0, k) for k in lk] + [(1, k) for k in rk]

    def ray_value(self, key, x):
        side, k = key
        return self.parts()[side].ray_value(k, x[side])

    def ray_label(self, key):
        side, k = key
        return ("L." if side == 0 else "R.") + self.parts()[side].ray_label(k)

    def positive_outside(self, x, keys):
        keys = list(keys)
        return any(
            part.positive_outside(x[i], [k for s, k in keys if s == i])
            for i, part in enumerate(self.parts())
        )

    def enumerate_elements(self, bound):
        lefts = list(self.left.enumerate_elements(bound))
        rights = list(self.right.enumerate_elements(bound))
        for a in lefts:
            for b in rights:
                yield (a, b)

    def enumerate_targets(self, bound):
        lefts = list(self.left.enumerate_targets(bound))
        rights = list(self.right.enumerate_targets(bound))
        for a in lefts:
            for b in rights:
                yield (a, b)

    def complexity(self, x):
        return max(self.left.complexity(x[0]), self.right.complexity(x[1]))

    def o2_term(self, x, n):
        return (self.left.o2_term(x[0], n), self.right.o2_term(x[1], n))

    def rc_formula(self, w):
        # a premise splits over the summands and a violation in one summand
        # lifts by pairing with (0, largest) in the other
        return max(self.left.rc_formula(w[0]), self.right.rc_formula(w[1]))

    def rc_strict_formula(self, w):
        from .functionals import normalized_family

        values = []
        for i, part in enumerate(self.parts()):
            if normalized_family(part, w[i]).empty:
                # this summand is unconstrained by the strict premise
                return INF
            values.append(part.rc_strict_formula(w[i]))
        return max(values)

    def rc_tail_limit(self, base, step):
        values = []
        for i, part in enumerate(self.parts()):
            if step[i] == part.zero():
                values.append(part.rc_formula(base[i]))
            else:
                values.append(part.rc_tail_limit(base[i], step[i]))
        return max(values)

    def format_element(self, x):
        return f"[{self.left.format_element(x[0])}] | [{self.right.format_element(x[1])}]"


def enumerate_full(S: CuModel, bound: int) -> Iterator[Any]:
    from .cucore import is_full

    for x in S.enumerate_elements(bound):
        if is_full(S, x):
            yield x

