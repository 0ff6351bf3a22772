"""The abstract semigroup contract and the generic algorithms built on it.

A model supplies the monoid structure (``add``, ``leq``, ``zero``,
``largest``), a decision procedure for compact containment, and a finite
table of extreme rays relevant to any finite set of elements.  Everything
else here (infinity multiples, fullness, ideals, chains and their suprema)
is written once against that contract.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Hashable, Iterable, Iterator, NamedTuple, Sequence

from .errors import ChainNotIncreasing, ModelContractError
from .scalar import ExtScalar

Element = Any


class Ray(NamedTuple):
    """One extreme ray evaluated on a tuple of elements."""

    key: Hashable
    label: str
    values: tuple[ExtScalar, ...]


class CuModel(ABC):
    kind: ClassVar[str] = "abstract"
    # every functional inequality is decided by the rays plus ideal functionals
    ray_complete: ClassVar[bool] = False
    # x <= y holds iff every ray value of x is at most that of y
    order_by_rays: ClassVar[bool] = False

    # -- monoid structure ---------------------------------------------------
    @abstractmethod
    def zero(self) -> Element: ...

    @abstractmethod
    def largest(self) -> Element: ...

    @abstractmethod
    def add(self, x: Element, y: Element) -> Element: ...

    @abstractmethod
    def leq(self, x: Element, y: Element) -> bool: ...

    @abstractmethod
    def infinity_times(self, x: Element) -> Element: ...

    @abstractmethod
    def compactly_contained(self, x: Element, y: Element) -> bool: ...

    @abstractmethod
    def make_element(self, payload: Any) -> Element:
        """Validate ``payload`` and return the canonical element."""

    def contains(self, x: Element) -> bool:
        try:
            return self.make_element(x) == x
        except (ValueError, TypeError):
            return False

    # -- extreme rays ---------------------------------------------------------
    @abstractmethod
    def ray_keys(self, *elements: Element) -> list[Hashable]:
        """Keys of rays that separate the given elements."""

    @abstractmethod
    def ray_value(self, key: Hashable, x: Element) -> ExtScalar: ...

    def ray_label(self, key: Hashable) -> str:
        return str(key)

    @abstractmethod
    def positive_outside(self, x: Element, keys: Iterable[Hashable]) -> bool:
        """Is some ray not in ``keys`` positive on ``x``?"""

    def ray_table(self, *elements: Element) -> list[Ray]:
        return [
            Ray(k, self.ray_label(k), tuple(self.ray_value(k, e) for e in elements))
            for k in self.ray_keys(*elements)
        ]

    # -- enumeration for bounded searches ---------------------------------
    def enumerate_elements(self, bound: int) -> Iterator[Element]:
        raise ModelContractError(f"{self.kind} does not enumerate elements")

    def enumerate_targets(self, bound: int) -> Iterator[Element]:
        """Candidates for the larger side of a comparison."""
        seen = []
        for x in self.enumerate_elements(bound):
            seen.append(x)
            yield x
        top = self.largest()
        if top not in seen:
            yield top

    def complexity(self, x: Element) -> int:
        raise ModelContractError(f"{self.kind} has no complexity measure")

    # -- canonical approximations -------------------------------------------
    def o2_term(self, x: Element, n: int) -> Element:
        """n-th term of a chain x_1 << x_2 << ... with supremum x."""
        raise ModelContractError(f"{self.kind} has no canonical chain")

    # -- closed forms used by the radius module -------------------------------
    def rc_formula(self, w: Element) -> ExtScalar:
        raise ModelContractError(f"{self.kind} has no closed-form radius")

    def rc_strict_formula(self, w: Element) -> ExtScalar:
        raise ModelContractError(f"{self.kind} has no closed-form strict radius")

    def rc_tail_limit(self, base: Element, step: Element) -> ExtScalar:
        """lim_n rc(base + n*step) for a nonzero step."""
        raise ModelContractError(f"{self.kind} has no radius tail law")

    # -- helpers ------------------------------------------------------------
    def multiple(self, n: int, x: Element) -> Element:
        if n < 0:
            raise ValueError("negative multiple")
        result, power = self.zero(), x
        while n:
            if n & 1:
                result = self.add(result, power)
            n >>= 1
            if n:
                power = self.add(power, power)
        return result

    def format_element(self, x: Element) -> str:
        return str(x)

    def describe(self) -> str:
        return self.kind

    def __repr__(self) -> str:
        return f"<{self.describe()}>"


def infinity_times(S: CuModel, x: Element) -> Element:
    return S.infinity_times(x)


def is_full(S: CuModel, x: Element) -> bool:
    return S.leq(S.largest(), S.infinity_times(x))


def compactly_contained(S: CuModel, x: Element, y: Element) -> bool:
    return S.compactly_contained(x, y)


def ideal_membership(S: CuModel, x: Element, y: Element) -> bool:
    """Is ``y`` in the ideal generated by ``x``?"""
    return S.leq(y, S.infinity_times(x))


def multiple(S: CuModel, n: int, x: Element) -> Element:
    return S.multiple(n, x)


def sup_of_chain(S: CuModel, chain: "Chain | Sequence[Element]") -> Element:
    """Supremum of a closed-form chain or of a finite increasing list."""
    if isinstance(chain, Chain):
        chain.verify()
        return chain.sup()
    items = list(chain)
    if not items:
        raise ValueError("empty chain")
    for i in range(len(items) - 1):
        if not S.leq(items[i], items[i + 1]):
            raise ChainNotIncreasing(f"term {i + 1} is not below term {i + 2}")
    return items[-1]


# -- chains ----------------------------------------------------------------------


class Chain(ABC):
    """An increasing sequence x_1 <= x_2 <= ... given by a tail law."""

    model: CuModel

    @abstractmethod
    def term(self, n: int) -> Element: ...

    @abstractmethod
    def sup(self) -> Element: ...

    @abstractmethod
    def checked_indices(self) -> range:
        """Indices n for which x_n <= x_{n+1} is verified explicitly."""

    def verify(self) -> None:
        S = self.model
        for n in self.checked_indices():
            if not S.leq(self.term(n), self.term(n + 1)):
                raise ChainNotIncreasing(
                    f"x_{n} = {S.format_element(self.term(n))} is not below "
                    f"x_{n + 1} = {S.format_element(self.term(n + 1))}"
                )

    def terms(self, count: int) -> list[Element]:
        return [self.term(n) for n in range(1, count + 1)]


@dataclass(frozen=True)
class StableChain(Chain):
    """Finite prefix, constant afterwards."""

    model: CuModel
    prefix: tuple

    def __post_init__(self):
        if not self.prefix:
            raise ValueError("empty chain")

    @property
    def stable_from(self) -> int:
        return len(self.prefix)

    def term(self, n: int) -> Element:
        if n < 1:
            raise IndexError("chains are indexed from 1")
        return self.prefix[min(n, len(self.prefix)) - 1]

    def sup(self) -> Element:
        return self.prefix[-1]

    def checked_indices(self) -> range:
        return range(1, len(self.prefix))


@dataclass(frozen=True)
class ArithmeticChain(Chain):
    """x_n = base + n*step, unbounded when step is nonzero."""

    model: CuModel
    base: Element
    step: Element
    # consecutive pairs checked; arithmetic tails in the built-in models are
    # increasing from n = 1 on as soon as the first steps are
    horizon: int = 8

    def term(self, n: int) -> Element:
        if n < 1:
            raise IndexError("chains are indexed from 1")
        S = self.model
        return S.add(self.base, S.multiple(n, self.step))

    def sup(self) -> Element:
        S = self.model
        return S.add(self.base, S.infinity_times(self.step))

    def checked_indices(self) -> range:
        return range(1, self.horizon + 1)


def capped_chain(S: CuModel, base: Element, step: Element, cap: Element) -> StableChain:
    """base + n*step for as long as it stays below ``cap``, then ``cap``."""
    terms = []
    n = 1
    while True:
        t = S.add(base, S.multiple(n, step))
        if t == cap or not S.leq(t, cap):
            break
        terms.append(t)
        n += 1
        if n > 100000:
            raise ValueError("cap is never reached")
    terms.append(cap)
    return StableChain(S, tuple(terms))
