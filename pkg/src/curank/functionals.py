"""Functionals as nonnegative combinations of extreme rays.

A ``Functional`` carries explicit coefficients on finitely many rays and a
default coefficient (0 or inf) applied to every other ray.  The trivial
functional that is infinite on every nonzero element is the all-inf
default.  Ideal functionals are {0, inf}-valued and evaluated through ideal
membership rather than through rays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping

from .cucore import CuModel, ideal_membership
from .errors import NotNormalizable
from .scalar import INF, ONE, ZERO, ExtScalar, ext, ext_add, ext_mul


@dataclass(frozen=True)
class Functional:
    model: CuModel
    coefficients: tuple[tuple[Hashable, ExtScalar], ...] = ()
    default: ExtScalar = ZERO

    def __post_init__(self):
        coeffs = tuple((k, ext(c)) for k, c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        d = ext(self.default)
        if not (d.is_zero or d.is_infinite):
            raise ValueError("the default coefficient must be 0 or inf")
        object.__setattr__(self, "default", d)

    @classmethod
    def of(cls, model: CuModel, coefficients: Mapping[Hashable, Any], default=ZERO):
        return cls(model, tuple(coefficients.items()), ext(default))

    def __call__(self, x) -> ExtScalar:
        S = self.model
        total = ZERO
        for key, c in self.coefficients:
            total = ext_add(total, ext_mul(c, S.ray_value(key, x)))
        if self.default.is_infinite and S.positive_outside(x, [k for k, _ in self.coefficients]):
            total = INF
        return total

    def scaled(self, c) -> "Functional":
        c = ext(c)
        coeffs = tuple((k, ext_mul(c, v)) for k, v in self.coefficients)
        default = ext_mul(c, self.default)
        return Functional(self.model, coeffs, default)

    def __str__(self) -> str:
        terms = [f"{c}*{self.model.ray_label(k)}" for k, c in self.coefficients if not c.is_zero]
        if self.default.is_infinite:
            terms.append("inf*(other rays)")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class IdealFunctional:
    """0 on the ideal generated by ``generator``, inf elsewhere."""

    model: CuModel
    generator: Any

    def __call__(self, x) -> ExtScalar:
        return ZERO if ideal_membership(self.model, self.generator, x) else INF

    def scaled(self, c) -> "IdealFunctional":
        if ext(c).is_zero:
            raise ValueError("scaling an ideal functional by 0 leaves the family")
        return self

    def __str__(self) -> str:
        return f"lambda_Idl({self.model.format_element(self.generator)})"


def lambda_infinity(model: CuModel) -> Functional:
    return Functional(model, (), INF)


def lambda_ideal(model: CuModel, generator) -> IdealFunctional:
    return IdealFunctional(model, generator)


def ray_functional(model: CuModel, key: Hashable, coefficient=ONE) -> Functional:
    return Functional(model, ((key, ext(coefficient)),))


@dataclass(frozen=True)
class NormalizedRay:
    key: Hashable
    label: str
    value: ExtScalar  # the ray evaluated at the normalizing element


@dataclass(frozen=True)
class NormalizedFamily:
    """Functionals with value 1 at ``z``.

    The family is the simplex spanned by the rays finite and positive on z
    (rescaled to 1 at z), plus arbitrary multiples of the rays vanishing at
    z.  It is empty exactly when no ray is finite and positive on z.
    """

    model: CuModel
    z: Any
    rays: tuple[NormalizedRay, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return not self.rays

    def constraint(self) -> str:
        if self.empty:
            return "empty"
        return " + ".join(f"{r.value}*c[{r.label}]" for r in self.rays) + " = 1"

    def vertices(self) -> list[Functional]:
        return [ray_functional(self.model, r.key, r.value.reciprocal()) for r in self.rays]

    def contains(self, lam) -> bool:
        return lam(self.z) == ONE


def normalized_family(model: CuModel, z, *others) -> NormalizedFamily:
    """The family normalized at z; ``others`` refine the ray table (spectral)."""
    rays = tuple(
        NormalizedRay(r.key, r.label, r.values[0])
        for r in model.ray_table(z, *others)
        if r.values[0].is_finite and not r.values[0].is_zero
    )
    return NormalizedFamily(model, z, rays)


def normalize_at(lam, x) -> Functional:
    v = lam(x)
    if v.is_zero or v.is_infinite:
        raise NotNormalizable(f"functional takes value {v} at the element")
    return lam.scaled(v.reciprocal())
