"""Exact rank ratios, radius of comparison and oscillation on small Cu-semigroup models."""

from .cucore import ArithmeticChain, CuModel, StableChain, capped_chain, ideal_membership, infinity_times, is_full
from .errors import CuError
from .functionals import lambda_ideal, lambda_infinity, normalize_at, normalized_family
from .models import DirectSumModel, Idem, IdempotentModel, PerforatedModel, PointFnModel
from .oscillation import contrank_check, limit_rho_cutdown, omega
from .radius import irc, rc_exact, rc_range_sample, rc_search, rc_strict
from .rankratio import rho, rho_chain_limits, rho_normalized, rho_sampled
from .scalar import INF, ONE, ZERO, ExtScalar, ext_add, ext_div_ratio, ext_mul, parse_ext
from .spectral import CutdownChain, SpectralModel, SpectralProfile, cutdown, rank_function, smooth

__version__ = "0.1.0"

__all__ = [
    "ArithmeticChain",
    "CuError",
    "CuModel",
    "CutdownChain",
    "DirectSumModel",
    "ExtScalar",
    "INF",
    "Idem",
    "IdempotentModel",
    "ONE",
    "PerforatedModel",
    "PointFnModel",
    "SpectralModel",
    "SpectralProfile",
    "StableChain",
    "ZERO",
    "capped_chain",
    "contrank_check",
    "cutdown",
    "ext_add",
    "ext_div_ratio",
    "ext_mul",
    "ideal_membership",
    "infinity_times",
    "irc",
    "is_full",
    "lambda_ideal",
    "lambda_infinity",
    "limit_rho_cutdown",
    "normalize_at",
    "normalized_family",
    "omega",
    "parse_ext",
    "rank_function",
    "rc_exact",
    "rc_range_sample",
    "rc_search",
    "rc_strict",
    "rho",
    "rho_chain_limits",
    "rho_normalized",
    "rho_sampled",
    "smooth",
]
