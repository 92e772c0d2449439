"""Euclidean heat content: engines, derivatives and inequality checks."""

from ._core import (
    Domain,
    DerivativeEstimate,
    EngineError,
    Estimate,
    NoisyEngineError,
    bg24_constants,
    case_ids,
    d2_semigroup,
    derivative,
    heat_content,
    heat_kernel,
    heat_kernel_dt,
    improved_constants,
    integrated_sharper,
    kernel_dt_bound_margin,
    run_cli,
    verify,
)

__all__ = [
    "Domain",
    "DerivativeEstimate",
    "EngineError",
    "Estimate",
    "NoisyEngineError",
    "bg24_constants",
    "case_ids",
    "d2_semigroup",
    "derivative",
    "heat_content",
    "heat_kernel",
    "heat_kernel_dt",
    "improved_constants",
    "integrated_sharper",
    "kernel_dt_bound_margin",
    "run_cli",
    "verify",
]
