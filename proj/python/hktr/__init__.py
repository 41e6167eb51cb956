"""Hermite kernel trust-region optimization."""

import json as _json

from ._hktr import (
    ConfigError,
    DomainError,
    Error,
    InvalidInput,
    Kernel,
    NumericalBreakdown,
    Problem,
    Surrogate,
    analytic_norm_1d,
    estimate_norm,
    function_problem,
    minimize_baseline,
    oned,
    pde2d,
    rosenbrock,
    run_trust_region,
)
from ._hktr import run_experiment as _run_experiment


def run_experiment(config, baseline=False):
    """Run an experiment from a config dict or JSON string (CLI schema)."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _run_experiment(config, baseline)


__all__ = [
    "ConfigError",
    "DomainError",
    "Error",
    "InvalidInput",
    "Kernel",
    "NumericalBreakdown",
    "Problem",
    "Surrogate",
    "analytic_norm_1d",
    "estimate_norm",
    "function_problem",
    "minimize_baseline",
    "oned",
    "pde2d",
    "rosenbrock",
    "run_experiment",
    "run_trust_region",
]
