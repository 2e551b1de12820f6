"""Nonlinear Roth configuration counting and diagnostics."""

import json as _json

from ._core import (
    ContractError,
    DomainError,
    GridWindow,
    NumericalIntegrityError,
    SetIndicator,
    TaskError,
    ValidationError,
    blakley_roy_lhs,
    brute_force_best_difference,
    count_for_difference,
    count_profile,
    fejer,
    gowers_norm,
    gowers_power,
    lambda_indicator,
    lift_1d,
    rationalize,
    set_threads,
    threads,
    torus_norm,
    verify_2d_threshold,
    weyl_sum,
)
from ._core import popular_difference_search as _popular_difference_search
from ._core import run_experiment as _run_experiment


def popular_difference_search(a, epsilon):
    return _json.loads(_popular_difference_search(a, epsilon))


def run_experiment(config):
    """config: a 'key = value' string or a dict. Returns (report dict, csv text)."""
    if isinstance(config, dict):
        config = "\n".join(f"{k} = {v}" for k, v in config.items())
    report, csv = _run_experiment(config)
    return _json.loads(report), csv


__all__ = [name for name in dir() if not name.startswith("_")]
