"""Regenerative composition toolkit: Levy models, exponents, paths, occupancy counts and limit laws."""

import json as _json

from ._core import (
    LevyModel,
    PhiCurve,
    Summary,
    big_psi,
    big_psi2,
    classify_regime,
    compensator,
    count_occupied,
    ell,
    make_model,
    phi,
    phi0,
    phi_series,
    sample_path,
    sample_y1,
    sample_y2,
    summarize,
    y1_terminal_variance,
    y2_terminal_variance,
    RegenError,
)
from ._core import run_suite_json as _run_suite_json


def run_suite(config_path, suite=None, seed=None, workers=None):
    """Run one experiment suite from a TOML config and return the stats as a dict."""
    return _json.loads(_run_suite_json(config_path, suite, seed, workers))


__all__ = [
    "LevyModel",
    "PhiCurve",
    "RegenError",
    "Summary",
    "big_psi",
    "big_psi2",
    "classify_regime",
    "compensator",
    "count_occupied",
    "ell",
    "make_model",
    "phi",
    "phi0",
    "phi_series",
    "run_suite",
    "sample_path",
    "sample_y1",
    "sample_y2",
    "summarize",
    "y1_terminal_variance",
    "y2_terminal_variance",
]
