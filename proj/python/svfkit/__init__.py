"""Metric selections, limit sets and Hausdorff-metric tools for set-valued functions."""

import json
from typing import Mapping, Optional

from ._core import (
    CompactSet,
    Svf,
    SvfkitError,
    hausdorff,
    hausdorff_via_pairs,
    load_svf,
    metric_linear_combination,
    metric_pairs,
    minkowski_combination,
    parse_svf,
)
from . import _core

__all__ = [
    "CompactSet",
    "Svf",
    "SvfkitError",
    "hausdorff",
    "hausdorff_via_pairs",
    "jump_analysis",
    "load_svf",
    "metric_linear_combination",
    "metric_pairs",
    "minkowski_combination",
    "parse_svf",
    "run_experiment",
    "variation_profile",
]


def jump_analysis(spec_path: str, xi: float, norm: Optional[str] = None,
                  overrides: Optional[Mapping[str, float]] = None) -> dict:
    """A_F, metric average, both properties and the representation gap at xi."""
    return json.loads(_core._jump_analysis(str(spec_path), xi, norm, dict(overrides or {})))


def variation_profile(spec_path: str, norm: Optional[str] = None,
                      overrides: Optional[Mapping[str, float]] = None) -> dict:
    """Variation function on a refined grid and the total variation."""
    return json.loads(_core._variation_profile(str(spec_path), norm, dict(overrides or {})))


def run_experiment(task: str, spec_path: str, out_dir: str, xi: Optional[float] = None,
                   norm: Optional[str] = None, overrides: Optional[Mapping[str, float]] = None,
                   seed: int = 1) -> tuple:
    """Same as the CLI subcommand; returns (exit_code, report, written files)."""
    code, report, files = _core._run_experiment(task, str(spec_path), str(out_dir), xi, norm,
                                                dict(overrides or {}), seed)
    return code, json.loads(report), files
