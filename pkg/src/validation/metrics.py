"""
Error metrics module for the TF phase-space toolkit.

This module handles the error measures used by the verification suites:
relative L2 distances, phase-aligned distances and convergence orders.
"""

from typing import Optional, Union

import numpy as np

from ..calculus.grid import ConfigField, PhaseField, inner, l2_norm

Field = Union[PhaseField, ConfigField]


def relative_error(actual: Field, expected: Field, reference: Optional[Field] = None) -> float:
    """
    ||actual - expected|| / ||reference||, reference defaulting to expected.

    Returns the absolute distance when the reference norm is zero.
    """
    scale = l2_norm(reference if reference is not None else expected)
    distance = l2_norm(actual - expected)
    return distance / scale if scale > 0 else distance


def max_abs_error(actual: Field, expected: Field) -> float:
    return float(np.max(np.abs(actual.values - expected.values)))


def max_relative_error(actual: Field, expected: Field) -> float:
    """max |actual - expected| / max |expected|."""
    peak = float(np.max(np.abs(expected.values)))
    return max_abs_error(actual, expected) / peak if peak > 0 else max_abs_error(actual, expected)


def phase_aligned_error(actual: Field, expected: Field) -> float:
    """min over unit c of ||c actual - expected|| / ||expected||."""
    overlap = inner(actual, expected)
    c = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return relative_error(actual * c, expected)


def error_ratio(coarse: float, fine: float) -> float:
    return coarse / fine if fine > 0 else float("inf")


def convergence_order(coarse: float, fine: float, refinement: float = 2.0) -> float:
    """Observed order p from errors at h and h / refinement."""
    return float(np.log(error_ratio(coarse, fine)) / np.log(refinement))
