"""Collatz trajectories computed by digit-level cellular automata."""

from fractions import Fraction

from ._core import (
    CollisionError,
    apply_map,
    batch,
    classify,
    oracle_trajectory,
    render,
    rules,
    run,
    to_digits,
    total_stopping_time,
    verify,
)
from . import _core

__all__ = [
    "CollisionError",
    "apply_map",
    "average_efficiency",
    "batch",
    "classify",
    "n_efficiency",
    "oracle_trajectory",
    "render",
    "rules",
    "run",
    "to_digits",
    "total_stopping_time",
    "verify",
]


def n_efficiency(n, variant):
    """Return (ca_steps, tst, ratio) with ratio as a Fraction."""
    steps, tst, (num, den) = _core.n_efficiency(n, variant)
    return steps, tst, Fraction(num, den)


def average_efficiency(lo, hi, variant):
    num, den = _core.average_efficiency(lo, hi, variant)
    return Fraction(num, den)
