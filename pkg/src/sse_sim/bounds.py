"""Closed-form coverage laws and capacity bounds for the erasure-prone
shotgun sequencing channel, in the regime L = lbar * log2(n).

All quantities are functions of the coverage depth c, the per-symbol
erasure probability delta, and the normalized read length lbar. Rates are
in bits per input symbol, evaluated in 64-bit floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


def _check_c(c: float) -> None:
    if c <= 0:
        raise ValueError(f"coverage depth must be positive, got {c}")


def _check_delta(delta: float, allow_one: bool = False) -> None:
    hi_ok = delta <= 1.0 if allow_one else delta < 1.0
    if not (0.0 <= delta and hi_ok):
        upper = "1]" if allow_one else "1)"
        raise ValueError(f"delta must be in [0, {upper}, got {delta}")


def expected_coverage(c: float) -> float:
    """Expected fraction of covered positions: 1 - e^{-c}."""
    _check_c(c)
    return 1.0 - math.exp(-c)


def expected_visible_coverage(c: float, delta: float) -> float:
    """Expected fraction of visibly covered positions: 1 - e^{-c(1-delta)}."""
    _check_c(c)
    _check_delta(delta, allow_one=True)
    return 1.0 - math.exp(-c * (1.0 - delta))


def analytic_delta_e(c: float, delta: float) -> float:
    """Probability a position is covered but never unerased:
    e^{-c(1-delta)} - e^{-c}."""
    _check_c(c)
    _check_delta(delta)
    return math.exp(-c * (1.0 - delta)) - math.exp(-c)


def achievable_rate(c: float, delta: float, lbar: float) -> Optional[float]:
    """Largest rate known to be achievable, or None when lbar*(1-delta) <= 1.

    R = (1 - e^{-c(1-delta)}) - (1-delta) * (e^{-c(1 - 1/(lbar(1-delta)))} - e^{-c}).

    None is a typed "no proven rate", deliberately distinct from 0: the
    lower bound simply does not apply for reads that short.
    """
    _check_c(c)
    _check_delta(delta)
    if lbar <= 0:
        raise ValueError(f"normalized read length must be positive, got {lbar}")
    effective = lbar * (1.0 - delta)
    if effective <= 1.0:
        return None
    return (1.0 - math.exp(-c * (1.0 - delta))) - (1.0 - delta) * (
        math.exp(-c * (1.0 - 1.0 / effective)) - math.exp(-c)
    )


def short_read_threshold(c: float, delta: float) -> float:
    """Value of lbar below which the capacity is zero: c / (c - delta_e)."""
    return c / (c - analytic_delta_e(c, delta))


def converse_bound_raw(c: float, delta: float, lbar: float) -> float:
    """Unclamped upper-bound expression:
    (1 - delta_e)(1 - e^{-c}) - (c/lbar) e^{-c}.

    The two terms are the visible coverage of the merged segments and the
    re-ordering cost of locating them. Can be negative for small lbar.
    """
    _check_c(c)
    _check_delta(delta)
    if lbar <= 0:
        raise ValueError(f"normalized read length must be positive, got {lbar}")
    delta_e = analytic_delta_e(c, delta)
    return (1.0 - delta_e) * (1.0 - math.exp(-c)) - (c / lbar) * math.exp(-c)


def converse_bound(c: float, delta: float, lbar: float) -> float:
    """Capacity upper bound: 0 in the short-read regime
    (lbar < c/(c - delta_e)), otherwise the raw expression clamped at 0."""
    if lbar < short_read_threshold(c, delta):
        return 0.0
    return max(0.0, converse_bound_raw(c, delta, lbar))


def noise_free_capacity(c: float, lbar: float) -> float:
    """Capacity of the erasure-free channel: 1 - e^{-c(1 - 1/lbar)}."""
    _check_c(c)
    if lbar <= 1.0:
        raise ValueError(f"normalized read length must exceed 1, got {lbar}")
    return 1.0 - math.exp(-c * (1.0 - 1.0 / lbar))


@dataclass(frozen=True)
class BoundPoint:
    """All analytic quantities at one (c, delta, lbar) point.

    achievable and gap are None when the achievability condition
    lbar*(1-delta) > 1 fails; noise_free_cap is None when lbar <= 1.
    """

    c: float
    delta: float
    lbar: float
    delta_e: float
    exp_coverage: float
    exp_visible_coverage: float
    achievable: Optional[float]
    converse: float
    converse_raw: float
    noise_free_cap: Optional[float]
    gap: Optional[float]


def bound_point(c: float, delta: float, lbar: float) -> BoundPoint:
    """Evaluate every analytic expression at one parameter point."""
    achievable = achievable_rate(c, delta, lbar)
    converse = converse_bound(c, delta, lbar)
    return BoundPoint(
        c=c,
        delta=delta,
        lbar=lbar,
        delta_e=analytic_delta_e(c, delta),
        exp_coverage=expected_coverage(c),
        exp_visible_coverage=expected_visible_coverage(c, delta),
        achievable=achievable,
        converse=converse,
        converse_raw=converse_bound_raw(c, delta, lbar),
        noise_free_cap=noise_free_capacity(c, lbar) if lbar > 1.0 else None,
        gap=None if achievable is None else converse - achievable,
    )
